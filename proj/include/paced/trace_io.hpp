#pragma once

// Trace CSV export/import. One row per round, header row mandatory:
//   t,winner,price,bid_0,d_0,spend_0,value_0,budget_0,bid_1,...
// t is 1-based; winner is a 0-based player index, -1 when unallocated.
// value_i is the player's value for the round's item (the realized marginal
// in submodular runs), so a trace alone suffices for hindsight analysis.
// Numbers use the shortest representation that round-trips exactly.

#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "paced/engine.hpp"

namespace paced {

inline std::string trace_to_csv(const SimulationTrace& tr) {
  const int n = tr.instance.n;
  std::string out = "t,winner,price";
  for (int i = 0; i < n; ++i) {
    const std::string s = std::to_string(i);
    out += ",bid_" + s + ",d_" + s + ",spend_" + s + ",value_" + s + ",budget_" + s;
  }
  out += "\n";
  for (const auto& rec : tr.rounds) {
    out += std::to_string(rec.t + 1);
    out += ',' + std::to_string(rec.winner);
    out += ',' + format_double(rec.price);
    for (int i = 0; i < n; ++i) {
      out += ',' + format_double(rec.bids[i]);
      out += ',' + format_double(rec.d[i]);
      out += ',' + format_double(rec.spend[i]);
      out += ',' + format_double(tr.instance.values[i][rec.t]);
      out += ',' + format_double(rec.budget_after[i]);
    }
    out += '\n';
  }
  return out;
}

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}
}  // namespace detail

// Rebuilds a trace from CSV. The auction format and tie rule are not part of
// the CSV; defaults are recorded. Budgets are recovered from the first row
// (remaining budget after the round plus that round's spend).
inline SimulationTrace trace_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace CSV: missing header");
  auto header = detail::split_csv_line(line);
  if (header.size() < 8 || (header.size() - 3) % 5 != 0 || header[0] != "t") {
    throw std::runtime_error("trace CSV: malformed header");
  }
  const int n = static_cast<int>((header.size() - 3) / 5);

  SimulationTrace tr;
  tr.instance.n = n;
  tr.instance.values.assign(n, {});
  tr.value_total.assign(n, 0.0);
  tr.payment_total.assign(n, 0.0);

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size()) throw std::runtime_error("trace CSV: ragged row");
    RoundRecord rec;
    rec.t = std::stoi(cells[0]) - 1;
    rec.winner = std::stoi(cells[1]);
    rec.price = std::stod(cells[2]);
    rec.bids.resize(n);
    rec.d.resize(n);
    rec.spend.resize(n);
    rec.value_gained.assign(n, 0.0);
    rec.budget_after.resize(n);
    for (int i = 0; i < n; ++i) {
      const std::size_t base = 3 + 5 * static_cast<std::size_t>(i);
      rec.bids[i] = std::stod(cells[base]);
      rec.d[i] = std::stod(cells[base + 1]);
      rec.spend[i] = std::stod(cells[base + 2]);
      tr.instance.values[i].push_back(std::stod(cells[base + 3]));
      rec.budget_after[i] = std::stod(cells[base + 4]);
    }
    if (rec.winner >= 0) rec.value_gained[rec.winner] = tr.instance.values[rec.winner][rec.t];
    for (int i = 0; i < n; ++i) tr.value_total[i] += rec.value_gained[i];
    tr.rounds.push_back(std::move(rec));
  }
  tr.instance.t = static_cast<int>(tr.rounds.size());
  if (tr.instance.t == 0) throw std::runtime_error("trace CSV: no rounds");
  tr.instance.budgets.resize(n);
  for (int i = 0; i < n; ++i) {
    tr.instance.budgets[i] = tr.rounds.front().budget_after[i] + tr.rounds.front().spend[i];
    // mirror the engine: payments come off the remaining-budget trajectory
    tr.payment_total[i] = tr.instance.budgets[i] - tr.rounds.back().budget_after[i];
  }
  return tr;
}

inline SimulationTrace trace_from_csv_text(const std::string& text) {
  std::istringstream in(text);
  return trace_from_csv(in);
}

}  // namespace paced
