#pragma once

// Auction instances: per-round values, budgets, and the auction format.

#include <cmath>
#include <string>
#include <vector>

#include "paced/common.hpp"

namespace paced {

enum class AuctionFormat { FirstPrice, SecondPrice };

struct AuctionInstance {
  int n = 0;  // players
  int t = 0;  // rounds
  std::vector<std::vector<double>> values;  // n rows of t values, each in [0,1]
  std::vector<double> budgets;              // n nonnegative budgets
  AuctionFormat format = AuctionFormat::FirstPrice;
};

// One prescribed bid per player per round; used to replay fixed outcomes.
struct FixedBidScript {
  std::vector<std::vector<double>> bids;  // n rows of t bids
};

// Returns every invariant violation with index coordinates; empty means valid.
inline std::vector<std::string> validate_instance(const AuctionInstance& inst) {
  std::vector<std::string> out;
  if (inst.n <= 0) out.push_back("n must be positive, got " + std::to_string(inst.n));
  if (inst.t <= 0) out.push_back("t must be positive, got " + std::to_string(inst.t));
  if (static_cast<int>(inst.values.size()) != inst.n) {
    out.push_back("values has " + std::to_string(inst.values.size()) + " rows, expected n=" +
                  std::to_string(inst.n));
  }
  for (std::size_t i = 0; i < inst.values.size(); ++i) {
    const auto& row = inst.values[i];
    if (static_cast<int>(row.size()) != inst.t) {
      out.push_back("values[" + std::to_string(i) + "] has " + std::to_string(row.size()) +
                    " columns, expected t=" + std::to_string(inst.t));
    }
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!(row[k] >= 0.0) || !std::isfinite(row[k])) {
        out.push_back("values[" + std::to_string(i) + "][" + std::to_string(k) +
                      "] = " + format_double(row[k]) + " is negative or non-finite");
      } else if (row[k] > 1.0) {
        out.push_back("values[" + std::to_string(i) + "][" + std::to_string(k) +
                      "] = " + format_double(row[k]) + " exceeds 1");
      }
    }
  }
  if (static_cast<int>(inst.budgets.size()) != inst.n) {
    out.push_back("budgets has " + std::to_string(inst.budgets.size()) + " entries, expected n=" +
                  std::to_string(inst.n));
  }
  for (std::size_t i = 0; i < inst.budgets.size(); ++i) {
    if (!(inst.budgets[i] >= 0.0) || !std::isfinite(inst.budgets[i])) {
      out.push_back("budgets[" + std::to_string(i) + "] = " + format_double(inst.budgets[i]) +
                    " is negative or non-finite");
    }
  }
  return out;
}

}  // namespace paced
