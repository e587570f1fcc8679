#pragma once

#include "paced/acceptance.hpp"
#include "paced/bounds.hpp"
#include "paced/counterexamples.hpp"
#include "paced/engine.hpp"
#include "paced/experiment.hpp"
#include "paced/generators.hpp"
#include "paced/hindsight.hpp"
#include "paced/instance.hpp"
#include "paced/json_io.hpp"
#include "paced/policies.hpp"
#include "paced/submodular.hpp"
#include "paced/trace_io.hpp"
#include "paced/welfare.hpp"
