#pragma once

#include "rapidsat/cnf.hpp"
#include "rapidsat/engine.hpp"
#include "rapidsat/gen.hpp"
#include "rapidsat/harness.hpp"
#include "rapidsat/heuristics.hpp"
#include "rapidsat/lit.hpp"
#include "rapidsat/restarts.hpp"
#include "rapidsat/rng.hpp"
#include "rapidsat/unitwalk.hpp"
