#pragma once

#include "xnim/analysis.hpp"
#include "xnim/bits.hpp"
#include "xnim/brute_force.hpp"
#include "xnim/classify.hpp"
#include "xnim/error.hpp"
#include "xnim/parallel.hpp"
#include "xnim/persist.hpp"
#include "xnim/position.hpp"
#include "xnim/pset_index.hpp"
#include "xnim/ranking.hpp"
#include "xnim/rules.hpp"
#include "xnim/solver.hpp"
