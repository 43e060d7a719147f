#pragma once

// Umbrella header for the full library.

#include "dlingam/adaptive_lasso.hpp"
#include "dlingam/benchmark.hpp"
#include "dlingam/bootstrap.hpp"
#include "dlingam/common.hpp"
#include "dlingam/dataset.hpp"
#include "dlingam/direct_lingam.hpp"
#include "dlingam/dot_export.hpp"
#include "dlingam/kernel_mi.hpp"
#include "dlingam/prior_knowledge.hpp"
#include "dlingam/regression.hpp"
#include "dlingam/simulation.hpp"
