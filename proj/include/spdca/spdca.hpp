#pragma once

#include "spdca/analysis.hpp"
#include "spdca/ca.hpp"
#include "spdca/ga.hpp"
#include "spdca/grid.hpp"
#include "spdca/payoff.hpp"
#include "spdca/render.hpp"
#include "spdca/rng.hpp"
#include "spdca/templates.hpp"
#include "spdca/version.hpp"
