#pragma once

// Convenience umbrella for the whole library.

#include "bie2d/common.hpp"
#include "bie2d/special.hpp"
#include "bie2d/curve.hpp"
#include "bie2d/discretization.hpp"
#include "bie2d/kernels.hpp"
#include "bie2d/quadrature.hpp"
#include "bie2d/linsolve.hpp"
#include "bie2d/operators.hpp"
#include "bie2d/problems.hpp"
#include "bie2d/scenarios.hpp"
#include "bie2d/report.hpp"
