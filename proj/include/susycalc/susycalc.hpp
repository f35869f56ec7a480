#pragma once

// Umbrella header for the full library surface.

#include "susycalc/errors.hpp"
#include "susycalc/euler/disk_map.hpp"
#include "susycalc/euler/hopf.hpp"
#include "susycalc/euler/mq.hpp"
#include "susycalc/euler/quadrature.hpp"
#include "susycalc/geometry/builtins.hpp"
#include "susycalc/geometry/chart_manifold.hpp"
#include "susycalc/pfaffian/pfaffian.hpp"
#include "susycalc/pfaffian/skew_matrix.hpp"
#include "susycalc/rational.hpp"
#include "susycalc/scalar.hpp"
#include "susycalc/superalg/grassmann.hpp"
#include "susycalc/superalg/multi_index.hpp"
