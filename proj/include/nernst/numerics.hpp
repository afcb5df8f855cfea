#pragma once

#include "nernst/numerics/bessel.hpp"
#include "nernst/numerics/diff.hpp"
#include "nernst/numerics/eigen.hpp"
#include "nernst/numerics/extrapolate.hpp"
#include "nernst/numerics/quadrature.hpp"
#include "nernst/numerics/roots.hpp"
