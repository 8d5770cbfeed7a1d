#pragma once

#include <functional>

namespace copdyn::detail {

// Adaptive 7/15-point Gauss-Kronrod quadrature of f over [a, b] (a > b gives
// the negated integral). Subdivides until each panel's |K15 - G7| falls below
// its share of abs_tol or max_depth is reached.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-14,
                          int max_depth = 40);

}  // namespace copdyn::detail
