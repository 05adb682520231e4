#pragma once

#include <functional>
#include <span>

namespace ilab {

// Adaptive Gauss-Kronrod 7-15 integration to an absolute tolerance.
// Breakpoints inside (a, b) become initial panel boundaries, so piecewise
// smooth integrands converge at full order.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, std::span<const double> breakpoints = {});

}  // namespace ilab
