#pragma once

#include <functional>

// Numeric integration helpers. Two families:
//  * adaptive Simpson for smooth 1-D integrands (tolerance-driven),
//  * fixed composite midpoint rules for integrands with indicator-style
//    discontinuities, where high-order rules buy nothing.
namespace irsho {

using Fn1 = std::function<double(double)>;

// Adaptive Simpson with the usual S(a,b) vs S(a,m)+S(m,b) error estimate.
// Stops when the local error estimate is below max(atol, rtol*|whole|) or the
// recursion depth is exhausted.
double adaptive_simpson(const Fn1& f, double a, double b, double rtol,
                        double atol = 0.0, int max_depth = 24);

// Composite midpoint rule with n uniform panels.
double midpoint(const Fn1& f, double a, double b, int n);

// Composite midpoint with one refinement doubling: returns the 2n-panel result
// if it differs from the n-panel result by more than rel_tol relatively,
// otherwise the n-panel result. Matches the convention used for the polar
// indicator integrals.
double midpoint_refined(const Fn1& f, double a, double b, int n, double rel_tol);

}  // namespace irsho
