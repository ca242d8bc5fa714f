#pragma once

// Adaptive Gauss-Kronrod (G7/K15) quadrature over finite intervals, plus
// tan-substitution wrappers for half-infinite and doubly infinite ranges.
// One engine serves the library (distribution CDFs) and the test oracles.

#include <functional>

namespace egse {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // accumulated |K15 - G7| over accepted panels
    int evaluations = 0;
    bool converged = false;
};

using Integrand = std::function<double(double)>;

// Integrate f over [a, b]. Panels are bisected until the local K15-G7
// discrepancy fits within the (split) tolerance or max_depth is reached.
QuadResult integrate(const Integrand& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-10,
                     int max_depth = 48);

// Integrate f over (-inf, inf) via s = tan(t).
QuadResult integrate_real_line(const Integrand& f, double abs_tol = 1e-10,
                               double rel_tol = 1e-10);

// Integrate f over (-inf, x] via s = x - tan(t).
QuadResult integrate_left_tail(const Integrand& f, double x,
                               double abs_tol = 1e-10, double rel_tol = 1e-10);

// Integrate f over [x, inf) via s = x + tan(t).
QuadResult integrate_right_tail(const Integrand& f, double x,
                                double abs_tol = 1e-10, double rel_tol = 1e-10);

}  // namespace egse
