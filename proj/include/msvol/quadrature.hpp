#pragma once

#include <functional>

namespace msvol {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod 7-15 with recursive bisection. Tolerances per
// panel: abs_tol is split across subintervals, rel_tol applies to the
// running global estimate.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-10, double rel_tol = 1e-8);

// integral over (a, infinity) via the rational substitution
// x = a + u/(1-u), u in (0,1).
QuadratureResult integrate_upper(const std::function<double(double)>& f, double a,
                                 double abs_tol = 1e-10, double rel_tol = 1e-8);

// integral over the whole real line, split at 0.
QuadratureResult integrate_line(const std::function<double(double)>& f,
                                double abs_tol = 1e-10, double rel_tol = 1e-8);

}  // namespace msvol
