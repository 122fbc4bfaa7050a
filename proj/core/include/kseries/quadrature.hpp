#pragma once

#include <functional>
#include <vector>

namespace kseries {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Computed by Newton iteration on the Legendre recurrence; cached per n.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    static const GaussLegendreRule& get(int n);
};

/// Fixed n-point Gauss-Legendre estimate of the integral over [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int n);

/// Adaptive Gauss-Legendre with interval bisection. Compares a 21-point
/// panel against its two-half refinement and recurses on disagreement.
/// Throws QuadratureFailure when the recursion depth is exhausted before the
/// requested relative tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

/// Iterated adaptive integral over the axis-aligned box [lo_i, hi_i].
double integrate_box(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& lo,
                     const std::vector<double>& hi, double rel_tol = 1e-9);

}  // namespace kseries
