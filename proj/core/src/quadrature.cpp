#include "kseries/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "kseries/errors.hpp"

namespace kseries {

namespace {

GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-like initial guess for the i-th root of P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_n(x) and P_n'(x).
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace

const GaussLegendreRule& GaussLegendreRule::get(int n) {
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int n) {
    const auto& rule = GaussLegendreRule::get(n);
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

namespace {

double integrate_rec(const std::function<double(double)>& f, double a,
                     double b, double coarse, double abs_tol, int depth) {
    double mid = 0.5 * (a + b);
    double left = gauss_legendre(f, a, mid, 21);
    double right = gauss_legendre(f, mid, b, 21);
    double fine = left + right;
    if (std::abs(fine - coarse) <= abs_tol) return fine;
    if (depth <= 0)
        throw QuadratureFailure("adaptive quadrature did not converge");
    return integrate_rec(f, a, mid, left, 0.5 * abs_tol, depth - 1) +
           integrate_rec(f, mid, b, right, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    if (a == b) return 0.0;
    double coarse = gauss_legendre(f, a, b, 21);
    double scale = std::max(std::abs(coarse), 1e-30);
    return integrate_rec(f, a, b, coarse, rel_tol * scale, 48);
}

double integrate_box(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& lo,
                     const std::vector<double>& hi, double rel_tol) {
    if (lo.size() != hi.size() || lo.empty())
        throw DimensionMismatch("integrate_box: bad bounds");
    std::vector<double> point(lo.size());
    // Recursive lambda integrating axis `axis` with the outer axes pinned.
    std::function<double(std::size_t)> rec = [&](std::size_t axis) -> double {
        return integrate(
            [&](double x) {
                point[axis] = x;
                if (axis + 1 == lo.size()) return f(point);
                return rec(axis + 1);
            },
            lo[axis], hi[axis], rel_tol);
    };
    return rec(0);
}

}  // namespace kseries
