#include "kseries/orthobasis.hpp"

#include <cmath>
#include <vector>

#include "kseries/errors.hpp"

namespace kseries {

OrthonormalBasis OrthonormalBasis::gram_schmidt(const Distribution& reference,
                                                int n) {
    if (n < 0) throw Error("gram_schmidt: negative degree");
    Support sup = reference.support();
    if (sup.bounded()) {
        double guard = 1e-12 * sup.width() * sup.width();
        if (reference.variance() < guard)
            throw MomentMatrixNotPD(
                "gram_schmidt: reference variance is degenerate relative to "
                "its support; widen the reference variance");
    }

    using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

    // Work in mapped coordinates z = u + v x: bounded supports go to
    // [-1, 1], unbounded ones are standardized to zero mean / unit variance.
    // Two reasons, both essential for the orthonormality tolerance at n=10:
    // the raw Hankel matrix is numerically singular long before degree 10
    // whenever the support sits away from the origin, and transforming
    // precomputed raw moments through the binomial theorem cancels ~8 digits
    // at order 20.  So the mapped moments are integrated directly from the
    // pdf in long double, where the only error source is the pdf itself.
    long double u, v;
    double qlo, qhi;
    if (sup.bounded()) {
        qlo = sup.lower;
        qhi = sup.upper;
        u = -(static_cast<long double>(sup.lower) + sup.upper) /
            (static_cast<long double>(sup.upper) - sup.lower);
        v = 2.0L / (static_cast<long double>(sup.upper) - sup.lower);
    } else {
        double mu = reference.mean(), var = reference.variance();
        if (!(var > 0.0))
            throw MomentMatrixNotPD(
                "gram_schmidt: reference variance is not positive");
        double sd = std::sqrt(var);
        qlo = std::max(sup.lower, mu - 12.0 * sd);
        qhi = std::min(sup.upper, mu + 12.0 * sd);
        u = -static_cast<long double>(mu) / sd;
        v = 1.0L / static_cast<long double>(sd);
    }

    // Mapped moments s_l = E[z^l], l = 0..2n, by composite 32-node
    // Gauss-Legendre quadrature (64 panels) accumulated in long double.
    const int order = 2 * n;
    static const struct GL32 {
        long double x[16], w[16];  // positive half; symmetric
        GL32() {
            const int m = 32;
            for (int i = 0; i < 16; ++i) {
                long double t = std::cos(
                    3.14159265358979323846L * (i + 0.75L) / (m + 0.5L));
                for (int it = 0; it < 100; ++it) {
                    long double p0 = 1.0L, p1 = t;
                    for (int j = 2; j <= m; ++j) {
                        long double p2 =
                            ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                        p0 = p1;
                        p1 = p2;
                    }
                    long double dp = m * (t * p1 - p0) / (t * t - 1.0L);
                    long double step = p1 / dp;
                    t -= step;
                    if (std::fabs(step) < 1e-20L) break;
                }
                x[i] = t;
                long double p0 = 1.0L, p1 = t;
                for (int j = 2; j <= m; ++j) {
                    long double p2 =
                        ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                long double dp = m * (t * p1 - p0) / (t * t - 1.0L);
                w[i] = 2.0L / ((1.0L - t * t) * dp * dp);
            }
        }
    } gl;
    std::vector<long double> s(order + 1, 0.0L), zpow(order + 1);
    const int panels = 64;
    for (int p = 0; p < panels; ++p) {
        long double plo = qlo + (static_cast<long double>(qhi) - qlo) * p /
                                    panels;
        long double phi = qlo + (static_cast<long double>(qhi) - qlo) *
                                    (p + 1) / panels;
        long double mid = 0.5L * (plo + phi), half = 0.5L * (phi - plo);
        for (int i = 0; i < 32; ++i) {
            long double node = i < 16 ? gl.x[i] : -gl.x[i - 16];
            long double wt = half * (i < 16 ? gl.w[i] : gl.w[i - 16]);
            long double xx = mid + half * node;
            long double f =
                wt * reference.pdf(static_cast<double>(xx));
            if (f == 0.0L) continue;
            long double z = u + v * xx, zp = 1.0L;
            for (int l = 0; l <= order; ++l) {
                s[l] += f * zp;
                zp *= z;
            }
        }
    }
    if (!(s[0] > 0.0L))
        throw MomentMatrixNotPD(
            "gram_schmidt: reference pdf integrates to zero");
    for (int l = order; l >= 0; --l) s[l] /= s[0];

    MatL hankel(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            hankel(i, j) = hankel(j, i) = s[i + j];

    Eigen::LLT<MatL> llt(hankel);
    if (llt.info() != Eigen::Success)
        throw MomentMatrixNotPD(
            "gram_schmidt: Hankel moment matrix is not positive definite");

    MatL lower = llt.matrixL();
    MatL coeffs_z = lower.triangularView<Eigen::Lower>().solve(
        MatL::Identity(n + 1, n + 1));

    double cond = 0.0;
    {
        // ||H||_inf * ||H^-1||_inf via the Cholesky factors.
        MatL inv = lower.transpose().triangularView<Eigen::Upper>().solve(
            MatL(coeffs_z));
        cond = (double)(hankel.cwiseAbs().rowwise().sum().maxCoeff() *
                        inv.cwiseAbs().rowwise().sum().maxCoeff());
    }

    // Map each q_i(z) back to h_i(x) = q_i(u + v x): the coefficient of x^m
    // in (u + v x)^j is C(j, m) u^{j-m} v^m.
    std::vector<std::vector<long double>> binom(n + 1);
    for (int i = 0; i <= n; ++i) {
        binom[i].assign(i + 1, 1.0L);
        for (int j = 1; j < i; ++j)
            binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
    }
    std::vector<long double> upow(n + 1), vpow(n + 1);
    upow[0] = vpow[0] = 1.0L;
    for (int j = 1; j <= n; ++j) {
        upow[j] = upow[j - 1] * u;
        vpow[j] = vpow[j - 1] * v;
    }
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        std::vector<long double> row(n + 1, 0.0L);
        for (int j = 0; j <= i; ++j) {
            long double cz = coeffs_z(i, j);
            if (cz == 0.0L) continue;
            for (int m = 0; m <= j; ++m)
                row[m] += cz * binom[j][m] * upow[j - m] * vpow[m];
        }
        for (int m = 0; m <= i; ++m) coeffs(i, m) = (double)row[m];
    }
    return OrthonormalBasis(reference, std::move(coeffs), cond);
}

OrthonormalBasis OrthonormalBasis::legendre_shifted(double a, double b,
                                                    int n) {
    if (!(a < b)) throw Error("legendre_shifted: require a < b");
    if (n < 0) throw Error("legendre_shifted: negative degree");

    // Legendre P_i on [-1, 1] by the monomial recurrence, composed with the
    // affine map u = (2x - (a + b)) / (b - a), scaled by sqrt(2i + 1).
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Polynomial p0 = Polynomial::constant(1.0);
    Polynomial p1({0.0, 1.0});
    double c0 = -(a + b) / (b - a);
    double c1 = 2.0 / (b - a);
    for (int i = 0; i <= n; ++i) {
        Polynomial pi = (i == 0) ? p0 : (i == 1 ? p1 : Polynomial());
        if (i >= 2) {
            pi = (Polynomial({0.0, double(2 * i - 1)}) * p1 -
                  double(i - 1) * p0) *
                 (1.0 / i);
            p0 = p1;
            p1 = pi;
        }
        Polynomial shifted =
            pi.compose_affine(c0, c1) * std::sqrt(2.0 * i + 1.0);
        for (std::size_t j = 0; j < shifted.coeffs().size(); ++j)
            coeffs(i, j) = shifted.coeffs()[j];
    }
    return OrthonormalBasis(Distribution::uniform(a, b), std::move(coeffs),
                            0.0);
}

Polynomial OrthonormalBasis::polynomial(int i) const {
    std::vector<double> cs(i + 1);
    for (int j = 0; j <= i; ++j) cs[j] = coeffs_(i, j);
    return Polynomial(std::move(cs));
}

double OrthonormalBasis::evaluate(int i, double x) const {
    double acc = 0.0;
    for (int j = i; j >= 0; --j) acc = acc * x + coeffs_(i, j);
    return acc;
}

void OrthonormalBasis::evaluate_all(double x, std::vector<double>& out) const {
    int n = max_degree();
    out.assign(n + 1, 0.0);
    double power = 1.0;
    for (int j = 0; j <= n; ++j) {
        for (int i = j; i <= n; ++i) out[i] += coeffs_(i, j) * power;
        power *= x;
    }
}

MultiBasis::MultiBasis(std::vector<OrthonormalBasis> axes)
    : axes_(std::move(axes)) {
    if (axes_.empty()) throw Error("MultiBasis: need at least one axis");
}

std::vector<int> MultiBasis::degrees() const {
    std::vector<int> d(axes_.size());
    for (std::size_t j = 0; j < axes_.size(); ++j)
        d[j] = axes_[j].max_degree();
    return d;
}

double MultiBasis::evaluate(const std::vector<int>& index,
                            const std::vector<double>& point) const {
    if (index.size() != axes_.size() || point.size() != axes_.size())
        throw DimensionMismatch("MultiBasis::evaluate: arity mismatch");
    double acc = 1.0;
    for (std::size_t j = 0; j < axes_.size(); ++j)
        acc *= axes_[j].evaluate(index[j], point[j]);
    return acc;
}

}  // namespace kseries
