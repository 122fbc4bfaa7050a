#include "kseries/estimator.hpp"

#include <cmath>

#include "kseries/errors.hpp"
#include "kseries/quadrature.hpp"

namespace kseries {

DensityEstimate::DensityEstimate(MultiBasis basis, std::vector<double> alpha)
    : basis_(std::move(basis)), alpha_(std::move(alpha)) {
    std::size_t expected = 1;
    for (int d : basis_.degrees()) expected *= std::size_t(d) + 1;
    if (alpha_.size() != expected)
        throw DegreeMismatch(
            "DensityEstimate: coefficient count does not match basis grid");
}

double DensityEstimate::operator()(const std::vector<double>& point) const {
    if (point.size() != basis_.num_axes())
        throw DimensionMismatch("DensityEstimate: point arity mismatch");

    double phi = 1.0;
    for (std::size_t j = 0; j < point.size(); ++j) {
        if (!basis_.axis(j).reference().support().contains(point[j]))
            return 0.0;
        phi *= basis_.axis(j).reference().pdf(point[j]);
    }

    // Per-axis h_0..h_d values, then the alpha-weighted product sum in
    // storage order.
    std::vector<std::vector<double>> h(basis_.num_axes());
    for (std::size_t j = 0; j < basis_.num_axes(); ++j)
        basis_.axis(j).evaluate_all(point[j], h[j]);

    std::vector<int> degrees = basis_.degrees();
    std::vector<int> index(degrees.size(), 0);
    double series = 0.0;
    std::size_t flat = 0;
    do {
        double term = alpha_[flat++];
        for (std::size_t j = 0; j < index.size(); ++j)
            term *= h[j][std::size_t(index[j])];
        series += term;
    } while (MomentTensor::next_index(index, degrees));
    return phi * series;
}

double DensityEstimate::operator()(double x) const {
    if (basis_.num_axes() != 1)
        throw DimensionMismatch(
            "DensityEstimate: scalar eval on a multivariate estimate");
    return (*this)(std::vector<double>{x});
}

std::vector<double> DensityEstimate::eval_grid(
    const std::vector<std::vector<double>>& points) const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back((*this)(p));
    return out;
}

void DensityEstimate::quadrature_bounds(std::vector<double>& lo,
                                        std::vector<double>& hi) const {
    lo.resize(basis_.num_axes());
    hi.resize(basis_.num_axes());
    for (std::size_t j = 0; j < basis_.num_axes(); ++j) {
        const Distribution& ref = basis_.axis(j).reference();
        Support sup = ref.support();
        double mean = ref.mean();
        double sd = std::sqrt(ref.variance());
        lo[j] = std::isfinite(sup.lower) ? sup.lower : mean - 12.0 * sd;
        hi[j] = std::isfinite(sup.upper) ? sup.upper : mean + 12.0 * sd;
    }
}

double DensityEstimate::moment_of_estimate(
    const std::vector<int>& index) const {
    if (index.size() != basis_.num_axes())
        throw DimensionMismatch("moment_of_estimate: index arity mismatch");
    std::vector<int> degrees = basis_.degrees();
    for (std::size_t j = 0; j < index.size(); ++j)
        if (index[j] < 0 || index[j] > degrees[j])
            throw DegreeMismatch(
                "moment_of_estimate: index outside fitted degrees");

    std::vector<double> lo, hi;
    quadrature_bounds(lo, hi);
    return integrate_box(
        [&](const std::vector<double>& p) {
            double power = 1.0;
            for (std::size_t j = 0; j < p.size(); ++j)
                power *= std::pow(p[j], index[j]);
            return power * (*this)(p);
        },
        lo, hi, 1e-9);
}

double DensityEstimate::integral() const {
    return moment_of_estimate(std::vector<int>(basis_.num_axes(), 0));
}

DensityEstimate fit(const MomentVector& m, const Distribution& reference) {
    return fit_multivariate(MomentTensor::from_vector(m), {reference});
}

DensityEstimate fit_multivariate(const MomentTensor& m,
                                 const std::vector<Distribution>& references) {
    if (references.size() != m.num_axes())
        throw DimensionMismatch(
            "fit_multivariate: one reference per moment axis required");

    std::vector<OrthonormalBasis> axes;
    axes.reserve(references.size());
    bool unbounded = false;
    for (std::size_t j = 0; j < references.size(); ++j) {
        axes.push_back(OrthonormalBasis::gram_schmidt(
            references[j], m.degrees()[j]));
        unbounded = unbounded || !references[j].support().bounded();
    }
    MultiBasis basis(std::move(axes));

    const std::vector<int>& degrees = m.degrees();
    std::vector<double> alpha;
    std::vector<int> index(degrees.size(), 0);
    do {
        // alpha(i) = sum over sub-indices l <= i of m_l * prod_j a^j_{i_j l_j}
        std::vector<int> sub(index.size(), 0);
        double acc = 0.0;
        do {
            double term = m.at(sub);
            for (std::size_t j = 0; j < sub.size(); ++j)
                term *= basis.axis(j).coefficient_matrix()(index[j], sub[j]);
            acc += term;
        } while (MomentTensor::next_index(sub, index));
        alpha.push_back(acc);
    } while (MomentTensor::next_index(index, degrees));

    DensityEstimate est(std::move(basis), std::move(alpha));
    if (unbounded)
        est.set_warning(
            "unbounded reference: convergence requires the target's f/phi "
            "ratio to be integrable, which cannot be checked from moments");
    return est;
}

DensityEstimate fit_gram_charlier(const MomentVector& m) {
    if (m.max_order() < 2)
        throw InsufficientMoments(
            "fit_gram_charlier: need at least m_1 and m_2");
    double mean = m[1];
    double var = m[2] - m[1] * m[1];
    if (!(var > 0))
        throw NonPositiveVariance("fit_gram_charlier: m_2 - m_1^2 <= 0");
    return fit(m, Distribution::normal(mean, var));
}

Eigen::MatrixXd mm_power_matrix(double a, double b, int n) {
    Eigen::MatrixXd mat(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            int p = i + j + 1;
            mat(i, j) = (std::pow(b, p) - std::pow(a, p)) / p;
        }
    return mat;
}

Polynomial fit_method_of_moments(const MomentVector& m, double a, double b) {
    if (!(a < b)) throw Error("fit_method_of_moments: require a < b");
    const int n = m.max_order();

    // Solve in the normalized variable z = (2x - (a+b)) / (b-a) on [-1, 1];
    // the raw power matrix on a generic interval is Hilbert-like and sheds
    // digits fast. z-moments come from the binomial expansion of the map.
    const double shift = -(a + b) / (b - a);
    const double scale = 2.0 / (b - a);
    std::vector<long double> zmom(std::size_t(n) + 1, 0.0L);
    {
        // E[z^i] = E[(shift + scale x)^i]
        std::vector<std::vector<long double>> binom(std::size_t(n) + 1);
        for (int i = 0; i <= n; ++i) {
            binom[i].assign(std::size_t(i) + 1, 1.0L);
            for (int j = 1; j < i; ++j)
                binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
        }
        for (int i = 0; i <= n; ++i) {
            long double acc = 0.0L;
            for (int j = 0; j <= i; ++j)
                acc += binom[i][std::size_t(j)] *
                       std::pow((long double)shift, i - j) *
                       std::pow((long double)scale, j) *
                       (long double)m[j];
            zmom[std::size_t(i)] = acc;
        }
    }

    using MatrixXld =
        Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    MatrixXld mat(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            int p = i + j + 1;
            mat(i, j) = (p % 2 == 0) ? 0.0L : 2.0L / p;
        }
    VectorXld rhs(n + 1);
    for (int i = 0; i <= n; ++i) rhs(i) = zmom[std::size_t(i)];

    Eigen::FullPivLU<MatrixXld> lu(mat);
    if (!lu.isInvertible())
        throw SingularSystem(
            "fit_method_of_moments: power-moment system is singular at this "
            "order");
    VectorXld pz = lu.solve(rhs);

    // Map q(z) back to x: p(x) = scale * q(shift + scale * x); the leading
    // `scale` accounts for the density change of variable.
    std::vector<double> qc(std::size_t(n) + 1);
    for (int i = 0; i <= n; ++i) qc[std::size_t(i)] = double(pz(i));
    return Polynomial(qc).compose_affine(shift, scale) * scale;
}

}  // namespace kseries
