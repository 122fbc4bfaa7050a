#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kseries/moments.hpp"
#include "kseries/orthobasis.hpp"
#include "kseries/polynomial.hpp"

namespace kseries {

/// A fitted series density estimate: reference pdf(s) times a linear
/// combination of orthonormal (product) polynomials. Evaluation returns the
/// raw signed series value; truncation can make it dip below zero inside the
/// support. It is exactly 0 outside the reference support.
class DensityEstimate {
  public:
    DensityEstimate(MultiBasis basis, std::vector<double> alpha);

    const MultiBasis& basis() const { return basis_; }
    const std::vector<double>& alpha() const { return alpha_; }
    std::size_t num_axes() const { return basis_.num_axes(); }
    std::vector<int> degrees() const { return basis_.degrees(); }

    double operator()(const std::vector<double>& point) const;
    /// Univariate convenience.
    double operator()(double x) const;

    std::vector<double> eval_grid(
        const std::vector<std::vector<double>>& points) const;

    /// Integral of x^index * f over the reference support by (tensor)
    /// adaptive Gauss-Legendre quadrature; unbounded supports are truncated
    /// at mean +/- 12 sigma of the reference.
    double moment_of_estimate(const std::vector<int>& index) const;

    /// Integral of f over the support (same quadrature path).
    double integral() const;

    /// Quadrature bounds per axis (support, with unbounded edges truncated).
    void quadrature_bounds(std::vector<double>& lo,
                           std::vector<double>& hi) const;

    /// Attached when an unbounded reference is used with an unknown target
    /// support: the series may silently fail to converge there.
    const std::optional<std::string>& warning() const { return warning_; }
    void set_warning(std::string w) { warning_ = std::move(w); }

  private:
    MultiBasis basis_;
    std::vector<double> alpha_;
    std::optional<std::string> warning_;
};

/// Univariate fit: alpha = A * m (Fourier coefficients through the moment
/// functional). Basis degree = moment order.
DensityEstimate fit(const MomentVector& m, const Distribution& reference);

/// Multivariate fit from a cross-moment tensor and per-axis references. The
/// coefficient at multi-index (i_1..i_k) substitutes every monomial
/// z_1^{l_1}...z_k^{l_k} of the product polynomial by m_{l_1..l_k}.
DensityEstimate fit_multivariate(const MomentTensor& m,
                                 const std::vector<Distribution>& references);

/// Gram-Charlier type A mode: delegates to fit with a Normal(m_1,
/// m_2 - m_1^2) reference.
DensityEstimate fit_gram_charlier(const MomentVector& m);

/// Method-of-moments polynomial density on [a, b]: solves the power-moment
/// linear system for the monomial coefficients. Coincides pointwise with the
/// Uniform(a, b)-reference series fit.
Polynomial fit_method_of_moments(const MomentVector& m, double a, double b);

/// The power-integral matrix of the method of moments: entry (i, j) =
/// integral of x^{i+j} over [a, b].
Eigen::MatrixXd mm_power_matrix(double a, double b, int n);

}  // namespace kseries
