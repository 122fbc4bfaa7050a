#pragma once

#include <Eigen/Dense>
#include <vector>

#include "kseries/distribution.hpp"
#include "kseries/polynomial.hpp"

namespace kseries {

/// Orthonormal polynomial system h_0..h_n for a reference distribution:
/// <h_i, h_j>_phi = delta_ij. Row i of the lower-triangular coefficient
/// matrix holds the monomial coefficients a_i0..a_ii of h_i; h_0 == 1.
///
/// Constructed from the Cholesky factorization of the Hankel moment matrix
/// (m_{i+j}): with H = L L^T, the rows of L^{-1} are the orthonormal
/// coefficients. Identical to modified Gram-Schmidt over moment inner
/// products, with a clean failure mode (non-positive-definite) instead of a
/// slow loss of orthogonality.
class OrthonormalBasis {
  public:
    /// Gram-Schmidt (via Cholesky) for an arbitrary reference. Requires
    /// finite reference moments to order 2n. Throws MomentMatrixNotPD when
    /// the Hankel matrix is numerically degenerate, including the
    /// small-variance guard: bounded references with
    /// variance < 1e-12 * width^2 are refused.
    static OrthonormalBasis gram_schmidt(const Distribution& reference, int n);

    /// Closed-form shifted, scaled Legendre basis on [a, b] (orthonormal
    /// w.r.t. Uniform(a, b)).
    static OrthonormalBasis legendre_shifted(double a, double b, int n);

    /// Rehydrate a serialized basis; the coefficient matrix is trusted as
    /// stored so file round-trips are bit-exact.
    static OrthonormalBasis restore(Distribution reference,
                                    Eigen::MatrixXd coeffs,
                                    double hankel_condition) {
        return OrthonormalBasis(std::move(reference), std::move(coeffs),
                                hankel_condition);
    }

    const Distribution& reference() const { return reference_; }
    int max_degree() const { return int(coeffs_.rows()) - 1; }

    /// Lower-triangular coefficient matrix A, row i = coefficients of h_i.
    const Eigen::MatrixXd& coefficient_matrix() const { return coeffs_; }

    Polynomial polynomial(int i) const;

    /// h_i(x).
    double evaluate(int i, double x) const;

    /// All of h_0(x)..h_n(x) in one pass over the monomial powers.
    void evaluate_all(double x, std::vector<double>& out) const;

    /// Infinity-norm condition estimate of the Hankel moment matrix;
    /// a diagnostic for how far the degree can be pushed.
    double hankel_condition() const { return hankel_condition_; }

  private:
    OrthonormalBasis(Distribution ref, Eigen::MatrixXd coeffs, double cond)
        : reference_(std::move(ref)),
          coeffs_(std::move(coeffs)),
          hankel_condition_(cond) {}

    Distribution reference_;
    Eigen::MatrixXd coeffs_;
    double hankel_condition_ = 0.0;
};

/// Tensor-product basis: one univariate basis per axis plus per-axis maximum
/// degrees. Product polynomials h~_{i1..ik} are formed lazily at evaluation
/// time, never expanded into a k-variate monomial table.
class MultiBasis {
  public:
    MultiBasis(std::vector<OrthonormalBasis> axes);

    std::size_t num_axes() const { return axes_.size(); }
    const OrthonormalBasis& axis(std::size_t j) const { return axes_[j]; }
    std::vector<int> degrees() const;

    /// h~_{index}(point) = prod_j h_{index[j]}(point[j]).
    double evaluate(const std::vector<int>& index,
                    const std::vector<double>& point) const;

  private:
    std::vector<OrthonormalBasis> axes_;
};

}  // namespace kseries
