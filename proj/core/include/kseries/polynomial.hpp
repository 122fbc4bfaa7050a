#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kseries {

/// Dense univariate polynomial with real coefficients, lowest degree first.
/// coeffs()[j] is the coefficient of x^j. The zero polynomial normalizes to
/// the single-element list {0}.
class Polynomial {
  public:
    Polynomial() : coeffs_{0.0} {}
    Polynomial(std::initializer_list<double> cs) : coeffs_(cs) { normalize(); }
    explicit Polynomial(std::vector<double> cs) : coeffs_(std::move(cs)) {
        normalize();
    }

    static Polynomial constant(double c) { return Polynomial({c}); }

    const std::vector<double>& coeffs() const { return coeffs_; }
    std::size_t degree() const { return coeffs_.size() - 1; }

    /// Coefficient of x^j; zero beyond the stored degree.
    double operator[](std::size_t j) const {
        return j < coeffs_.size() ? coeffs_[j] : 0.0;
    }

    bool operator==(const Polynomial& o) const = default;

    /// Horner evaluation.
    double operator()(double x) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& o) const;  // convolution
    Polynomial operator*(double c) const;

    /// p(c0 + c1*x): composition with a degree-1 polynomial.
    Polynomial compose_affine(double c0, double c1) const;

    /// E[p(X)] under any distribution with the given raw moments
    /// (moments[j] = m_j, moments[0] = 1). Throws InsufficientMoments if the
    /// degree exceeds the highest available order.
    double moment_functional(std::span<const double> moments) const;

  private:
    void normalize();
    std::vector<double> coeffs_;
};

inline Polynomial operator*(double c, const Polynomial& p) { return p * c; }

}  // namespace kseries
