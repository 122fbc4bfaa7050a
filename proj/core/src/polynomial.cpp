#include "kseries/polynomial.hpp"

#include <algorithm>

#include "kseries/errors.hpp"

namespace kseries {

void Polynomial::normalize() {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<double> out(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (*this)[i] + o[i];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-() const {
    std::vector<double> out(coeffs_);
    for (double& c : out) c = -c;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + (-o);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    std::vector<double> out(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
            out[i + j] += coeffs_[i] * o.coeffs_[j];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double c) const {
    std::vector<double> out(coeffs_);
    for (double& v : out) v *= c;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::compose_affine(double c0, double c1) const {
    // Horner in the polynomial ring with the linear argument.
    Polynomial arg({c0, c1});
    Polynomial acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * arg + Polynomial::constant(*it);
    return acc;
}

double Polynomial::moment_functional(std::span<const double> moments) const {
    if (moments.size() < coeffs_.size())
        throw InsufficientMoments(
            "moment_functional: polynomial degree " +
            std::to_string(degree()) + " exceeds highest available moment " +
            std::to_string(moments.empty() ? 0 : moments.size() - 1));
    double acc = 0.0;
    for (std::size_t j = 0; j < coeffs_.size(); ++j)
        acc += coeffs_[j] * moments[j];
    return acc;
}

}  // namespace kseries
