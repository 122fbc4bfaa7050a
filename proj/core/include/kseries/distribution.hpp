#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kseries/rng.hpp"

namespace kseries {

/// Interval support; edges may be infinite.
struct Support {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    bool bounded() const {
        return std::isfinite(lower) && std::isfinite(upper);
    }
    double width() const { return upper - lower; }
    bool contains(double x) const { return x >= lower && x <= upper; }
};

/// A reference (or target) distribution: pdf, cdf, exact raw moments, and a
/// sampler. Immutable after construction; safe for concurrent use. sample()
/// draws through a caller-owned RngStream.
///
/// Raw moments are closed-form for every built-in family (a two-term
/// recurrence for the truncated normal); the numeric-pdf fallback integrates
/// x^k * pdf by adaptive quadrature.
class Distribution {
  public:
    static Distribution uniform(double a, double b);
    /// Parameterized by mean and variance.
    static Distribution normal(double mean, double variance);
    static Distribution truncated_normal(double mean, double variance,
                                         double a, double b);
    static Distribution truncated_exponential(double rate, double a, double b);
    /// Shape alpha, rate beta.
    static Distribution truncated_gamma(double alpha, double beta, double a,
                                        double b);
    static Distribution continuous_bernoulli(double pi);
    static Distribution beta(double alpha, double beta);
    /// User-supplied pdf on a bounded support. Normalization to 1 within
    /// 1e-8 is checked by quadrature at construction.
    static Distribution numeric_pdf(std::function<double(double)> pdf,
                                    double a, double b);

    std::string family() const;
    Support support() const;

    /// Density at x; exactly 0 outside the support.
    double pdf(double x) const;
    /// Monotone cdf, 0 at the lower support edge, 1 at the upper.
    double cdf(double x) const;
    /// E[X^k].
    double raw_moment(int k) const;
    double mean() const { return raw_moment(1); }
    double variance() const {
        double m1 = raw_moment(1);
        return raw_moment(2) - m1 * m1;
    }
    double sample(RngStream& rng) const;

    /// True for families whose moment sequence identifies them on unbounded
    /// support (exponential integrability; bounded supports qualify
    /// automatically). Documentation only, never enforced.
    bool moment_determinate() const;

    /// Family parameters as (name, value) pairs, for serialization.
    std::vector<std::pair<std::string, double>> params() const;

    struct Model;  // internal
    const Model& model() const { return *model_; }

  private:
    explicit Distribution(std::shared_ptr<const Model> m)
        : model_(std::move(m)) {}
    std::shared_ptr<const Model> model_;
};

}  // namespace kseries
