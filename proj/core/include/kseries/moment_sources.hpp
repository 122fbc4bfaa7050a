#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kseries/estimator.hpp"
#include "kseries/moments.hpp"

namespace kseries {

/// Entry (i_1..i_k) = mean over rows of prod_j x_j^{i_j}. Rows are k-dim
/// observations. Computed in one streaming pass with compensated summation.
MomentTensor sample_moments(const std::vector<std::vector<double>>& data,
                            const std::vector<int>& degrees);

/// Exact rational value p/q evaluated lazily; used for closed-form moment
/// functions of the iteration number.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return double(num) / double(den); }
    bool operator==(const Rational&) const = default;
};

/// Closed-form moments as a function of the loop iteration t >= 1; every
/// evaluation yields a valid MomentTensor (entry (0..0) = 1).
struct MomentFunctionOfIteration {
    std::vector<int> degrees;
    std::function<MomentTensor(std::int64_t t)> at;
};

/// The first six raw moments of the sum of t iid Uniform(0,1) variables,
/// as exact rationals in t.
std::vector<Rational> irwin_hall_moment_rationals(std::int64_t t);

/// Univariate degree-6 moment function t -> (1, m_1(t), ..., m_6(t)).
MomentFunctionOfIteration irwin_hall_moments();

/// Evaluate a moment function at iteration t and fit against the reference
/// produced by the factory at t. Univariate moment functions only need a
/// single-axis factory.
DensityEstimate symbolic_estimate(
    const MomentFunctionOfIteration& mf,
    const std::function<std::vector<Distribution>(std::int64_t)>&
        reference_factory,
    std::int64_t t);

}  // namespace kseries
