#pragma once

// Shared fixtures: the worked truncated-exponential and bivariate
// truncated-normal examples used across several suites.

#include "kseries/distribution.hpp"
#include "kseries/moments.hpp"

namespace fixtures {

inline kseries::MomentVector trunc_exp_m2() {
    return kseries::MomentVector({1.0, 0.418023, 0.254070});
}

/// First eight cross-moments of the bivariate example; axes (x, y), y
/// fastest, entry (i, j) = E[X^i Y^j].
inline kseries::MomentTensor bivariate_tensor() {
    return kseries::MomentTensor({2, 2},
                                 {1.0, 1.99556, 4.96894,      //
                                  0.71721, 1.43124, 3.56379,  //
                                  1.13054, 2.25606, 5.61757});
}

inline kseries::Distribution bivariate_ref_x() {
    return kseries::Distribution::truncated_normal(0.71721, 0.61614, -2.0,
                                                   2.0);
}

inline kseries::Distribution bivariate_ref_y() {
    return kseries::Distribution::truncated_normal(1.99556, 0.98667, -4.0,
                                                   5.0);
}

}  // namespace fixtures
