#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kseries/estimator.hpp"
#include "kseries/rng.hpp"

namespace kseries {

/// Outcome of a two-sample test. For KS the threshold is the analytic
/// critical distance; for the energy test `p_value` carries the permutation
/// p-value instead.
struct TestReport {
    double statistic = 0.0;
    std::optional<double> threshold;  // KS critical value at `alpha`
    std::optional<double> p_value;    // energy permutation p-value
    double alpha = 0.05;
    bool rejected = false;
    std::size_t n1 = 0, n2 = 0;
};

/// KS rejection threshold c(alpha) * sqrt((N1+N2)/(N1*N2)) with
/// c(alpha) = sqrt(-ln(alpha/2) / 2).
double ks_threshold(std::size_t n1, std::size_t n2, double alpha);

/// Two-sample Kolmogorov-Smirnov: D = sup |ecdf1 - ecdf2| over the pooled
/// points, decided against the analytic threshold at `alpha`.
TestReport ks_two_sample(std::vector<double> s1, std::vector<double> s2,
                         double alpha = 0.05);

/// Szekely-Rizzo energy two-sample test with a permutation p-value,
/// e = N1 N2/(N1+N2) * (2 D12 - D11 - D22) over mean pairwise Euclidean
/// distances. p = (1 + #{e* >= e}) / (permutations + 1). Decision:
/// p <= alpha.
TestReport energy_two_sample(const std::vector<std::vector<double>>& s1,
                             const std::vector<std::vector<double>>& s2,
                             int permutations, RngStream& rng,
                             double alpha = 0.05, int threads = 0);

/// Draw n observations from the clipped-and-renormalized view
/// max(f, 0) / integral(max(f, 0)) of an estimate. Univariate: inverse cdf
/// on a 4096-cell grid. Multivariate: cell sampling over a tensor grid with
/// per-cell uniform jitter. Unbounded references are truncated at
/// mean +/- 12 sigma. Throws DegenerateEstimate when the clipped mass is
/// below half the signed series mass scale.
std::vector<std::vector<double>> sample_estimate(const DensityEstimate& est,
                                                 std::size_t n,
                                                 RngStream& rng);

/// Univariate convenience wrapper around sample_estimate.
std::vector<double> sample_estimate_1d(const DensityEstimate& est,
                                       std::size_t n, RngStream& rng);

}  // namespace kseries
