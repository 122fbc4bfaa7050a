#include "kseries/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "kseries/errors.hpp"

namespace kseries {

double ks_threshold(std::size_t n1, std::size_t n2, double alpha) {
    if (n1 == 0 || n2 == 0) throw EmptyData("ks_threshold: empty sample");
    double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c * std::sqrt(double(n1 + n2) / (double(n1) * double(n2)));
}

TestReport ks_two_sample(std::vector<double> s1, std::vector<double> s2,
                         double alpha) {
    if (s1.empty() || s2.empty())
        throw EmptyData("ks_two_sample: empty sample");
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());

    // Merge walk over the pooled order statistics.
    double d = 0.0;
    std::size_t i = 0, j = 0;
    const double inv1 = 1.0 / double(s1.size());
    const double inv2 = 1.0 / double(s2.size());
    while (i < s1.size() && j < s2.size()) {
        double x = std::min(s1[i], s2[j]);
        while (i < s1.size() && s1[i] <= x) ++i;
        while (j < s2.size() && s2[j] <= x) ++j;
        d = std::max(d, std::fabs(double(i) * inv1 - double(j) * inv2));
    }

    TestReport r;
    r.statistic = d;
    r.alpha = alpha;
    r.threshold = ks_threshold(s1.size(), s2.size(), alpha);
    r.rejected = d > *r.threshold;
    r.n1 = s1.size();
    r.n2 = s2.size();
    return r;
}

namespace {

// Sums of pairwise distances split by group label, from the cached pooled
// matrix. labels[i] true = group 1.
struct PairSums {
    double s11 = 0.0, s22 = 0.0, s12 = 0.0;
};

PairSums pair_sums(const std::vector<double>& dist, std::size_t m,
                   const std::vector<char>& labels) {
    PairSums s;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double* row = dist.data() + i * m;
        for (std::size_t j = i + 1; j < m; ++j) {
            double d = row[j];
            if (labels[i] & labels[j])
                s.s11 += d;
            else if (!(labels[i] | labels[j]))
                s.s22 += d;
            else
                s.s12 += d;
        }
    }
    return s;
}

double energy_stat(const PairSums& s, std::size_t n1, std::size_t n2) {
    const double a = double(n1), b = double(n2);
    double d12 = s.s12 / (a * b);
    double d11 = 2.0 * s.s11 / (a * a);
    double d22 = 2.0 * s.s22 / (b * b);
    return a * b / (a + b) * (2.0 * d12 - d11 - d22);
}

}  // namespace

TestReport energy_two_sample(const std::vector<std::vector<double>>& s1,
                             const std::vector<std::vector<double>>& s2,
                             int permutations, RngStream& rng, double alpha,
                             int threads) {
    if (s1.empty() || s2.empty())
        throw EmptyData("energy_two_sample: empty sample");
    if (permutations < 1)
        throw Error("energy_two_sample: need at least one permutation");
    const std::size_t k = s1.front().size();
    for (const auto& row : s1)
        if (row.size() != k)
            throw DimensionMismatch("energy_two_sample: row arity mismatch");
    for (const auto& row : s2)
        if (row.size() != k)
            throw DimensionMismatch("energy_two_sample: row arity mismatch");

    const std::size_t n1 = s1.size(), n2 = s2.size(), m = n1 + n2;

    // Pooled pairwise distances, computed once; every permutation is then
    // a relabeling pass over this matrix.
    std::vector<double> dist(m * m, 0.0);
    auto point = [&](std::size_t i) -> const std::vector<double>& {
        return i < n1 ? s1[i] : s2[i - n1];
    };
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const auto& pi = point(i);
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto& pj = point(j);
            double ss = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                double d = pi[c] - pj[c];
                ss += d * d;
            }
            double d = std::sqrt(ss);
            dist[i * m + j] = d;
            dist[j * m + i] = d;
        }
    }

    std::vector<char> labels(m, 0);
    std::fill(labels.begin(), labels.begin() + std::ptrdiff_t(n1), char(1));
    const double observed = energy_stat(pair_sums(dist, m, labels), n1, n2);

    // Replicate p draws from a stream keyed (base, p), so the p-value does
    // not depend on thread count.
    const std::uint64_t base = rng.next_u64();
    auto count_geq = [&](int lo, int hi) {
        long count = 0;
        std::vector<char> lab(m);
        std::vector<std::uint32_t> perm(m);
        for (int p = lo; p < hi; ++p) {
            RngStream rs(base, std::uint64_t(p));
            std::iota(perm.begin(), perm.end(), 0u);
            for (std::size_t i = m - 1; i > 0; --i) {
                std::size_t j = std::size_t(rs.next_u64() % (i + 1));
                std::swap(perm[i], perm[j]);
            }
            std::fill(lab.begin(), lab.end(), char(0));
            for (std::size_t i = 0; i < n1; ++i) lab[perm[i]] = 1;
            if (energy_stat(pair_sums(dist, m, lab), n1, n2) >= observed)
                ++count;
        }
        return count;
    };

    int nthreads = threads > 0 ? threads
                               : int(std::max(1u, std::thread::hardware_concurrency()));
    nthreads = std::min(nthreads, permutations);
    long total = 0;
    if (nthreads <= 1) {
        total = count_geq(0, permutations);
    } else {
        std::vector<long> counts(std::size_t(nthreads), 0);
        std::vector<std::thread> pool;
        int chunk = (permutations + nthreads - 1) / nthreads;
        for (int w = 0; w < nthreads; ++w) {
            int lo = w * chunk, hi = std::min(permutations, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, w, lo, hi] {
                counts[std::size_t(w)] = count_geq(lo, hi);
            });
        }
        for (auto& t : pool) t.join();
        for (long c : counts) total += c;
    }

    TestReport r;
    r.statistic = observed;
    r.alpha = alpha;
    r.p_value = double(1 + total) / double(permutations + 1);
    r.rejected = *r.p_value <= alpha;
    r.n1 = n1;
    r.n2 = n2;
    return r;
}

std::vector<std::vector<double>> sample_estimate(const DensityEstimate& est,
                                                 std::size_t n,
                                                 RngStream& rng) {
    const std::size_t k = est.num_axes();
    std::vector<double> lo, hi;
    est.quadrature_bounds(lo, hi);

    // Per-axis cell counts: ~4096 cells in total, at least 16 per axis.
    std::size_t per_axis = std::size_t(
        std::max(16.0, std::floor(std::pow(4096.0, 1.0 / double(k)))));
    if (k == 1) per_axis = 4096;

    std::vector<double> step(k);
    for (std::size_t j = 0; j < k; ++j)
        step[j] = (hi[j] - lo[j]) / double(per_axis);

    std::size_t cells = 1;
    for (std::size_t j = 0; j < k; ++j) cells *= per_axis;

    // Clipped cell masses max(f, 0) * volume at cell centers.
    double volume = 1.0;
    for (std::size_t j = 0; j < k; ++j) volume *= step[j];
    std::vector<double> cdf(cells);
    std::vector<double> center(k);
    double mass = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
        std::size_t rem = c;
        for (std::size_t j = k; j-- > 0;) {
            std::size_t idx = rem % per_axis;
            rem /= per_axis;
            center[j] = lo[j] + (double(idx) + 0.5) * step[j];
        }
        double f = est(center);
        if (f > 0.0) mass += f * volume;
        cdf[c] = mass;
    }
    if (!(mass > 0.5))
        throw DegenerateEstimate(
            "sample_estimate: clipped series mass " + std::to_string(mass) +
            " is too small to resample from");

    std::vector<std::vector<double>> out;
    out.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        double u = rng.uniform01() * mass;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t c = std::size_t(it - cdf.begin());
        if (c >= cells) c = cells - 1;
        std::vector<double> p(k);
        std::size_t rem = c;
        for (std::size_t j = k; j-- > 0;) {
            std::size_t idx = rem % per_axis;
            rem /= per_axis;
            p[j] = lo[j] + (double(idx) + rng.uniform01()) * step[j];
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<double> sample_estimate_1d(const DensityEstimate& est,
                                       std::size_t n, RngStream& rng) {
    if (est.num_axes() != 1)
        throw DimensionMismatch("sample_estimate_1d: estimate is not 1-d");
    auto rows = sample_estimate(est, n, rng);
    std::vector<double> out;
    out.reserve(n);
    for (auto& r : rows) out.push_back(r[0]);
    return out;
}

}  // namespace kseries
