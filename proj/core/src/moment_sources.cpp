#include "kseries/moment_sources.hpp"

#include <cmath>
#include <numeric>

#include "kseries/errors.hpp"

namespace kseries {

MomentTensor sample_moments(const std::vector<std::vector<double>>& data,
                            const std::vector<int>& degrees) {
    if (data.size() < 2)
        throw EmptyData("sample_moments: need at least 2 observations");
    const std::size_t k = degrees.size();

    std::size_t grid = 1;
    for (int d : degrees) grid *= std::size_t(d) + 1;

    // Pairwise tree reduction, always splitting ranges at the midpoint.
    // Concatenating a dataset with itself then splits into two bit-identical
    // subtrees, so the total is exactly doubled and the mean (sum/count,
    // with count also doubled) is bit-identical — duplication invariance
    // holds exactly, not just approximately.  Leaves use Kahan-compensated
    // accumulation.
    struct Reducer {
        const std::vector<std::vector<double>>& data;
        const std::vector<int>& degrees;
        std::size_t k, grid;
        std::vector<std::vector<double>> powers;

        std::vector<double> run(std::size_t lo, std::size_t hi) {
            if (hi - lo <= 1) return leaf(lo, hi);
            std::size_t mid = lo + (hi - lo) / 2;
            std::vector<double> left = run(lo, mid), right = run(mid, hi);
            for (std::size_t g = 0; g < grid; ++g) left[g] += right[g];
            return left;
        }
        std::vector<double> leaf(std::size_t lo, std::size_t hi) {
            std::vector<double> sum(grid, 0.0), comp(grid, 0.0);
            for (std::size_t r = lo; r < hi; ++r) {
                const auto& row = data[r];
                if (row.size() != k)
                    throw DimensionMismatch(
                        "sample_moments: row arity mismatch");
                for (std::size_t j = 0; j < k; ++j) {
                    if (!std::isfinite(row[j]))
                        throw EmptyData(
                            "sample_moments: non-finite observation");
                    auto& p = powers[j];
                    p.assign(std::size_t(degrees[j]) + 1, 1.0);
                    for (int d = 1; d <= degrees[j]; ++d)
                        p[std::size_t(d)] = p[std::size_t(d) - 1] * row[j];
                }
                std::vector<int> index(k, 0);
                std::size_t flat = 0;
                do {
                    double prod = 1.0;
                    for (std::size_t j = 0; j < k; ++j)
                        prod *= powers[j][std::size_t(index[j])];
                    double y = prod - comp[flat];
                    double t = sum[flat] + y;
                    comp[flat] = (t - sum[flat]) - y;
                    sum[flat] = t;
                    ++flat;
                } while (MomentTensor::next_index(index, degrees));
            }
            return sum;
        }
    };
    Reducer red{data, degrees, k, grid,
                std::vector<std::vector<double>>(k)};
    std::vector<double> sum = red.run(0, data.size());

    const double inv_n = 1.0 / double(data.size());
    for (double& v : sum) v *= inv_n;
    return MomentTensor(degrees, std::move(sum));
}

std::vector<Rational> irwin_hall_moment_rationals(std::int64_t t) {
    if (t < 1) throw Error("irwin_hall_moments: t must be >= 1");
    auto reduce = [](std::int64_t n, std::int64_t d) {
        std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        return Rational{n / g, d / g};
    };
    const std::int64_t t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    return {
        Rational{1, 1},
        reduce(t, 2),
        reduce(t * (3 * t + 1), 12),
        reduce(t2 * (t + 1), 8),
        reduce(t * (15 * t3 + 30 * t2 + 5 * t - 2), 240),
        reduce(t2 * (3 * t3 + 10 * t2 + 5 * t - 2), 96),
        reduce(t * (63 * t5 + 315 * t4 + 315 * t3 - 91 * t2 - 42 * t + 16),
               4032),
    };
}

MomentFunctionOfIteration irwin_hall_moments() {
    MomentFunctionOfIteration mf;
    mf.degrees = {6};
    mf.at = [](std::int64_t t) {
        auto rats = irwin_hall_moment_rationals(t);
        std::vector<double> values;
        values.reserve(rats.size());
        for (const auto& r : rats) values.push_back(r.value());
        return MomentTensor({6}, std::move(values));
    };
    return mf;
}

DensityEstimate symbolic_estimate(
    const MomentFunctionOfIteration& mf,
    const std::function<std::vector<Distribution>(std::int64_t)>&
        reference_factory,
    std::int64_t t) {
    MomentTensor moments = mf.at(t);
    return fit_multivariate(moments, reference_factory(t));
}

}  // namespace kseries
