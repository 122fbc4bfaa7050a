#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "kseries/distribution.hpp"
#include "kseries/errors.hpp"
#include "kseries/gof.hpp"
#include "kseries/quadrature.hpp"
#include "kseries/rng.hpp"
#include "oracles.hpp"

using namespace kseries;

namespace {

// Quadrature oracle for E[X^k], truncating unbounded supports at mu +/- 12
// sigma.
double moment_oracle(const Distribution& d, int k) {
    Support s = d.support();
    double lo = s.lower, hi = s.upper;
    if (!s.bounded()) {
        double mu = d.mean(), sd = std::sqrt(d.variance());
        lo = std::isfinite(lo) ? lo : mu - 12 * sd;
        hi = std::isfinite(hi) ? hi : mu + 12 * sd;
    }
    return oracle::simpson(
        [&](double x) { return std::pow(x, k) * d.pdf(x); }, lo, hi, 8192);
}

std::vector<Distribution> all_families() {
    return {
        Distribution::uniform(0.0, 4.0),
        Distribution::normal(0.0, 1.0),
        Distribution::normal(3.0, 4.0),
        Distribution::truncated_normal(0.71721, 0.61614, -2.0, 2.0),
        Distribution::truncated_exponential(2.0 / 3.0, 0.0, 4.0),
        Distribution::truncated_gamma(2.0, 0.5, 0.0, 5.0),
        Distribution::continuous_bernoulli(0.3),
        Distribution::beta(2.0, 5.0),
    };
}

}  // namespace

TEST_CASE("pdf basics") {
    auto u = Distribution::uniform(0.0, 4.0);
    CHECK(u.pdf(1.0) == doctest::Approx(0.25));
    CHECK(u.pdf(5.0) == 0.0);

    auto tn = Distribution::truncated_normal(0.71721, 0.61614, -2.0, 2.0);
    double sigma = std::sqrt(0.61614);
    auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi); };
    double z = oracle::simpson(
        [&](double x) { return phi((x - 0.71721) / sigma) / sigma; }, -2.0,
        2.0, 8192);
    CHECK(tn.pdf(0.0) ==
          doctest::Approx(phi((0.0 - 0.71721) / sigma) / sigma / z)
              .epsilon(1e-9));
}

TEST_CASE("cdf basics") {
    CHECK(Distribution::uniform(0.0, 1.0).cdf(0.3) == doctest::Approx(0.3));

    // pi = 1/2 degenerates to Uniform(0,1)
    auto cb = Distribution::continuous_bernoulli(0.5);
    for (double x : {0.1, 0.35, 0.5, 0.77, 0.99})
        CHECK(cb.cdf(x) == doctest::Approx(x).epsilon(1e-12));
}

TEST_CASE("closed-form moments") {
    CHECK(Distribution::uniform(0.0, 3.0).raw_moment(1) ==
          doctest::Approx(1.5));
    CHECK(Distribution::normal(0.0, 1.0).raw_moment(4) ==
          doctest::Approx(3.0));
    auto u = Distribution::uniform(-1.0, 2.0);
    for (int k = 1; k <= 8; ++k) {
        double exact = (std::pow(2.0, k + 1) - std::pow(-1.0, k + 1)) /
                       ((k + 1) * 3.0);
        CHECK(u.raw_moment(k) == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("raw_moment vs quadrature oracle, every family, k <= 12") {
    for (const auto& d : all_families()) {
        for (int k = 0; k <= 12; ++k) {
            double lib = d.raw_moment(k);
            double ref = moment_oracle(d, k);
            double scale = std::max(1.0, std::fabs(ref));
            CHECK_MESSAGE(std::fabs(lib - ref) / scale < 1e-8,
                          d.family(), " k=", k, " lib=", lib, " ref=", ref);
        }
    }
}

TEST_CASE("sample mean matches first moment (pinned seed)") {
    auto d = Distribution::truncated_exponential(2.0 / 3.0, 0.0, 4.0);
    RngStream rng(20240817, 0);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += d.sample(rng);
    double se = std::sqrt(d.variance() / n);
    CHECK(std::fabs(sum / n - d.raw_moment(1)) < 4 * se);
}

TEST_CASE("cdf(sample) uniformity via KS (pinned seed)") {
    for (const auto& d : all_families()) {
        RngStream rng(555, 7);
        std::vector<double> u;
        u.reserve(10000);
        for (int i = 0; i < 10000; ++i) u.push_back(d.cdf(d.sample(rng)));
        RngStream rng2(556, 7);
        std::vector<double> v;
        v.reserve(10000);
        for (int i = 0; i < 10000; ++i) v.push_back(rng2.uniform01());
        auto rep = ks_two_sample(u, v, 0.01);
        CHECK_MESSAGE(!rep.rejected, d.family(), " D=", rep.statistic);
    }
}

TEST_CASE("numeric pdf fallback") {
    auto tri = Distribution::numeric_pdf(
        [](double x) { return x <= 1.0 ? x : 2.0 - x; }, 0.0, 2.0);
    CHECK(tri.raw_moment(1) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(tri.raw_moment(2) == doctest::Approx(7.0 / 6.0).epsilon(1e-8));
    // not normalized -> refused
    CHECK_THROWS((void)Distribution::numeric_pdf(
        [](double) { return 2.0; }, 0.0, 1.0));
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS((void)Distribution::normal(0.0, 0.0),
                    NonPositiveVariance);
    CHECK_THROWS((void)Distribution::uniform(1.0, 1.0));
    CHECK_THROWS((void)Distribution::continuous_bernoulli(1.0));
    CHECK_THROWS((void)Distribution::truncated_gamma(2.0, 0.5, 3.0, 1.0));
}
