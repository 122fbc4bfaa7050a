#include <doctest.h>

#include <cmath>
#include <vector>

#include "kseries/errors.hpp"
#include "kseries/estimator.hpp"
#include "kseries/moment_sources.hpp"
#include "kseries/quadrature.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace kseries;

namespace {

std::vector<double> exact_moments(const Distribution& d, int n) {
    std::vector<double> m;
    for (int k = 0; k <= n; ++k) m.push_back(d.raw_moment(k));
    return m;
}

std::uint64_t g_state = 0x1234abcd;

double rnd01() {
    g_state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = g_state;
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return double(z >> 11) * 0x1.0p-53;
}

}  // namespace

TEST_CASE("worked truncated-exponential fit") {
    auto est = fit(fixtures::trunc_exp_m2(), Distribution::uniform(0, 1));
    REQUIRE(est.alpha().size() == 3);
    CHECK(est.alpha()[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(est.alpha()[1] == doctest::Approx(-0.283976).epsilon(1e-6));
    CHECK(est.alpha()[2] == doctest::Approx(0.036407).epsilon(1e-6));

    // hand evaluation of the expansion at 0
    CHECK(est(0.0) == doctest::Approx(1.573).epsilon(1e-3));
    CHECK(est(1.5) == 0.0);  // outside support
}

TEST_CASE("fitting a reference's own moments recovers it") {
    for (const auto& d :
         {Distribution::uniform(0, 4),
          Distribution::truncated_exponential(2.0 / 3.0, 0, 4),
          Distribution::truncated_normal(0.5, 1.0, -2, 3),
          Distribution::beta(2, 5)}) {
        auto est = fit(MomentVector(exact_moments(d, 6)), d);
        CHECK(est.alpha()[0] == doctest::Approx(1.0).epsilon(1e-9));
        for (std::size_t i = 1; i < est.alpha().size(); ++i)
            CHECK(std::fabs(est.alpha()[i]) < 1e-9);
        // eval == reference pdf
        Support s = d.support();
        for (int g = 0; g <= 10; ++g) {
            double x = s.lower + (s.upper - s.lower) * g / 10.0;
            CHECK(est(x) == doctest::Approx(d.pdf(x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("irwin-hall(3) estimate vs exact piecewise pdf") {
    auto m = irwin_hall_moments().at(3);
    auto est = fit(MomentVector(m.values()), Distribution::uniform(0, 3));
    double worst = 0.0;
    for (int g = 0; g <= 1000; ++g) {
        double x = 3.0 * g / 1000.0;
        worst = std::max(worst,
                         std::fabs(est(x) - oracle::irwin_hall_pdf(3, x)));
    }
    // The degree-6 L2 projection has sup error exactly 0.0210334 on this
    // grid (peaks at the support endpoints); the fit must hit it to ~1e-6.
    CHECK(worst == doctest::Approx(0.0210334).epsilon(1e-4));
    CHECK(worst < 0.022);

    // Exact expansion coefficients of the projection.
    CHECK(est.alpha()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(est.alpha()[1]) < 1e-9);
    CHECK(std::fabs(est.alpha()[3]) < 1e-9);
    CHECK(std::fabs(est.alpha()[5]) < 1e-9);
    CHECK(est.alpha()[2] ==
          doctest::Approx(-std::sqrt(5.0) / 3.0).epsilon(1e-9));
    CHECK(est.alpha()[4] == doctest::Approx(8.0 / 27.0).epsilon(1e-9));
    CHECK(est.alpha()[6] == doctest::Approx(-0.07913418437).epsilon(1e-8));
}

TEST_CASE("bivariate fit reproduces the listed alphas") {
    auto est = fit_multivariate(
        fixtures::bivariate_tensor(),
        {fixtures::bivariate_ref_x(), fixtures::bivariate_ref_y()});
    auto a = [&](int i, int j) {
        // alphas stored in tensor order, y fastest
        return est.alpha()[std::size_t(i * 3 + j)];
    };
    CHECK(a(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a(0, 1) == doctest::Approx(0.00415).epsilon(1e-4).scale(1.0));
    CHECK(a(0, 2) == doctest::Approx(0.00924).epsilon(1e-4).scale(1.0));
    CHECK(a(1, 0) == doctest::Approx(0.12224).epsilon(1e-4).scale(1.0));
    CHECK(a(1, 1) == doctest::Approx(0.00051).epsilon(1e-4).scale(1.0));
    CHECK(a(1, 2) == doctest::Approx(0.00113).epsilon(1e-4).scale(1.0));
    CHECK(a(2, 0) == doctest::Approx(0.23568).epsilon(1e-4).scale(1.0));
    CHECK(a(2, 1) == doctest::Approx(0.00098).epsilon(1e-4).scale(1.0));
    CHECK(a(2, 2) == doctest::Approx(0.00218).epsilon(1e-4).scale(1.0));
}

TEST_CASE("k=1 tensor fit equals univariate fit") {
    auto m = fixtures::trunc_exp_m2();
    auto ref = Distribution::uniform(0, 1);
    auto uni = fit(m, ref);
    auto multi = fit_multivariate(MomentTensor::from_vector(m), {ref});
    REQUIRE(uni.alpha().size() == multi.alpha().size());
    for (std::size_t i = 0; i < uni.alpha().size(); ++i)
        CHECK(uni.alpha()[i] == doctest::Approx(multi.alpha()[i]).epsilon(1e-12));
}

TEST_CASE("independent product target factorizes") {
    auto dx = Distribution::truncated_exponential(1.0, 0, 1);
    auto dy = Distribution::beta(2, 3);
    auto mx = exact_moments(dx, 3), my = exact_moments(dy, 3);
    std::vector<double> vals;
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j)
            vals.push_back(mx[std::size_t(i)] * my[std::size_t(j)]);
    auto rx = Distribution::uniform(0, 1), ry = Distribution::uniform(0, 1);
    auto joint = fit_multivariate(MomentTensor({3, 3}, vals), {rx, ry});
    auto ex = fit(MomentVector(mx), rx);
    auto ey = fit(MomentVector(my), ry);
    for (int gx = 1; gx < 10; ++gx)
        for (int gy = 1; gy < 10; ++gy) {
            double x = gx / 10.0, y = gy / 10.0;
            CHECK(joint({x, y}) ==
                  doctest::Approx(ex(x) * ey(y)).epsilon(1e-8).scale(1.0));
        }
}

TEST_CASE("moment_of_estimate reproduces inputs") {
    auto est = fit(fixtures::trunc_exp_m2(), Distribution::uniform(0, 1));
    CHECK(est.moment_of_estimate({0}) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(est.moment_of_estimate({1}) ==
          doctest::Approx(0.418023).epsilon(1e-6));
    CHECK_THROWS_AS((void)est.moment_of_estimate({7}), DegreeMismatch);

    auto biv = fit_multivariate(
        fixtures::bivariate_tensor(),
        {fixtures::bivariate_ref_x(), fixtures::bivariate_ref_y()});
    CHECK(biv.moment_of_estimate({2, 2}) ==
          doctest::Approx(5.61757).epsilon(1e-4).scale(1.0));
}

TEST_CASE("gram-charlier mode") {
    for (auto var : {1.0, 4.0}) {
        auto d = Distribution::normal(var == 1.0 ? 0.0 : 3.0, var);
        auto est = fit_gram_charlier(MomentVector(exact_moments(d, 6)));
        CHECK(est.alpha()[0] == doctest::Approx(1.0).epsilon(1e-9));
        for (std::size_t i = 1; i < est.alpha().size(); ++i)
            CHECK(std::fabs(est.alpha()[i]) < 1e-9);
        CHECK(est.warning().has_value());
    }

    // vs the classical cumulant-based GC-A oracle
    auto te = Distribution::truncated_exponential(2.0 / 3.0, 0, 4);
    auto m = exact_moments(te, 4);
    auto est = fit_gram_charlier(MomentVector(m));
    auto expected = oracle::gram_charlier_coeffs(m);
    REQUIRE(est.alpha().size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(est.alpha()[i] ==
              doctest::Approx(expected[i]).epsilon(1e-8).scale(1.0));

    CHECK_THROWS_AS((void)fit_gram_charlier(MomentVector({1.0, 0.5})),
                    InsufficientMoments);
}

TEST_CASE("gc equivalence on random valid moment vectors") {
    std::uint64_t state = 2024;
    for (int trial = 0; trial < 20; ++trial) {
        auto mix = oracle::AtomMixture::random(state, 10, -1.0, 2.0);
        auto m = mix.raw_moments(6);
        auto est = fit_gram_charlier(MomentVector(m));
        auto expected = oracle::gram_charlier_coeffs(m);
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(est.alpha()[i] ==
                  doctest::Approx(expected[i]).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("method of moments basics") {
    auto c = fit_method_of_moments(MomentVector({1.0}), 0.0, 1.0);
    CHECK(c.degree() == 0);
    CHECK(c(0.3) == doctest::Approx(1.0).epsilon(1e-12));

    auto p = fit_method_of_moments(fixtures::trunc_exp_m2(), 0.0, 1.0);
    auto est = fit(fixtures::trunc_exp_m2(), Distribution::uniform(0, 1));
    for (int g = 0; g <= 100; ++g) {
        double x = g / 100.0;
        CHECK(p(x) == doctest::Approx(est(x)).epsilon(1e-8).scale(1.0));
    }

    auto m3 = irwin_hall_moments().at(3);
    auto p3 = fit_method_of_moments(MomentVector(m3.values()), 0.0, 3.0);
    auto e3 = fit(MomentVector(m3.values()), Distribution::uniform(0, 3));
    for (int g = 0; g <= 100; ++g) {
        double x = 3.0 * g / 100.0;
        CHECK(p3(x) == doctest::Approx(e3(x)).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("mm equivalence on random intervals, n <= 10") {
    // Intervals are kept at unit scale (width >= 2, endpoints in [-2, 2.5]):
    // for narrower or farther-out intervals the two formulations agree only
    // to the conditioning of the double-rounded coefficient matrices, which
    // is coarser than the tolerance at n = 10.
    for (int trial = 0; trial < 10; ++trial) {
        double a = -2.0 + 1.5 * rnd01();
        double b = a + 2.0 + rnd01();
        int n = 2 + int(rnd01() * 9);  // 2..10
        auto mix = oracle::AtomMixture::random(g_state, 12, a + 0.1 * (b - a),
                                               b - 0.1 * (b - a));
        auto m = MomentVector(mix.raw_moments(n));
        auto p = fit_method_of_moments(m, a, b);
        auto est = fit(m, Distribution::uniform(a, b));
        for (int g = 0; g <= 100; ++g) {
            // a + (b-a) can land one ulp past b, where est is rightly zero.
            double x = g == 100 ? b : a + (b - a) * g / 100.0;
            CHECK_MESSAGE(std::fabs(p(x) - est(x)) < 1e-8 * std::max(1.0, std::fabs(est(x))),
                          "n=", n, " a=", a, " b=", b, " x=", x);
        }
    }
}

TEST_CASE("cholesky identity of the power-integral matrix") {
    // || phi * M_ab * A^T - A^{-1} ||_max < 1e-8, phi = 1/(b-a).
    // The double-rounded entries of A bound what any arithmetic can achieve,
    // so the residual is formed in long double and the intervals are kept at
    // unit scale (width >= 2, endpoints within ~2.5); outside that range the
    // basis coefficients grow like (2/(b-a))^n and max(|a|,|b|)^n and the
    // rounding of A alone exceeds the tolerance.
    for (auto [a, b] :
         {std::pair{0.0, 1.0}, {-1.0, 1.0}, {-1.5, 2.0}}) {
        for (int n : {4, 10}) {
            auto basis = OrthonormalBasis::gram_schmidt(
                Distribution::uniform(a, b), n);
            const Eigen::MatrixXd& A = basis.coefficient_matrix();
            const int N = n + 1;
            // M(i,j)/(b-a) = (1/p) * sum_{l<p} b^l a^{p-1-l}, p = i+j+1
            // (cancellation-free power-integral entries).
            std::vector<std::vector<long double>> pim(
                std::size_t(N),
                std::vector<long double>(std::size_t(N), 0.0L));
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) {
                    int p = i + j + 1;
                    long double s = 0.0L;
                    for (int l = 0; l < p; ++l)
                        s += std::pow((long double)b, l) *
                             std::pow((long double)a, p - 1 - l);
                    pim[std::size_t(i)][std::size_t(j)] = s / p;
                }
            // A^{-1} by forward substitution in long double.
            std::vector<std::vector<long double>> Ai(
                std::size_t(N),
                std::vector<long double>(std::size_t(N), 0.0L));
            for (int c = 0; c < N; ++c)
                for (int i = c; i < N; ++i) {
                    long double s = i == c ? 1.0L : 0.0L;
                    for (int j = 0; j < i; ++j)
                        s -= (long double)A(i, j) * Ai[std::size_t(j)][std::size_t(c)];
                    Ai[std::size_t(i)][std::size_t(c)] = s / (long double)A(i, i);
                }
            long double worst = 0.0L;
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) {
                    long double s = 0.0L;
                    for (int l = 0; l < N; ++l)
                        s += pim[std::size_t(i)][std::size_t(l)] *
                             (long double)A(j, l);
                    worst = std::max(
                        worst,
                        std::fabs(s - Ai[std::size_t(i)][std::size_t(j)]));
                }
            CHECK_MESSAGE(double(worst) < 1e-8,
                          "a=", a, " b=", b, " n=", n);
        }
    }
}

TEST_CASE("empirical L1 convergence for the truncated exponential") {
    auto target = Distribution::truncated_exponential(2.0 / 3.0, 0, 4);
    auto ref = Distribution::uniform(0, 4);
    auto l1 = [&](int n) {
        auto est = fit(MomentVector(exact_moments(target, n)), ref);
        return integrate(
            [&](double x) { return std::fabs(est(x) - target.pdf(x)); }, 0.0,
            4.0, 1e-8);
    };
    double e2 = l1(2), e6 = l1(6);
    CHECK(e6 < e2);
    CHECK(e6 < 0.05);
}

TEST_CASE("eval_grid and integral") {
    auto est = fit(fixtures::trunc_exp_m2(), Distribution::uniform(0, 1));
    auto vals = est.eval_grid({{0.0}, {0.25}, {0.5}, {2.0}});
    CHECK(vals.size() == 4);
    CHECK(vals[0] == doctest::Approx(est(0.0)));
    CHECK(vals[3] == 0.0);
    CHECK(est.integral() == doctest::Approx(1.0).epsilon(1e-8));
}
