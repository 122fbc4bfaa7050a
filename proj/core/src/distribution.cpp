#include "kseries/distribution.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "kseries/errors.hpp"
#include "kseries/quadrature.hpp"

namespace kseries {

namespace {

double normal_pdf_std(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf_std(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

}  // namespace

struct Distribution::Model {
    virtual ~Model() = default;
    virtual std::string family() const = 0;
    virtual std::vector<std::pair<std::string, double>> params() const = 0;
    virtual Support support() const = 0;
    virtual double pdf(double x) const = 0;
    virtual double cdf(double x) const = 0;
    virtual double raw_moment(int k) const = 0;
    virtual double sample(RngStream& rng) const = 0;
    virtual bool moment_determinate() const { return true; }
};

namespace {

using Params = std::vector<std::pair<std::string, double>>;

struct UniformModel final : Distribution::Model {
    double a, b;
    UniformModel(double a_, double b_) : a(a_), b(b_) {
        if (!(a < b)) throw Error("uniform: require a < b");
    }
    std::string family() const override { return "uniform"; }
    Params params() const override { return {{"a", a}, {"b", b}}; }
    Support support() const override { return {a, b}; }
    double pdf(double x) const override {
        return (x >= a && x <= b) ? 1.0 / (b - a) : 0.0;
    }
    double cdf(double x) const override {
        if (x <= a) return 0.0;
        if (x >= b) return 1.0;
        return (x - a) / (b - a);
    }
    double raw_moment(int k) const override {
        // (b^{k+1}-a^{k+1})/((k+1)(b-a)) written as a cancellation-free sum.
        double acc = 0.0, pa = 1.0;
        for (int j = k; j >= 0; --j) {
            acc += std::pow(b, j) * pa;
            pa *= a;
        }
        return acc / (k + 1);
    }
    double sample(RngStream& rng) const override { return rng.uniform(a, b); }
};

struct NormalModel final : Distribution::Model {
    double mu, var, sigma;
    NormalModel(double m, double v) : mu(m), var(v), sigma(std::sqrt(v)) {
        if (!(v > 0)) throw NonPositiveVariance("normal: variance must be > 0");
    }
    std::string family() const override { return "normal"; }
    Params params() const override { return {{"mean", mu}, {"variance", var}}; }
    Support support() const override { return {}; }
    double pdf(double x) const override {
        return normal_pdf_std((x - mu) / sigma) / sigma;
    }
    double cdf(double x) const override {
        return normal_cdf_std((x - mu) / sigma);
    }
    double raw_moment(int k) const override {
        if (k == 0) return 1.0;
        double m0 = 1.0, m1 = mu;
        for (int j = 2; j <= k; ++j) {
            double m2 = mu * m1 + (j - 1) * var * m0;
            m0 = m1;
            m1 = m2;
        }
        return m1;
    }
    double sample(RngStream& rng) const override {
        return rng.normal(mu, sigma);
    }
};

struct TruncNormalModel final : Distribution::Model {
    double mu, var, sigma, a, b, z;  // z = parent mass in [a, b]
    TruncNormalModel(double m, double v, double a_, double b_)
        : mu(m), var(v), sigma(std::sqrt(v)), a(a_), b(b_) {
        if (!(v > 0))
            throw NonPositiveVariance("truncated_normal: variance must be > 0");
        if (!(a < b)) throw Error("truncated_normal: require a < b");
        z = normal_cdf_std((b - mu) / sigma) - normal_cdf_std((a - mu) / sigma);
        if (!(z > 0))
            throw Error("truncated_normal: no mass on the truncation interval");
    }
    std::string family() const override { return "truncated_normal"; }
    Params params() const override {
        return {{"mean", mu}, {"variance", var}, {"a", a}, {"b", b}};
    }
    Support support() const override { return {a, b}; }
    double pdf(double x) const override {
        if (x < a || x > b) return 0.0;
        return normal_pdf_std((x - mu) / sigma) / (sigma * z);
    }
    double cdf(double x) const override {
        if (x <= a) return 0.0;
        if (x >= b) return 1.0;
        return (normal_cdf_std((x - mu) / sigma) -
                normal_cdf_std((a - mu) / sigma)) /
               z;
    }
    double raw_moment(int k) const override {
        // M_k = mu*M_{k-1} + (k-1)*var*M_{k-2} - var*(pdf(b) b^{k-1} -
        // pdf(a) a^{k-1}), from integration by parts of x^{k-1}(x-mu)f(x).
        if (k == 0) return 1.0;
        double fa = pdf(a), fb = pdf(b);
        double m0 = 1.0;
        double m1 = mu - var * (fb - fa);
        for (int j = 2; j <= k; ++j) {
            double boundary =
                fb * std::pow(b, j - 1) - fa * std::pow(a, j - 1);
            double m2 = mu * m1 + (j - 1) * var * m0 - var * boundary;
            m0 = m1;
            m1 = m2;
        }
        return m1;
    }
    double sample(RngStream& rng) const override {
        // Rejection from the parent; fine for the mass fractions in play.
        for (int i = 0; i < 100000; ++i) {
            double x = rng.normal(mu, sigma);
            if (x >= a && x <= b) return x;
        }
        throw Error("truncated_normal: rejection sampler starved");
    }
};

struct TruncExpModel final : Distribution::Model {
    double rate, a, b, z;  // z = e^{-rate a} - e^{-rate b}
    TruncExpModel(double r, double a_, double b_) : rate(r), a(a_), b(b_) {
        if (!(r > 0)) throw Error("truncated_exponential: rate must be > 0");
        if (!(a < b)) throw Error("truncated_exponential: require a < b");
        z = std::exp(-rate * a) - std::exp(-rate * b);
    }
    std::string family() const override { return "truncated_exponential"; }
    Params params() const override {
        return {{"rate", rate}, {"a", a}, {"b", b}};
    }
    Support support() const override { return {a, b}; }
    double pdf(double x) const override {
        if (x < a || x > b) return 0.0;
        return rate * std::exp(-rate * x) / z;
    }
    double cdf(double x) const override {
        if (x <= a) return 0.0;
        if (x >= b) return 1.0;
        return (std::exp(-rate * a) - std::exp(-rate * x)) / z;
    }
    double raw_moment(int k) const override {
        double m = 1.0;
        for (int j = 1; j <= k; ++j) {
            double boundary = std::pow(a, j) * std::exp(-rate * a) -
                              std::pow(b, j) * std::exp(-rate * b);
            m = boundary / z + (j / rate) * m;
        }
        return m;
    }
    double sample(RngStream& rng) const override {
        double u = rng.uniform01();
        return -std::log(std::exp(-rate * a) - u * z) / rate;
    }
};

struct TruncGammaModel final : Distribution::Model {
    double alpha, beta, a, b, z;  // shape, rate; z in regularized P units
    TruncGammaModel(double al, double be, double a_, double b_)
        : alpha(al), beta(be), a(a_), b(b_) {
        if (!(al > 0) || !(be > 0))
            throw Error("truncated_gamma: shape and rate must be > 0");
        if (!(a >= 0) || !(a < b))
            throw Error("truncated_gamma: require 0 <= a < b");
        z = boost::math::gamma_p(alpha, beta * b) -
            boost::math::gamma_p(alpha, beta * a);
        if (!(z > 0))
            throw Error("truncated_gamma: no mass on the truncation interval");
    }
    std::string family() const override { return "truncated_gamma"; }
    Params params() const override {
        return {{"alpha", alpha}, {"beta", beta}, {"a", a}, {"b", b}};
    }
    Support support() const override { return {a, b}; }
    double pdf(double x) const override {
        if (x < a || x > b || x < 0) return 0.0;
        double log_pdf = alpha * std::log(beta) + (alpha - 1) * std::log(x) -
                         beta * x - std::lgamma(alpha);
        return std::exp(log_pdf) / z;
    }
    double cdf(double x) const override {
        if (x <= a) return 0.0;
        if (x >= b) return 1.0;
        return (boost::math::gamma_p(alpha, beta * x) -
                boost::math::gamma_p(alpha, beta * a)) /
               z;
    }
    double raw_moment(int k) const override {
        if (k == 0) return 1.0;
        double zk = boost::math::gamma_p(alpha + k, beta * b) -
                    boost::math::gamma_p(alpha + k, beta * a);
        double ratio =
            std::exp(std::lgamma(alpha + k) - std::lgamma(alpha)) /
            std::pow(beta, k);
        return ratio * zk / z;
    }
    double sample(RngStream& rng) const override {
        for (int i = 0; i < 100000; ++i) {
            double x = rng.gamma(alpha) / beta;
            if (x >= a && x <= b) return x;
        }
        throw Error("truncated_gamma: rejection sampler starved");
    }
};

struct ContinuousBernoulliModel final : Distribution::Model {
    double pi, c;  // c = log(pi / (1 - pi)); c == 0 means uniform
    explicit ContinuousBernoulliModel(double p) : pi(p) {
        if (!(p > 0 && p < 1))
            throw Error("continuous_bernoulli: require 0 < pi < 1");
        c = (std::abs(p - 0.5) < 1e-12) ? 0.0 : std::log(p / (1.0 - p));
    }
    std::string family() const override { return "continuous_bernoulli"; }
    Params params() const override { return {{"pi", pi}}; }
    Support support() const override { return {0.0, 1.0}; }
    double pdf(double x) const override {
        if (x < 0.0 || x > 1.0) return 0.0;
        if (c == 0.0) return 1.0;
        return c / std::expm1(c) * std::exp(c * x);
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        if (c == 0.0) return x;
        return std::expm1(c * x) / std::expm1(c);
    }
    // I_k(c) = int_0^1 x^k e^{cx} dx for c < 0, via the regularized lower
    // incomplete gamma: I_k = k! P(k+1, -c) / (-c)^{k+1}.
    static long double ik_negative(int k, long double c) {
        long double a = -c;
        return std::exp(std::lgamma((long double)(k + 1)) -
                        (k + 1) * std::log(a)) *
               boost::math::gamma_p((long double)(k + 1), a);
    }
    // I_k(c) for small |c| by the absolutely convergent power series
    // sum_j c^j / (j! (k + j + 1)); no cancellation for |c| <= ~1.5.
    static long double ik_series(int k, long double c) {
        long double term = 1.0L, sum = 1.0L / (k + 1);
        for (int j = 1; j < 200; ++j) {
            term *= c / j;
            long double t = term / (k + j + 1);
            sum += t;
            if (std::fabs(t) < 1e-25L * std::fabs(sum)) break;
        }
        return sum;
    }
    double raw_moment(int k) const override {
        if (c == 0.0) return 1.0 / (k + 1);
        // m_k = K I_k with K = c/(e^c - 1).  The naive forward recurrence
        // I_k = e^c/c - (k/c) I_{k-1} amplifies error by k/|c| per step, so
        // use a stable closed form for each sign of c instead.
        long double cl = c, ik;
        if (std::fabs(cl) <= 1.5L) {
            ik = ik_series(k, cl);
        } else if (cl < 0.0L) {
            ik = ik_negative(k, cl);
        } else {
            // Reflect x -> 1 - y: I_k(c) = e^c sum_i C(k,i) (-1)^i I_i(-c).
            // The I_i(-c) decay geometrically (~ i!/c^{i+1}), so the
            // alternating sum loses at most a few digits in long double.
            long double sum = 0.0L, binom = 1.0L;
            for (int i = 0; i <= k; ++i) {
                sum += (i % 2 ? -binom : binom) * ik_negative(i, -cl);
                binom = binom * (k - i) / (i + 1);
            }
            ik = std::exp(cl) * sum;
        }
        return (double)(cl / std::expm1(cl) * ik);
    }
    double sample(RngStream& rng) const override {
        double u = rng.uniform01();
        if (c == 0.0) return u;
        return std::log1p(u * std::expm1(c)) / c;
    }
};

struct BetaModel final : Distribution::Model {
    double alpha, beta_p, log_norm;
    BetaModel(double al, double be) : alpha(al), beta_p(be) {
        if (!(al > 0) || !(be > 0))
            throw Error("beta: shape parameters must be > 0");
        log_norm = std::lgamma(al + be) - std::lgamma(al) - std::lgamma(be);
    }
    std::string family() const override { return "beta"; }
    Params params() const override {
        return {{"alpha", alpha}, {"beta", beta_p}};
    }
    Support support() const override { return {0.0, 1.0}; }
    double pdf(double x) const override {
        if (x < 0.0 || x > 1.0) return 0.0;
        if (x == 0.0)
            return alpha > 1 ? 0.0
                             : (alpha == 1 ? std::exp(log_norm)
                                           : std::numeric_limits<double>::infinity());
        if (x == 1.0)
            return beta_p > 1 ? 0.0
                              : (beta_p == 1 ? std::exp(log_norm)
                                             : std::numeric_limits<double>::infinity());
        return std::exp(log_norm + (alpha - 1) * std::log(x) +
                        (beta_p - 1) * std::log1p(-x));
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return boost::math::ibeta(alpha, beta_p, x);
    }
    double raw_moment(int k) const override {
        double m = 1.0;
        for (int r = 0; r < k; ++r) m *= (alpha + r) / (alpha + beta_p + r);
        return m;
    }
    double sample(RngStream& rng) const override {
        return rng.beta(alpha, beta_p);
    }
};

struct NumericPdfModel final : Distribution::Model {
    std::function<double(double)> fn;
    double a, b;
    std::vector<double> cdf_grid;  // 4097 points, cdf at a + i*(b-a)/4096

    NumericPdfModel(std::function<double(double)> f, double a_, double b_)
        : fn(std::move(f)), a(a_), b(b_) {
        if (!(a < b)) throw Error("numeric_pdf: require a < b");
        double total = integrate(fn, a, b, 1e-10);
        if (std::abs(total - 1.0) > 1e-8)
            throw Error("numeric_pdf: density does not integrate to 1 (got " +
                        std::to_string(total) + ")");
        constexpr int kGrid = 4096;
        cdf_grid.resize(kGrid + 1);
        cdf_grid[0] = 0.0;
        double h = (b - a) / kGrid;
        for (int i = 1; i <= kGrid; ++i) {
            double x0 = a + (i - 1) * h, x1 = a + i * h;
            double f0 = fn(x0), f1 = fn(x1);
            if (f0 < 0 || f1 < 0)
                throw Error("numeric_pdf: density is negative on the support");
            cdf_grid[i] = cdf_grid[i - 1] + gauss_legendre(fn, x0, x1, 5);
        }
        double norm = cdf_grid.back();
        for (double& v : cdf_grid) v /= norm;
    }
    std::string family() const override { return "numeric_pdf"; }
    Params params() const override { return {}; }
    Support support() const override { return {a, b}; }
    double pdf(double x) const override {
        return (x >= a && x <= b) ? fn(x) : 0.0;
    }
    double cdf(double x) const override {
        if (x <= a) return 0.0;
        if (x >= b) return 1.0;
        double pos = (x - a) / (b - a) * (cdf_grid.size() - 1);
        auto i = static_cast<std::size_t>(pos);
        double frac = pos - double(i);
        return cdf_grid[i] + frac * (cdf_grid[i + 1] - cdf_grid[i]);
    }
    double raw_moment(int k) const override {
        return integrate([&](double x) { return std::pow(x, k) * fn(x); }, a,
                         b, 1e-10);
    }
    double sample(RngStream& rng) const override {
        double u = rng.uniform01();
        auto it = std::lower_bound(cdf_grid.begin(), cdf_grid.end(), u);
        auto i = std::size_t(std::max<std::ptrdiff_t>(
            1, std::distance(cdf_grid.begin(), it)));
        double c0 = cdf_grid[i - 1], c1 = cdf_grid[i];
        double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
        double h = (b - a) / (cdf_grid.size() - 1);
        return a + (double(i - 1) + frac) * h;
    }
};

}  // namespace

Distribution Distribution::uniform(double a, double b) {
    return Distribution(std::make_shared<UniformModel>(a, b));
}
Distribution Distribution::normal(double mean, double variance) {
    return Distribution(std::make_shared<NormalModel>(mean, variance));
}
Distribution Distribution::truncated_normal(double mean, double variance,
                                            double a, double b) {
    return Distribution(
        std::make_shared<TruncNormalModel>(mean, variance, a, b));
}
Distribution Distribution::truncated_exponential(double rate, double a,
                                                 double b) {
    return Distribution(std::make_shared<TruncExpModel>(rate, a, b));
}
Distribution Distribution::truncated_gamma(double alpha, double beta, double a,
                                           double b) {
    return Distribution(std::make_shared<TruncGammaModel>(alpha, beta, a, b));
}
Distribution Distribution::continuous_bernoulli(double pi) {
    return Distribution(std::make_shared<ContinuousBernoulliModel>(pi));
}
Distribution Distribution::beta(double alpha, double beta) {
    return Distribution(std::make_shared<BetaModel>(alpha, beta));
}
Distribution Distribution::numeric_pdf(std::function<double(double)> pdf,
                                       double a, double b) {
    return Distribution(
        std::make_shared<NumericPdfModel>(std::move(pdf), a, b));
}

std::string Distribution::family() const { return model_->family(); }
Support Distribution::support() const { return model_->support(); }
double Distribution::pdf(double x) const { return model_->pdf(x); }
double Distribution::cdf(double x) const { return model_->cdf(x); }
double Distribution::raw_moment(int k) const {
    if (k < 0) throw Error("raw_moment: negative order");
    return model_->raw_moment(k);
}
double Distribution::sample(RngStream& rng) const {
    return model_->sample(rng);
}
bool Distribution::moment_determinate() const {
    return model_->moment_determinate();
}
std::vector<std::pair<std::string, double>> Distribution::params() const {
    return model_->params();
}

}  // namespace kseries
