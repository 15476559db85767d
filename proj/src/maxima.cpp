#include "gritquit/maxima.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gritquit/numerics.hpp"

namespace gq {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double normal_pdf(double x) { return std::exp(-0.5 * x * x - kLogSqrt2Pi); }

McEstimate indicator_stats(const std::vector<unsigned char>& hits) {
    const double n = static_cast<double>(hits.size());
    long count = 0;
    for (unsigned char h : hits) count += h;
    const double p = static_cast<double>(count) / n;
    return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / n)};
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double log_normal_cdf(double x) {
    if (x > -30.0) return std::log(normal_cdf(x));
    // Mills-ratio expansion: Phi(x) = phi(x)/(-x) (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...).
    const double x2 = x * x;
    const double series = -1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return -0.5 * x2 - kLogSqrt2Pi - std::log(-x) + std::log1p(series);
}

double running_max_cdf(const MaxLaw& law, double level) {
    if (!(law.sigma > 0.0) || !(law.t > 0.0))
        throw std::invalid_argument("running max law needs sigma > 0 and t > 0");
    if (level < 0.0) return 0.0;
    const double s = law.sigma * std::sqrt(law.t);
    const double first = normal_cdf((level - law.mu * law.t) / s);
    // exp(2 mu a / sigma^2) Phi(-(a + mu t)/s) in log space: the factors overflow/underflow
    // separately long before their product leaves double range.
    const double log_second = 2.0 * law.mu * level / (law.sigma * law.sigma) +
                              log_normal_cdf(-(level + law.mu * law.t) / s);
    return first - std::exp(log_second);
}

double running_max_pdf(const MaxLaw& law, double level) {
    if (!(law.sigma > 0.0) || !(law.t > 0.0))
        throw std::invalid_argument("running max law needs sigma > 0 and t > 0");
    if (level < 0.0) return 0.0;
    const double s = law.sigma * std::sqrt(law.t);
    const double theta = 2.0 * law.mu / (law.sigma * law.sigma);
    const double first = (2.0 / s) * normal_pdf((level - law.mu * law.t) / s);
    const double log_tail = theta * level + log_normal_cdf(-(level + law.mu * law.t) / s);
    return first - theta * std::exp(log_tail);
}

double running_max_joint_density(const MaxLaw& law, double a, double b) {
    if (!(law.sigma > 0.0) || !(law.t > 0.0))
        throw std::invalid_argument("running max law needs sigma > 0 and t > 0");
    if (a < 0.0 || a < b) return 0.0;
    const double s2t = law.sigma * law.sigma * law.t;
    const double s = std::sqrt(s2t);
    const double k = 2.0 * a - b;
    const double log_density = law.mu * b / (law.sigma * law.sigma) -
                               law.mu * law.mu * law.t / (2.0 * law.sigma * law.sigma) -
                               k * k / (2.0 * s2t);
    return 2.0 * (k / s2t) * std::exp(log_density - kLogSqrt2Pi) / s;
}

double two_barrier_lower_first(double mu, double sigma, double x0, double lower, double upper) {
    if (!(lower < x0) || !(x0 < upper)) {
        if (x0 <= lower) return 1.0;
        if (x0 >= upper) return 0.0;
    }
    const double theta = 2.0 * mu / (sigma * sigma);
    if (theta == 0.0) return (upper - x0) / (upper - lower);
    // Scale function s(x) = exp(-theta x): P = (s(x0)-s(upper)) / (s(lower)-s(upper)).
    return std::expm1(theta * (upper - x0)) / std::expm1(theta * (upper - lower));
}

double viability_probability(const Boundary& b) {
    if (b.m0 <= 0.0) return 1.0;
    const double z0 = b.z_at(0.0);
    const double zm0 = b.z_at(b.m0);
    return two_barrier_lower_first(b.params.mu, b.params.sigma, z0, zm0, 0.0);
}

McEstimate two_barrier_lower_first_mc(double mu, double sigma, double x0, double lower,
                                      double upper, long n_paths, double dt, std::uint64_t seed,
                                      int threads) {
    if (!(dt > 0.0) || n_paths < 1) throw std::invalid_argument("bad Monte Carlo budget");
    std::vector<unsigned char> hit_lower(static_cast<std::size_t>(n_paths));
    const double drift = mu * dt;
    const double vol = sigma * std::sqrt(dt);
    parallel_paths(n_paths, threads, [&](long i) {
        NormalStream normals(seed, static_cast<std::uint64_t>(i));
        double x = x0;
        for (long step = 0; step < 2000000000L; ++step) {
            x += drift + vol * normals.next();
            if (x <= lower) {
                hit_lower[static_cast<std::size_t>(i)] = 1;
                return;
            }
            if (x >= upper) {
                hit_lower[static_cast<std::size_t>(i)] = 0;
                return;
            }
        }
        throw StepFailure("two-barrier path failed to absorb");
    });
    return indicator_stats(hit_lower);
}

McEstimate running_max_cdf_mc(const MaxLaw& law, double level, long n_paths, double dt,
                              std::uint64_t seed, int threads) {
    if (!(dt > 0.0) || n_paths < 1) throw std::invalid_argument("bad Monte Carlo budget");
    const auto n_steps = static_cast<long>(std::ceil(law.t / dt));
    std::vector<unsigned char> below(static_cast<std::size_t>(n_paths));
    const double drift = law.mu * dt;
    const double vol = law.sigma * std::sqrt(dt);
    parallel_paths(n_paths, threads, [&](long i) {
        NormalStream normals(seed, static_cast<std::uint64_t>(i));
        double x = 0.0;
        double peak = 0.0;
        for (long step = 0; step < n_steps; ++step) {
            x += drift + vol * normals.next();
            peak = std::max(peak, x);
        }
        below[static_cast<std::size_t>(i)] = peak <= level ? 1 : 0;
    });
    return indicator_stats(below);
}

}  // namespace gq
