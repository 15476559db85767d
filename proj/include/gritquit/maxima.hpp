#pragma once

#include <cstdint>

#include "gritquit/boundary.hpp"

namespace gq {

/// Standard normal CDF via erfc; full relative accuracy in both tails.
double normal_cdf(double x);

/// log Phi(x), stable for x << 0 (asymptotic expansion past x = -30).
double log_normal_cdf(double x);

/// Law of the running maximum of X_t = mu t + sigma B_t, X_0 = 0, on [0, t].
struct MaxLaw {
    double mu;
    double sigma;
    double t;
};

/// P(max <= level) for level >= 0 (0 for level < 0).
double running_max_cdf(const MaxLaw& law, double level);

/// Density of the running maximum at level >= 0.
double running_max_pdf(const MaxLaw& law, double level);

/// Joint density of (max, endpoint) at (a, b), supported on a >= max(b, 0).
double running_max_joint_density(const MaxLaw& law, double a, double b);

/// P(X hits `lower` before `upper` | X_0 = x0), lower < x0 < upper, via the
/// exponential scale function; exact for mu = 0 as the linear limit.
double two_barrier_lower_first(double mu, double sigma, double x0, double lower, double upper);

/// Probability that exploration ends in abort rather than graduation: drifted BM started
/// at z*(0) hits z*(m0) before 0. Equals 1 when the exploration stage is absent (m0 = 0).
double viability_probability(const Boundary& b);

struct McEstimate {
    double estimate;
    double se;
};

/// Euler-Maruyama estimate of two_barrier_lower_first. threads = 0 picks hardware count.
McEstimate two_barrier_lower_first_mc(double mu, double sigma, double x0, double lower,
                                      double upper, long n_paths, double dt, std::uint64_t seed,
                                      int threads);

/// Euler-Maruyama estimate of running_max_cdf at one level.
McEstimate running_max_cdf_mc(const MaxLaw& law, double level, long n_paths, double dt,
                              std::uint64_t seed, int threads);

}  // namespace gq
