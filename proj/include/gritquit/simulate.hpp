#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gritquit/boundary.hpp"

namespace gq {

struct SimConfig {
    double z_start = 0.0;  ///< initial drawdown, <= 0
    double m_start = 0.0;  ///< initial running max, >= 0
    double dt = 1e-3;
    double t_max = 40.0;  ///< horizon cap; must satisfy r * t_max >= 20
    long n_paths = 10000;
    std::uint64_t seed = 12345;
    int threads = 0;  ///< 0 = hardware count
};

enum class PathOutcome { Launched, Aborted, HorizonCapped };

const char* outcome_name(PathOutcome o);

struct PathResult {
    PathOutcome outcome = PathOutcome::HorizonCapped;
    double t_end = 0.0;
    double launch_quality = 0.0;  ///< m at launch; NaN for other outcomes
    int n_restarts = 0;
    double discounted_payoff = 0.0;
    std::vector<double> restart_times;
    double max_step_dm = 0.0;  ///< largest single-step gain of m (diagnostic)
};

/// One Euler-Maruyama path under the boundary policy. The drawdown folds at zero
/// (overshoot adds to m); decisions are evaluated at t = 0 and after every step.
/// Flow cost accrues at rate r*c while active; restart pays R and resets z to 0.
PathResult simulate_path(const Boundary& b, const SimConfig& cfg, std::uint64_t path_id);

/// Per-path summary row (CSV payload).
struct PathRow {
    long path_id;
    PathOutcome outcome;
    double t_end;
    double launch_quality;
    int n_restarts;
    double discounted_payoff;
};

struct SimStats {
    long n_paths = 0;
    double p_launch = 0.0, p_launch_se = 0.0;
    double p_abort = 0.0, p_abort_se = 0.0;
    double p_capped = 0.0;
    double mean_payoff = 0.0, mean_payoff_se = 0.0;
    double mean_launch_quality = 0.0, mean_launch_quality_se = 0.0;  ///< NaN if no launches
    double mean_t_end = 0.0;
    double max_step_dm = 0.0;
    std::map<int, long> restart_histogram;
};

/// Runs cfg.n_paths paths (path i uses stream i of cfg.seed) and aggregates with
/// deterministic pairwise reductions: results are identical for any thread count.
/// When rows != nullptr it receives one PathRow per path, in path order.
SimStats monte_carlo(const Boundary& b, const SimConfig& cfg, std::vector<PathRow>* rows = nullptr);

}  // namespace gq
