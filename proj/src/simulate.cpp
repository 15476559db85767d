#include "gritquit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gritquit/numerics.hpp"
#include "gritquit/value.hpp"

namespace gq {

const char* outcome_name(PathOutcome o) {
    switch (o) {
        case PathOutcome::Launched: return "launched";
        case PathOutcome::Aborted: return "aborted";
        case PathOutcome::HorizonCapped: return "horizon_capped";
    }
    return "?";
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_config(const Boundary& b, const SimConfig& cfg) {
    if (cfg.z_start > 0.0) throw std::invalid_argument("z_start must be <= 0");
    if (cfg.m_start < 0.0) throw std::invalid_argument("m_start must be >= 0");
    if (!(cfg.dt > 0.0) || cfg.dt > 1e-2 / b.params.r)
        throw std::invalid_argument("dt must lie in (0, 1e-2/r]");
    if (cfg.t_max * b.params.r < 20.0)
        throw std::invalid_argument("t_max too short: require r * t_max >= 20");
    if (cfg.n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
}

/// Flat lookup table for z*(m) with per-segment slopes; read-only across threads.
struct PolicyTable {
    std::vector<double> m, z, slope;
    double m_star;

    explicit PolicyTable(const Boundary& b) : m(b.grid_m), z(b.grid_z), m_star(b.m_star) {
        slope.resize(m.size() - 1);
        for (std::size_t i = 0; i + 1 < m.size(); ++i)
            slope[i] = (z[i + 1] - z[i]) / (m[i + 1] - m[i]);
    }

    std::size_t segment_of(double mm) const {
        const auto it = std::upper_bound(m.begin(), m.end(), mm);
        const auto i = static_cast<std::size_t>(it - m.begin());
        return std::min(std::max<std::size_t>(i, 1) - 1, slope.size() - 1);
    }
};

PathResult run_path(const Boundary& b, const PolicyTable& table, const SimConfig& cfg,
                    std::uint64_t path_id) {
    PathResult res;
    res.launch_quality = kNan;

    const auto& p = b.params;
    const double drift = p.mu * cfg.dt;
    const double vol = p.sigma * std::sqrt(cfg.dt);
    const double disc_ratio = std::exp(-p.r * cfg.dt);
    const double flow_cost = p.c * (1.0 - disc_ratio);  // times current discount, per step

    double z = cfg.z_start;
    double m = cfg.m_start;
    double disc = 1.0;
    double payoff = 0.0;
    long step = 0;
    std::size_t seg = table.segment_of(m);
    NormalStream normals(cfg.seed, path_id);

    auto finish = [&](PathOutcome outcome, double t) {
        res.outcome = outcome;
        res.t_end = t;
        res.discounted_payoff = payoff;
        return res;
    };

    for (;;) {
        const double t = static_cast<double>(step) * cfg.dt;
        // Decision at the current state (including the start state at t = 0).
        if (m >= table.m_star) {
            payoff += disc * (b.profit.value(m) - p.L);
            res.launch_quality = m;
            return finish(PathOutcome::Launched, t);
        }
        const double zs = table.z[seg] + (m - table.m[seg]) * table.slope[seg];
        if (z <= zs) {
            if (m < b.m0) return finish(PathOutcome::Aborted, t);
            if (m < b.m1) {
                payoff -= disc * p.R;
                z = 0.0;
                ++res.n_restarts;
                res.restart_times.push_back(t);
            } else {
                payoff += disc * (b.profit.value(m) - p.L);
                res.launch_quality = m;
                return finish(PathOutcome::Launched, t);
            }
        }
        if (t >= cfg.t_max) return finish(PathOutcome::HorizonCapped, t);

        payoff -= disc * flow_cost;
        const double z_new = z + drift + vol * normals.next();
        if (z_new > 0.0) {
            m += z_new;
            res.max_step_dm = std::max(res.max_step_dm, z_new);
            z = 0.0;
            while (m >= table.m[seg + 1] && seg + 1 < table.slope.size()) ++seg;
        } else {
            z = z_new;
        }
        disc *= disc_ratio;
        ++step;
    }
}

double mean_of(std::span<const double> xs) {
    if (xs.empty()) return kNan;
    return pairwise_sum(xs) / static_cast<double>(xs.size());
}

double se_of_mean(std::span<const double> xs, double mean) {
    const std::size_t n = xs.size();
    if (n < 2) return kNan;
    std::vector<double> dev2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = xs[i] - mean;
        dev2[i] = d * d;
    }
    const double var = pairwise_sum(dev2) / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
}

double indicator_se(double p, double n) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / n); }

}  // namespace

PathResult simulate_path(const Boundary& b, const SimConfig& cfg, std::uint64_t path_id) {
    check_config(b, cfg);
    const PolicyTable table(b);
    return run_path(b, table, cfg, path_id);
}

SimStats monte_carlo(const Boundary& b, const SimConfig& cfg, std::vector<PathRow>* rows) {
    check_config(b, cfg);
    const PolicyTable table(b);
    const auto n = static_cast<std::size_t>(cfg.n_paths);

    std::vector<double> payoff(n), t_end(n), quality(n), maxdm(n);
    std::vector<int> restarts(n);
    std::vector<unsigned char> outcome(n);

    parallel_paths(cfg.n_paths, cfg.threads, [&](long i) {
        const PathResult res = run_path(b, table, cfg, static_cast<std::uint64_t>(i));
        const auto k = static_cast<std::size_t>(i);
        payoff[k] = res.discounted_payoff;
        t_end[k] = res.t_end;
        quality[k] = res.launch_quality;
        maxdm[k] = res.max_step_dm;
        restarts[k] = res.n_restarts;
        outcome[k] = static_cast<unsigned char>(res.outcome);
    });

    SimStats stats;
    stats.n_paths = cfg.n_paths;
    const double dn = static_cast<double>(cfg.n_paths);

    long n_launch = 0, n_abort = 0;
    for (std::size_t i = 0; i < n; ++i) {
        n_launch += outcome[i] == static_cast<unsigned char>(PathOutcome::Launched);
        n_abort += outcome[i] == static_cast<unsigned char>(PathOutcome::Aborted);
    }
    stats.p_launch = static_cast<double>(n_launch) / dn;
    stats.p_abort = static_cast<double>(n_abort) / dn;
    stats.p_capped = static_cast<double>(cfg.n_paths - n_launch - n_abort) / dn;
    stats.p_launch_se = indicator_se(stats.p_launch, dn);
    stats.p_abort_se = indicator_se(stats.p_abort, dn);

    stats.mean_payoff = mean_of(payoff);
    stats.mean_payoff_se = se_of_mean(payoff, stats.mean_payoff);
    stats.mean_t_end = mean_of(t_end);

    std::vector<double> launched_quality;
    launched_quality.reserve(static_cast<std::size_t>(n_launch));
    for (std::size_t i = 0; i < n; ++i)
        if (outcome[i] == static_cast<unsigned char>(PathOutcome::Launched))
            launched_quality.push_back(quality[i]);
    stats.mean_launch_quality = mean_of(launched_quality);
    stats.mean_launch_quality_se = se_of_mean(launched_quality, stats.mean_launch_quality);

    for (std::size_t i = 0; i < n; ++i) {
        ++stats.restart_histogram[restarts[i]];
        stats.max_step_dm = std::max(stats.max_step_dm, maxdm[i]);
    }

    if (rows) {
        rows->resize(n);
        for (std::size_t i = 0; i < n; ++i)
            (*rows)[i] = {static_cast<long>(i), static_cast<PathOutcome>(outcome[i]), t_end[i],
                          quality[i], restarts[i], payoff[i]};
    }
    return stats;
}

}  // namespace gq
