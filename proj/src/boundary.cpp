#include "gritquit/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gq {

const char* stage_name(Stage stage) {
    switch (stage) {
        case Stage::Exploration: return "exploration";
        case Stage::Iteration: return "iteration";
        case Stage::FinalPush: return "final_push";
        case Stage::PostPeak: return "post_peak";
    }
    return "?";
}

double Boundary::z_at(double m) const {
    if (m >= m_star) return 0.0;
    if (m <= grid_m.front()) return grid_z.front();
    const auto it = std::upper_bound(grid_m.begin(), grid_m.end(), m);
    const std::size_t i = static_cast<std::size_t>(it - grid_m.begin());
    const double w = (m - grid_m[i - 1]) / (grid_m[i] - grid_m[i - 1]);
    return grid_z[i - 1] + w * (grid_z[i] - grid_z[i - 1]);
}

Stage Boundary::stage_of(double m) const {
    if (m < m0) return Stage::Exploration;
    if (m < m1) return Stage::Iteration;
    if (m < m_star) return Stage::FinalPush;
    return Stage::PostPeak;
}

double boundary_slope(double m, double z, Stage stage, const ModelParams& params,
                      const ProfitSpec& profit, const GammaRoots& roots) {
    switch (stage) {
        case Stage::Exploration:
            return -1.0;
        case Stage::Iteration:
            return g_eval(-z, roots) - 1.0;
        case Stage::FinalPush: {
            const double den = profit.value(m) - params.L + params.c;
            if (den <= 0.0)
                throw NoLaunchRegion("pi(m) - L + c <= 0 in the candidate final-push region");
            if (z > -1e-300) z = -1e-300;  // keep g'/g ratio finite off the corner
            return (g_eval(-z, roots) / g_prime(-z, roots)) * profit.slope(m) / den - 1.0;
        }
        case Stage::PostPeak:
            return 0.0;
    }
    return 0.0;
}

double peak_slope(const ModelParams& params, const ProfitSpec& profit) {
    const GammaRoots roots = gamma_roots(params);
    const double den = profit.value(profit.qbar) - params.L + params.c;
    const double ratio = profit.curve(profit.qbar) / (den * roots.gamma1 * roots.gamma2);
    return std::sqrt(ratio + 0.25) - 0.5;
}

double peak_curvature_coeff(const ModelParams& params, const ProfitSpec& profit) {
    const double s = peak_slope(params, profit);
    const double drift_ratio = params.mu / (params.sigma * params.sigma);
    return -drift_ratio * s * s * (s + 1.0) / (3.0 * s + 1.0);
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;

struct OdeContext {
    const ModelParams& params;
    const ProfitSpec& profit;
    const GammaRoots& roots;
    Stage stage;

    double f(double m, double z) const {
        return boundary_slope(m, z, stage, params, profit, roots);
    }
};

/// Integrate z' = f(m, z) from (m_from, z_from) to m_to (either direction) with the
/// embedded 5(4) error estimate controlling the step size.
double advance(const OdeContext& ctx, double m_from, double z_from, double m_to, double tol) {
    const double span = m_to - m_from;
    if (std::abs(span) <= 1e-15 * (1.0 + std::abs(m_from))) return z_from;

    double m = m_from;
    double z = z_from;
    double h = span;
    const double h_min = 1e-15 * (1.0 + std::abs(m_from) + std::abs(m_to));
    const double dir = span > 0.0 ? 1.0 : -1.0;

    while (dir * (m_to - m) > h_min) {
        if (dir * (m + h) > dir * m_to) h = m_to - m;

        const double k1 = ctx.f(m, z);
        const double k2 = ctx.f(m + C2 * h, z + h * (A21 * k1));
        const double k3 = ctx.f(m + C3 * h, z + h * (A31 * k1 + A32 * k2));
        const double k4 = ctx.f(m + C4 * h, z + h * (A41 * k1 + A42 * k2 + A43 * k3));
        const double k5 = ctx.f(m + C5 * h, z + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        const double k6 =
            ctx.f(m + h, z + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        const double z5 = z + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        const double k7 = ctx.f(m + h, z5);
        const double err =
            std::abs(h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7));

        const double scale = tol * (1.0 + std::abs(z));
        if (err <= scale) {
            m += h;
            z = z5;
            const double grow = err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
            h *= std::clamp(grow, 1.0, 5.0);
        } else {
            h *= std::clamp(0.9 * std::pow(scale / err, 0.2), 0.1, 0.5);
            if (std::abs(h) < h_min)
                throw StepFailure("integrator step size underflow near m = " + std::to_string(m));
        }
    }
    return z;
}

struct EventRoot {
    double m;
    double z;
    double residual;
};

/// Locate E(m, z(m)) = 0 inside [m_lo, m_hi] given a sign change, integrating every trial
/// from the fixed anchor (m_hi, z_hi); a moving anchor would pair stale z with new m.
template <typename Event, typename EventSlope>
EventRoot locate_event(const OdeContext& ctx, double m_hi, double z_hi, double m_lo, double tol,
                       const Event& ev, const EventSlope& ev_slope) {
    auto z_of = [&](double m) { return advance(ctx, m_hi, z_hi, m, tol); };

    // ev >= 0 at m_lo, < 0 at m_hi.
    double lo = m_lo, hi = m_hi;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (ev(mid, z_of(mid)) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }

    double m_root = 0.5 * (lo + hi);
    double z_root = z_of(m_root);
    for (int it = 0; it < 3; ++it) {  // Newton polish on the bisection root
        const double e = ev(m_root, z_root);
        const double de = ev_slope(m_root, z_root);
        if (de == 0.0) break;
        const double m_next = m_root - e / de;
        if (!(m_next > m_lo && m_next < m_hi)) break;
        m_root = m_next;
        z_root = z_of(m_root);
    }
    return {m_root, z_root, std::abs(ev(m_root, z_root))};
}

/// Insert (m, z) as an exact node, replacing any node within snap distance.
void insert_node(std::vector<double>& grid_m, std::vector<double>& grid_z, double m, double z,
                 double snap) {
    auto it = std::lower_bound(grid_m.begin(), grid_m.end(), m);
    const std::size_t i = static_cast<std::size_t>(it - grid_m.begin());
    if (i < grid_m.size() && std::abs(grid_m[i] - m) < snap) {
        grid_m[i] = m;
        grid_z[i] = z;
        return;
    }
    if (i > 0 && std::abs(grid_m[i - 1] - m) < snap) {
        grid_m[i - 1] = m;
        grid_z[i - 1] = z;
        return;
    }
    grid_m.insert(grid_m.begin() + static_cast<std::ptrdiff_t>(i), m);
    grid_z.insert(grid_z.begin() + static_cast<std::ptrdiff_t>(i), z);
}

}  // namespace

Boundary solve_boundary(const ModelParams& params, const ProfitSpec& profit,
                        const SolveOptions& opts) {
    require_valid(params, profit);
    const double qbar = profit.qbar;
    if (opts.grid_step > qbar / 200.0)
        throw std::invalid_argument("grid_step must be <= qbar/200");
    if (!(opts.tol > 0.0) || opts.tol > 1e-4)
        throw std::invalid_argument("tol must lie in (0, 1e-4]");

    Boundary b;
    b.params = params;
    b.profit = profit;
    b.roots = gamma_roots(params);
    b.m_star = qbar;
    b.tol = opts.tol;

    const double requested = opts.grid_step > 0.0 ? opts.grid_step : qbar / 3000.0;
    const auto n = static_cast<std::size_t>(std::lround(qbar / requested));
    const double eff = qbar / static_cast<double>(n);
    b.grid_step = eff;
    b.grid_m.resize(n + 1);
    b.grid_z.assign(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) b.grid_m[i] = static_cast<double>(i) * eff;
    b.grid_m.back() = qbar;

    const double s = peak_slope(params, profit);
    const double b2 = peak_curvature_coeff(params, profit);
    b.terminal_slope = s;
    const double tau0 = std::min(1e-3, 1e-3 * qbar);
    auto series_z = [&](double tau) { return -s * tau + b2 * tau * tau; };
    const double m_top = qbar - tau0;
    const double z_top = series_z(tau0);

    // Cutoff events. ev1 switches final-push -> iteration, ev0 switches iteration -> exploration.
    const double restart_gain = (params.R + params.c) / params.c;
    auto ev1 = [&](double m, double z) {
        return g_eval(-z, b.roots) - 1.0 - params.R / (profit.value(m) - params.L + params.c);
    };
    auto ev0 = [&](double m, double z) {
        (void)m;
        return g_eval(-z, b.roots) - restart_gain;
    };
    OdeContext push_ctx{params, profit, b.roots, Stage::FinalPush};
    OdeContext iter_ctx{params, profit, b.roots, Stage::Iteration};
    auto ev1_slope = [&](double m, double z) {
        const double den = profit.value(m) - params.L + params.c;
        return -g_prime(-z, b.roots) * push_ctx.f(m, z) +
               params.R * profit.slope(m) / (den * den);
    };
    auto ev0_slope = [&](double m, double z) {
        return -g_prime(-z, b.roots) * iter_ctx.f(m, z);
    };

    const double snap = 1e-9 * qbar;
    double m1 = std::numeric_limits<double>::quiet_NaN();
    double z_m1 = 0.0;
    double m0 = 0.0;
    double z_m0 = 0.0;
    b.residual_m0 = std::numeric_limits<double>::quiet_NaN();

    // Nodes at or above the series start take the expansion directly.
    std::size_t i = n;
    while (i > 0 && b.grid_m[i - 1] >= m_top - 1e-12) {
        --i;
        b.grid_z[i] = series_z(qbar - b.grid_m[i]);
    }

    Stage st = Stage::FinalPush;
    double m_cur = m_top, z_cur = z_top;

    if (ev1(m_top, z_top) >= 0.0) {  // cutoff inside the series zone (tiny R/(pi-L+c))
        double lo = m_top, hi = qbar;  // ev1 >= 0 at lo, < 0 at hi
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (ev1(mid, series_z(qbar - mid)) >= 0.0 ? lo : hi) = mid;
        }
        m1 = 0.5 * (lo + hi);
        z_m1 = series_z(qbar - m1);
        b.residual_m1 = std::abs(ev1(m1, z_m1));
        st = Stage::Iteration;
        m_cur = m1;
        z_cur = z_m1;
    }

    while (i > 0) {
        --i;
        const double m_node = b.grid_m[i];
        OdeContext& ctx = st == Stage::FinalPush ? push_ctx : iter_ctx;
        double z_node;
        try {
            z_node = advance(ctx, m_cur, z_cur, m_node, opts.tol);
        } catch (const OverflowGuard&) {
            if (st == Stage::FinalPush)
                throw NoLaunchRegion(
                    "boundary diverges before the launch cutoff: pi(m) - L + c <= 0 on the "
                    "candidate final-push region");
            throw;
        }

        if (st == Stage::FinalPush && ev1(m_node, z_node) >= 0.0) {
            const EventRoot root =
                locate_event(push_ctx, m_cur, z_cur, m_node, opts.tol, ev1, ev1_slope);
            m1 = root.m;
            z_m1 = root.z;
            b.residual_m1 = root.residual;
            st = Stage::Iteration;
            m_cur = m1;
            z_cur = z_m1;
            z_node = advance(iter_ctx, m_cur, z_cur, m_node, opts.tol);
        }

        if (st == Stage::Iteration && ev0(m_node, z_node) >= 0.0) {
            const EventRoot root =
                locate_event(iter_ctx, m_cur, z_cur, m_node, opts.tol, ev0, ev0_slope);
            m0 = root.m;
            z_m0 = root.z;
            b.residual_m0 = root.residual;
            // Exploration stage: unit-slope line down to m = 0.
            for (std::size_t j = 0; j <= i; ++j) b.grid_z[j] = z_m0 + (m0 - b.grid_m[j]);
            st = Stage::Exploration;
            break;
        }

        b.grid_z[i] = z_node;
        m_cur = m_node;
        z_cur = z_node;
    }

    if (std::isnan(m1)) {
        // Launch beats restart on the whole domain: the final push starts at m = 0.
        m1 = 0.0;
        z_m1 = b.grid_z.front();
        b.residual_m1 = std::numeric_limits<double>::quiet_NaN();
    }

    b.m1 = m1;
    b.m0 = m0;
    insert_node(b.grid_m, b.grid_z, m1, z_m1, snap);
    if (m0 > 0.0) insert_node(b.grid_m, b.grid_z, m0, z_m0, snap);
    for (auto& z : b.grid_z) z = std::min(z, 0.0);
    b.grid_z.back() = 0.0;
    return b;
}

}  // namespace gq
