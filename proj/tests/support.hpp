#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gritquit/boundary.hpp"
#include "gritquit/model.hpp"

// Shared fixtures and an independent fixed-step boundary oracle. The oracle deliberately
// re-derives the stage dynamics and the peak expansion instead of calling boundary_slope,
// so a sign slip in the production solver cannot cancel against the check.
namespace testsupport {

struct Fixture {
    gq::ModelParams params;
    gq::ProfitSpec profit;
};

inline Fixture benchmark() {
    Fixture f;
    f.params = {1.0, 1.0, 0.5, 0.1, 0.5, 2.0};
    f.profit.family = gq::ProfitFamily::Quadratic;
    f.profit.peak_value = 10.0;
    f.profit.curvature = 1.0;
    f.profit.qbar = 3.0;
    return f;
}

/// Same economy with a distant peak: all three stages are present (m0 > 0).
inline Fixture deep() {
    Fixture f = benchmark();
    f.profit.qbar = 8.0;
    return f;
}

/// Distant peak but a large prize: the exploration stage vanishes again.
inline Fixture bigprize() {
    Fixture f = benchmark();
    f.profit.peak_value = 40.0;
    f.profit.qbar = 8.0;
    return f;
}

/// Peak barely above the launch cost: no profitable launch region.
inline Fixture flat() {
    Fixture f = benchmark();
    f.profit.peak_value = 2.05;
    return f;
}

struct OracleResult {
    double m0 = 0.0;
    double m1 = 0.0;
    double z_m0 = 0.0;
    double z_m1 = 0.0;
    std::vector<double> z;  ///< z*(eval_m[i])
};

namespace detail {

struct Kernel {
    double g1, g2;
    double g(double x) const {
        return (g1 * std::exp(g2 * x) - g2 * std::exp(g1 * x)) / (g1 - g2);
    }
    double gp(double x) const {
        return g1 * g2 * (std::exp(g2 * x) - std::exp(g1 * x)) / (g1 - g2);
    }
};

struct OracleOde {
    const gq::ModelParams& p;
    const gq::ProfitSpec& f;
    Kernel k;
    bool final_push;

    double slope(double m, double z) const {
        if (!final_push) return k.g(-z) - 1.0;
        const double den = f.value(m) - p.L + p.c;
        return (k.g(-z) / k.gp(-z)) * f.slope(m) / den - 1.0;
    }

    // Classic RK4 from (m, z) to m_to, steps no longer than h_max.
    double integrate(double m, double z, double m_to, double h_max) const {
        const double dir = m_to > m ? 1.0 : -1.0;
        while (dir * (m_to - m) > 1e-15) {
            const double h = dir * std::min(h_max, dir * (m_to - m));
            const double k1 = slope(m, z);
            const double k2 = slope(m + 0.5 * h, z + 0.5 * h * k1);
            const double k3 = slope(m + 0.5 * h, z + 0.5 * h * k2);
            const double k4 = slope(m + h, z + h * k3);
            z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            m += h;
        }
        return z;
    }
};

}  // namespace detail

/// Fixed-step RK4 solve of the boundary, reporting z* at the requested m values
/// (ascending) plus the located cutoffs. h is the RK4 step in m.
inline OracleResult rk4_boundary(const gq::ModelParams& p, const gq::ProfitSpec& f,
                                 std::vector<double> eval_m, double h = 1e-5) {
    std::sort(eval_m.begin(), eval_m.end());
    OracleResult out;
    out.z.assign(eval_m.size(), 0.0);

    const double s2 = p.sigma * p.sigma;
    const double a = p.mu / s2;
    const double disc = std::sqrt(a * a + 2.0 * p.r / s2);
    const detail::Kernel kernel{-a + disc, -a - disc};

    // Peak expansion, re-derived: s from the L'Hopital balance, b from the next order.
    const double den_peak = f.value(f.qbar) - p.L + p.c;
    const double s_star =
        std::sqrt(f.curve(f.qbar) / (den_peak * kernel.g1 * kernel.g2) + 0.25) - 0.5;
    const double b2 = -a * s_star * s_star * (s_star + 1.0) / (3.0 * s_star + 1.0);
    const double tau0 = 1e-3;
    double m_cur = f.qbar - tau0;
    double z_cur = -s_star * tau0 + b2 * tau0 * tau0;

    detail::OracleOde push{p, f, kernel, true};
    detail::OracleOde iter{p, f, kernel, false};

    auto ev1 = [&](double m, double z) {
        return kernel.g(-z) - 1.0 - p.R / (f.value(m) - p.L + p.c);
    };
    auto ev0 = [&](double z) { return kernel.g(-z) - (p.R + p.c) / p.c; };

    // Locate an event inside [m_lo, m_hi] by bisection, re-integrating every trial from the
    // fixed anchor (m_hi, z_hi).
    auto locate = [&](const detail::OracleOde& ode, auto&& ev, double m_hi, double z_hi,
                      double m_lo) {
        double lo = m_lo, hi = m_hi;
        for (int i = 0; i < 90; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (ev(mid, ode.integrate(m_hi, z_hi, mid, h)) >= 0.0 ? lo : hi) = mid;
        }
        const double m_root = 0.5 * (lo + hi);
        return std::pair<double, double>{m_root, ode.integrate(m_hi, z_hi, m_root, h)};
    };

    auto eval_it = eval_m.rbegin();
    auto record_down_to = [&](double m_stop, const detail::OracleOde& ode) {
        while (eval_it != eval_m.rend() && *eval_it >= m_stop - 1e-15 && *eval_it <= m_cur) {
            const double z_here = ode.integrate(m_cur, z_cur, *eval_it, h);
            out.z[static_cast<std::size_t>(eval_m.rend() - eval_it) - 1] = z_here;
            m_cur = *eval_it;
            z_cur = z_here;
            ++eval_it;
        }
    };

    // Skip eval points above the series start (they take the expansion directly).
    while (eval_it != eval_m.rend() && *eval_it > m_cur) {
        const double tau = f.qbar - *eval_it;
        out.z[static_cast<std::size_t>(eval_m.rend() - eval_it) - 1] =
            -s_star * tau + b2 * tau * tau;
        ++eval_it;
    }

    // Final push: walk down on a coarse scan grid, bisect the stage switch.
    double m1 = -1.0, z_m1 = 0.0;
    const double scan = std::max(h, f.qbar / 4000.0);
    while (m_cur > 0.0) {
        const double m_next = std::max(0.0, m_cur - scan);
        const double m_hi = m_cur, z_hi = z_cur;
        const double z_next = push.integrate(m_hi, z_hi, m_next, h);
        if (ev1(m_next, z_next) >= 0.0) {
            const auto root = locate(push, ev1, m_hi, z_hi, m_next);
            m1 = root.first;
            z_m1 = root.second;
            record_down_to(m1, push);  // eval points above the cutoff, final-push dynamics
            m_cur = m1;
            z_cur = z_m1;
            break;
        }
        record_down_to(m_next, push);
        m_cur = m_next;
        z_cur = z_next;
    }
    if (m1 < 0.0) throw std::runtime_error("oracle: no launch cutoff");
    out.m1 = m1;
    out.z_m1 = z_m1;

    // Iteration stage down to the abort cutoff or m = 0.
    double m0 = 0.0, z_m0 = 0.0;
    bool have_m0 = false;
    while (m_cur > 0.0) {
        const double m_next = std::max(0.0, m_cur - scan);
        const double m_hi = m_cur, z_hi = z_cur;
        const double z_next = iter.integrate(m_hi, z_hi, m_next, h);
        if (ev0(z_next) >= 0.0) {
            const auto root = locate(
                iter, [&](double, double z) { return ev0(z); }, m_hi, z_hi, m_next);
            m0 = root.first;
            z_m0 = root.second;
            have_m0 = true;
            record_down_to(m0, iter);
            m_cur = m0;
            z_cur = z_m0;
            break;
        }
        record_down_to(m_next, iter);
        m_cur = m_next;
        z_cur = z_next;
    }
    out.m0 = have_m0 ? m0 : 0.0;
    out.z_m0 = have_m0 ? z_m0 : iter.integrate(m_cur, z_cur, 0.0, h);

    // Exploration: unit-slope line below m0.
    while (eval_it != eval_m.rend()) {
        out.z[static_cast<std::size_t>(eval_m.rend() - eval_it) - 1] =
            (have_m0 ? z_m0 + (m0 - *eval_it) : out.z_m0);
        ++eval_it;
    }
    return out;
}

}  // namespace testsupport
