#include "gritquit/value.hpp"

#include <cmath>

namespace gq {

const char* decision_name(Decision d) {
    switch (d) {
        case Decision::Continue: return "continue";
        case Decision::Abort: return "abort";
        case Decision::Restart: return "restart";
        case Decision::Launch: return "launch";
    }
    return "?";
}

namespace {

/// Multiplier k(m) of the kernel: W(z, m) = k(m) g(z - z*(m)) - c on the continuation band.
double stage_coefficient(double m, Stage stage, const Boundary& b) {
    switch (stage) {
        case Stage::Exploration:
            return b.params.c;
        case Stage::Iteration: {
            const double gz = g_eval(-b.z_at(m), b.roots);
            return b.params.R / (gz - 1.0);
        }
        case Stage::FinalPush:
            return b.profit.value(m) - b.params.L + b.params.c;
        case Stage::PostPeak:
            return 0.0;
    }
    return 0.0;
}

}  // namespace

double value(double z, double m, const Boundary& b) {
    if (z > 0.0) throw std::invalid_argument("value: z must be <= 0");
    if (m < 0.0) throw std::invalid_argument("value: m must be >= 0");
    const Stage stage = b.stage_of(m);
    if (stage == Stage::PostPeak) return b.profit.value(m) - b.params.L;
    const double zs = b.z_at(m);
    const double x = std::max(z, zs) - zs;  // below the boundary W equals the boundary value
    return stage_coefficient(m, stage, b) * g_eval(x, b.roots) - b.params.c;
}

Decision decide(double z, double m, const Boundary& b) {
    if (z > 0.0) throw std::invalid_argument("decide: z must be <= 0");
    if (m < 0.0) throw std::invalid_argument("decide: m must be >= 0");
    if (m >= b.m_star) return Decision::Launch;
    if (z > b.z_at(m)) return Decision::Continue;
    switch (b.stage_of(m)) {
        case Stage::Exploration: return Decision::Abort;
        case Stage::Iteration: return Decision::Restart;
        default: return Decision::Launch;
    }
}

double generator_apply_fd(const std::function<double(double)>& f, double z, double h,
                          const ModelParams& params) {
    const double f0 = f(z);
    const double fp = f(z + h);
    const double fm = f(z - h);
    const double d1 = (fp - fm) / (2.0 * h);
    const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
    return 0.5 * params.sigma * params.sigma * d2 + params.mu * d1 - params.r * f0 -
           params.r * params.c;
}

double bhj_residual_analytic(double z, double m, const Boundary& b) {
    const Stage stage = b.stage_of(m);
    if (stage == Stage::PostPeak) return 0.0;
    const double x = z - b.z_at(m);
    const double k = stage_coefficient(m, stage, b);
    const double W = k * g_eval(x, b.roots) - b.params.c;
    const double Wz = k * g_prime(x, b.roots);
    const double Wzz = k * g_dprime(x, b.roots);
    const auto& p = b.params;
    return 0.5 * p.sigma * p.sigma * Wzz + p.mu * Wz - p.r * W - p.r * p.c;
}

double bhj_residual_fd(double z, double m, const Boundary& b, double h) {
    auto f = [&](double zz) { return value(zz, m, b); };
    return generator_apply_fd(f, z, h, b.params);
}

double reflection_residual(double m, const Boundary& b, double h) {
    const double Wm = (value(0.0, m + h, b) - value(0.0, m - h, b)) / (2.0 * h);
    const double Wz =
        (3.0 * value(0.0, m, b) - 4.0 * value(-h, m, b) + value(-2.0 * h, m, b)) / (2.0 * h);
    return Wm - Wz;
}

double smooth_pasting_residual_fd(double m, const Boundary& b, double h) {
    const double zs = b.z_at(m);
    return (value(zs + h, m, b) - value(zs, m, b)) / h;
}

double value_matching_residual(double m, const Boundary& b) {
    const double zs = b.z_at(m);
    const double at_boundary = value(zs, m, b);
    switch (b.stage_of(m)) {
        case Stage::Exploration:
            return at_boundary;
        case Stage::Iteration:
            return at_boundary - (-b.params.R + value(0.0, m, b));
        case Stage::FinalPush:
            return at_boundary - (b.profit.value(m) - b.params.L);
        case Stage::PostPeak:
            return 0.0;
    }
    return 0.0;
}

}  // namespace gq
