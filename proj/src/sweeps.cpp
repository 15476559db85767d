#include "gritquit/sweeps.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gritquit/maxima.hpp"

namespace gq {

const char* sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::RestartCost: return "R";
        case SweepParameter::LaunchCost: return "L";
        case SweepParameter::PeakLocation: return "qbar";
    }
    return "?";
}

SweepParameter parse_sweep_parameter(const std::string& name) {
    if (name == "R") return SweepParameter::RestartCost;
    if (name == "L") return SweepParameter::LaunchCost;
    if (name == "qbar") return SweepParameter::PeakLocation;
    throw std::invalid_argument("unknown sweep parameter: " + name + " (expected R, L or qbar)");
}

bool SweepReport::all_enforced_pass() const {
    for (const auto& check : checks)
        if (check.verdict == "fail") return false;
    return true;
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void apply_scale(ModelParams& params, ProfitSpec& profit, SweepParameter which, double factor) {
    switch (which) {
        case SweepParameter::RestartCost: params.R *= factor; break;
        case SweepParameter::LaunchCost: params.L *= factor; break;
        case SweepParameter::PeakLocation: profit.qbar *= factor; break;
    }
}

struct Solved {
    Boundary b;
    double viability;
};

Solved solve_at(const ModelParams& params, const ProfitSpec& profit, SweepParameter which,
                double factor, const SolveOptions& solve_opts) {
    ModelParams p = params;
    ProfitSpec f = profit;
    apply_scale(p, f, which, factor);
    Solved s{solve_boundary(p, f, solve_opts), 0.0};
    s.viability = viability_probability(s.b);
    return s;
}

}  // namespace

SweepReport sweep(const ModelParams& params, const ProfitSpec& profit, SweepParameter param,
                  const SweepOptions& opts) {
    if (!(opts.rel_step > 0.0) || opts.rel_step > 0.2)
        throw std::invalid_argument("rel_step must lie in (0, 0.2]");

    const Solved base = solve_at(params, profit, param, 1.0, opts.solve);
    const Solved up = solve_at(params, profit, param, 1.0 + opts.rel_step, opts.solve);
    const Solved down = solve_at(params, profit, param, 1.0 - opts.rel_step, opts.solve);
    const Solved up_h = solve_at(params, profit, param, 1.0 + 0.5 * opts.rel_step, opts.solve);
    const Solved down_h = solve_at(params, profit, param, 1.0 - 0.5 * opts.rel_step, opts.solve);

    SweepReport rep;
    rep.param = param;
    rep.rel_step = opts.rel_step;
    rep.stage0_missing = base.b.m0 <= 0.0;
    switch (param) {
        case SweepParameter::RestartCost: rep.base_value = params.R; break;
        case SweepParameter::LaunchCost: rep.base_value = params.L; break;
        case SweepParameter::PeakLocation: rep.base_value = profit.qbar; break;
    }

    auto probe = [&](const std::string& name, double at_m, auto&& f) {
        rep.probes.push_back({name, at_m, f(base), f(up), f(down), f(up_h), f(down_h)});
    };

    probe("m0", kNan, [](const Solved& s) { return s.b.m0; });
    probe("m1", kNan, [](const Solved& s) { return s.b.m1; });
    probe("z_at_m0", kNan, [](const Solved& s) { return s.b.z_at(s.b.m0); });
    probe("viability", kNan, [](const Solved& s) { return s.viability; });

    auto boundary_probe = [&](const std::string& name, double at_m) {
        probe(name, at_m, [at_m](const Solved& s) { return s.b.z_at(at_m); });
    };
    if (!rep.stage0_missing) boundary_probe("z_exploration_mid", 0.5 * base.b.m0);
    const double iter_span = base.b.m1 - base.b.m0;
    boundary_probe("z_iteration_q1", base.b.m0 + 0.25 * iter_span);
    boundary_probe("z_iteration_q2", base.b.m0 + 0.50 * iter_span);
    boundary_probe("z_iteration_q3", base.b.m0 + 0.75 * iter_span);
    const double push_span = base.b.m_star - base.b.m1;
    boundary_probe("z_final_push_lo", base.b.m1 + push_span / 3.0);
    boundary_probe("z_final_push_hi", base.b.m1 + 2.0 * push_span / 3.0);

    auto find_probe = [&](const std::string& name) -> const SweepProbe& {
        for (const auto& pr : rep.probes)
            if (pr.name == name) return pr;
        throw std::logic_error("missing probe " + name);
    };

    // Sign grading: a nonzero expectation needs the half-step delta to confirm first-order
    // scaling (ratio of full to half delta near 2); a zero expectation needs both deltas
    // inside the noise band.
    auto grade = [&](const std::string& probe_name, char expected, bool stage0_linked) {
        const SweepProbe& pr = find_probe(probe_name);
        SignCheck check{probe_name, expected, pr.up - pr.base, pr.up_half - pr.base,
                        pr.down - pr.base, ""};
        if (stage0_linked && rep.stage0_missing) {
            check.verdict = "skipped";
        } else if (expected == '0') {
            check.verdict = (std::abs(check.delta_up) <= opts.zero_band &&
                             std::abs(check.delta_up_half) <= opts.zero_band)
                                ? "pass"
                                : "fail";
        } else if (std::abs(check.delta_up) <= opts.zero_band) {
            check.verdict = "indistinguishable";
        } else {
            const double want = expected == '+' ? 1.0 : -1.0;
            const double ratio = check.delta_up / check.delta_up_half;
            const bool sign_ok = check.delta_up * want > 0.0 && check.delta_up_half * want > 0.0;
            check.verdict = (sign_ok && ratio > 1.4 && ratio < 2.6) ? "pass" : "fail";
        }
        rep.checks.push_back(check);
    };

    switch (param) {
        case SweepParameter::RestartCost:
            grade("m0", '+', true);
            grade("z_at_m0", '-', true);
            if (!rep.stage0_missing) grade("z_exploration_mid", '+', true);
            grade("z_iteration_q1", '-', false);
            grade("z_iteration_q2", '-', false);
            grade("z_iteration_q3", '-', false);
            grade("z_final_push_lo", '0', false);
            grade("z_final_push_hi", '0', false);
            grade("viability", '-', true);
            break;
        case SweepParameter::LaunchCost:
            grade("m0", '+', true);
            grade("z_at_m0", '0', true);
            if (!rep.stage0_missing) grade("z_exploration_mid", '+', true);
            grade("z_final_push_lo", '-', false);
            grade("z_final_push_hi", '-', false);
            grade("viability", '-', true);
            break;
        case SweepParameter::PeakLocation:
            if (!rep.stage0_missing) grade("z_exploration_mid", '-', true);
            grade("z_iteration_q1", '+', false);
            grade("z_iteration_q2", '+', false);
            grade("z_iteration_q3", '+', false);
            grade("z_final_push_lo", '-', false);
            grade("z_final_push_hi", '-', false);
            grade("viability", '+', true);
            break;
    }

    auto note_delta = [&](const std::string& probe_name) {
        const SweepProbe& pr = find_probe(probe_name);
        rep.notes.push_back(probe_name + " measured, not asserted: delta_up = " +
                            std::to_string(pr.up - pr.base) +
                            ", delta_down = " + std::to_string(pr.down - pr.base));
    };
    note_delta("m1");
    if (param == SweepParameter::LaunchCost) {
        note_delta("z_iteration_q2");
    }
    if (param == SweepParameter::PeakLocation) {
        note_delta("m0");  // sign disputed in the source analysis; reported only
        note_delta("z_at_m0");
    }
    if (rep.stage0_missing)
        rep.notes.push_back("base has m0 = 0: exploration-stage checks skipped");

    return rep;
}

}  // namespace gq
