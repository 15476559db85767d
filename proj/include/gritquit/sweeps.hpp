#pragma once

#include <string>
#include <vector>

#include "gritquit/boundary.hpp"

namespace gq {

enum class SweepParameter { RestartCost, LaunchCost, PeakLocation };

const char* sweep_parameter_name(SweepParameter p);  // "R", "L", "qbar"
SweepParameter parse_sweep_parameter(const std::string& name);

struct SweepOptions {
    double rel_step = 0.01;
    SolveOptions solve;
    double zero_band = 1e-6;  ///< |delta| below this is solver noise, not signal
};

/// One scalar diagnostic evaluated at the base and the four perturbed solves.
struct SweepProbe {
    std::string name;
    double at_m;  ///< probe location for boundary probes; NaN for scalar probes
    double base, up, down, up_half, down_half;
};

/// Sign expectation on delta = probe(+rel) - probe(base).
/// verdict: pass | fail | indistinguishable | skipped.
struct SignCheck {
    std::string probe;
    char expected;  ///< '+', '-', or '0'
    double delta_up, delta_up_half, delta_down;
    std::string verdict;
};

struct SweepReport {
    SweepParameter param = SweepParameter::RestartCost;
    double base_value = 0.0;  ///< parameter value at the base point
    double rel_step = 0.0;
    bool stage0_missing = false;  ///< base m0 == 0: exploration-linked checks skipped
    std::vector<SweepProbe> probes;
    std::vector<SignCheck> checks;
    std::vector<std::string> notes;  ///< measured-but-unasserted observations

    bool all_enforced_pass() const;
};

/// Re-solve at base, +/-rel_step and +/-rel_step/2 (relative perturbations of the chosen
/// parameter), probe the boundary and viability, and grade the expected-sign table.
/// Sign verdicts demand first-order consistency between the full and half step.
SweepReport sweep(const ModelParams& params, const ProfitSpec& profit, SweepParameter param,
                  const SweepOptions& opts = {});

}  // namespace gq
