#pragma once

#include <stdexcept>
#include <vector>

#include "gritquit/model.hpp"

namespace gq {

/// Policy stages by running-max m: abort below m0, restart below m1, launch below m_star,
/// immediate launch at or past m_star (= the profit peak).
enum class Stage { Exploration, Iteration, FinalPush, PostPeak };

const char* stage_name(Stage stage);

struct SolveOptions {
    double grid_step = 0.0;  ///< node spacing in m; <= 0 selects qbar/3000
    double tol = 1e-10;      ///< local error tolerance of the adaptive integrator
};

/// Free boundary z*(m) <= 0 with stage cutoffs. Nodes are exact solver output
/// (the cutoffs are inserted as nodes); z_at interpolates linearly between nodes.
struct Boundary {
    ModelParams params;
    ProfitSpec profit;
    GammaRoots roots{};

    double m0 = 0.0;      ///< abort/restart cutoff; 0 when the exploration stage is absent
    double m1 = 0.0;      ///< restart/launch cutoff
    double m_star = 0.0;  ///< launch-at-peak cutoff (= qbar)

    double residual_m0 = 0.0;  ///< cutoff equation residual after polish; NaN when m0 == 0
    double residual_m1 = 0.0;

    double grid_step = 0.0;  ///< effective node spacing
    double tol = 0.0;
    double terminal_slope = 0.0;  ///< |dz*/dm| at m_star from the peak expansion

    std::vector<double> grid_m;  ///< ascending, front() == 0, back() == m_star
    std::vector<double> grid_z;  ///< z*(grid_m[i]) <= 0, back() == 0

    double z_at(double m) const;
    Stage stage_of(double m) const;
};

/// No m with a profitable launch before the boundary diverges: pi(m) - L + c <= 0
/// throughout the candidate final-push region.
struct NoLaunchRegion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive integrator could not meet its tolerance above the minimum step size.
struct StepFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// dz*/dm on a given stage. FinalPush requires pi(m) - L + c > 0 (throws NoLaunchRegion).
double boundary_slope(double m, double z, Stage stage, const ModelParams& params,
                      const ProfitSpec& profit, const GammaRoots& roots);

/// L'Hopital slope s > 0 of z*(m) ~ -s (m_star - m) at the peak.
double peak_slope(const ModelParams& params, const ProfitSpec& profit);

/// Second-order coefficient of the peak expansion z*(m_star - tau) = -s tau + b tau^2.
double peak_curvature_coeff(const ModelParams& params, const ProfitSpec& profit);

Boundary solve_boundary(const ModelParams& params, const ProfitSpec& profit,
                        const SolveOptions& opts = {});

}  // namespace gq
