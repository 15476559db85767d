#pragma once

#include <functional>

#include "gritquit/boundary.hpp"

namespace gq {

enum class Decision { Continue, Abort, Restart, Launch };

const char* decision_name(Decision d);

/// Discounted value of the optimally controlled project at drawdown z <= 0, running max m.
/// Below the boundary the state is instantly controlled, so W is the action value there.
double value(double z, double m, const Boundary& b);

/// Optimal action at (z, m): Continue strictly above the boundary, otherwise the
/// stage action; at or past m_star the project launches immediately.
Decision decide(double z, double m, const Boundary& b);

/// Generator residual A[f](z) = (sigma^2/2) f'' + mu f' - r f - r c at fixed m,
/// second-order central differences with spacing h.
double generator_apply_fd(const std::function<double(double)>& f, double z, double h,
                          const ModelParams& params);

/// A[W](z, m) with analytic derivatives of the closed form; zero up to rounding.
double bhj_residual_analytic(double z, double m, const Boundary& b);

/// A[W](z, m) with finite differences; O(h^2) truncation.
double bhj_residual_fd(double z, double m, const Boundary& b, double h);

/// W_m(0, m) - W_z(0, m): the reflection identity that generates the boundary ODE.
/// W_m is central in m, W_z one-sided second order into z < 0.
double reflection_residual(double m, const Boundary& b, double h);

/// W_z at the boundary approach z*(m)+ (analytically zero: the action values are flat in z).
double smooth_pasting_residual_fd(double m, const Boundary& b, double h);

/// W(z*(m), m) minus the stage action value (0 / -R + W(0,m) / pi(m) - L).
double value_matching_residual(double m, const Boundary& b);

}  // namespace gq
