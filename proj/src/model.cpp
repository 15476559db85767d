#include "gritquit/model.hpp"

#include <cmath>
#include <sstream>

namespace gq {

double ProfitSpec::value(double q) const {
    if (family == ProfitFamily::Quadratic) {
        const double d = q - qbar;
        return peak_value - curvature * d * d;
    }
    return custom_value(q);
}

double ProfitSpec::slope(double q) const {
    if (family == ProfitFamily::Quadratic) return -2.0 * curvature * (q - qbar);
    return custom_slope(q);
}

double ProfitSpec::curve(double q) const {
    if (family == ProfitFamily::Quadratic) return -2.0 * curvature;
    return custom_curve(q);
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& issue : issues) {
        if (&issue != &issues.front()) os << "; ";
        os << issue.message;
    }
    return os.str();
}

ValidationError::ValidationError(ValidationReport rep)
    : std::runtime_error(rep.to_string()), report(std::move(rep)) {}

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

ValidationReport validate(const ModelParams& params, const ProfitSpec& profit) {
    ValidationReport rep;
    auto add = [&rep](Violation code, const std::string& msg) {
        rep.issues.push_back({code, msg});
    };

    if (!positive_finite(params.mu)) add(Violation::BadDomain, "mu must be finite and > 0");
    if (!positive_finite(params.sigma)) add(Violation::BadDomain, "sigma must be finite and > 0");
    if (!positive_finite(params.r)) add(Violation::BadDomain, "r must be finite and > 0");
    if (!positive_finite(params.c)) add(Violation::BadDomain, "c must be finite and > 0");
    if (!std::isfinite(params.R) || !std::isfinite(params.L))
        add(Violation::BadDomain, "R and L must be finite");
    if (!positive_finite(profit.qbar)) add(Violation::BadDomain, "qbar must be finite and > 0");

    if (!(params.c < params.R)) add(Violation::OrderingViolation, "require c < R");
    if (!(params.R < params.L)) add(Violation::OrderingViolation, "require R < L");

    if (profit.family == ProfitFamily::Custom &&
        (!profit.custom_value || !profit.custom_slope || !profit.custom_curve)) {
        add(Violation::BadDomain, "custom profit needs value, slope and curve callables");
        return rep;  // cannot probe the callables below
    }

    if (profit.family == ProfitFamily::Quadratic) {
        if (!positive_finite(profit.curvature))
            add(Violation::NonConcaveProfit, "quadratic profit needs curvature > 0");
        if (!std::isfinite(profit.peak_value))
            add(Violation::BadDomain, "peak_value must be finite");
    } else {
        // Sample strict concavity on [0, 1.1*qbar]; a peak at qbar needs curvature < 0 there.
        const int n = 101;
        for (int i = 0; i <= n; ++i) {
            const double q = 1.1 * profit.qbar * static_cast<double>(i) / n;
            if (!(profit.curve(q) < 0.0)) {
                add(Violation::NonConcaveProfit, "profit curvature must be < 0 on [0, 1.1*qbar]");
                break;
            }
        }
    }
    if (std::abs(profit.slope(profit.qbar)) > 1e-10)
        add(Violation::NonConcaveProfit, "profit slope at qbar must vanish");

    if (rep.ok() && !(profit.value(profit.qbar) > params.L))
        add(Violation::NonViableMarket, "peak profit must exceed the launch cost L");

    return rep;
}

void require_valid(const ModelParams& params, const ProfitSpec& profit) {
    ValidationReport rep = validate(params, profit);
    if (!rep.ok()) throw ValidationError(std::move(rep));
}

GammaRoots gamma_roots(const ModelParams& params) {
    const double s2 = params.sigma * params.sigma;
    const double a = params.mu / s2;
    const double q = 2.0 * params.r / s2;
    const double d = std::sqrt(a * a + q);
    // gamma1 = -a + d rationalized via gamma1*gamma2 = -q to keep full precision for small q.
    return {q / (a + d), -(a + d)};
}

namespace {

void check_kernel_arg(double x, const GammaRoots& roots) {
    if (std::abs(roots.gamma1 * x) > 700.0 || std::abs(roots.gamma2 * x) > 700.0)
        throw OverflowGuard("kernel argument out of range: |gamma*x| > 700");
}

}  // namespace

// Factored form e^{m x} * (gamma1 e^{-d x} - gamma2 e^{d x}) / (gamma1 - gamma2),
// m = (gamma1+gamma2)/2, d = (gamma1-gamma2)/2: one fewer catastrophic regime for large |x|.
double g_eval(double x, const GammaRoots& roots) {
    check_kernel_arg(x, roots);
    const double m = 0.5 * (roots.gamma1 + roots.gamma2);
    const double d = 0.5 * (roots.gamma1 - roots.gamma2);
    return std::exp(m * x) * (roots.gamma1 * std::exp(-d * x) - roots.gamma2 * std::exp(d * x)) /
           (roots.gamma1 - roots.gamma2);
}

double g_prime(double x, const GammaRoots& roots) {
    check_kernel_arg(x, roots);
    const double m = 0.5 * (roots.gamma1 + roots.gamma2);
    const double d = 0.5 * (roots.gamma1 - roots.gamma2);
    const double p = roots.gamma1 * roots.gamma2;
    return p * std::exp(m * x) * (std::exp(-d * x) - std::exp(d * x)) /
           (roots.gamma1 - roots.gamma2);
}

double g_dprime(double x, const GammaRoots& roots) {
    check_kernel_arg(x, roots);
    const double m = 0.5 * (roots.gamma1 + roots.gamma2);
    const double d = 0.5 * (roots.gamma1 - roots.gamma2);
    const double p = roots.gamma1 * roots.gamma2;
    return p * std::exp(m * x) *
           (roots.gamma2 * std::exp(-d * x) - roots.gamma1 * std::exp(d * x)) /
           (roots.gamma1 - roots.gamma2);
}

}  // namespace gq
