#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gq {

/// Environment parameters. Units: mu, sigma per unit time; r, c, R, L in payoff units.
/// Admissible region: mu, sigma, r, c > 0 and c < R < L.
struct ModelParams {
    double mu = 1.0;     ///< progress drift
    double sigma = 1.0;  ///< progress volatility
    double r = 0.5;      ///< discount rate
    double c = 0.1;      ///< flow cost while active
    double R = 0.5;      ///< restart (pivot) cost
    double L = 2.0;      ///< launch cost
};

enum class ProfitFamily { Quadratic, Custom };

/// Launch profit q -> pi(q), strictly concave with an interior peak at qbar.
/// Quadratic: pi(q) = peak_value - curvature * (q - qbar)^2.
/// Custom supplies value/slope/curve callables; qbar must still locate the peak.
struct ProfitSpec {
    ProfitFamily family = ProfitFamily::Quadratic;
    double peak_value = 10.0;
    double curvature = 1.0;
    double qbar = 3.0;

    std::function<double(double)> custom_value;
    std::function<double(double)> custom_slope;
    std::function<double(double)> custom_curve;

    double value(double q) const;
    double slope(double q) const;
    double curve(double q) const;
};

enum class Violation {
    BadDomain,          ///< non-positive or non-finite core parameter
    OrderingViolation,  ///< c < R < L broken
    NonViableMarket,    ///< pi(qbar) <= L: launching never pays
    NonConcaveProfit,   ///< curvature check failed or slope(qbar) != 0
};

struct ValidationIssue {
    Violation code;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(ValidationReport rep);
    ValidationReport report;
};

ValidationReport validate(const ModelParams& params, const ProfitSpec& profit);
void require_valid(const ModelParams& params, const ProfitSpec& profit);

/// Characteristic roots of (sigma^2/2) f'' + mu f' - r f = 0, gamma1 > 0 > gamma2.
/// gamma1 is computed in rationalized form to avoid cancellation when r/sigma^2 is small.
struct GammaRoots {
    double gamma1;
    double gamma2;
};

GammaRoots gamma_roots(const ModelParams& params);

/// Thrown when a kernel argument would overflow exp (|gamma_i * x| > 700).
struct OverflowGuard : std::domain_error {
    using std::domain_error::domain_error;
};

/// Increasing kernel g(x) = (gamma1 e^{gamma2 x} - gamma2 e^{gamma1 x}) / (gamma1 - gamma2).
/// Normalized so g(0) = 1, g'(0) = 0; solves the ODE above with these initial conditions.
double g_eval(double x, const GammaRoots& roots);
double g_prime(double x, const GammaRoots& roots);
double g_dprime(double x, const GammaRoots& roots);

}  // namespace gq
