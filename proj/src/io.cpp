#include "gritquit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "gritquit/value.hpp"

namespace gq {

using nlohmann::json;

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

RunConfig benchmark_config() {
    RunConfig cfg;
    cfg.params = {1.0, 1.0, 0.5, 0.1, 0.5, 2.0};
    cfg.profit = {};
    cfg.profit.family = ProfitFamily::Quadratic;
    cfg.profit.peak_value = 10.0;
    cfg.profit.curvature = 1.0;
    cfg.profit.qbar = 3.0;
    return cfg;
}

json params_to_json(const ModelParams& p) {
    return json{{"mu", p.mu}, {"sigma", p.sigma}, {"r", p.r},
                {"c", p.c},   {"R", p.R},         {"L", p.L}};
}

ModelParams params_from_json(const json& j) {
    ModelParams p;
    p.mu = j.at("mu").get<double>();
    p.sigma = j.at("sigma").get<double>();
    p.r = j.at("r").get<double>();
    p.c = j.at("c").get<double>();
    p.R = j.at("R").get<double>();
    p.L = j.at("L").get<double>();
    return p;
}

json profit_to_json(const ProfitSpec& f) {
    if (f.family != ProfitFamily::Quadratic)
        throw std::invalid_argument("only quadratic profit specs serialize");
    return json{{"family", "quadratic"},
                {"peak_value", f.peak_value},
                {"curvature", f.curvature},
                {"qbar", f.qbar}};
}

ProfitSpec profit_from_json(const json& j) {
    ProfitSpec f;
    const std::string family = j.at("family").get<std::string>();
    if (family != "quadratic")
        throw std::invalid_argument("unknown profit family: " + family);
    f.family = ProfitFamily::Quadratic;
    f.peak_value = j.at("peak_value").get<double>();
    f.curvature = j.at("curvature").get<double>();
    f.qbar = j.at("qbar").get<double>();
    return f;
}

json config_to_json(const RunConfig& cfg) {
    json j = params_to_json(cfg.params);
    j["profit"] = profit_to_json(cfg.profit);
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    cfg.params = params_from_json(j);
    cfg.profit = profit_from_json(j.at("profit"));
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const json::exception& e) {
        throw std::invalid_argument("config schema error in " + path + ": " + e.what());
    }
}

namespace {

json finite_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

}  // namespace

json boundary_to_json(const Boundary& b) {
    json j;
    j["config"] = config_to_json({b.params, b.profit});
    j["cutoffs"] = {{"m0", b.m0}, {"m1", b.m1}, {"m_star", b.m_star}};
    j["residuals"] = {{"m0", finite_or_null(b.residual_m0)},
                      {"m1", finite_or_null(b.residual_m1)}};
    j["solver"] = {{"grid_step", b.grid_step},
                   {"tol", b.tol},
                   {"terminal_slope", b.terminal_slope}};
    j["grid"] = {{"m", b.grid_m}, {"z", b.grid_z}};
    return j;
}

Boundary boundary_from_json(const json& j) {
    const RunConfig cfg = config_from_json(j.at("config"));
    Boundary b;
    b.params = cfg.params;
    b.profit = cfg.profit;
    b.roots = gamma_roots(cfg.params);
    b.m0 = j.at("cutoffs").at("m0").get<double>();
    b.m1 = j.at("cutoffs").at("m1").get<double>();
    b.m_star = j.at("cutoffs").at("m_star").get<double>();
    const auto res0 = j.at("residuals").at("m0");
    const auto res1 = j.at("residuals").at("m1");
    b.residual_m0 = res0.is_null() ? std::numeric_limits<double>::quiet_NaN() : res0.get<double>();
    b.residual_m1 = res1.is_null() ? std::numeric_limits<double>::quiet_NaN() : res1.get<double>();
    b.grid_step = j.at("solver").at("grid_step").get<double>();
    b.tol = j.at("solver").at("tol").get<double>();
    b.terminal_slope = j.at("solver").at("terminal_slope").get<double>();
    b.grid_m = j.at("grid").at("m").get<std::vector<double>>();
    b.grid_z = j.at("grid").at("z").get<std::vector<double>>();
    if (b.grid_m.size() != b.grid_z.size() || b.grid_m.size() < 2)
        throw std::invalid_argument("boundary grid arrays malformed");
    return b;
}

void write_boundary_csv(const Boundary& b, std::ostream& os) {
    os << "m,z_star,stage\n";
    for (std::size_t i = 0; i < b.grid_m.size(); ++i)
        os << format_double(b.grid_m[i]) << ',' << format_double(b.grid_z[i]) << ','
           << stage_name(b.stage_of(b.grid_m[i])) << '\n';
}

void write_value_csv(const Boundary& b, int m_res, int z_res, std::ostream& os) {
    if (m_res < 2 || z_res < 2) throw std::invalid_argument("value grid needs >= 2 points per axis");
    double z_min = 0.0;
    for (double z : b.grid_z) z_min = std::min(z_min, z);
    z_min *= 1.25;
    if (z_min == 0.0) z_min = -1.0;
    os << "m,z,W,stage,decision\n";
    for (int i = 0; i < m_res; ++i) {
        const double m = b.m_star * static_cast<double>(i) / (m_res - 1);
        for (int k = 0; k < z_res; ++k) {
            const double z = z_min * (1.0 - static_cast<double>(k) / (z_res - 1));
            os << format_double(m) << ',' << format_double(z) << ','
               << format_double(value(z, m, b)) << ',' << stage_name(b.stage_of(m)) << ','
               << decision_name(decide(z, m, b)) << '\n';
        }
    }
}

void write_paths_csv(const std::vector<PathRow>& rows, std::ostream& os) {
    os << "path_id,outcome,t_end,launch_quality,n_restarts,discounted_payoff\n";
    for (const auto& row : rows)
        os << row.path_id << ',' << outcome_name(row.outcome) << ',' << format_double(row.t_end)
           << ',' << format_double(row.launch_quality) << ',' << row.n_restarts << ','
           << format_double(row.discounted_payoff) << '\n';
}

json stats_to_json(const SimStats& stats, const SimConfig& cfg) {
    json hist = json::object();
    for (const auto& [k, v] : stats.restart_histogram) hist[std::to_string(k)] = v;
    return json{
        {"n_paths", stats.n_paths},
        {"seed", cfg.seed},
        {"dt", cfg.dt},
        {"t_max", cfg.t_max},
        {"start", {{"z", cfg.z_start}, {"m", cfg.m_start}}},
        {"p_launch", {{"estimate", stats.p_launch}, {"se", stats.p_launch_se}}},
        {"p_abort", {{"estimate", stats.p_abort}, {"se", stats.p_abort_se}}},
        {"p_horizon_capped", stats.p_capped},
        {"mean_payoff",
         {{"estimate", finite_or_null(stats.mean_payoff)},
          {"se", finite_or_null(stats.mean_payoff_se)}}},
        {"mean_launch_quality",
         {{"estimate", finite_or_null(stats.mean_launch_quality)},
          {"se", finite_or_null(stats.mean_launch_quality_se)}}},
        {"mean_t_end", finite_or_null(stats.mean_t_end)},
        {"max_step_dm", stats.max_step_dm},
        {"restart_histogram", hist},
    };
}

json sweep_to_json(const SweepReport& rep) {
    json probes = json::array();
    for (const auto& p : rep.probes)
        probes.push_back({{"name", p.name},
                          {"at_m", finite_or_null(p.at_m)},
                          {"base", p.base},
                          {"up", p.up},
                          {"down", p.down},
                          {"up_half", p.up_half},
                          {"down_half", p.down_half}});
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"probe", c.probe},
                          {"expected", std::string(1, c.expected)},
                          {"delta_up", c.delta_up},
                          {"delta_up_half", c.delta_up_half},
                          {"delta_down", c.delta_down},
                          {"verdict", c.verdict}});
    return json{{"param", sweep_parameter_name(rep.param)},
                {"base_value", rep.base_value},
                {"rel_step", rep.rel_step},
                {"stage0_missing", rep.stage0_missing},
                {"all_enforced_pass", rep.all_enforced_pass()},
                {"probes", probes},
                {"checks", checks},
                {"notes", rep.notes}};
}

void write_sweep_csv(const SweepReport& rep, std::ostream& os) {
    os << "probe,at_m,base,up,down,up_half,down_half,expected,verdict\n";
    for (const auto& p : rep.probes) {
        const SignCheck* check = nullptr;
        for (const auto& c : rep.checks)
            if (c.probe == p.name) check = &c;
        os << p.name << ',' << format_double(p.at_m) << ',' << format_double(p.base) << ','
           << format_double(p.up) << ',' << format_double(p.down) << ','
           << format_double(p.up_half) << ',' << format_double(p.down_half) << ','
           << (check ? std::string(1, check->expected) : std::string("none")) << ','
           << (check ? check->verdict : "unasserted") << '\n';
    }
}

}  // namespace gq
