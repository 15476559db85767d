#include "gritquit/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gritquit/io.hpp"
#include "gritquit/maxima.hpp"
#include "gritquit/numerics.hpp"
#include "gritquit/value.hpp"

namespace gq {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int env_threads() {
    const char* raw = std::getenv("GRITQUIT_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || v < 0 || v > 4096)
        throw std::invalid_argument("GRITQUIT_THREADS must be an integer in [0, 4096]");
    return static_cast<int>(v);
}

struct Artifacts {
    std::filesystem::path dir;
    json names = json::array();
    json timings = json::object();

    explicit Artifacts(const std::string& out) : dir(out) {
        std::filesystem::create_directories(dir);
    }

    void write_text(const std::string& name, const std::string& content) {
        std::ofstream os(dir / name, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
        os << content;
        names.push_back(name);
    }

    void write_json(const std::string& name, const json& j) { write_text(name, j.dump(2) + "\n"); }

    void manifest(const std::string& command, const RunConfig& cfg, const json& options) {
        const json m{{"tool", "gritquit"},     {"version", kCliVersion},
                     {"command", command},     {"config", config_to_json(cfg)},
                     {"options", options},     {"artifacts", names},
                     {"timings_ms", timings}};
        std::ofstream os(dir / "manifest.json", std::ios::binary);
        os << m.dump(2) << "\n";
    }
};

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    double grid_step = 0.0;  // 0 = auto
    double tol = 1e-10;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON parameter file (defaults built in)");
    cmd->add_option("--out", opts.out_dir, "output directory for artifacts");
    cmd->add_option("--grid-step", opts.grid_step, "boundary node spacing (0 = auto)");
    cmd->add_option("--tol", opts.tol, "integrator local error tolerance");
}

RunConfig resolve_config(const CommonOpts& opts) {
    return opts.config_path.empty() ? benchmark_config() : load_config_file(opts.config_path);
}

int cmd_solve(const CommonOpts& common) {
    const RunConfig cfg = resolve_config(common);
    Artifacts art(common.out_dir);
    const auto t0 = Clock::now();
    const Boundary b = solve_boundary(cfg.params, cfg.profit, {common.grid_step, common.tol});
    art.timings["solve"] = ms_since(t0);

    std::ostringstream csv;
    write_boundary_csv(b, csv);
    art.write_text("boundary.csv", csv.str());
    art.write_json("boundary.json", boundary_to_json(b));
    art.timings["total"] = ms_since(t0);
    art.manifest("solve", cfg, json{{"grid_step", common.grid_step}, {"tol", common.tol}});
    std::cout << "m0=" << format_double(b.m0) << " m1=" << format_double(b.m1)
              << " m_star=" << format_double(b.m_star) << " z0=" << format_double(b.z_at(0.0))
              << "\n";
    return 0;
}

int cmd_value(const CommonOpts& common, int m_res, int z_res) {
    const RunConfig cfg = resolve_config(common);
    Artifacts art(common.out_dir);
    const auto t0 = Clock::now();
    const Boundary b = solve_boundary(cfg.params, cfg.profit, {common.grid_step, common.tol});
    art.timings["solve"] = ms_since(t0);

    std::ostringstream csv;
    write_value_csv(b, m_res, z_res, csv);
    art.write_text("value.csv", csv.str());
    art.timings["total"] = ms_since(t0);
    art.manifest("value", cfg,
                 json{{"grid_step", common.grid_step},
                      {"tol", common.tol},
                      {"m_res", m_res},
                      {"z_res", z_res}});
    std::cout << "W(0,0)=" << format_double(value(0.0, 0.0, b)) << "\n";
    return 0;
}

int cmd_simulate(const CommonOpts& common, SimConfig sim) {
    const RunConfig cfg = resolve_config(common);
    sim.threads = env_threads();
    Artifacts art(common.out_dir);
    const auto t0 = Clock::now();
    const Boundary b = solve_boundary(cfg.params, cfg.profit, {common.grid_step, common.tol});
    art.timings["solve"] = ms_since(t0);

    const auto t1 = Clock::now();
    std::vector<PathRow> rows;
    const SimStats stats = monte_carlo(b, sim, &rows);
    art.timings["simulate"] = ms_since(t1);

    std::ostringstream csv;
    write_paths_csv(rows, csv);
    art.write_text("paths.csv", csv.str());
    art.write_json("stats.json", stats_to_json(stats, sim));
    art.timings["total"] = ms_since(t0);
    art.manifest("simulate", cfg,
                 json{{"grid_step", common.grid_step},
                      {"tol", common.tol},
                      {"seed", sim.seed},
                      {"paths", sim.n_paths},
                      {"dt", sim.dt},
                      {"t_max", sim.t_max},
                      {"z_start", sim.z_start},
                      {"m_start", sim.m_start}});
    std::cout << "p_launch=" << format_double(stats.p_launch)
              << " mean_payoff=" << format_double(stats.mean_payoff) << "\n";
    return 0;
}

int cmd_sweep(const CommonOpts& common, const std::string& param, double rel_step) {
    const RunConfig cfg = resolve_config(common);
    Artifacts art(common.out_dir);
    const auto t0 = Clock::now();
    SweepOptions opts;
    opts.rel_step = rel_step;
    opts.solve = {common.grid_step, common.tol};
    const SweepReport rep = sweep(cfg.params, cfg.profit, parse_sweep_parameter(param), opts);
    art.timings["sweep"] = ms_since(t0);

    std::ostringstream csv;
    write_sweep_csv(rep, csv);
    art.write_text("sweep.csv", csv.str());
    art.write_json("sweep.json", sweep_to_json(rep));
    art.timings["total"] = ms_since(t0);
    art.manifest("sweep", cfg,
                 json{{"grid_step", common.grid_step},
                      {"tol", common.tol},
                      {"param", param},
                      {"rel_step", rel_step}});
    for (const auto& check : rep.checks)
        std::cout << sweep_parameter_name(rep.param) << " " << check.probe << " expected "
                  << check.expected << " delta " << format_double(check.delta_up) << " "
                  << check.verdict << "\n";
    return 0;
}

struct VerifyCheck {
    std::string name;
    double observed;
    double threshold;
    bool pass;
};

int cmd_verify(const CommonOpts& common, long paths, double dt, std::uint64_t seed) {
    const RunConfig cfg = resolve_config(common);
    const int threads = env_threads();
    Artifacts art(common.out_dir);
    const auto t0 = Clock::now();
    const Boundary b = solve_boundary(cfg.params, cfg.profit, {common.grid_step, common.tol});
    art.timings["solve"] = ms_since(t0);

    std::vector<VerifyCheck> checks;
    auto leq = [&checks](const std::string& name, double observed, double threshold) {
        checks.push_back({name, observed, threshold, std::abs(observed) <= threshold});
    };
    auto in_band = [&checks](const std::string& name, double observed, double lo, double hi) {
        checks.push_back({name, observed, hi, observed >= lo && observed <= hi});
    };

    // Cutoff equation residuals after polish.
    leq("cutoff_residual_m1", b.residual_m1, 1e-8);
    if (b.m0 > 0.0) leq("cutoff_residual_m0", b.residual_m0, 1e-8);

    // Interior m samples per stage, clear of the cutoffs.
    const double margin = 5.0 * b.grid_step;
    std::vector<double> sample_m;
    auto add_samples = [&](double lo, double hi) {
        if (hi - lo < 4.0 * margin) return;
        for (int i = 1; i <= 12; ++i)
            sample_m.push_back(lo + margin + (hi - lo - 2.0 * margin) * i / 13.0);
    };
    add_samples(0.0, b.m0);
    add_samples(b.m0, b.m1);
    add_samples(b.m1, b.m_star);

    double worst_vm = 0.0, worst_reflect = 0.0, worst_reflect_tol = 1.0, worst_sp = 0.0,
           worst_bhj = 0.0;
    double worst_ratio_lo = 4.0, worst_ratio_hi = 4.0;
    const double h_reflect = b.grid_step;
    const double h_sp = 1e-4 * b.profit.qbar;
    for (double m : sample_m) {
        worst_vm = std::max(worst_vm, std::abs(value_matching_residual(m, b)));

        const double w0 = value(0.0, m, b);
        const double tol_reflect =
            std::max(1e-3 * (std::abs(w0) + 1.0), 10.0 * b.grid_step * b.grid_step);
        const double refl = std::abs(reflection_residual(m, b, h_reflect));
        if (refl / tol_reflect > worst_reflect / worst_reflect_tol) {
            worst_reflect = refl;
            worst_reflect_tol = tol_reflect;
        }

        // Smooth pasting: forward difference must match its leading O(h) term.
        const double spr = smooth_pasting_residual_fd(m, b, h_sp);
        const double k = value(b.z_at(m), m, b) + b.params.c;
        const double predicted = -0.5 * h_sp * b.roots.gamma1 * b.roots.gamma2 * k;
        worst_sp = std::max(worst_sp, std::abs(spr - predicted) / (std::abs(predicted) + 1e-12));

        const double zs = b.z_at(m);
        for (int k_i = 1; k_i <= 6; ++k_i) {
            const double z = zs * static_cast<double>(k_i) / 8.0;
            worst_bhj = std::max(worst_bhj, std::abs(bhj_residual_analytic(z, m, b)));
            // The FD stencil must stay inside the continuation band (z*, 0):
            // outside it W is clamped and the second difference picks up the kink.
            const double h_fd = 1e-2;
            if (z + h_fd >= 0.0 || z - h_fd <= zs) continue;
            const double coarse = std::abs(bhj_residual_fd(z, m, b, h_fd));
            const double fine = std::abs(bhj_residual_fd(z, m, b, 0.5 * h_fd));
            if (fine > 1e-9) {
                const double ratio = coarse / fine;
                worst_ratio_lo = std::min(worst_ratio_lo, ratio);
                worst_ratio_hi = std::max(worst_ratio_hi, ratio);
            }
        }
    }
    leq("value_matching_max", worst_vm, 1e-9);
    leq("reflection_max_scaled", worst_reflect / worst_reflect_tol, 1.0);
    leq("smooth_pasting_rel_err", worst_sp, 0.25);
    leq("bhj_analytic_max", worst_bhj, 1e-8);
    in_band("bhj_fd_richardson_ratio_min", worst_ratio_lo, 3.5, 4.5);
    in_band("bhj_fd_richardson_ratio_max", worst_ratio_hi, 3.5, 4.5);

    // Generator on a constant: finite differences vanish, only -r(k+c) remains.
    {
        const double k = 2.5;
        const double res =
            generator_apply_fd([k](double) { return k; }, -0.3, 1e-3, b.params);
        leq("generator_constant", res + b.params.r * (k + b.params.c), 1e-12);
    }
    art.timings["residuals"] = ms_since(t0);

    // Monte Carlo cross-checks.
    const auto t_mc = Clock::now();
    {
        SimConfig sim;
        sim.n_paths = paths;
        sim.dt = dt;
        sim.t_max = std::max(40.0, 20.0 / b.params.r);
        sim.seed = seed;
        sim.threads = threads;
        const SimStats stats = monte_carlo(b, sim);
        const double w = value(0.0, 0.0, b);
        const double band =
            std::max(3.0 * stats.mean_payoff_se, 0.02 * std::abs(w) + 0.01);
        leq("w00_mc_gap", stats.mean_payoff - w, band);

        if (b.m0 > 0.0) {
            const double p_cf = 1.0 - two_barrier_lower_first(b.params.mu, b.params.sigma, 0.0,
                                                              b.z_at(0.0), b.m0);
            leq("p_launch_vs_closed_form", stats.p_launch - p_cf,
                3.0 * stats.p_launch_se + std::sqrt(dt));
        }
    }
    {
        const double x0 = b.m0 > 0.0 ? b.z_at(0.0) : -1.0;
        const double lower = b.m0 > 0.0 ? b.z_at(b.m0) : -2.0;
        const McEstimate est = two_barrier_lower_first_mc(b.params.mu, b.params.sigma, x0, lower,
                                                          0.0, paths, dt, seed + 1, threads);
        const double cf = two_barrier_lower_first(b.params.mu, b.params.sigma, x0, lower, 0.0);
        leq("two_barrier_mc_gap", est.estimate - cf, 3.0 * est.se + std::sqrt(dt));
    }
    {
        const MaxLaw law{b.params.mu, b.params.sigma, 1.0};
        const double level = law.mu * law.t;
        const McEstimate est = running_max_cdf_mc(law, level, paths, dt, seed + 2, threads);
        const double cf = running_max_cdf(law, level);
        leq("running_max_mc_gap", est.estimate - cf, 3.0 * est.se + std::sqrt(dt));
    }
    art.timings["monte_carlo"] = ms_since(t_mc);

    json out = json::array();
    bool all_pass = true;
    for (const auto& check : checks) {
        out.push_back({{"name", check.name},
                       {"observed", check.observed},
                       {"threshold", check.threshold},
                       {"pass", check.pass}});
        all_pass = all_pass && check.pass;
        std::cout << (check.pass ? "pass " : "FAIL ") << check.name << " observed "
                  << format_double(check.observed) << " threshold "
                  << format_double(check.threshold) << "\n";
    }
    art.write_json("verify.json", json{{"all_pass", all_pass}, {"checks", out}});
    art.timings["total"] = ms_since(t0);
    art.manifest("verify", cfg,
                 json{{"grid_step", common.grid_step},
                      {"tol", common.tol},
                      {"paths", paths},
                      {"dt", dt},
                      {"seed", seed}});
    return all_pass ? 0 : 3;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"impulse-controlled product development: boundary, value, simulation"};
    app.require_subcommand(1);

    CommonOpts solve_opts, value_opts, sim_opts, verify_opts, sweep_opts;
    int m_res = 121, z_res = 81;
    SimConfig sim;
    long verify_paths = 20000;
    double verify_dt = 1e-3;
    std::uint64_t verify_seed = 12345;
    std::string sweep_param;
    double rel_step = 0.01;

    auto* solve_cmd = app.add_subcommand("solve", "solve the free boundary and cutoffs");
    add_common(solve_cmd, solve_opts);

    auto* value_cmd = app.add_subcommand("value", "tabulate the value function on a grid");
    add_common(value_cmd, value_opts);

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo under the optimal policy");
    add_common(sim_cmd, sim_opts);
    sim_cmd->add_option("--seed", sim.seed, "master seed");
    sim_cmd->add_option("--paths", sim.n_paths, "number of paths");
    sim_cmd->add_option("--dt", sim.dt, "Euler step");
    sim_cmd->add_option("--t-max", sim.t_max, "horizon cap");
    sim_cmd->add_option("--z-start", sim.z_start, "initial drawdown (<= 0)");
    sim_cmd->add_option("--m-start", sim.m_start, "initial running max (>= 0)");

    auto* verify_cmd = app.add_subcommand("verify", "residual and Monte Carlo cross-checks");
    add_common(verify_cmd, verify_opts);
    verify_cmd->add_option("--paths", verify_paths, "Monte Carlo paths per check");
    verify_cmd->add_option("--dt", verify_dt, "Euler step for the checks");
    verify_cmd->add_option("--seed", verify_seed, "master seed");

    auto* sweep_cmd = app.add_subcommand("sweep", "comparative statics around the config");
    add_common(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--param", sweep_param, "parameter to sweep: R, L or qbar")
        ->required();
    sweep_cmd->add_option("--rel-step", rel_step, "relative perturbation size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(solve_opts);
        if (value_cmd->parsed()) return cmd_value(value_opts, m_res, z_res);
        if (sim_cmd->parsed()) return cmd_simulate(sim_opts, sim);
        if (verify_cmd->parsed()) return cmd_verify(verify_opts, verify_paths, verify_dt,
                                                    verify_seed);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts, sweep_param, rel_step);
    } catch (const ValidationError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const NoLaunchRegion& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace gq
