#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "kfp/acceptance.hpp"
#include "kfp/experiment.hpp"

namespace {

constexpr int EXIT_NUMERICAL = 1;
constexpr int EXIT_CONFIG = 2;

int cmd_simulate(const std::string& config_path)
{
    const kfp::Config cfg = kfp::Config::load(config_path);
    const kfp::ScenarioResult res = kfp::run_scenario(cfg);
    const auto& last = res.trajectory.diagnostics.back();
    if (res.fd_trajectory && res.fd_trajectory->floor_activated)
        std::fprintf(stderr, "warning: the macroscopic coefficient floor activated; "
                             "the density dropped below its assumed lower bound\n");
    std::printf("run complete: %d steps to t = %g, mass drift %.3e, artifacts in %s\n",
                last.step, last.time,
                std::abs(last.mass - res.trajectory.initial_mass) / res.trajectory.initial_mass,
                res.output_dir.c_str());
    return 0;
}

int cmd_sweep(const std::string& config_path)
{
    const kfp::Config cfg = kfp::Config::load(config_path);
    kfp::Scenario sc = kfp::Scenario::from_config(cfg);
    std::vector<double> eps{0.5, 0.25, 0.125, 0.0625};
    if (cfg.has("sweep.epsilons")) eps = cfg.get_double_list("sweep.epsilons");
    if (cfg.has("sweep.t_final")) sc.solver.t_final = cfg.get_double("sweep.t_final");
    const int compare_times = static_cast<int>(cfg.get_int("sweep.compare_times", 25));

    const kfp::SweepResult res = kfp::epsilon_sweep(sc, eps, compare_times);
    std::filesystem::create_directories(sc.output_dir);
    auto out = kfp::open_artifact(sc.output_dir + "/sweep.csv", cfg.hash());
    out << "eps,sup_l2_dm_error\n";
    for (const auto& r : res.rows) out << r.eps << ',' << r.sup_error << '\n';

    kfp::json j{{"fitted_exponent", res.fitted_exponent},
                {"r_squared", res.r_squared},
                {"strictly_decreasing", res.strictly_decreasing}};
    kfp::write_json(j, sc.output_dir + "/sweep_fit.json", cfg.hash());

    std::printf("sweep complete: exponent %.4f (r^2 %.4f), %s\n", res.fitted_exponent, res.r_squared,
                res.strictly_decreasing ? "errors strictly decreasing" : "errors NOT monotone");
    return 0;
}

int cmd_oracle_check(const std::string& config_path)
{
    const kfp::Config cfg = kfp::Config::load(config_path);
    kfp::Scenario sc = kfp::Scenario::from_config(cfg);
    if (sc.solver.collision_mode != kfp::CollisionMode::kolmogorov)
        throw kfp::ConfigError("solver.collision_mode", "oracle-check requires collision_mode = kolmogorov");
    const double t = cfg.get_double("oracle.time", 0.25);
    const int levels = static_cast<int>(cfg.get_int("oracle.dt_levels", 2));

    const kfp::OracleCheckResult res = kfp::oracle_check(sc, t, levels);
    std::filesystem::create_directories(sc.output_dir);
    kfp::json j{{"rel_linf", res.rel_linf},
                {"rel_l2", res.rel_l2},
                {"richardson_order", res.richardson_order},
                {"self_errors", res.self_errors}};
    kfp::write_json(j, sc.output_dir + "/oracle_check.json", cfg.hash());
    std::printf("oracle check: rel Linf %.3e, rel L2 %.3e, order %.3f\n", res.rel_linf, res.rel_l2,
                res.richardson_order);
    return 0;
}

/// summarize a finished run directory from its diagnostics series
int cmd_report(const std::string& run_dir)
{
    const std::string path = run_dir + "/diagnostics.csv";
    std::ifstream in(path);
    if (!in) {
        std::fprintf(stderr, "error: cannot open %s\n", path.c_str());
        return EXIT_CONFIG;
    }
    std::string line;
    std::getline(in, line);  // hash
    std::getline(in, line);  // header
    std::vector<double> t, mass, l2, entropy;
    double mn_h = 1e300, mx_h = -1e300;
    while (std::getline(in, line)) {
        kfp::StepDiagnostics d;
        if (std::sscanf(line.c_str(), "%*d,%lf,%lf,%lf,%lf,%lf,%lf", &d.time, &d.mass, &d.min_h,
                        &d.max_h, &d.l2_dm_dist_to_M0, &d.entropy_Hbeta_vs_1) < 6)
            continue;
        t.push_back(d.time);
        mass.push_back(d.mass);
        l2.push_back(d.l2_dm_dist_to_M0);
        entropy.push_back(d.entropy_Hbeta_vs_1);
        mn_h = std::min(mn_h, d.min_h);
        mx_h = std::max(mx_h, d.max_h);
    }
    if (t.size() < 3) {
        std::fprintf(stderr, "error: %s holds no usable rows\n", path.c_str());
        return EXIT_CONFIG;
    }
    kfp::json j;
    j["steps"] = t.size() - 1;
    j["t_final"] = t.back();
    j["mass_drift"] = std::abs(mass.back() - mass.front()) / std::abs(mass.front());
    j["min_h"] = mn_h;
    j["max_h"] = mx_h;
    bool entropy_monotone = true;
    for (std::size_t k = 1; k < entropy.size(); ++k)
        entropy_monotone = entropy_monotone && entropy[k] <= entropy[k - 1] + 1e-10;
    j["entropy_monotone"] = entropy_monotone;
    try {
        const auto fit = kfp::fit_decay_rate(t, l2, kfp::FitMode::exponential, 1.0, t.back());
        j["l2_decay_rate"] = fit.rate;
        j["l2_decay_r_squared"] = fit.r_squared;
    } catch (const std::exception&) {
        j["l2_decay_rate"] = nullptr;
    }
    kfp::write_json(j, run_dir + "/report.json", 0);
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"phase-space simulator and verification suite for the nonlinear kinetic "
                 "Fokker-Planck equation and its fast-diffusion limit"};
    app.require_subcommand(1);

    std::string config_path, run_dir;

    auto* sim = app.add_subcommand("simulate", "run one scenario from a config file");
    sim->add_option("config", config_path, "config file")->required();

    auto* sweep = app.add_subcommand("sweep", "diffusion-limit scaling sweep");
    sweep->add_option("config", config_path, "config file")->required();

    auto* oracle = app.add_subcommand("oracle-check", "compare the linear mode with the fundamental solution");
    oracle->add_option("config", config_path, "config file")->required();

    auto* report = app.add_subcommand("report", "summarize a finished run directory");
    report->add_option("run_dir", run_dir, "run directory")->required();

    auto* accept = app.add_subcommand("acceptance", "run the full verification suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path);
        if (sweep->parsed()) return cmd_sweep(config_path);
        if (oracle->parsed()) return cmd_oracle_check(config_path);
        if (report->parsed()) return cmd_report(run_dir);
        if (accept->parsed()) return kfp::acceptance::report(kfp::acceptance::run_all());
    } catch (const kfp::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return EXIT_CONFIG;
    } catch (const kfp::NumericalAbort& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return EXIT_NUMERICAL;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return EXIT_NUMERICAL;
    }
    return 0;
}
