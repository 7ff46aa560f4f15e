#pragma once

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "kfp/config.hpp"
#include "kfp/io.hpp"
#include "kfp/kolmogorov.hpp"
#include "kfp/scenario.hpp"

namespace kfp {

/// run the macroscopic solver and capture the density at the requested times
/// (nearest step; the fd step is chosen much finer than the snapshot spacing)
inline std::vector<DensityField> fd_densities_at_times(const FdConfig& cfg, const DensityField& rho_in,
                                                       std::span<const double> times)
{
    cfg.validate();
    std::vector<DensityField> out;
    out.reserve(times.size());
    DensityField rho = rho_in;
    double t = 0;
    std::size_t k = 0;
    while (k < times.size() && times[k] <= 0.5 * cfg.dt) {
        out.push_back(rho);
        ++k;
    }
    const int n_steps = static_cast<int>(std::llround(times.empty() ? 0.0 : times.back() / cfg.dt)) + 1;
    for (int s = 1; s <= n_steps && k < times.size(); ++s) {
        fd_step(rho, cfg.dt, cfg.beta, cfg.lambda_floor);
        t = static_cast<double>(s) * cfg.dt;
        while (k < times.size() && t + 0.5 * cfg.dt >= times[k]) {
            out.push_back(rho);
            ++k;
        }
    }
    while (k < times.size()) {  // requested times beyond the integration horizon
        out.push_back(rho);
        ++k;
    }
    return out;
}

/// lift a macroscopic profile to the phase grid (constant in v)
inline PhaseField lift_density(const DensityField& rho, VelocityGridPtr vg, Representation rep)
{
    PhaseField h(Representation::h, rho.grid, vg);
    for (int i = 0; i < h.nx(); ++i)
        for (int j = 0; j < h.nv(); ++j) h.at(i, j) = rho[i];
    return convert(h, rep);
}

struct ScenarioResult {
    Trajectory trajectory;
    std::optional<FdTrajectory> fd_trajectory;
    std::vector<EntropyReportRow> entropy_rows;
    std::string output_dir;
};

/// execute one scenario and emit its artifact files (diagnostics CSV, entropy
/// CSV, snapshots, density CSV and optional reports); fully deterministic for
/// a fixed config text
inline ScenarioResult run_scenario(const Config& cfg)
{
    const Scenario sc = Scenario::from_config(cfg);
    const std::uint64_t hash = cfg.hash();
    std::filesystem::create_directories(sc.output_dir);

    KineticSolver solver(sc.solver);
    const Representation rep = sc.solver.collision_mode == CollisionMode::kolmogorov
                                   ? Representation::f
                                   : Representation::h;
    PhaseField h_in = sc.initial.build(Representation::h, solver.xgrid(), solver.vgrid());
    if (rep == Representation::f) h_in = convert(h_in, Representation::f);

    ScenarioResult res;
    res.output_dir = sc.output_dir;
    res.trajectory = solver.simulate(h_in);
    write_diagnostics_csv(res.trajectory.diagnostics, sc.output_dir + "/diagnostics.csv", hash);

    if (sc.run_fd) {
        DensityField rho_in = sc.initial.build_density(solver.xgrid());
        FdConfig fd = sc.fd;
        res.fd_trajectory = fd_simulate(fd, rho_in);
        write_fd_diagnostics_csv(res.fd_trajectory->diagnostics, sc.output_dir + "/fd_diagnostics.csv", hash);
        write_density_csv(res.fd_trajectory->snapshots.back(), res.fd_trajectory->snapshot_times.back(),
                          sc.output_dir + "/fd_final_density.csv", hash);
    }

    // entropy report over snapshots
    if (sc.entropy_report && sc.solver.collision_mode == CollisionMode::fokker_planck) {
        std::vector<double> times, min_mean_pow;
        for (const auto& d : res.trajectory.diagnostics) {
            times.push_back(d.time);
            min_mean_pow.push_back(std::pow(std::max(d.min_x_mean_h, 0.0), sc.solver.beta));
        }
        const auto env = LambdaEnvelope::build(times, min_mean_pow);

        std::vector<DensityField> rho_ref;
        if (sc.run_fd) {
            std::vector<double> snap_times;
            for (const auto& s : res.trajectory.snapshots) snap_times.push_back(s.time);
            rho_ref = fd_densities_at_times(sc.fd, sc.initial.build_density(solver.xgrid()), snap_times);
        }
        for (std::size_t k = 0; k < res.trajectory.snapshots.size(); ++k) {
            const PhaseField& h = res.trajectory.snapshots[k];
            EntropyReportRow row;
            row.time = h.time;
            row.H_beta_vs_1 = relative_phi_entropy_to_one(h, sc.solver.beta);
            row.dissipation = entropy_dissipation(h, sc.solver.eps, sc.solver.beta);
            if (!rho_ref.empty()) row.H_beta_vs_rho = relative_phi_entropy(h, rho_ref[k], sc.solver.beta);
            // envelope value at the snapshot time
            const auto it = std::lower_bound(env.times.begin(), env.times.end(), h.time - 1e-12);
            const std::size_t idx = static_cast<std::size_t>(std::distance(env.times.begin(), it));
            row.lambda_t = env.lambda[std::min(idx, env.lambda.size() - 1)];
            const auto me = modified_entropy(h, sc.solver.eps, sc.entropy_delta, row.lambda_t);
            row.E_eps = me.value;
            row.cross_term = me.cross_term;
            row.l2_dm = std::sqrt(me.l2_sq);
            res.entropy_rows.push_back(row);
        }
        write_entropy_csv(res.entropy_rows, sc.output_dir + "/entropy.csv", hash);
    }

    // stride snapshots plus the final state in both formats
    if (sc.solver.snapshot_stride > 0 && cfg.get_bool("output.save_snapshots", false)) {
        std::filesystem::create_directories(sc.output_dir + "/snapshots");
        char name[64];
        for (std::size_t k = 0; k < res.trajectory.snapshots.size(); ++k) {
            std::snprintf(name, sizeof name, "/snapshots/snap_%05zu.bin", k);
            snapshot::write_binary(res.trajectory.snapshots[k], sc.output_dir + name);
        }
    }
    if (!res.trajectory.snapshots.empty()) {
        snapshot::write_binary(res.trajectory.snapshots.back(), sc.output_dir + "/final_state.bin");
        snapshot::write_csv(res.trajectory.snapshots.back(), sc.output_dir + "/final_state.csv", hash);
    }

    // positivity report on the final state when requested
    if (sc.positivity_report && sc.solver.collision_mode == CollisionMode::fokker_planck) {
        json rep;
        BarrierParams bp;
        bp.delta = cfg.get_double("positivity.delta", sc.initial.delta);
        bp.r = cfg.get_double("positivity.r", sc.initial.radius);
        bp.tau = cfg.get_double("positivity.tau", sc.initial.tau);
        bp.x0 = cfg.get_double("positivity.x0", sc.initial.x0);
        bp.v0 = cfg.get_double("positivity.v0", sc.initial.v0);
        bp.c0 = cfg.get_double("positivity.c0", 0.01);
        rep["barrier"] = to_json(barrier_subsolution_check(bp, res.trajectory.snapshots,
                                                           sc.solver.t_final,
                                                           cfg.get_double("positivity.tol", 1e-6)));
        const PhaseField& fin = res.trajectory.snapshots.back();
        double mn = std::numeric_limits<double>::infinity();
        for (double v : fin.values) mn = std::min(mn, v);
        rep["min_h_final"] = mn;
        if (mn > 0) {
            const TailFit fit = gaussian_tail_fit(fin);
            rep["tail_fit"] = to_json(fit, tail_minorant_worst_margin(fin, fit));
        }
        write_json(rep, sc.output_dir + "/positivity_report.json", hash);
    }
    return res;
}

// ---------------------------------------------------------------------------
// diffusion-limit sweep
// ---------------------------------------------------------------------------

struct SweepRow {
    double eps = 0;
    double sup_error = 0;  // sup over output times of ||h_eps - rho|| in L^2(dm)
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double fitted_exponent = 0;
    double r_squared = 0;
    bool strictly_decreasing = false;
};

/// kinetic-versus-limit error over a list of scalings; well-prepared data
/// (h_in equal to the macroscopic profile) isolates the scaling rate
inline SweepResult epsilon_sweep(const Scenario& base, std::span<const double> eps_list,
                                 int n_compare_times = 50)
{
    SweepResult result;
    result.rows.resize(eps_list.size());

    auto run_one = [&](std::size_t idx) {
        const double eps = eps_list[idx];
        SolverConfig cfg = base.solver;
        cfg.eps = eps;
        if (base.solver.dt <= 0) cfg.dt = eps * eps / 8.0;
        KineticSolver solver(cfg);
        PhaseField h_in = base.initial.build(Representation::h, solver.xgrid(), solver.vgrid());
        // choose the snapshot stride to land near the requested comparison count
        const double dt = cfg.effective_dt();
        const int n_steps = static_cast<int>(std::llround(cfg.t_final / dt));
        SolverConfig cfg2 = cfg;
        cfg2.snapshot_stride = std::max(1, n_steps / n_compare_times);
        KineticSolver solver2(cfg2);
        const Trajectory traj = solver2.simulate(h_in);

        std::vector<double> snap_times;
        for (const auto& s : traj.snapshots) snap_times.push_back(s.time);
        FdConfig fd = base.fd;
        fd.n_x = cfg.n_x;
        fd.beta = cfg.beta;
        fd.t_final = cfg.t_final;
        const auto rho_ref = fd_densities_at_times(fd, base.initial.build_density(solver2.xgrid()), snap_times);

        double sup = 0;
        for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
            const PhaseField ref = lift_density(rho_ref[k], solver2.vgrid(), Representation::h);
            sup = std::max(sup, lp_norm_dm(traj.snapshots[k], ref, 2));
        }
        result.rows[idx] = SweepRow{eps, sup};
    };

    // sweep members are independent; run them on worker threads
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < eps_list.size(); ++i) workers.emplace_back(run_one, i);
    for (auto& w : workers) w.join();

    result.strictly_decreasing = true;
    for (std::size_t i = 1; i < result.rows.size(); ++i)
        result.strictly_decreasing =
            result.strictly_decreasing && result.rows[i].sup_error < result.rows[i - 1].sup_error;

    std::vector<double> es, errs;
    for (const auto& r : result.rows) { es.push_back(r.eps); errs.push_back(r.sup_error); }
    const auto fit = fit_decay_rate(es, errs, FitMode::power);
    result.fitted_exponent = fit.rate;
    result.r_squared = fit.r_squared;
    return result;
}

// ---------------------------------------------------------------------------
// solver-versus-fundamental-solution check
// ---------------------------------------------------------------------------

struct OracleCheckResult {
    double rel_linf = 0;
    double rel_l2 = 0;
    double richardson_order = 0;
    std::vector<double> self_errors;  // ||u_dt - u_{dt/2}||_inf for the dt ladder
};

/// run the solver in kolmogorov mode against the image-sum convolution of the
/// fundamental solution; the order estimate is a dt self-convergence ladder
inline OracleCheckResult oracle_check(const Scenario& base, double target_time, int n_dt_levels = 3)
{
    if (base.solver.collision_mode != CollisionMode::kolmogorov)
        throw std::invalid_argument("oracle_check: requires the kolmogorov collision mode");

    SolverConfig cfg = base.solver;
    cfg.t_final = target_time;
    cfg.snapshot_stride = 0;

    auto run_at = [&](double dt) {
        SolverConfig c = cfg;
        c.dt = dt;
        KineticSolver solver(c);
        PhaseField f_in = convert(base.initial.build(Representation::h, solver.xgrid(), solver.vgrid()),
                                  Representation::f);
        return solver.simulate(f_in).snapshots.back();
    };

    OracleCheckResult res;
    const double dt0 = cfg.effective_dt();
    const PhaseField numeric = run_at(dt0);

    {
        KineticSolver solver(cfg);
        PhaseField f_in = convert(base.initial.build(Representation::h, solver.xgrid(), solver.vgrid()),
                                  Representation::f);
        const PhaseField exact = oracle_solve(f_in, target_time);
        double linf = 0, ref = 0;
        for (std::size_t k = 0; k < exact.values.size(); ++k) {
            linf = std::max(linf, std::abs(numeric.values[k] - exact.values[k]));
            ref = std::max(ref, std::abs(exact.values[k]));
        }
        if (ref == 0.0) {  // identically zero data propagates to zero
            res.rel_linf = linf;
            res.rel_l2 = 0.0;
            return res;
        }
        res.rel_linf = linf / ref;
        // the L^2(dm) distance of the Maxwellian-normalized unknowns; the
        // division by mu weights tail discrepancies more heavily than the
        // pointwise f comparison above
        const PhaseField num_h = convert(numeric, Representation::h);
        const PhaseField ex_h = convert(exact, Representation::h);
        PhaseField zero_h = ex_h;
        std::fill(zero_h.values.begin(), zero_h.values.end(), 0.0);
        res.rel_l2 = lp_norm_dm(num_h, ex_h, 2) / lp_norm_dm(ex_h, zero_h, 2);
    }

    // Richardson self-convergence over a halving ladder
    std::vector<PhaseField> ladder{numeric};
    for (int l = 1; l <= n_dt_levels; ++l) ladder.push_back(run_at(dt0 / std::pow(2.0, l)));
    for (std::size_t l = 0; l + 1 < ladder.size(); ++l) {
        double d = 0;
        for (std::size_t k = 0; k < ladder[l].values.size(); ++k)
            d = std::max(d, std::abs(ladder[l].values[k] - ladder[l + 1].values[k]));
        res.self_errors.push_back(d);
    }
    if (res.self_errors.size() >= 2)
        res.richardson_order = std::log2(res.self_errors[0] / res.self_errors[1]);
    return res;
}

}  // namespace kfp
