#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kfp/collision.hpp"
#include "kfp/entropy.hpp"
#include "kfp/field.hpp"
#include "kfp/transport.hpp"

namespace kfp {

enum class CoefficientUpdate { frozen, picard };
enum class CollisionIntegrator { exact, implicit_euler };

/// thrown when a step produces non-finite values; carries the step index
struct NumericalAbort : std::runtime_error {
    int step = -1;
    explicit NumericalAbort(int s)
        : std::runtime_error("numerical abort: non-finite field values at step " + std::to_string(s)),
          step(s)
    {
    }
};

struct SolverConfig {
    double eps = 1.0;
    double beta = 0.0;
    double dt = 0.0;  // 0 selects min(1e-2, eps^2/4)
    double t_final = 1.0;
    int n_x = 64;
    int n_v = 129;
    double v_max = 8.0;
    CollisionMode collision_mode = CollisionMode::fokker_planck;
    TransportScheme transport = TransportScheme::cubic;
    CoefficientUpdate coefficient_update = CoefficientUpdate::frozen;
    int picard_iters = 2;
    double picard_tol = 1e-10;
    CollisionIntegrator collision_integrator = CollisionIntegrator::exact;
    int snapshot_stride = 10;  // 0 disables intermediate snapshots
    std::optional<double> bound_lower;  // expected sandwich bounds, recorded per step
    std::optional<double> bound_upper;
    double sandwich_tol = 1e-8;
    bool track_entropy = true;

    void validate() const
    {
        if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("SolverConfig: eps must lie in (0,1]");
        if (!(beta >= 0 && beta <= 1)) throw std::invalid_argument("SolverConfig: beta must lie in [0,1]");
        if (!(t_final > 0)) throw std::invalid_argument("SolverConfig: t_final must be positive");
        if (dt < 0) throw std::invalid_argument("SolverConfig: dt must be nonnegative");
    }

    double effective_dt() const { return dt > 0 ? dt : std::min(1e-2, eps * eps / 4.0); }
};

/// one per-step diagnostics row; the CSV layout mirrors this struct
struct StepDiagnostics {
    int step = 0;
    double time = 0;
    double mass = 0;
    double min_h = 0;
    double max_h = 0;
    double l2_dm_dist_to_M0 = 0;
    double entropy_Hbeta_vs_1 = 0;
    double dissipation = 0;
    double min_x_mean_h = 0;
};

struct SolverState {
    double time = 0;
    int step_index = 0;
    PhaseField h;
};

struct Trajectory {
    std::vector<PhaseField> snapshots;           // at stride multiples plus the final state
    std::vector<StepDiagnostics> diagnostics;    // one row per step, including step 0
    double initial_mass = 0;
};

/// Strang-split integrator for (eps dt + v dx) h = eps^{-1} <h>^beta L_OU h:
/// half transport, velocity-space collision with the coefficient frozen at the
/// midpoint state, half transport.  The collision substep solves each column
/// either exactly through the eigenbasis of the discrete operator or by
/// backward Euler.  A kolmogorov mode (unit coefficient, plain velocity
/// Laplacian, f unknown) is provided for validation against the fundamental
/// solution.
class KineticSolver {
public:
    explicit KineticSolver(SolverConfig cfg)
        : cfg_(cfg), xgrid_(make_torus_grid(cfg.n_x)), vgrid_(make_velocity_grid(cfg.v_max, cfg.n_v)),
          op_(*vgrid_, cfg.collision_mode)
    {
        cfg_.validate();
    }

    const SolverConfig& config() const { return cfg_; }
    TorusGridPtr xgrid() const { return xgrid_; }
    VelocityGridPtr vgrid() const { return vgrid_; }
    const CollisionOperator& collision() const { return op_; }

    /// physical mass of the evolved unknown
    double mass(const PhaseField& field) const
    {
        std::vector<double> cols(static_cast<std::size_t>(field.nx()));
        for (int i = 0; i < field.nx(); ++i)
            cols[static_cast<std::size_t>(i)] = op_.column_mass(field.column(i));
        double m = pairwise_sum(cols) * field.xgrid->dx;
        if (cfg_.collision_mode == CollisionMode::kolmogorov)
            m *= static_cast<double>(field.nv()) * field.vgrid->dv;  // uniform weights -> Lebesgue dv
        return m;
    }

    /// advance the state by one time step of size dt
    void step(SolverState& state, double dt) const
    {
        PhaseField& h = state.h;
        transport_step_inplace(h, 0.5 * dt, cfg_.eps, cfg_.transport);
        collide(h, dt);
        transport_step_inplace(h, 0.5 * dt, cfg_.eps, cfg_.transport);
        state.time += dt;
        state.step_index += 1;
        if (!h.finite()) throw NumericalAbort(state.step_index);
        h.time = state.time;
    }

    /// run from the given initial data to t_final, recording diagnostics
    /// every step and snapshots at the configured stride
    Trajectory simulate(const PhaseField& h_in) const
    {
        check_initial(h_in);
        Trajectory traj;
        SolverState state;
        state.h = h_in;
        state.h.time = 0;
        traj.initial_mass = mass(state.h);

        const double dt = cfg_.effective_dt();
        const int n_steps = static_cast<int>(std::llround(cfg_.t_final / dt));
        traj.diagnostics.reserve(static_cast<std::size_t>(n_steps) + 1);
        traj.diagnostics.push_back(diagnostics_row(state, traj.initial_mass));
        if (cfg_.snapshot_stride > 0) traj.snapshots.push_back(state.h);

        for (int k = 1; k <= n_steps; ++k) {
            step(state, dt);
            traj.diagnostics.push_back(diagnostics_row(state, traj.initial_mass));
            if (cfg_.snapshot_stride > 0 && (k % cfg_.snapshot_stride == 0 || k == n_steps))
                traj.snapshots.push_back(state.h);
        }
        if (cfg_.snapshot_stride == 0) traj.snapshots.push_back(state.h);
        return traj;
    }

    StepDiagnostics diagnostics_row(const SolverState& state, double m0) const
    {
        StepDiagnostics d;
        d.step = state.step_index;
        d.time = state.time;
        d.mass = mass(state.h);
        d.min_h = *std::min_element(state.h.values.begin(), state.h.values.end());
        d.max_h = *std::max_element(state.h.values.begin(), state.h.values.end());
        if (cfg_.collision_mode == CollisionMode::fokker_planck) {
            d.l2_dm_dist_to_M0 = l2_distance_to_constant(state.h, m0);
            DensityField mean = velocity_mean(state.h);
            double mn = mean[0];
            for (int i = 1; i < mean.size(); ++i) mn = std::min(mn, mean[i]);
            d.min_x_mean_h = mn;
            // the phi family is defined for nonnegative states only
            if (cfg_.track_entropy && d.min_h >= 0.0) {
                d.entropy_Hbeta_vs_1 = relative_phi_entropy_to_one(state.h, cfg_.beta);
                d.dissipation = entropy_dissipation(state.h, cfg_.eps, cfg_.beta);
            }
        }
        return d;
    }

private:
    void check_initial(const PhaseField& h_in) const
    {
        if (h_in.nx() != cfg_.n_x || h_in.nv() != cfg_.n_v)
            throw std::invalid_argument("simulate: initial data grid does not match the configuration");
        if (!h_in.finite()) throw std::invalid_argument("simulate: initial data contains non-finite values");
        const Representation want = cfg_.collision_mode == CollisionMode::kolmogorov
                                        ? Representation::f
                                        : Representation::h;
        if (h_in.rep != want)
            throw std::invalid_argument("simulate: initial data representation does not match the collision mode");
    }

    void collide(PhaseField& h, double dt) const
    {
        std::vector<double> a(static_cast<std::size_t>(h.nx()), 1.0);
        if (cfg_.collision_mode == CollisionMode::fokker_planck) {
            for (int i = 0; i < h.nx(); ++i)
                a[static_cast<std::size_t>(i)] =
                    diffusion_coefficient(op_.column_mass(h.column(i)), cfg_.beta, cfg_.eps);
        }
        const bool picard = cfg_.collision_mode == CollisionMode::fokker_planck &&
                            cfg_.coefficient_update == CoefficientUpdate::picard && cfg_.beta > 0;
        const PhaseField saved = picard ? h : PhaseField();
        apply_collision(h, dt, a);

        if (picard) {
            // the collision conserves column masses, so the coefficient is
            // already self-consistent; iterate from the saved state until
            // the update stalls anyway
            for (int it = 0; it < cfg_.picard_iters; ++it) {
                double change = 0;
                for (int i = 0; i < h.nx(); ++i) {
                    const double ai =
                        diffusion_coefficient(op_.column_mass(h.column(i)), cfg_.beta, cfg_.eps);
                    change = std::max(change, std::abs(ai - a[static_cast<std::size_t>(i)]));
                    a[static_cast<std::size_t>(i)] = ai;
                }
                if (change <= cfg_.picard_tol) break;
                h = saved;
                apply_collision(h, dt, a);
            }
        }
    }

    void apply_collision(PhaseField& h, double dt, std::span<const double> a) const
    {
        for (int i = 0; i < h.nx(); ++i) {
            const double s = dt * a[static_cast<std::size_t>(i)];
            if (cfg_.collision_integrator == CollisionIntegrator::exact)
                op_.exact_step(h.column(i), s);
            else
                op_.implicit_euler_step(h.column(i), s);
        }
    }

    SolverConfig cfg_;
    TorusGridPtr xgrid_;
    VelocityGridPtr vgrid_;
    CollisionOperator op_;
};

}  // namespace kfp
