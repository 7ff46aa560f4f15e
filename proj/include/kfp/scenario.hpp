#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "kfp/config.hpp"
#include "kfp/fast_diffusion.hpp"
#include "kfp/field.hpp"
#include "kfp/solver.hpp"

namespace kfp {

/// canned initial-data recipes; every recipe checks its declared bounds at
/// construction so a scenario never starts from out-of-contract data
struct InitialRecipe {
    enum class Kind { equilibrium, cosine, bump, hermite, random_bounded };

    Kind kind = Kind::cosine;
    double mean = 1.25;
    double amplitude = 0.75;
    int mode = 1;         // cosine wavenumber
    double delta = 0.5;   // bump height
    double radius = 0.5;  // bump x-half-width; velocity half-width is radius/tau
    double tau = 1.0;
    double x0 = 0.5;
    double v0 = 0.0;
    int hermite_k = 1;
    double lambda = 0.5;  // declared bounds for random data
    double Lambda = 2.0;
    std::uint64_t seed = 1;

    static InitialRecipe from_config(const Config& cfg)
    {
        InitialRecipe r;
        const std::string kind = cfg.get_string("initial.recipe");
        if (kind == "equilibrium") r.kind = Kind::equilibrium;
        else if (kind == "cosine") r.kind = Kind::cosine;
        else if (kind == "bump") r.kind = Kind::bump;
        else if (kind == "hermite") r.kind = Kind::hermite;
        else if (kind == "random") r.kind = Kind::random_bounded;
        else throw ConfigError("initial.recipe", "unknown initial recipe: " + kind);
        r.mean = cfg.get_double("initial.mean", r.mean);
        r.amplitude = cfg.get_double("initial.amplitude", r.amplitude);
        r.mode = static_cast<int>(cfg.get_int("initial.mode", r.mode));
        r.delta = cfg.get_double("initial.delta", r.delta);
        r.radius = cfg.get_double("initial.radius", r.radius);
        r.tau = cfg.get_double("initial.tau", r.tau);
        r.x0 = cfg.get_double("initial.x0", r.x0);
        r.v0 = cfg.get_double("initial.v0", r.v0);
        r.hermite_k = static_cast<int>(cfg.get_int("initial.hermite_k", r.hermite_k));
        r.lambda = cfg.get_double("initial.lambda", r.lambda);
        r.Lambda = cfg.get_double("initial.Lambda", r.Lambda);
        r.seed = static_cast<std::uint64_t>(cfg.get_int("initial.seed", 1));
        return r;
    }

    /// macroscopic profile of the well-prepared lift (h_in(x,v) = rho_in(x))
    double rho_at(double x) const
    {
        switch (kind) {
            case Kind::equilibrium: return mean;
            case Kind::cosine: return mean + amplitude * std::cos(2.0 * PI * mode * x);
            default:
                throw std::invalid_argument("initial recipe: no macroscopic profile for this kind");
        }
    }

    PhaseField build(Representation rep, TorusGridPtr xg, VelocityGridPtr vg) const
    {
        PhaseField h(rep, xg, vg);
        switch (kind) {
            case Kind::equilibrium:
                h.fill([&](double, double) { return mean; });
                break;
            case Kind::cosine:
                if (!(mean - std::abs(amplitude) > 0))
                    throw std::invalid_argument("initial recipe: cosine profile must stay positive");
                h.fill([&](double x, double) { return rho_at(x); });
                break;
            case Kind::bump:
                if (!(delta > 0)) throw std::invalid_argument("initial recipe: bump height must be positive");
                h.fill([&](double x, double v) {
                    const bool in_x = std::abs(wrap_symmetric(x - x0)) < radius;
                    const bool in_v = std::abs(v - v0) < radius / tau;
                    return in_x && in_v ? delta : 0.0;
                });
                break;
            case Kind::hermite:
                h.fill([&](double, double v) { return mean + amplitude * hermite_he(hermite_k, v); });
                break;
            case Kind::random_bounded: {
                // smooth seeded profile mapped affinely into [lambda, Lambda]
                if (!(Lambda > lambda)) throw std::invalid_argument("initial recipe: need Lambda > lambda");
                std::mt19937_64 rng(seed);
                std::uniform_real_distribution<double> u(-1.0, 1.0);
                const int modes = 3;
                std::vector<double> ax(modes), bx(modes), av(modes);
                for (int m = 0; m < modes; ++m) { ax[m] = u(rng); bx[m] = u(rng); av[m] = u(rng); }
                h.fill([&](double x, double v) {
                    double s = 0;
                    for (int m = 0; m < modes; ++m)
                        s += ax[m] * std::cos(2.0 * PI * (m + 1) * x) + bx[m] * std::sin(2.0 * PI * (m + 1) * x) +
                             av[m] * std::cos((m + 1) * v * 0.5);
                    // map [-3 modes, 3 modes] into (0,1)
                    const double t = 0.5 + s / (6.0 * modes);
                    return lambda + (Lambda - lambda) * t;
                });
                break;
            }
        }
        // bound check at construction
        for (double x : h.values)
            if (!(x >= -1e-15)) throw std::invalid_argument("initial recipe: produced negative values");
        return h;
    }

    DensityField build_density(TorusGridPtr xg) const
    {
        DensityField rho(xg);
        for (int i = 0; i < rho.size(); ++i) rho[i] = rho_at(xg->nodes[static_cast<std::size_t>(i)]);
        return rho;
    }
};

/// a named batch run: kinetic configuration, optional macroscopic companion,
/// output destination and diagnostic toggles
struct Scenario {
    std::string name = "run";
    InitialRecipe initial;
    SolverConfig solver;
    bool run_fd = false;
    FdConfig fd;
    std::string output_dir = "out";
    bool entropy_report = true;
    bool positivity_report = false;
    double entropy_delta = 0.1;

    static Scenario from_config(const Config& cfg)
    {
        Scenario s;
        s.name = cfg.get_string("scenario.name", "run");
        s.output_dir = cfg.get_string("output.directory", "out");
        s.entropy_report = cfg.get_bool("output.entropy", true);
        s.positivity_report = cfg.get_bool("output.positivity", false);
        s.entropy_delta = cfg.get_double("output.entropy_delta", 0.1);

        SolverConfig& sc = s.solver;
        sc.n_x = static_cast<int>(cfg.get_int("grid.n_x"));
        sc.n_v = static_cast<int>(cfg.get_int("grid.n_v"));
        sc.v_max = cfg.get_double("grid.v_max", 8.0);
        sc.eps = cfg.get_double("solver.epsilon", 1.0);
        sc.beta = cfg.get_double("solver.beta");
        sc.dt = cfg.get_double("solver.dt", 0.0);
        sc.t_final = cfg.get_double("solver.t_final");
        const std::string mode = cfg.get_string("solver.collision_mode", "fokker_planck");
        if (mode == "fokker_planck") sc.collision_mode = CollisionMode::fokker_planck;
        else if (mode == "kolmogorov") sc.collision_mode = CollisionMode::kolmogorov;
        else throw ConfigError("solver.collision_mode", "unknown collision mode: " + mode);
        sc.transport = transport_scheme_from_string(cfg.get_string("solver.transport", "cubic"));
        const std::string cu = cfg.get_string("solver.coefficient_update", "frozen");
        if (cu == "frozen") sc.coefficient_update = CoefficientUpdate::frozen;
        else if (cu == "picard") sc.coefficient_update = CoefficientUpdate::picard;
        else throw ConfigError("solver.coefficient_update", "unknown coefficient update: " + cu);
        sc.picard_iters = static_cast<int>(cfg.get_int("solver.picard_iters", 2));
        sc.picard_tol = cfg.get_double("solver.picard_tol", 1e-10);
        const std::string ci = cfg.get_string("solver.collision_integrator", "exact");
        if (ci == "exact") sc.collision_integrator = CollisionIntegrator::exact;
        else if (ci == "implicit_euler") sc.collision_integrator = CollisionIntegrator::implicit_euler;
        else throw ConfigError("solver.collision_integrator", "unknown collision integrator: " + ci);
        sc.snapshot_stride = static_cast<int>(cfg.get_int("output.snapshot_stride", 10));
        if (cfg.has("solver.sandwich_lambda")) sc.bound_lower = cfg.get_double("solver.sandwich_lambda");
        if (cfg.has("solver.sandwich_Lambda")) sc.bound_upper = cfg.get_double("solver.sandwich_Lambda");
        sc.sandwich_tol = cfg.get_double("solver.sandwich_tol", 1e-8);
        sc.track_entropy = cfg.get_bool("output.diagnostics", true);

        s.initial = InitialRecipe::from_config(cfg);

        s.run_fd = cfg.get_bool("fd.enabled", false);
        if (s.run_fd) {
            s.fd.beta = cfg.get_double("fd.beta", sc.beta);
            s.fd.dt = cfg.get_double("fd.dt", 1e-5);
            s.fd.n_x = static_cast<int>(cfg.get_int("fd.n_x", sc.n_x));
            s.fd.t_final = cfg.get_double("fd.t_final", sc.t_final);
            s.fd.snapshot_stride = static_cast<int>(cfg.get_int("fd.snapshot_stride", 100));
            s.fd.lambda_floor = cfg.get_double("fd.lambda_floor", 1e-8);
        }
        return s;
    }
};

}  // namespace kfp
