#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kfp/entropy.hpp"
#include "kfp/solver.hpp"

using namespace kfp;

TEST_CASE("phi generator values")
{
    for (double beta : {0.0, 0.25, 0.5, 0.75, 1.0})
        CHECK(phi_entropy_generator(beta, 1.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(phi_entropy_generator(0.0, 2.0) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(phi_entropy_generator(1.0, 2.0) == Catch::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-14));
    CHECK(phi_entropy_generator(1.0, 0.0) == 1.0);
    CHECK(phi_entropy_generator(0.5, 0.0) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(phi_entropy_generator(0.5, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(phi_entropy_generator(1.5, 1.0), std::invalid_argument);

    SECTION("continuity in beta near one")
    {
        for (double z : {0.3, 1.7, 2.5}) {
            const double limit = phi_entropy_generator(1.0, z);
            CHECK(phi_entropy_generator(1.0 - 1e-7, z) == Catch::Approx(limit).margin(1e-6));
            CHECK(phi_entropy_generator(1.0 - 1e-9, z) == Catch::Approx(limit).margin(1e-8));
        }
    }
}

TEST_CASE("relative phi-entropy examples")
{
    const auto xg = make_torus_grid(16);
    const auto vg = make_velocity_grid(8.0, 33);
    PhaseField two(Representation::h, xg, vg, 2.0);
    PhaseField one(Representation::h, xg, vg, 1.0);

    CHECK(relative_phi_entropy(two, two, 0.7) == Catch::Approx(0.0).margin(1e-14));
    CHECK(relative_phi_entropy(two, one, 0.0) == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(relative_phi_entropy(two, one, 1.0) ==
          Catch::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-13));

    DensityField rho(xg, 1.0);
    CHECK(relative_phi_entropy(two, rho, 1.0) ==
          Catch::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-13));

    PhaseField zero(Representation::h, xg, vg, 0.0);
    CHECK_THROWS_AS(relative_phi_entropy(two, zero, 0.5), std::invalid_argument);

    SECTION("nonnegativity on random bounded pairs")
    {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> u(0.1, 3.0);
        for (int trial = 0; trial < 100; ++trial) {
            PhaseField a(Representation::h, xg, vg), b(Representation::h, xg, vg);
            for (double& x : a.values) x = u(rng);
            for (double& x : b.values) x = u(rng);
            const double beta = 0.25 * (trial % 5);
            CHECK(relative_phi_entropy(a, b, beta) >= -1e-12);
        }
    }
}

TEST_CASE("entropy-distance comparison bounds")
{
    const auto xg = make_torus_grid(16);
    const auto vg = make_velocity_grid(8.0, 33);

    SECTION("worked example at beta = 1")
    {
        PhaseField two(Representation::h, xg, vg, 2.0);
        PhaseField one(Representation::h, xg, vg, 1.0);
        const auto rep = ck_bounds_check(two, one, 1.0, 2.0, 1.0);
        CHECK(rep.lower_bound == Catch::Approx(0.25).epsilon(1e-12));
        CHECK(rep.entropy == Catch::Approx(0.3862943611).epsilon(1e-9));
        CHECK(rep.upper_bound == Catch::Approx(0.5).epsilon(1e-12));
        CHECK(rep.lower_ok);
        CHECK(rep.upper_ok);
    }

    SECTION("beta = 0 is the equality case")
    {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(0.2, 1.8);
        PhaseField a(Representation::h, xg, vg), b(Representation::h, xg, vg);
        for (double& x : a.values) x = u(rng);
        for (double& x : b.values) x = u(rng);
        const auto rep = ck_bounds_check(a, b, 0.2, 1.8, 0.0);
        CHECK(rep.entropy == Catch::Approx(rep.norm_sq).epsilon(1e-12));
        CHECK(rep.lower_ok);
        CHECK(rep.upper_ok);
    }

    SECTION("random bounded pairs across beta")
    {
        std::mt19937_64 rng(37);
        std::uniform_real_distribution<double> u(0.3, 2.5);
        for (double beta : {0.25, 0.5, 1.0}) {
            for (int trial = 0; trial < 250; ++trial) {
                PhaseField a(Representation::h, xg, vg), b(Representation::h, xg, vg);
                for (double& x : a.values) x = u(rng);
                for (double& x : b.values) x = u(rng);
                const auto rep = ck_bounds_check(a, b, 0.3, 2.5, beta);
                CHECK(rep.slack >= -1e-12);
            }
        }
    }

    SECTION("bound hypotheses are enforced")
    {
        PhaseField big(Representation::h, xg, vg, 5.0);
        PhaseField one(Representation::h, xg, vg, 1.0);
        CHECK_THROWS_AS(ck_bounds_check(big, one, 1.0, 2.0, 0.5), std::invalid_argument);
    }
}

TEST_CASE("entropy dissipation functional")
{
    const auto xg = make_torus_grid(16);
    const auto vg = make_velocity_grid(8.0, 129);

    PhaseField c(Representation::h, xg, vg, 1.9);
    CHECK(entropy_dissipation(c, 1.0, 0.5) == Catch::Approx(0.0).margin(1e-13));

    SECTION("nonpositive on arbitrary positive fields")
    {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(0.5, 2.0);
        for (int trial = 0; trial < 50; ++trial) {
            PhaseField h(Representation::h, xg, vg);
            for (double& x : h.values) x = u(rng);
            CHECK(entropy_dissipation(h, 0.5, 0.5) <= 1e-12);
        }
    }

    SECTION("matches the finite-difference entropy slope on an x-homogeneous run")
    {
        SolverConfig cfg;
        cfg.n_x = 8;
        cfg.n_v = 129;
        cfg.beta = 0.5;
        cfg.eps = 1.0;
        cfg.dt = 5e-4;
        cfg.t_final = 0.05;
        cfg.snapshot_stride = 0;
        KineticSolver solver(cfg);
        PhaseField h(Representation::h, solver.xgrid(), solver.vgrid());
        h.fill([](double, double v) { return 1.0 + 0.5 * std::tanh(v); });
        const Trajectory traj = solver.simulate(h);
        const auto& d = traj.diagnostics;
        for (std::size_t k = 20; k + 1 < d.size(); k += 17) {
            const double slope = (d[k + 1].entropy_Hbeta_vs_1 - d[k].entropy_Hbeta_vs_1) / cfg.dt;
            const double mid = 0.5 * (d[k + 1].dissipation + d[k].dissipation);
            CHECK(slope == Catch::Approx(mid).epsilon(0.05));
        }
    }
}

TEST_CASE("torus Poisson solve")
{
    const auto xg = make_torus_grid(64);

    SECTION("zero source gives zero")
    {
        DensityField zero(xg, 0.0);
        const DensityField u = poisson_solve_torus(zero);
        for (int i = 0; i < u.size(); ++i) CHECK(u[i] == Catch::Approx(0.0).margin(1e-15));
    }

    SECTION("single mode inversion")
    {
        DensityField src(xg);
        for (int i = 0; i < src.size(); ++i)
            src[i] = std::cos(2 * PI * xg->nodes[static_cast<std::size_t>(i)]);
        const DensityField u = poisson_solve_torus(src);
        for (int i = 0; i < u.size(); ++i)
            CHECK(u[i] == Catch::Approx(src[i] / (4 * PI * PI)).margin(1e-14));
    }

    SECTION("two modes and the discrete residual")
    {
        DensityField src(xg);
        for (int i = 0; i < src.size(); ++i) {
            const double x = xg->nodes[static_cast<std::size_t>(i)];
            src[i] = std::cos(2 * PI * x) + std::sin(4 * PI * x);
        }
        const DensityField u = poisson_solve_torus(src);
        for (int i = 0; i < u.size(); ++i) {
            const double x = xg->nodes[static_cast<std::size_t>(i)];
            const double expect = std::cos(2 * PI * x) / (4 * PI * PI) + std::sin(4 * PI * x) / (16 * PI * PI);
            CHECK(u[i] == Catch::Approx(expect).margin(1e-13));
        }
        // second difference reproduces the source at second order
        double worst = 0;
        const double dx = xg->dx;
        for (int i = 0; i < u.size(); ++i) {
            const double lap = (u[(i + 1) % 64] - 2 * u[i] + u[(i + 63) % 64]) / (dx * dx);
            worst = std::max(worst, std::abs(-lap - src[i]));
        }
        CHECK(worst < 0.05);
    }

    SECTION("rejects sources with nonzero mean")
    {
        DensityField src(xg, 0.3);
        CHECK_THROWS_AS(poisson_solve_torus(src), std::invalid_argument);
    }

    SECTION("elliptic estimate is bounded uniformly over sources")
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            DensityField src(xg);
            for (int m = 1; m <= 5; ++m) {
                const double a = u(rng), b = u(rng);
                for (int i = 0; i < src.size(); ++i) {
                    const double x = xg->nodes[static_cast<std::size_t>(i)];
                    src[i] += a * std::cos(2 * PI * m * x) + b * std::sin(2 * PI * m * x);
                }
            }
            const double ratio = poisson_elliptic_estimate(src, 1e-8);
            CHECK(ratio > 0.0);
            CHECK(ratio <= 1.0 / (2 * PI) + 1.0 + 1e-12);
        }
    }
}

TEST_CASE("modified hypocoercivity entropy")
{
    const auto xg = make_torus_grid(32);
    const auto vg = make_velocity_grid(8.0, 65);

    SECTION("vanishes at equilibrium")
    {
        PhaseField h(Representation::h, xg, vg, 1.4);
        const auto me = modified_entropy(h, 0.5, 0.1, 1.0);
        CHECK(me.value == Catch::Approx(0.0).margin(1e-13));
        CHECK(me.cross_term == Catch::Approx(0.0).margin(1e-13));
    }

    SECTION("pure microscopic odd modes carry no macroscopic part")
    {
        PhaseField h(Representation::h, xg, vg);
        h.fill([](double x, double v) { return 1.0 + 0.3 * std::sin(2 * PI * x) * v; });
        const auto me = modified_entropy(h, 0.5, 0.1, 1.0);
        CHECK(me.cross_term == Catch::Approx(0.0).margin(1e-12));
        CHECK(me.value == Catch::Approx(me.l2_sq).margin(1e-12));
    }

    SECTION("cross term agrees with the split-based evaluation")
    {
        PhaseField h(Representation::h, xg, vg);
        h.fill([](double x, double v) {
            return 1.2 + 0.4 * std::cos(2 * PI * x) + 0.2 * std::sin(2 * PI * x) * v;
        });
        const auto me = modified_entropy(h, 0.5, 0.1, 1.0);

        // direct quadrature with the explicit macro-micro split
        const double M0 = total_mass(h);
        DensityField mean = velocity_mean(h);
        DensityField src(xg);
        for (int i = 0; i < src.size(); ++i) src[i] = mean[i] - M0;
        const DensityField u = poisson_solve_torus(src);
        const auto du = spectral_derivative(u.values);
        auto [m, perp] = macro_micro_split(h);
        double cross = 0;
        for (int i = 0; i < h.nx(); ++i) {
            double inner = 0;
            for (int j = 0; j < h.nv(); ++j)
                inner += vg->weights[static_cast<std::size_t>(j)] * vg->nodes[static_cast<std::size_t>(j)] * perp.at(i, j);
            cross += du[static_cast<std::size_t>(i)] * inner;
        }
        cross *= xg->dx;
        CHECK(me.cross_term == Catch::Approx(cross).margin(1e-12));
    }

    SECTION("delta outside (0, 1/2) is rejected")
    {
        PhaseField h(Representation::h, xg, vg, 1.0);
        CHECK_THROWS_AS(modified_entropy(h, 0.5, 0.7, 1.0), std::invalid_argument);
    }
}

TEST_CASE("coefficient-floor envelope")
{
    SECTION("constant series")
    {
        std::vector<double> t{0.0, 0.5, 1.0, 1.5, 2.0};
        std::vector<double> m(5, 1.0);
        const auto env = LambdaEnvelope::build(t, m);
        for (double l : env.lambda) CHECK(l == 1.0);
        CHECK(env.integral.back() == Catch::Approx(2.0).epsilon(1e-14));
    }

    SECTION("running minimum is nonincreasing")
    {
        std::vector<double> t{0.0, 1.0, 2.0, 3.0};
        std::vector<double> m{1.0, 0.7, 0.9, 0.6};
        const auto env = LambdaEnvelope::build(t, m);
        CHECK(env.lambda == std::vector<double>{1.0, 0.7, 0.7, 0.6});
        for (std::size_t k = 1; k < env.lambda.size(); ++k)
            CHECK(env.lambda[k] <= env.lambda[k - 1]);
        // telescoped integral: trapezoid of lambda plus the total drop
        const double trap = 0.5 * (1.0 + 0.7) + 0.7 + 0.5 * (0.7 + 0.6);
        CHECK(env.integral.back() == Catch::Approx(trap + 0.6 - 1.0).epsilon(1e-14));
    }
}

TEST_CASE("decay-rate fitting")
{
    SECTION("exact exponential")
    {
        std::vector<double> t, v;
        for (int k = 0; k <= 40; ++k) {
            t.push_back(0.1 * k);
            v.push_back(std::exp(-3.0 * 0.1 * k));
        }
        const auto fit = fit_decay_rate(t, v, FitMode::exponential);
        CHECK(fit.rate == Catch::Approx(-3.0).margin(1e-10));
        CHECK(fit.r_squared == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("window restriction")
    {
        std::vector<double> t, v;
        for (int k = 0; k <= 40; ++k) {
            t.push_back(0.1 * k);
            // transient then clean decay
            v.push_back((k < 10 ? 2.0 : 1.0) * std::exp(-2.0 * 0.1 * k));
        }
        const auto fit = fit_decay_rate(t, v, FitMode::exponential, 1.05, 4.0);
        CHECK(fit.rate == Catch::Approx(-2.0).margin(1e-10));
    }

    SECTION("constant series has zero rate")
    {
        std::vector<double> t{0, 1, 2, 3}, v(4, 0.7);
        const auto fit = fit_decay_rate(t, v, FitMode::exponential);
        CHECK(fit.rate == 0.0);
    }

    SECTION("power law in the scaling parameter")
    {
        std::vector<double> eps{0.5, 0.25, 0.125, 0.0625, 0.03125}, v;
        for (double e : eps) v.push_back(5.0 * std::pow(e, 0.8));
        const auto fit = fit_decay_rate(eps, v, FitMode::power);
        CHECK(fit.rate == Catch::Approx(0.8).margin(1e-10));
        CHECK(fit.r_squared == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("contract errors")
    {
        std::vector<double> t{0, 1, 2}, v{1.0, -1.0, 0.5};
        CHECK_THROWS_AS(fit_decay_rate(t, v, FitMode::exponential), std::invalid_argument);
        std::vector<double> t2{0, 1}, v2{1.0, 0.5};
        CHECK_THROWS_AS(fit_decay_rate(t2, v2, FitMode::exponential), std::invalid_argument);
    }
}
