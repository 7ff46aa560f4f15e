#include <catch2/catch_amalgamated.hpp>

#include "kfp/kolmogorov.hpp"

using namespace kfp;

namespace {

/// fine tensor quadrature of Gamma over the plane in drift-adapted coordinates
double gamma_total_mass(double t, int n = 600)
{
    // integrate over u = x - t v / 2 and v; the Jacobian is one
    const double su = std::sqrt(t * t * t / 6.0);
    const double sv = std::sqrt(2.0 * t);
    const double Lu = 10.0 * su, Lv = 10.0 * sv;
    const double du = 2 * Lu / n, dv = 2 * Lv / n;
    std::vector<double> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double u = -Lu + (i + 0.5) * du;
        std::vector<double> terms(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            const double v = -Lv + (j + 0.5) * dv;
            terms[static_cast<std::size_t>(j)] = kolmogorov_gamma(t, u + 0.5 * t * v, v);
        }
        rows[static_cast<std::size_t>(i)] = pairwise_sum(terms) * dv;
    }
    return pairwise_sum(rows) * du;
}

}  // namespace

TEST_CASE("fundamental solution point values")
{
    CHECK(kolmogorov_gamma(-1.0, 0.3, -2.0) == 0.0);
    CHECK(kolmogorov_gamma(0.0, 0.0, 0.0) == 0.0);
    CHECK(kolmogorov_gamma(1.0, 0.0, 0.0) == Catch::Approx(std::sqrt(3.0) / (2.0 * PI)).epsilon(1e-12));
}

TEST_CASE("fundamental solution has unit mass")
{
    CHECK(gamma_total_mass(0.25) == Catch::Approx(1.0).margin(1e-6));
    CHECK(gamma_total_mass(1.0) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("fundamental solution satisfies the equation away from the pole")
{
    // residual of dt G + v dx G - dvv G under centered differences decays at
    // second order in the step
    const double t = 0.7, x = 0.2, v = -0.4;
    auto residual = [&](double e) {
        const double dt = (kolmogorov_gamma(t + e, x, v) - kolmogorov_gamma(t - e, x, v)) / (2 * e);
        const double dx = (kolmogorov_gamma(t, x + e, v) - kolmogorov_gamma(t, x - e, v)) / (2 * e);
        const double dvv = (kolmogorov_gamma(t, x, v + e) - 2 * kolmogorov_gamma(t, x, v) +
                            kolmogorov_gamma(t, x, v - e)) / (e * e);
        return std::abs(dt + v * dx - dvv);
    };
    const double r1 = residual(1e-2);
    const double r2 = residual(5e-3);
    CHECK(r2 < r1);
    CHECK(std::log2(r1 / r2) == Catch::Approx(2.0).margin(0.4));
}

TEST_CASE("periodic Green function")
{
    SECTION("image truncation is converged")
    {
        // at small times the neighboring images decay like exp(-3 n^2 / t^3)
        const double t = 0.2;
        const double a = periodic_green(t, 0.5, 0.0, GreenParams(2));
        const double b = periodic_green(t, 0.5, 0.0, GreenParams(8));
        CHECK(a == Catch::Approx(b).epsilon(1e-12));
        CHECK(a > 0.0);
        CHECK(green_tail_bound(1.0, 8) < green_tail_bound(1.0, 2));
    }

    SECTION("even in x at zero velocity")
    {
        for (double x : {0.1, 0.27, 0.42})
            CHECK(periodic_green(0.3, x, 0.0) == Catch::Approx(periodic_green(0.3, -x, 0.0)).epsilon(1e-13));
    }

    SECTION("unit mass over the cylinder")
    {
        const double t = 0.5;
        const int nx = 200, nv = 400;
        const double dv = 24.0 / nv;
        std::vector<double> rows(static_cast<std::size_t>(nx));
        for (int i = 0; i < nx; ++i) {
            const double x = (i + 0.5) / nx;
            std::vector<double> terms(static_cast<std::size_t>(nv));
            for (int j = 0; j < nv; ++j) {
                const double v = -12.0 + (j + 0.5) * dv;
                terms[static_cast<std::size_t>(j)] = periodic_green(t, x, v);
            }
            rows[static_cast<std::size_t>(i)] = pairwise_sum(terms) * dv;
        }
        CHECK(pairwise_sum(rows) / nx == Catch::Approx(1.0).margin(1e-6));
    }

    SECTION("rejects nonpositive times")
    {
        CHECK_THROWS_AS(periodic_green(0.0, 0.1, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(periodic_green(-1.0, 0.1, 0.1), std::invalid_argument);
    }
}

TEST_CASE("oracle propagation of torus initial data")
{
    const auto xg = make_torus_grid(48);
    const auto vg = make_velocity_grid(8.0, 49);
    PhaseField f_in(Representation::f, xg, vg);
    f_in.fill([](double x, double v) {
        return (1.0 + 0.5 * std::cos(2 * PI * x)) * gaussian_weight(v);
    });

    SECTION("positive kernel preserves nonnegativity and mass")
    {
        const PhaseField f = oracle_solve(f_in, 0.25);
        double mn = 1e300;
        for (double x : f.values) mn = std::min(mn, x);
        CHECK(mn >= 0.0);

        auto mass = [](const PhaseField& p) {
            return pairwise_sum(p.values) * p.xgrid->dx * p.vgrid->dv;
        };
        CHECK(mass(f) == Catch::Approx(mass(f_in)).margin(1e-6));
    }

    SECTION("a discrete delta reproduces the kernel shape")
    {
        PhaseField spike(Representation::f, xg, vg, 0.0);
        const int i0 = 10, j0 = 24;  // v node at 0
        spike.at(i0, j0) = 1.0 / (xg->dx * vg->dv);
        const double t = 0.1;
        const PhaseField f = oracle_solve(spike, t);
        const double x0 = xg->nodes[i0];
        for (int i : {8, 10, 12, 20})
            for (int j : {20, 24, 28}) {
                const double expected =
                    periodic_green(t, xg->nodes[i] - x0 - t * vg->nodes[j0], vg->nodes[j] - vg->nodes[j0]);
                CHECK(f.at(i, j) == Catch::Approx(expected).margin(1e-10));
            }
    }

    SECTION("semigroup property within quadrature tolerance")
    {
        const PhaseField one_step = oracle_solve(f_in, 0.5);
        const PhaseField two_step = oracle_solve(oracle_solve(f_in, 0.25), 0.25);
        double num = 0, den = 0;
        for (std::size_t k = 0; k < one_step.values.size(); ++k) {
            num = std::max(num, std::abs(one_step.values[k] - two_step.values[k]));
            den = std::max(den, std::abs(one_step.values[k]));
        }
        CHECK(num / den < 1e-4);
    }

    SECTION("translation covariance in x")
    {
        // shifting the initial data by half a period shifts the solution
        PhaseField shifted(Representation::f, xg, vg);
        const int half = 24;
        for (int i = 0; i < 48; ++i)
            for (int j = 0; j < 49; ++j) shifted.at(i, j) = f_in.at((i + half) % 48, j);
        const PhaseField a = oracle_solve(f_in, 0.2);
        const PhaseField b = oracle_solve(shifted, 0.2);
        for (int i : {0, 7, 30})
            for (int j : {10, 24, 40})
                CHECK(b.at(i, j) == Catch::Approx(a.at((i + half) % 48, j)).margin(1e-12));
    }

    SECTION("contract errors")
    {
        CHECK_THROWS_AS(oracle_solve(f_in, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(oracle_solve(f_in, 1e-9), std::invalid_argument);
        const PhaseField h = convert(f_in, Representation::h);
        CHECK_THROWS_AS(oracle_solve(h, 0.25), std::invalid_argument);
    }
}

TEST_CASE("source representation by the time-folded kernel")
{
    const auto xg = make_torus_grid(96);
    const auto vg = make_velocity_grid(6.0, 49);

    SECTION("zero source gives zero")
    {
        const PhaseField f = duhamel_source([](double, double, double) { return 0.0; }, 0.5, xg, vg, 4);
        for (double x : f.values) CHECK(x == 0.0);
    }

    SECTION("unit source accumulates the elapsed time")
    {
        const double t = 1.0;
        const PhaseField f = duhamel_source([](double, double, double) { return 1.0; }, t, xg, vg, 8);
        // interior velocity nodes; the truncation at |v| = V loses half the
        // Gaussian mass exactly at the edge
        for (int i : {0, 31, 64})
            for (int j : {16, 24, 32})
                CHECK(f.at(i, j) == Catch::Approx(t).epsilon(5e-3));
    }

    SECTION("linearity")
    {
        auto s = [](double, double x, double) { return 1.0 + std::cos(2 * PI * x); };
        auto s3 = [&](double tau, double x, double v) { return 3.0 * s(tau, x, v); };
        const PhaseField a = duhamel_source(s, 0.4, xg, vg, 3);
        const PhaseField b = duhamel_source(s3, 0.4, xg, vg, 3);
        for (int i : {3, 40})
            for (int j : {20, 30})
                CHECK(b.at(i, j) == Catch::Approx(3.0 * a.at(i, j)).epsilon(1e-12));
    }

    SECTION("contract errors")
    {
        CHECK_THROWS_AS(duhamel_source([](double, double, double) { return 0.0; }, -1.0, xg, vg, 4),
                        std::invalid_argument);
        CHECK_THROWS_AS(duhamel_source([](double, double, double) { return 0.0; }, 1.0, xg, vg, 0),
                        std::invalid_argument);
    }
}
