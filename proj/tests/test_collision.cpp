#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kfp/collision.hpp"

using namespace kfp;

TEST_CASE("flux-form stencil basics")
{
    const VelocityGrid vg(8.0, 129);
    const CollisionOperator op(vg, CollisionMode::fokker_planck);

    SECTION("constants are in the null space")
    {
        std::vector<double> h(129, 2.5);
        const auto lh = op.apply(h);
        for (double x : lh) CHECK(std::abs(x) <= 1e-12);
    }

    SECTION("the linear mode is an approximate eigenvector with eigenvalue -1")
    {
        std::vector<double> h(129);
        for (int j = 0; j < 129; ++j) h[static_cast<std::size_t>(j)] = vg.nodes[static_cast<std::size_t>(j)];
        const auto lh = op.apply(h);
        // away from the truncation boundary L v = -v + O(dv^2)
        for (int j = 30; j < 99; ++j)
            CHECK(lh[static_cast<std::size_t>(j)] ==
                  Catch::Approx(-vg.nodes[static_cast<std::size_t>(j)]).margin(2e-2 * std::max(1.0, std::abs(vg.nodes[static_cast<std::size_t>(j)]))));
    }

    SECTION("dissipation form is nonpositive on random columns")
    {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> h(129);
            for (double& x : h) x = u(rng);
            CHECK(op.dissipation_form(h) <= 1e-12);
        }
    }
}

TEST_CASE("backward Euler collision step")
{
    const VelocityGrid vg(8.0, 129);
    const CollisionOperator op(vg, CollisionMode::fokker_planck);

    SECTION("constants are fixed points")
    {
        std::vector<double> h(129, 1.7);
        op.implicit_euler_step(h, 0.05);
        for (double x : h) CHECK(x == Catch::Approx(1.7).margin(1e-13));
    }

    SECTION("the linear eigenmode contracts like 1/(1+dt)")
    {
        const double dt = 0.01;
        std::vector<double> h(129);
        for (int j = 0; j < 129; ++j) h[static_cast<std::size_t>(j)] = vg.nodes[static_cast<std::size_t>(j)];
        auto expected = h;
        op.implicit_euler_step(h, dt);
        for (int j = 40; j < 89; ++j)
            CHECK(h[static_cast<std::size_t>(j)] ==
                  Catch::Approx(expected[static_cast<std::size_t>(j)] * std::exp(-dt)).margin(1e-4));
    }

    SECTION("column mass is conserved")
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 2.0);
        std::vector<double> h(129);
        for (double& x : h) x = u(rng);
        const double m0 = op.column_mass(h);
        op.implicit_euler_step(h, 0.5);
        CHECK(op.column_mass(h) == Catch::Approx(m0).epsilon(1e-13));
    }

    SECTION("bounds are preserved (M-matrix structure)")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.5, 2.0);
        std::vector<double> h(129);
        for (double& x : h) x = u(rng);
        op.implicit_euler_step(h, 5.0);  // strongly diffusive step
        for (double x : h) {
            CHECK(x >= 0.5 - 1e-10);
            CHECK(x <= 2.0 + 1e-10);
        }
    }

    SECTION("rejects negative coefficients")
    {
        std::vector<double> h(129, 1.0);
        CHECK_THROWS_AS(op.implicit_euler_step(h, -1.0), std::invalid_argument);
    }
}

TEST_CASE("exact collision flow")
{
    const VelocityGrid vg(8.0, 129);
    const CollisionOperator op(vg, CollisionMode::fokker_planck);

    SECTION("constants are fixed points")
    {
        std::vector<double> h(129, 0.8);
        op.exact_step(h, 1.0);
        for (double x : h) CHECK(x == Catch::Approx(0.8).margin(1e-13));
    }

    SECTION("Hermite modes decay at rate k within the grid error")
    {
        for (int k : {1, 2}) {
            const double t = 0.3;
            std::vector<double> h(129);
            for (int j = 0; j < 129; ++j)
                h[static_cast<std::size_t>(j)] = 1.0 + 0.25 * hermite_he(k, vg.nodes[static_cast<std::size_t>(j)]);
            op.exact_step(h, t);
            // project back on the mode: <He_k h> / <He_k He_k>
            std::vector<double> num(129), den(129);
            for (int j = 0; j < 129; ++j) {
                const double he = hermite_he(k, vg.nodes[static_cast<std::size_t>(j)]);
                num[static_cast<std::size_t>(j)] = vg.weights[static_cast<std::size_t>(j)] * he * h[static_cast<std::size_t>(j)];
                den[static_cast<std::size_t>(j)] = vg.weights[static_cast<std::size_t>(j)] * he * he;
            }
            const double amp = pairwise_sum(num) / pairwise_sum(den);
            const double rate = -std::log(amp / 0.25) / t;
            CHECK(rate == Catch::Approx(static_cast<double>(k)).epsilon(0.05));
        }
    }

    SECTION("semigroup property")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.5, 2.0);
        std::vector<double> a(129);
        for (double& x : a) x = u(rng);
        auto b = a;
        op.exact_step(a, 0.7);
        op.exact_step(b, 0.3);
        op.exact_step(b, 0.4);
        for (int j = 0; j < 129; ++j)
            CHECK(a[static_cast<std::size_t>(j)] == Catch::Approx(b[static_cast<std::size_t>(j)]).margin(1e-11));
    }

    SECTION("outputs are convex combinations of the input column")
    {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> u(0.25, 3.0);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> h(129);
            double lo = 1e300, hi = -1e300;
            for (double& x : h) { x = u(rng); lo = std::min(lo, x); hi = std::max(hi, x); }
            const double m0 = op.column_mass(h);
            op.exact_step(h, 2.0);
            for (double x : h) {
                CHECK(x >= lo - 1e-12);
                CHECK(x <= hi + 1e-12);
            }
            CHECK(op.column_mass(h) == Catch::Approx(m0).epsilon(1e-13));
        }
    }
}

TEST_CASE("stencil matrix is an M-matrix")
{
    // reconstruct the operator columns from basis vectors: off-diagonal
    // entries of L are nonnegative and rows sum to zero, so I - s L is
    // diagonally dominant with nonpositive off-diagonal entries
    const VelocityGrid vg(8.0, 25);
    const CollisionOperator op(vg, CollisionMode::fokker_planck);
    const int n = 25;
    std::vector<std::vector<double>> L(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::vector<double> e(static_cast<std::size_t>(n), 0.0);
        e[static_cast<std::size_t>(k)] = 1.0;
        L[static_cast<std::size_t>(k)] = op.apply(e);  // column k
    }
    for (int j = 0; j < n; ++j) {
        double row_sum = 0, offdiag_sum = 0;
        for (int k = 0; k < n; ++k) {
            const double L_jk = L[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            row_sum += L_jk;
            if (j != k) {
                CHECK(L_jk >= 0.0);
                offdiag_sum += L_jk;
            }
        }
        CHECK(row_sum == Catch::Approx(0.0).margin(1e-9));
        const double diag = L[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
        CHECK(diag <= 0.0);
        // I - s L: diagonal 1 + s |diag| dominates the off-diagonal mass s * offdiag_sum
        CHECK(std::abs(diag) >= offdiag_sum - 1e-9);
    }
}

TEST_CASE("kolmogorov-mode operator is the plain velocity Laplacian")
{
    const VelocityGrid vg(6.0, 25);
    const CollisionOperator op(vg, CollisionMode::kolmogorov);
    std::vector<double> h(25);
    for (int j = 0; j < 25; ++j) {
        const double v = vg.nodes[static_cast<std::size_t>(j)];
        h[static_cast<std::size_t>(j)] = v * v;
    }
    const auto lh = op.apply(h);
    // second derivative of v^2 is 2, exactly reproduced away from the ends
    for (int j = 1; j < 24; ++j) CHECK(lh[static_cast<std::size_t>(j)] == Catch::Approx(2.0).margin(1e-9));
}

TEST_CASE("diffusion coefficient conventions at vacuum")
{
    CHECK(diffusion_coefficient(0.0, 0.0, 1.0) == 1.0);
    CHECK(diffusion_coefficient(0.0, 0.5, 1.0) == 0.0);
    CHECK(diffusion_coefficient(4.0, 0.5, 1.0) == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(diffusion_coefficient(1.0, 1.0, 0.5) == Catch::Approx(4.0).epsilon(1e-12));
}
