#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kfp/field.hpp"
#include "kfp/numeric.hpp"

namespace kfp {

/// configuration of the macroscopic limit solver dt rho = dx(rho^(-beta) dx rho)
struct FdConfig {
    double beta = 0.0;
    double dt = 1e-4;
    int n_x = 256;
    double t_final = 1.0;
    double lambda_floor = 1e-8;  // coefficient floor; activation signals a violated lower bound
    int snapshot_stride = 10;

    void validate() const
    {
        if (!(beta >= 0 && beta <= 1)) throw std::invalid_argument("FdConfig: beta must lie in [0,1]");
        if (!(dt > 0)) throw std::invalid_argument("FdConfig: dt must be positive");
        if (!(t_final > 0)) throw std::invalid_argument("FdConfig: t_final must be positive");
        if (n_x < 4) throw std::invalid_argument("FdConfig: grid too small");
    }
};

namespace detail {

/// cyclic tridiagonal solve via Sherman-Morrison on top of the Thomas algorithm
inline std::vector<double> solve_cyclic_tridiagonal(std::vector<double> diag,
                                                    const std::vector<double>& upper,
                                                    const std::vector<double>& lower,
                                                    double corner_upper_right,
                                                    double corner_lower_left,
                                                    const std::vector<double>& rhs)
{
    const std::size_t n = diag.size();
    const double gamma = -diag[0];
    diag[0] -= gamma;
    diag[n - 1] -= corner_upper_right * corner_lower_left / gamma;

    auto thomas = [&](std::vector<double> d, std::vector<double> b) {
        for (std::size_t i = 1; i < n; ++i) {
            const double m = lower[i - 1] / d[i - 1];
            d[i] -= m * upper[i - 1];
            b[i] -= m * b[i - 1];
        }
        b[n - 1] /= d[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) b[i] = (b[i] - upper[i] * b[i + 1]) / d[i];
        return b;
    };

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = corner_lower_left;
    const auto y = thomas(diag, rhs);
    const auto q = thomas(diag, u);
    const double vy = y[0] + corner_upper_right / gamma * y[n - 1];
    const double vq = q[0] + corner_upper_right / gamma * q[n - 1];
    std::vector<double> x(n);
    const double factor = vy / (1.0 + vq);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - factor * q[i];
    return x;
}

}  // namespace detail

/// one lagged-coefficient implicit step: solves (I - dt D(rho_n^(-beta))) rho_{n+1} = rho_n
/// with harmonic-mean face coefficients and periodic wrap; mass is conserved by
/// the telescoping conservative flux and re-projected after the linear solve.
/// Returns true if the coefficient floor was activated anywhere.
inline bool fd_step(DensityField& rho, double dt, double beta, double lambda_floor = 1e-8)
{
    const int n = rho.size();
    const double dx = rho.grid->dx;
    const double r = dt / (dx * dx);

    bool floored = false;
    std::vector<double> a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double v = rho[i];
        if (!(v > 0)) throw std::invalid_argument("fd_step: density must be positive");
        if (v < lambda_floor) {
            v = lambda_floor;
            floored = true;
        }
        a[static_cast<std::size_t>(i)] = (beta == 0.0) ? 1.0 : std::exp(-beta * std::log(v));
    }
    // harmonic-mean face coefficients a_{i+1/2}
    std::vector<double> face(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double ai = a[static_cast<std::size_t>(i)];
        const double aj = a[static_cast<std::size_t>(rho.grid->wrap_index(i + 1))];
        face[static_cast<std::size_t>(i)] = 2.0 * ai * aj / (ai + aj);
    }

    std::vector<double> diag(static_cast<std::size_t>(n)), upper(static_cast<std::size_t>(n) - 1),
        lower(static_cast<std::size_t>(n) - 1);
    for (int i = 0; i < n; ++i) {
        const double fu = face[static_cast<std::size_t>(i)];
        const double fd = face[static_cast<std::size_t>(rho.grid->wrap_index(i - 1))];
        diag[static_cast<std::size_t>(i)] = 1.0 + r * (fu + fd);
        if (i + 1 < n) upper[static_cast<std::size_t>(i)] = -r * fu;
        if (i > 0) lower[static_cast<std::size_t>(i) - 1] = -r * face[static_cast<std::size_t>(i - 1)];
    }
    const double corner_ur = -r * face[static_cast<std::size_t>(n - 1)];  // couples row 0 to node n-1
    const double corner_ll = -r * face[static_cast<std::size_t>(n - 1)];

    const double mass_before = pairwise_sum(rho.values);
    rho.values = detail::solve_cyclic_tridiagonal(diag, upper, lower, corner_ur, corner_ll, rho.values);
    const double err = (pairwise_sum(rho.values) - mass_before) / static_cast<double>(n);
    for (double& v : rho.values) v -= err;
    return floored;
}

struct FdDiagnostics {
    int step = 0;
    double time = 0;
    double mass = 0;
    double min_rho = 0;
    double max_rho = 0;
    double grad_sup = 0;
};

struct FdTrajectory {
    std::vector<DensityField> snapshots;
    std::vector<double> snapshot_times;
    std::vector<FdDiagnostics> diagnostics;
    bool floor_activated = false;
};

/// run the macroscopic solver to t_final with per-step diagnostics
inline FdTrajectory fd_simulate(const FdConfig& cfg, const DensityField& rho_in)
{
    cfg.validate();
    if (rho_in.size() != cfg.n_x)
        throw std::invalid_argument("fd_simulate: initial data grid does not match the configuration");
    for (double v : rho_in.values)
        if (!(v > 0)) throw std::invalid_argument("fd_simulate: density must be positive");

    FdTrajectory traj;
    DensityField rho = rho_in;
    const int n_steps = static_cast<int>(std::llround(cfg.t_final / cfg.dt));

    auto record = [&](int k, double t) {
        FdDiagnostics d;
        d.step = k;
        d.time = t;
        d.mass = rho.mean();
        d.min_rho = rho.min();
        d.max_rho = rho.max();
        d.grad_sup = rho.grad_sup();
        traj.diagnostics.push_back(d);
    };

    record(0, 0.0);
    if (cfg.snapshot_stride > 0) {
        traj.snapshots.push_back(rho);
        traj.snapshot_times.push_back(0.0);
    }
    for (int k = 1; k <= n_steps; ++k) {
        traj.floor_activated |= fd_step(rho, cfg.dt, cfg.beta, cfg.lambda_floor);
        const double t = static_cast<double>(k) * cfg.dt;
        record(k, t);
        if (cfg.snapshot_stride > 0 && (k % cfg.snapshot_stride == 0 || k == n_steps)) {
            traj.snapshots.push_back(rho);
            traj.snapshot_times.push_back(t);
        }
    }
    if (cfg.snapshot_stride == 0) {
        traj.snapshots.push_back(rho);
        traj.snapshot_times.push_back(static_cast<double>(n_steps) * cfg.dt);
    }
    return traj;
}

}  // namespace kfp
