#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "kfp/field.hpp"
#include "kfp/grid.hpp"
#include "kfp/numeric.hpp"

namespace kfp {

enum class CollisionMode { fokker_planck, kolmogorov };

/// Velocity-space collision operator in conservative flux form,
///     (L h)_j = (1/w_j) [ w_{j+1/2} (h_{j+1} - h_j) - w_{j-1/2} (h_j - h_{j-1}) ] / dv^2,
/// with zero-flux ends.  Gaussian node/face weights give the Ornstein-Uhlenbeck
/// operator in the h unknown; unit weights give the plain velocity Laplacian
/// of the Kolmogorov equation.  Constants span the null space and the
/// w-weighted column mass is conserved exactly by construction.
class CollisionOperator {
public:
    CollisionOperator(const VelocityGrid& grid, CollisionMode mode)
        : nv_(grid.size()), dv_(grid.dv), mode_(mode)
    {
        node_w_.resize(static_cast<std::size_t>(nv_));
        face_w_.resize(static_cast<std::size_t>(nv_ - 1));
        mass_w_.resize(static_cast<std::size_t>(nv_));
        for (int j = 0; j < nv_; ++j) {
            node_w_[static_cast<std::size_t>(j)] =
                mode == CollisionMode::fokker_planck ? gaussian_weight(grid.nodes[static_cast<std::size_t>(j)]) : 1.0;
            mass_w_[static_cast<std::size_t>(j)] =
                mode == CollisionMode::fokker_planck ? grid.weights[static_cast<std::size_t>(j)]
                                                     : 1.0 / static_cast<double>(nv_);
        }
        for (int j = 0; j + 1 < nv_; ++j) {
            const double vf = 0.5 * (grid.nodes[static_cast<std::size_t>(j)] + grid.nodes[static_cast<std::size_t>(j) + 1]);
            face_w_[static_cast<std::size_t>(j)] =
                mode == CollisionMode::fokker_planck ? gaussian_weight(vf) : 1.0;
        }
        decompose();
    }

    int size() const { return nv_; }
    CollisionMode mode() const { return mode_; }

    /// apply the stencil to one velocity column
    std::vector<double> apply(std::span<const double> h) const
    {
        require_size(h);
        std::vector<double> out(static_cast<std::size_t>(nv_), 0.0);
        const double inv_dv2 = 1.0 / (dv_ * dv_);
        for (int j = 0; j < nv_; ++j) {
            const double up = (j + 1 < nv_) ? face_w_[static_cast<std::size_t>(j)] * (h[static_cast<std::size_t>(j) + 1] - h[static_cast<std::size_t>(j)]) : 0.0;
            const double dn = (j > 0) ? face_w_[static_cast<std::size_t>(j) - 1] * (h[static_cast<std::size_t>(j)] - h[static_cast<std::size_t>(j) - 1]) : 0.0;
            out[static_cast<std::size_t>(j)] = (up - dn) * inv_dv2 / node_w_[static_cast<std::size_t>(j)];
        }
        return out;
    }

    /// w-weighted quadratic form sum_j w_j h_j (L h)_j; negative semidefinite
    double dissipation_form(std::span<const double> h) const
    {
        const auto lh = apply(h);
        std::vector<double> terms(static_cast<std::size_t>(nv_));
        for (int j = 0; j < nv_; ++j)
            terms[static_cast<std::size_t>(j)] = mass_w_[static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(j)] * lh[static_cast<std::size_t>(j)];
        return pairwise_sum(terms);
    }

    /// backward Euler solve (I - s L) h_new = h per column, s = dt * a >= 0.
    /// The matrix is an irreducibly diagonally dominant M-matrix, so the map
    /// preserves bounds; the column mass is re-projected after the solve.
    void implicit_euler_step(std::span<double> h, double s) const
    {
        require_size(h);
        if (s < 0) throw std::invalid_argument("collision step: negative diffusion coefficient");
        if (s == 0) return;
        const std::size_t n = static_cast<std::size_t>(nv_);
        const double inv_dv2 = 1.0 / (dv_ * dv_);
        std::vector<double> diag(n), upper(n - 1), lower(n - 1), rhs(h.begin(), h.end());
        for (int j = 0; j < nv_; ++j) {
            const double wj = node_w_[static_cast<std::size_t>(j)];
            const double fu = (j + 1 < nv_) ? face_w_[static_cast<std::size_t>(j)] : 0.0;
            const double fd = (j > 0) ? face_w_[static_cast<std::size_t>(j) - 1] : 0.0;
            diag[static_cast<std::size_t>(j)] = 1.0 + s * (fu + fd) * inv_dv2 / wj;
            if (j + 1 < nv_) upper[static_cast<std::size_t>(j)] = -s * fu * inv_dv2 / wj;
            if (j > 0) lower[static_cast<std::size_t>(j) - 1] = -s * fd * inv_dv2 / wj;
        }
        // Thomas algorithm
        const double mass_before = column_mass(h);
        for (std::size_t j = 1; j < n; ++j) {
            const double m = lower[j - 1] / diag[j - 1];
            diag[j] -= m * upper[j - 1];
            rhs[j] -= m * rhs[j - 1];
        }
        h[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t j = n - 1; j-- > 0;)
            h[j] = (rhs[j] - upper[j] * h[j + 1]) / diag[j];
        project_mass(h, mass_before);
    }

    /// exact flow h -> exp(s L) h through the cached eigendecomposition.
    /// exp(s L) is a stochastic matrix (nonnegative entries, unit row sums),
    /// so outputs are convex combinations of the input column; roundoff is
    /// removed by clamping to the input range and re-projecting the mass.
    void exact_step(std::span<double> h, double s) const
    {
        require_size(h);
        if (s < 0) throw std::invalid_argument("collision step: negative diffusion coefficient");
        if (s == 0) return;
        const std::size_t n = static_cast<std::size_t>(nv_);
        const double mass_before = column_mass(h);
        double lo = h[0], hi = h[0];
        for (double x : h) { lo = std::min(lo, x); hi = std::max(hi, x); }

        Eigen::VectorXd u(nv_);
        for (std::size_t j = 0; j < n; ++j) u[static_cast<Eigen::Index>(j)] = sqrt_node_[j] * h[j];
        Eigen::VectorXd y = eigvec_.transpose() * u;
        for (int k = 0; k < nv_; ++k) y[k] *= std::exp(s * eigval_[k]);
        u = eigvec_ * y;
        for (std::size_t j = 0; j < n; ++j) h[j] = u[static_cast<Eigen::Index>(j)] / sqrt_node_[j];
        project_mass(h, mass_before);
        // the clamp comes last so the projection shift cannot leave the input
        // range; the mass it removes is below the projection residual
        for (double& x : h) x = std::clamp(x, lo, hi);
    }

    /// largest-magnitude eigenvalue, a stability/stiffness indicator
    double spectral_radius() const { return std::abs(eigval_[0]); }

    std::span<const double> mass_weights() const { return mass_w_; }

    double column_mass(std::span<const double> h) const
    {
        std::vector<double> terms(static_cast<std::size_t>(nv_));
        for (int j = 0; j < nv_; ++j)
            terms[static_cast<std::size_t>(j)] = mass_w_[static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(j)];
        return pairwise_sum(terms);
    }

private:
    void require_size(std::span<const double> h) const
    {
        if (static_cast<int>(h.size()) != nv_)
            throw std::invalid_argument("collision operator: column size mismatch");
    }

    /// restore the column mass after a solve.  Nonnegative columns are scaled
    /// (a constant shift could flip genuinely tiny tail values negative);
    /// sign-mixed columns fall back to the constant shift.
    void project_mass(std::span<double> h, double target) const
    {
        const double current = column_mass(h);
        bool nonneg = true;
        for (double x : h) nonneg = nonneg && x >= 0.0;
        if (nonneg && current > 0.0 && target > 0.0) {
            const double r = target / current;
            if (std::abs(r - 1.0) < 1e-8) {
                for (double& x : h) x *= r;
                return;
            }
        }
        const double err = current - target;
        for (double& x : h) x -= err;
    }

    /// eigendecomposition of the symmetrized operator B = W^(1/2) L W^(-1/2)
    void decompose()
    {
        const std::size_t n = static_cast<std::size_t>(nv_);
        sqrt_node_.resize(n);
        for (std::size_t j = 0; j < n; ++j) sqrt_node_[j] = std::sqrt(node_w_[j]);
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nv_, nv_);
        const double inv_dv2 = 1.0 / (dv_ * dv_);
        for (int j = 0; j < nv_; ++j) {
            const double fu = (j + 1 < nv_) ? face_w_[static_cast<std::size_t>(j)] : 0.0;
            const double fd = (j > 0) ? face_w_[static_cast<std::size_t>(j) - 1] : 0.0;
            B(j, j) = -(fu + fd) * inv_dv2 / node_w_[static_cast<std::size_t>(j)];
            if (j + 1 < nv_)
                B(j, j + 1) = B(j + 1, j) =
                    fu * inv_dv2 / (sqrt_node_[static_cast<std::size_t>(j)] * sqrt_node_[static_cast<std::size_t>(j) + 1]);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("collision operator: eigendecomposition failed");
        eigvec_ = es.eigenvectors();
        eigval_.resize(static_cast<std::size_t>(nv_));
        for (int k = 0; k < nv_; ++k) eigval_[static_cast<std::size_t>(k)] = std::min(es.eigenvalues()[k], 0.0);
    }

    int nv_ = 0;
    double dv_ = 0;
    CollisionMode mode_ = CollisionMode::fokker_planck;
    std::vector<double> node_w_, face_w_, mass_w_, sqrt_node_;
    Eigen::MatrixXd eigvec_;
    std::vector<double> eigval_;
};

/// per-column coefficient a(x) = <h>^beta / eps^2 with the vacuum convention:
/// beta = 0 gives one identically, degenerate columns give zero
inline double diffusion_coefficient(double mean_h, double beta, double eps)
{
    if (beta == 0.0) return 1.0 / (eps * eps);
    constexpr double floor = 1e-300;
    if (!(mean_h > floor)) return 0.0;
    return std::exp(beta * std::log(mean_h)) / (eps * eps);
}

/// backward Euler collision step on a whole field: solves
/// (I - dt a(x_i) L) h_new(x_i, .) = h(x_i, .) column by column
inline PhaseField ou_implicit_step(const PhaseField& h, double dt, const CollisionOperator& op,
                                   std::span<const double> a)
{
    if (static_cast<int>(a.size()) != h.nx())
        throw std::invalid_argument("ou_implicit_step: coefficient count must match columns");
    if (!(dt > 0)) throw std::invalid_argument("ou_implicit_step: dt must be positive");
    PhaseField out = h;
    for (int i = 0; i < h.nx(); ++i)
        op.implicit_euler_step(out.column(i), dt * a[static_cast<std::size_t>(i)]);
    return out;
}

}  // namespace kfp
