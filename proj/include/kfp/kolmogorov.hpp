#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "kfp/field.hpp"
#include "kfp/numeric.hpp"

namespace kfp {

/// Fundamental solution of dt f + v dx f = dvv f in one space dimension:
/// (sqrt(3)/(2 pi t^2)) exp(-3 (x - t v/2)^2 / t^3 - v^2/(4 t)), zero for t <= 0.
/// In group-relative coordinates the drift becomes the velocity midpoint,
/// x - xi - (t - tau)(v + eta)/2, the classical transition kernel.
inline double kolmogorov_gamma(double t, double x, double v)
{
    if (t <= 0.0) return 0.0;
    const double u = x - 0.5 * t * v;
    const double expo = -3.0 * u * u / (t * t * t) - 0.25 * v * v / t;
    return std::sqrt(3.0) / (2.0 * PI * t * t) * std::exp(expo);
}

struct GreenParams {
    int n_terms = 0;  // 0 selects the automatic truncation

    explicit GreenParams(int n = 0) : n_terms(n)
    {
        if (n < 0) throw std::invalid_argument("GreenParams: negative image count");
    }
};

/// number of periodic images needed so the first dropped image's peak falls
/// below 1e-15 of the central one; the x-Gaussian has variance t^3/6
inline int green_auto_terms(double t)
{
    const double sigma2 = t * t * t / 6.0;
    // exp(-(n - 1/2)^2 / (2 sigma^2)) < 1e-15
    const double need = 0.5 + std::sqrt(2.0 * sigma2 * 35.0);
    return std::max(1, static_cast<int>(std::ceil(need)));
}

/// bound on the dropped tail of the image sum after n_terms images
inline double green_tail_bound(double t, int n_terms)
{
    const double sigma2 = t * t * t / 6.0;
    const double d = static_cast<double>(n_terms) - 0.5;
    const double peak = std::sqrt(3.0) / (2.0 * PI * t * t);
    return 4.0 * peak * std::exp(-d * d / (2.0 * sigma2));
}

/// periodic Green function G(t,x,v) = sum_n Gamma(t, x+n, v) on the unit torus
inline double periodic_green(double t, double x, double v, GreenParams params = GreenParams())
{
    if (t <= 0.0) throw std::invalid_argument("periodic_green: requires t > 0");
    const int n = params.n_terms > 0 ? params.n_terms : green_auto_terms(t);
    // center on the dominant image of the drift-shifted argument
    const double u = wrap_symmetric(x - 0.5 * t * v) + 0.5 * t * v;
    double sum = 0;
    for (int k = -n; k <= n; ++k)
        sum += kolmogorov_gamma(t, u + static_cast<double>(k), v);
    return sum;
}

namespace detail {

/// The convolution kernel G(t, x_i - x_k - t v_l, v_j - v_l) splits into an
/// x-factor indexed by (i - k mod n_x, j, l) and a v-factor indexed by (j, l),
/// which turns the O(N^2 M^2) quadrature into table lookups.
struct GreenTables {
    int nx = 0, nv = 0;
    std::vector<double> xpart;  // [(d * nv + j) * nv + l]
    std::vector<double> vpart;  // [j * nv + l]

    double kernel(int d, int j, int l) const
    {
        return xpart[(static_cast<std::size_t>(d) * static_cast<std::size_t>(nv) +
                      static_cast<std::size_t>(j)) * static_cast<std::size_t>(nv) +
                     static_cast<std::size_t>(l)] *
               vpart[static_cast<std::size_t>(j) * static_cast<std::size_t>(nv) + static_cast<std::size_t>(l)];
    }
};

inline GreenTables build_green_tables(double t, const TorusGrid& xg, const VelocityGrid& vg,
                                      GreenParams params)
{
    GreenTables tbl;
    tbl.nx = xg.size();
    tbl.nv = vg.size();
    const int n_img = params.n_terms > 0 ? params.n_terms : green_auto_terms(t);
    const double t3 = t * t * t;
    const double pref = std::sqrt(3.0) / (2.0 * PI * t * t);

    tbl.vpart.resize(static_cast<std::size_t>(tbl.nv) * static_cast<std::size_t>(tbl.nv));
    for (int j = 0; j < tbl.nv; ++j)
        for (int l = 0; l < tbl.nv; ++l) {
            const double dv = vg.nodes[static_cast<std::size_t>(j)] - vg.nodes[static_cast<std::size_t>(l)];
            tbl.vpart[static_cast<std::size_t>(j) * static_cast<std::size_t>(tbl.nv) + static_cast<std::size_t>(l)] =
                pref * std::exp(-0.25 * dv * dv / t);
        }

    tbl.xpart.resize(static_cast<std::size_t>(tbl.nx) * static_cast<std::size_t>(tbl.nv) *
                     static_cast<std::size_t>(tbl.nv));
    for (int d = 0; d < tbl.nx; ++d) {
        const double dx = xg.nodes[static_cast<std::size_t>(d)];  // x_i - x_k mod 1
        for (int j = 0; j < tbl.nv; ++j)
            for (int l = 0; l < tbl.nv; ++l) {
                const double vj = vg.nodes[static_cast<std::size_t>(j)];
                const double vl = vg.nodes[static_cast<std::size_t>(l)];
                // Gamma's x argument including its drift shift: the velocity midpoint
                const double u0 = wrap_symmetric(dx - 0.5 * t * (vj + vl));
                double s = 0;
                for (int k = -n_img; k <= n_img; ++k) {
                    const double u = u0 + static_cast<double>(k);
                    s += std::exp(-3.0 * u * u / t3);
                }
                tbl.xpart[(static_cast<std::size_t>(d) * static_cast<std::size_t>(tbl.nv) +
                           static_cast<std::size_t>(j)) * static_cast<std::size_t>(tbl.nv) +
                          static_cast<std::size_t>(l)] = s;
            }
    }
    return tbl;
}

/// out(i,j) += scale * sum_{k,l} kernel(i-k, j, l) in(k,l) dx dv
inline void convolve_with_tables(const GreenTables& tbl, const PhaseField& in, PhaseField& out,
                                 double scale)
{
    const int nx = tbl.nx, nv = tbl.nv;
    const double w = in.xgrid->dx * in.vgrid->dv * scale;
    std::vector<double> terms(static_cast<std::size_t>(nx) * static_cast<std::size_t>(nv));
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nv; ++j) {
            std::size_t m = 0;
            for (int k = 0; k < nx; ++k) {
                const int d = (i - k + nx) % nx;
                const double* xrow = &tbl.xpart[(static_cast<std::size_t>(d) * static_cast<std::size_t>(nv) +
                                                 static_cast<std::size_t>(j)) * static_cast<std::size_t>(nv)];
                const double* vrow = &tbl.vpart[static_cast<std::size_t>(j) * static_cast<std::size_t>(nv)];
                const auto col = in.column(k);
                for (int l = 0; l < nv; ++l) terms[m++] = xrow[l] * vrow[l] * col[static_cast<std::size_t>(l)];
            }
            out.at(i, j) += pairwise_sum(terms) * w;
        }
}

}  // namespace detail

/// propagate torus initial data by group convolution with G:
/// f(t,x,v) = int G(t, x - xi - t eta, v - eta) f_in(xi, eta) dxi deta
inline PhaseField oracle_solve(const PhaseField& f_in, double t, GreenParams params = GreenParams())
{
    if (f_in.rep != Representation::f)
        throw std::invalid_argument("oracle_solve: initial data must be in f-representation");
    if (!(t > 1e-6))
        throw std::invalid_argument("oracle_solve: time must exceed the near-pole cutoff 1e-6");
    const auto tbl = detail::build_green_tables(t, *f_in.xgrid, *f_in.vgrid, params);
    PhaseField out(Representation::f, f_in.xgrid, f_in.vgrid, 0.0);
    out.time = f_in.time + t;
    detail::convolve_with_tables(tbl, f_in, out, 1.0);
    return out;
}

/// Duhamel integral for the zero-initial-data source problem:
/// f(t,x,v) = int_0^t int G(t - tau, x - xi - (t - tau) eta, v - eta) s(tau,xi,eta),
/// with a midpoint rule in tau so the kernel is never evaluated at its pole
inline PhaseField duhamel_source(const std::function<double(double, double, double)>& source,
                                 double t, TorusGridPtr xgrid, VelocityGridPtr vgrid, int n_tau,
                                 GreenParams params = GreenParams())
{
    if (!(t > 0.0)) throw std::invalid_argument("duhamel_source: requires t > 0");
    if (n_tau < 1) throw std::invalid_argument("duhamel_source: need at least one time slice");
    const double dtau = t / static_cast<double>(n_tau);

    PhaseField out(Representation::f, xgrid, vgrid, 0.0);
    out.time = t;
    for (int m = 0; m < n_tau; ++m) {
        const double tau = (static_cast<double>(m) + 0.5) * dtau;
        PhaseField slice(Representation::f, xgrid, vgrid);
        slice.fill([&](double xi, double eta) { return source(tau, xi, eta); });
        const auto tbl = detail::build_green_tables(t - tau, *xgrid, *vgrid, params);
        detail::convolve_with_tables(tbl, slice, out, dtau);
    }
    return out;
}

}  // namespace kfp
