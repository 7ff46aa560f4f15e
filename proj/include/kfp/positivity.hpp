#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "kfp/field.hpp"
#include "kfp/geometry.hpp"
#include "kfp/numeric.hpp"

namespace kfp {

/// Parameters of the explicit barrier constructions.  c0 stands in for the
/// small universal constant of the forward barrier; every derived constant is
/// reported so runs can be audited.
struct BarrierParams {
    double delta = 0.5;
    double tau = 1.0;
    double r = 0.5;
    double x0 = 0.5;
    double v0 = 0.0;
    double c0 = 0.01;
    // upper (initial-layer) barrier data
    double Lambda = 2.0;
    double eps = 1.0;
    double R = 1.0;
    double x1 = 0.5;
    double v1 = 0.0;

    void validate_lower() const
    {
        if (!(delta > 0 && delta <= 1) || !(tau > 0 && tau <= 1) || !(r > 0 && r <= 1))
            throw std::invalid_argument("BarrierParams: delta, tau, r must lie in (0,1]");
        if (!(c0 > 0)) throw std::invalid_argument("BarrierParams: c0 must be positive");
    }
};

/// C0 = delta <tau/r>^2 <v0>^2 / (8 c0)
inline double lower_barrier_drift_constant(const BarrierParams& p)
{
    const double b1 = bracket(p.tau / p.r);
    const double b2 = bracket(p.v0);
    return p.delta * b1 * b1 * b2 * b2 / (8.0 * p.c0);
}

/// time horizon min(T, tau, c0 <tau/r>^-2 <v0>^-2) of the conclusion region
inline double lower_barrier_horizon(const BarrierParams& p, double T)
{
    const double b1 = bracket(p.tau / p.r);
    const double b2 = bracket(p.v0);
    return std::min({T, p.tau, p.c0 / (b1 * b1 * b2 * b2)});
}

/// forward-in-time lower barrier
///   -C0 t + (delta/2) (1 - r^-2 |x - x0 - t v|^2 - tau^2 r^-2 |v - v0|^2)
inline double lower_barrier_value(const BarrierParams& p, const KineticPoint& z)
{
    p.validate_lower();
    const double C0 = lower_barrier_drift_constant(p);
    const double dxv = z.position_delta(0, p.x0 + z.t * z.v[0]);
    const double dv = z.v[0] - p.v0;
    const double quad = 1.0 - (dxv * dxv) / (p.r * p.r) - p.tau * p.tau * (dv * dv) / (p.r * p.r);
    return -C0 * z.t + 0.5 * p.delta * quad;
}

/// conclusion region P: t <= horizon, |x - x0 - t v| < r/2, |v - v0| < r/(2 tau)
inline bool in_lower_conclusion_region(const BarrierParams& p, const KineticPoint& z, double T)
{
    if (z.t < 0 || z.t > lower_barrier_horizon(p, T)) return false;
    const double dxv = z.position_delta(0, p.x0 + z.t * z.v[0]);
    if (!(std::abs(dxv) < 0.5 * p.r)) return false;
    return std::abs(z.v[0] - p.v0) < 0.5 * p.r / p.tau;
}

/// barrier region of the comparison argument:
/// t <= min(T, tau), |x - x0 - t v|^2 + tau^2 |v - v0|^2 < r^2
inline bool in_lower_barrier_region(const BarrierParams& p, const KineticPoint& z, double T)
{
    if (z.t < 0 || z.t > std::min(T, p.tau)) return false;
    const double dxv = z.position_delta(0, p.x0 + z.t * z.v[0]);
    const double dv = z.v[0] - p.v0;
    return dxv * dxv + p.tau * p.tau * dv * dv < p.r * p.r;
}

struct BarrierReport {
    bool pass = false;
    double worst_margin = 0;           // min over the conclusion region of h - delta/8
    double worst_ordering_margin = 0;  // min over the barrier region of h - barrier
    long points_checked = 0;
    long ordering_points = 0;
    double horizon = 0;
    double drift_constant = 0;  // C0 echoed
    double tolerance = 0;
};

/// verify h >= delta/8 on the conclusion region and h >= barrier on the full
/// comparison region over stored snapshots; violated hypotheses surface as a
/// failed report, never as an exception
inline BarrierReport barrier_subsolution_check(const BarrierParams& p,
                                               std::span<const PhaseField> snapshots, double T,
                                               double tol = 1e-6)
{
    p.validate_lower();
    BarrierReport rep;
    rep.horizon = lower_barrier_horizon(p, T);
    rep.drift_constant = lower_barrier_drift_constant(p);
    rep.tolerance = tol;
    double worst = std::numeric_limits<double>::infinity();
    double worst_ord = std::numeric_limits<double>::infinity();
    long count = 0, count_ord = 0;
    for (const PhaseField& snap : snapshots) {
        if (snap.time < 0 || snap.time > std::min(T, p.tau)) continue;
        for (int i = 0; i < snap.nx(); ++i)
            for (int j = 0; j < snap.nv(); ++j) {
                KineticPoint z = KineticPoint::torus(snap.time, snap.xgrid->nodes[static_cast<std::size_t>(i)],
                                                     snap.vgrid->nodes[static_cast<std::size_t>(j)]);
                if (in_lower_barrier_region(p, z, T)) {
                    ++count_ord;
                    worst_ord = std::min(worst_ord, snap.at(i, j) - lower_barrier_value(p, z));
                }
                if (snap.time <= rep.horizon && in_lower_conclusion_region(p, z, T)) {
                    ++count;
                    worst = std::min(worst, snap.at(i, j) - p.delta / 8.0);
                }
            }
    }
    rep.points_checked = count;
    rep.ordering_points = count_ord;
    rep.worst_margin = count > 0 ? worst : 0.0;
    rep.worst_ordering_margin = count_ord > 0 ? worst_ord : 0.0;
    rep.pass = count > 0 && worst >= -tol && worst_ord >= -tol;
    return rep;
}

/// validity window of the initial-layer barrier: t <= eps delta / (4 (1 + R))
inline double upper_barrier_window(const BarrierParams& p)
{
    return p.eps * p.delta / (4.0 * (1.0 + p.R));
}

/// initial-layer upper barrier C1 t + C2 (|x - x1 - t v / eps|^2 + |v - v1|^2)
/// with C2 = 2 Lambda / delta^2 and C1 = 2 c0 (1 + R^2) / (eps delta)^2
inline double upper_barrier_value(const BarrierParams& p, const KineticPoint& z)
{
    if (!(z.t >= 0 && z.t <= upper_barrier_window(p)))
        throw std::invalid_argument("upper_barrier_value: time outside the validity window");
    const double C2 = 2.0 * p.Lambda / (p.delta * p.delta);
    const double C1 = 2.0 * p.c0 * (1.0 + p.R * p.R) / (p.eps * p.eps * p.delta * p.delta);
    const double dx = z.position_delta(0, p.x1 + z.t * z.v[0] / p.eps);
    const double dv = z.v[0] - p.v1;
    return C1 * z.t + C2 * (dx * dx + dv * dv);
}

struct InitialLayerReport {
    bool pass = false;
    double worst_excess = 0;  // max of |h - h_in(x1,v1)| - barrier - osc
    double oscillation = 0;
    long points_checked = 0;
    double window = 0;
};

/// continuity at the initial time: |h(t,x,v) - h_in(x1,v1)| <= barrier + osc
/// on the ball B_delta(x1,v1) within the validity window
inline InitialLayerReport initial_layer_check(const BarrierParams& p,
                                              std::span<const PhaseField> snapshots,
                                              const PhaseField& h_in, double tol = 1e-9)
{
    InitialLayerReport rep;
    rep.window = upper_barrier_window(p);

    // locate the anchor node and the local oscillation of the initial data
    const auto& xs = h_in.xgrid->nodes;
    const auto& vs = h_in.vgrid->nodes;
    int i1 = 0, j1 = 0;
    for (int i = 0; i < h_in.nx(); ++i)
        if (std::abs(wrap_symmetric(xs[static_cast<std::size_t>(i)] - p.x1)) <
            std::abs(wrap_symmetric(xs[static_cast<std::size_t>(i1)] - p.x1)))
            i1 = i;
    for (int j = 0; j < h_in.nv(); ++j)
        if (std::abs(vs[static_cast<std::size_t>(j)] - p.v1) < std::abs(vs[static_cast<std::size_t>(j1)] - p.v1))
            j1 = j;
    const double ref = h_in.at(i1, j1);

    auto in_ball = [&](int i, int j) {
        const double dx = wrap_symmetric(xs[static_cast<std::size_t>(i)] - p.x1);
        const double dv = vs[static_cast<std::size_t>(j)] - p.v1;
        return dx * dx + dv * dv < p.delta * p.delta;
    };
    double osc = 0;
    for (int i = 0; i < h_in.nx(); ++i)
        for (int j = 0; j < h_in.nv(); ++j)
            if (in_ball(i, j)) osc = std::max(osc, std::abs(h_in.at(i, j) - ref));
    rep.oscillation = osc;

    double worst = -std::numeric_limits<double>::infinity();
    long count = 0;
    for (const PhaseField& snap : snapshots) {
        if (snap.time < 0 || snap.time > rep.window) continue;
        for (int i = 0; i < snap.nx(); ++i)
            for (int j = 0; j < snap.nv(); ++j) {
                if (!in_ball(i, j)) continue;
                KineticPoint z = KineticPoint::torus(snap.time, xs[static_cast<std::size_t>(i)],
                                                     vs[static_cast<std::size_t>(j)]);
                const double barrier = upper_barrier_value(p, z);
                worst = std::max(worst, std::abs(snap.at(i, j) - ref) - barrier - osc);
                ++count;
            }
    }
    rep.points_checked = count;
    rep.worst_excess = count > 0 ? worst : 0.0;
    rep.pass = count > 0 && worst <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Harnack chain geometry
// ---------------------------------------------------------------------------

/// chain z_i = z_{i+1} o S_r(-tau1, 0, -tau2 sigma) reaching (t,x,v) from the
/// positivity region around (x0, v0); consistency requires t - t1 = N r^2 tau1
/// and N r tau2 = |v - v0|
struct HarnackChainParams {
    double t1 = 0;
    double t = 0, x = 0, v = 0;  // target point
    double x0 = 0, v0 = 0;       // anchor
    double r = 0.1;
    double tau1 = 0.5;
    double tau2 = 0.5;
    int N = 1;
    double R = 1.0;
    double delta = 0.5;
};

/// Step-2 recipe: choose N from the time gap and tau2 so the chain ends
/// exactly on the target velocity
inline HarnackChainParams make_chain_params(double t1, double t, double r, double tau1, double x,
                                            double v, double x0, double v0, double R = 1.0,
                                            double delta = 0.5)
{
    if (!(t > t1)) throw std::invalid_argument("harnack chain: need t > t1");
    if (!(r > 0 && tau1 > 0 && tau1 < 1)) throw std::invalid_argument("harnack chain: invalid r or tau1");
    HarnackChainParams p;
    p.t1 = t1;
    p.t = t;
    p.x = x;
    p.v = v;
    p.x0 = x0;
    p.v0 = v0;
    p.r = r;
    p.tau1 = tau1;
    p.R = R;
    p.delta = delta;
    const double n_real = (t - t1) / (r * r * tau1);
    p.N = static_cast<int>(std::llround(n_real));
    if (p.N < 1 || std::abs(n_real - static_cast<double>(p.N)) > 1e-9)
        throw std::invalid_argument("harnack chain: (t - t1)/(r^2 tau1) must be a positive integer");
    p.tau2 = r * tau1 * std::abs(v - v0) / (t - t1);
    return p;
}

/// points z_1 ... z_{N+1} of the iteration relation; z_{N+1} is the target
/// exactly and v_1 equals v_0 exactly
inline std::vector<KineticPoint> harnack_chain(const HarnackChainParams& p)
{
    if (p.N < 1) throw std::invalid_argument("harnack_chain: N must be a positive integer");
    const double dv = p.v - p.v0;
    if (dv == 0.0) throw std::invalid_argument("harnack_chain: zero velocity displacement");
    const double sigma = dv > 0 ? 1.0 : -1.0;

    std::vector<KineticPoint> chain(static_cast<std::size_t>(p.N) + 1);
    auto v_at = [&](int i) {  // 1-based
        return i == 1 ? p.v0 : p.v0 + static_cast<double>(i - 1) * p.r * p.tau2 * sigma;
    };
    auto t_at = [&](int i) { return p.t1 + static_cast<double>(i - 1) * p.r * p.r * p.tau1; };

    // positions by the backward recursion x_i = x_{i+1} - r^2 tau1 v_{i+1}
    chain[static_cast<std::size_t>(p.N)] = KineticPoint::line(p.t, p.x, p.v);
    for (int i = p.N; i >= 1; --i) {
        const double xi = chain[static_cast<std::size_t>(i)].x[0] - p.r * p.r * p.tau1 * v_at(i + 1);
        chain[static_cast<std::size_t>(i) - 1] = KineticPoint::line(t_at(i), xi, v_at(i));
    }
    return chain;
}

struct ChainReport {
    bool pass = false;
    bool time_consistent = false;
    bool velocity_consistent = false;  // N r tau2 = |v - v0|
    bool tau2_in_range = false;
    bool departure_ok = false;
    bool start_in_ball = false;
    double endpoint_error = 0;
    double velocity_error = 0;
    double max_departure = 0;
    double departure_closed_form = 0;
    double departure_bound = 0;  // (t - t1) |v - v0|
    std::string detail;
};

/// Step-3 feasibility: departure distances, the velocity-budget identity and
/// the location of the chain start
inline ChainReport chain_feasibility_check(const HarnackChainParams& p)
{
    ChainReport rep;
    const double gap = p.t - p.t1;
    rep.time_consistent = std::abs(gap - static_cast<double>(p.N) * p.r * p.r * p.tau1) <= 1e-9 * std::max(1.0, std::abs(gap));
    if (!rep.time_consistent) {
        rep.detail = "N does not match (t - t1)/(r^2 tau1)";
        return rep;
    }
    const double dv = std::abs(p.v - p.v0);
    rep.velocity_error = std::abs(static_cast<double>(p.N) * p.r * p.tau2 - dv);
    rep.velocity_consistent = rep.velocity_error <= 1e-12 * std::max(1.0, dv);
    rep.tau2_in_range = p.tau2 >= 0.0 && p.tau2 <= 1.0 - p.tau1 + 1e-12;

    const auto chain = harnack_chain(p);
    // rebuild the endpoint by forward substitution from z_1
    double xf = chain[0].x[0];
    for (int i = 1; i <= p.N; ++i) xf += p.r * p.r * p.tau1 * chain[static_cast<std::size_t>(i)].v[0];
    const double sigma = (p.v - p.v0) > 0 ? 1.0 : -1.0;
    const double vf = p.v0 + static_cast<double>(p.N) * p.r * p.tau2 * sigma;
    const double tf = p.t1 + static_cast<double>(p.N) * p.r * p.r * p.tau1;
    rep.endpoint_error = std::max({std::abs(xf - p.x), std::abs(vf - p.v), std::abs(tf - p.t)});

    rep.departure_bound = gap * dv;
    double worst = 0, worst_cf = 0;
    bool dep_ok = true;
    for (int i = 1; i <= p.N; ++i) {
        const auto& zi = chain[static_cast<std::size_t>(i)];  // z_{i+1}, 0-based storage
        const double dep = std::abs(zi.x[0] - chain[0].x[0] - (zi.t - chain[0].t) * p.v0);
        const double cf = 0.5 * static_cast<double>(i) * static_cast<double>(i + 1) * p.r * p.r * p.r *
                          p.tau1 * p.tau2;
        worst = std::max(worst, dep);
        worst_cf = std::max(worst_cf, cf);
        dep_ok = dep_ok && std::abs(dep - cf) <= 1e-10 * std::max(1.0, cf) && dep <= rep.departure_bound + 1e-12;
    }
    rep.max_departure = worst;
    rep.departure_closed_form = worst_cf;
    rep.departure_ok = dep_ok;
    rep.start_in_ball = std::abs(chain[0].x[0] - p.x0 - p.t1 * p.v0) < 0.625 * p.R + 1e-12;
    rep.pass = rep.time_consistent && rep.velocity_consistent && rep.tau2_in_range &&
               rep.departure_ok && rep.endpoint_error <= 1e-12;
    if (!rep.start_in_ball) rep.detail = "chain start outside B_{5R/8}(x0 + t1 v0)";
    return rep;
}

// ---------------------------------------------------------------------------
// Gaussian-tail minorant fit
// ---------------------------------------------------------------------------

enum class TailSlicePolicy { min_over_x, single_slice };

struct TailFit {
    double eta1 = 0;
    double eta2 = 0;

    /// minorant value eta1 exp(-eta2 v^2); fixed evaluation order so fit-time
    /// and check-time scans agree bitwise
    double envelope(double v) const { return eta1 * std::exp(-(eta2 * (v * v))); }
};

/// least-squares envelope log h >= log eta1 - eta2 |v|^2, fitted on the
/// pointwise minimum over x and shifted down so the returned pair is a hard
/// minorant on the whole grid, never just in the least-squares sense
inline TailFit gaussian_tail_fit(const PhaseField& h,
                                 TailSlicePolicy policy = TailSlicePolicy::min_over_x,
                                 int slice_index = 0)
{
    const int nv = h.nv();
    std::vector<double> g(static_cast<std::size_t>(nv), std::numeric_limits<double>::infinity());
    if (policy == TailSlicePolicy::single_slice) {
        for (int j = 0; j < nv; ++j) g[static_cast<std::size_t>(j)] = h.at(slice_index, j);
    } else {
        for (int i = 0; i < h.nx(); ++i)
            for (int j = 0; j < nv; ++j)
                g[static_cast<std::size_t>(j)] = std::min(g[static_cast<std::size_t>(j)], h.at(i, j));
    }
    std::vector<double> v2(static_cast<std::size_t>(nv)), lg(static_cast<std::size_t>(nv));
    for (int j = 0; j < nv; ++j) {
        if (!(g[static_cast<std::size_t>(j)] > 0))
            throw std::invalid_argument("gaussian_tail_fit: nonpositive field value encountered");
        const double vj = h.vgrid->nodes[static_cast<std::size_t>(j)];
        v2[static_cast<std::size_t>(j)] = vj * vj;
        lg[static_cast<std::size_t>(j)] = std::log(g[static_cast<std::size_t>(j)]);
    }
    // constant field: eta2 = 0, eta1 = min value
    double eta2 = 0;
    bool constant = true;
    for (double y : lg) constant = constant && std::abs(y - lg[0]) <= 1e-300 + 0.0;
    if (!constant) {
        const LinearFit f = linear_fit(v2, lg);
        eta2 = std::max(-f.slope, 0.0);
    }
    double log_eta1 = std::numeric_limits<double>::infinity();
    for (int j = 0; j < nv; ++j)
        log_eta1 = std::min(log_eta1, lg[static_cast<std::size_t>(j)] + eta2 * v2[static_cast<std::size_t>(j)]);
    TailFit fit{std::exp(log_eta1), eta2};
    // the log-domain shift leaves ulp-level slack; nudge until the direct
    // scan confirms the pointwise inequality on the whole grid
    for (int guard = 0; guard < 64; ++guard) {
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < h.nx(); ++i)
            for (int j = 0; j < nv; ++j)
                worst = std::min(worst, h.at(i, j) - fit.envelope(h.vgrid->nodes[static_cast<std::size_t>(j)]));
        if (worst >= 0) break;
        fit.eta1 *= 1.0 - 4e-16 * static_cast<double>(1 << std::min(guard, 20));
    }
    return fit;
}

/// scan the grid for the hard minorant property h >= eta1 exp(-eta2 v^2)
inline double tail_minorant_worst_margin(const PhaseField& h, const TailFit& fit)
{
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < h.nx(); ++i)
        for (int j = 0; j < h.nv(); ++j)
            worst = std::min(worst, h.at(i, j) - fit.envelope(h.vgrid->nodes[static_cast<std::size_t>(j)]));
    return worst;
}

}  // namespace kfp
