#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kfp/numeric.hpp"

namespace kfp {

/// Point z = (t, x, v) of the kinetic phase space carrying the Galilean
/// group and scaling structure.  Each position component is flagged as
/// periodic (stored in [0,1), distances via the minimal representative)
/// or as a line component.
struct KineticPoint {
    double t = 0;
    std::vector<double> x;
    std::vector<double> v;
    std::vector<bool> periodic;

    KineticPoint() = default;

    KineticPoint(double t_, std::vector<double> x_, std::vector<double> v_,
                 std::vector<bool> periodic_)
        : t(t_), x(std::move(x_)), v(std::move(v_)), periodic(std::move(periodic_))
    {
        if (x.size() != v.size() || x.size() != periodic.size())
            throw std::invalid_argument("KineticPoint: mismatched component counts");
        reduce();
    }

    /// 1-d point on the line
    static KineticPoint line(double t, double x, double v)
    {
        return KineticPoint(t, {x}, {v}, {false});
    }

    /// 1-d point with periodic position
    static KineticPoint torus(double t, double x, double v)
    {
        return KineticPoint(t, {x}, {v}, {true});
    }

    std::size_t dim() const { return x.size(); }

    void reduce()
    {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (periodic[i]) x[i] = wrap_unit(x[i]);
    }

    /// position difference respecting periodic components
    double position_delta(std::size_t i, double other_xi) const
    {
        const double d = x[i] - other_xi;
        return periodic[i] ? wrap_symmetric(d) : d;
    }
};

namespace detail {

inline void check_compatible(const KineticPoint& a, const KineticPoint& b)
{
    if (a.dim() != b.dim())
        throw std::invalid_argument("kinetic geometry: dimension mismatch");
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (a.periodic[i] != b.periodic[i])
            throw std::invalid_argument("kinetic geometry: periodicity flags differ");
}

}  // namespace detail

/// Galilean product z0 o z = (t0 + t, x0 + x + t v0, v0 + v)
inline KineticPoint galilean_compose(const KineticPoint& z0, const KineticPoint& z)
{
    detail::check_compatible(z0, z);
    KineticPoint out = z0;
    out.t = z0.t + z.t;
    for (std::size_t i = 0; i < z0.dim(); ++i) {
        out.x[i] = z0.x[i] + z.x[i] + z.t * z0.v[i];
        out.v[i] = z0.v[i] + z.v[i];
    }
    out.reduce();
    return out;
}

/// inverse element z^{-1} = (-t, -x + t v, -v)
inline KineticPoint galilean_inverse(const KineticPoint& z)
{
    KineticPoint out = z;
    out.t = -z.t;
    for (std::size_t i = 0; i < z.dim(); ++i) {
        out.x[i] = -z.x[i] + z.t * z.v[i];
        out.v[i] = -z.v[i];
    }
    out.reduce();
    return out;
}

/// kinetic scaling S_r(t,x,v) = (r^2 t, r^3 x, r v); acts on representative
/// coordinates, so no periodic reduction is applied
inline KineticPoint kinetic_scale(double r, const KineticPoint& z)
{
    if (!(r > 0)) throw std::invalid_argument("kinetic_scale: r must be positive");
    KineticPoint out = z;
    out.t = r * r * z.t;
    for (std::size_t i = 0; i < z.dim(); ++i) {
        out.x[i] = r * r * r * z.x[i];
        out.v[i] = r * z.v[i];
    }
    return out;
}

/// quasi-norm max(|t|^(1/2), max_i |x_i|^(1/3), |v|); periodic position
/// components are measured by their minimal representative
inline double kinetic_norm(const KineticPoint& z)
{
    double n = std::sqrt(std::abs(z.t));
    for (std::size_t i = 0; i < z.dim(); ++i) {
        const double xi = z.periodic[i] ? wrap_symmetric(z.x[i]) : z.x[i];
        n = std::max(n, std::cbrt(std::abs(xi)));
    }
    double vv = 0;
    for (double vi : z.v) vv += vi * vi;
    return std::max(n, std::sqrt(vv));
}

/// group-relative coordinates z0^{-1} o z
inline KineticPoint relative_coordinates(const KineticPoint& z0, const KineticPoint& z)
{
    return galilean_compose(galilean_inverse(z0), z);
}

/// Cylinder Q_r(z0): t0 - r^2 < t <= t0, |x - x0 - (t-t0) v0| < r^3, |v - v0| < r.
/// Radii below 1/2 keep periodic membership unambiguous.
struct Cylinder {
    KineticPoint center;
    double radius = 1;

    Cylinder(KineticPoint c, double r) : center(std::move(c)), radius(r)
    {
        if (!(r > 0)) throw std::invalid_argument("Cylinder: radius must be positive");
    }

    bool contains(const KineticPoint& z) const
    {
        detail::check_compatible(center, z);
        const double dt = z.t - center.t;
        if (!(dt > -radius * radius && dt <= 0)) return false;
        double dx2 = 0, dv2 = 0;
        for (std::size_t i = 0; i < z.dim(); ++i) {
            const double di = z.position_delta(i, center.x[i] + dt * center.v[i]);
            dx2 += di * di;
            const double dv = z.v[i] - center.v[i];
            dv2 += dv * dv;
        }
        const double r3 = radius * radius * radius;
        return dx2 < r3 * r3 && dv2 < radius * radius;
    }

    /// equivalent set-image test: S_{1/r}(z0^{-1} o z) in Q_1(origin)
    bool contains_via_group(const KineticPoint& z) const
    {
        KineticPoint rel = relative_coordinates(center, z);
        // lift periodic components to their minimal representative before scaling
        for (std::size_t i = 0; i < rel.dim(); ++i)
            if (rel.periodic[i]) rel.x[i] = wrap_symmetric(rel.x[i]);
        const KineticPoint s = kinetic_scale(1.0 / radius, rel);
        if (!(s.t > -1.0 && s.t <= 0.0)) return false;
        double dx2 = 0, dv2 = 0;
        for (std::size_t i = 0; i < s.dim(); ++i) {
            dx2 += s.x[i] * s.x[i];
            dv2 += s.v[i] * s.v[i];
        }
        return dx2 < 1.0 && dv2 < 1.0;
    }
};

/// Sampled lower bound on the kinetic Hoelder seminorm of order alpha in (0,1):
/// max over ordered sample pairs of |f(z0 o z) - f(z0)| / ||z||^alpha.
/// A finite sample set only ever bounds the true seminorm from below.
inline double holder_seminorm_estimate(
    const std::vector<std::pair<KineticPoint, double>>& samples, double alpha)
{
    if (samples.size() < 2)
        throw std::invalid_argument("holder_seminorm_estimate: need at least two samples");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("holder_seminorm_estimate: alpha must lie in (0,1)");
    double best = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t k = 0; k < samples.size(); ++k) {
            if (i == k) continue;
            const KineticPoint disp = relative_coordinates(samples[i].first, samples[k].first);
            const double norm = kinetic_norm(disp);
            if (norm <= 0) continue;
            const double ratio = std::abs(samples[k].second - samples[i].second) / std::pow(norm, alpha);
            best = std::max(best, ratio);
        }
    }
    return best;
}

}  // namespace kfp
