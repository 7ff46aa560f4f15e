#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kfp/grid.hpp"
#include "kfp/numeric.hpp"

namespace kfp {

/// the three unknowns used interchangeably: f (density), g = mu^(1/2) h, h = mu^(-1) f
enum class Representation : std::uint8_t { f = 0, g = 1, h = 2 };

inline const char* to_string(Representation r)
{
    switch (r) {
        case Representation::f: return "f";
        case Representation::g: return "g";
        case Representation::h: return "h";
    }
    return "?";
}

inline Representation representation_from_string(const std::string& s)
{
    if (s == "f") return Representation::f;
    if (s == "g") return Representation::g;
    if (s == "h") return Representation::h;
    throw std::invalid_argument("unknown representation tag: " + s);
}

/// Macroscopic (x-only) field on the torus grid.
struct DensityField {
    TorusGridPtr grid;
    std::vector<double> values;

    DensityField() = default;

    explicit DensityField(TorusGridPtr g, double fill = 0.0)
        : grid(std::move(g)), values(static_cast<std::size_t>(grid->size()), fill)
    {
    }

    int size() const { return grid->size(); }
    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }

    double mean() const { return pairwise_sum(values) * grid->dx; }
    double min() const { return *std::min_element(values.begin(), values.end()); }
    double max() const { return *std::max_element(values.begin(), values.end()); }

    double l2_dx(const DensityField& other) const
    {
        if (!(grid->size() == other.grid->size()))
            throw std::invalid_argument("DensityField: grid mismatch");
        std::vector<double> terms(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double d = values[i] - other.values[i];
            terms[i] = d * d;
        }
        return std::sqrt(pairwise_sum(terms) * grid->dx);
    }

    /// sup norm of the centered-difference gradient
    double grad_sup() const
    {
        const int n = size();
        double g = 0;
        for (int i = 0; i < n; ++i) {
            const double d = (values[static_cast<std::size_t>(grid->wrap_index(i + 1))] -
                              values[static_cast<std::size_t>(grid->wrap_index(i - 1))]) /
                             (2.0 * grid->dx);
            g = std::max(g, std::abs(d));
        }
        return g;
    }
};

/// Phase-space field on the tensor grid torus x [-V, V], stored row-major
/// with x as the slow index.  Values are tagged with their representation.
struct PhaseField {
    Representation rep = Representation::h;
    TorusGridPtr xgrid;
    VelocityGridPtr vgrid;
    std::vector<double> values;
    double time = 0;

    PhaseField() = default;

    PhaseField(Representation r, TorusGridPtr xg, VelocityGridPtr vg, double fill = 0.0)
        : rep(r), xgrid(std::move(xg)), vgrid(std::move(vg)),
          values(static_cast<std::size_t>(xgrid->size()) * static_cast<std::size_t>(vgrid->size()), fill)
    {
    }

    int nx() const { return xgrid->size(); }
    int nv() const { return vgrid->size(); }

    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(nv()) + static_cast<std::size_t>(j)]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(nv()) + static_cast<std::size_t>(j)]; }

    std::span<double> column(int i)
    {
        return std::span<double>(values).subspan(static_cast<std::size_t>(i) * static_cast<std::size_t>(nv()), static_cast<std::size_t>(nv()));
    }
    std::span<const double> column(int i) const
    {
        return std::span<const double>(values).subspan(static_cast<std::size_t>(i) * static_cast<std::size_t>(nv()), static_cast<std::size_t>(nv()));
    }

    template <typename F>
    void fill(F&& fn)
    {
        for (int i = 0; i < nx(); ++i)
            for (int j = 0; j < nv(); ++j)
                at(i, j) = fn(xgrid->nodes[static_cast<std::size_t>(i)], vgrid->nodes[static_cast<std::size_t>(j)]);
    }

    bool same_grids(const PhaseField& o) const
    {
        return nx() == o.nx() && nv() == o.nv() && vgrid->v_max == o.vgrid->v_max;
    }

    bool finite() const { return all_finite(values); }
};

/// change of unknown: f = mu h, g = mu^(1/2) h
inline PhaseField convert(const PhaseField& in, Representation target)
{
    if (in.rep == target) return in;
    PhaseField out = in;
    out.rep = target;
    const auto& nodes = in.vgrid->nodes;
    for (int j = 0; j < in.nv(); ++j) {
        const double mu = gaussian_weight(nodes[static_cast<std::size_t>(j)]);
        double factor = 1.0;
        // via the h-representation: value_target = factor * value_in
        const auto power = [&](Representation r) {
            switch (r) {
                case Representation::f: return 1.0;
                case Representation::g: return 0.5;
                case Representation::h: return 0.0;
            }
            return 0.0;
        };
        factor = std::pow(mu, power(target) - power(in.rep));
        for (int i = 0; i < in.nx(); ++i) out.at(i, j) *= factor;
    }
    return out;
}

namespace detail {

inline void require_h(const PhaseField& h, const char* who)
{
    if (h.rep != Representation::h)
        throw std::invalid_argument(std::string(who) + ": field must be in h-representation");
}

}  // namespace detail

/// velocity moment <v^order h>(x_i) against the discrete Gaussian measure
inline double velocity_moment(const PhaseField& h, int order, int i)
{
    detail::require_h(h, "velocity_moment");
    if (order < 0 || order > 2) throw std::invalid_argument("velocity_moment: order must be 0, 1 or 2");
    const auto col = h.column(i);
    const auto& w = h.vgrid->weights;
    const auto& v = h.vgrid->nodes;
    std::vector<double> terms(col.size());
    for (std::size_t j = 0; j < col.size(); ++j) {
        double p = 1.0;
        for (int k = 0; k < order; ++k) p *= v[j];
        terms[j] = w[j] * p * col[j];
    }
    return pairwise_sum(terms);
}

/// local mass <h>(x) for every column
inline DensityField velocity_mean(const PhaseField& h)
{
    detail::require_h(h, "velocity_mean");
    DensityField rho(h.xgrid);
    for (int i = 0; i < h.nx(); ++i) rho[i] = velocity_moment(h, 0, i);
    return rho;
}

/// total mass integral of h against dm = dx dmu
inline double total_mass(const PhaseField& h)
{
    detail::require_h(h, "total_mass");
    DensityField rho = velocity_mean(h);
    return rho.mean();
}

/// L^p(dm) distance, p = 1 or 2
inline double lp_norm_dm(const PhaseField& h1, const PhaseField& h2, int p)
{
    if (!h1.same_grids(h2)) throw std::invalid_argument("lp_norm_dm: grid mismatch");
    if (h1.rep != h2.rep) throw std::invalid_argument("lp_norm_dm: representation mismatch");
    if (p != 1 && p != 2) throw std::invalid_argument("lp_norm_dm: p must be 1 or 2");
    const auto& w = h1.vgrid->weights;
    const double dx = h1.xgrid->dx;
    std::vector<double> col_terms(static_cast<std::size_t>(h1.nx()));
    std::vector<double> terms(static_cast<std::size_t>(h1.nv()));
    for (int i = 0; i < h1.nx(); ++i) {
        const auto a = h1.column(i);
        const auto b = h2.column(i);
        for (std::size_t j = 0; j < terms.size(); ++j) {
            const double d = std::abs(a[j] - b[j]);
            terms[j] = w[j] * (p == 1 ? d : d * d);
        }
        col_terms[static_cast<std::size_t>(i)] = pairwise_sum(terms);
    }
    const double s = pairwise_sum(col_terms) * dx;
    return p == 1 ? s : std::sqrt(s);
}

/// distance of h to the constant state c in L^2(dm)
inline double l2_distance_to_constant(const PhaseField& h, double c)
{
    PhaseField ref = h;
    std::fill(ref.values.begin(), ref.values.end(), c);
    return lp_norm_dm(h, ref, 2);
}

/// macro-micro decomposition h = <h> + h_perp with <h_perp> = 0 columnwise
inline std::pair<DensityField, PhaseField> macro_micro_split(const PhaseField& h)
{
    detail::require_h(h, "macro_micro_split");
    DensityField mean = velocity_mean(h);
    PhaseField perp = h;
    for (int i = 0; i < h.nx(); ++i) {
        const double m = mean[i];
        for (int j = 0; j < h.nv(); ++j) perp.at(i, j) -= m;
    }
    return {std::move(mean), std::move(perp)};
}

// ---------------------------------------------------------------------------
// snapshot serialization; binary form round-trips bit-exactly
// ---------------------------------------------------------------------------

namespace snapshot {

constexpr std::uint32_t MAGIC = 0x4b465046u;  // "KFPF"

inline void write_binary(const PhaseField& field, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open snapshot file for writing: " + path);
    const std::uint32_t magic = MAGIC;
    const std::uint32_t nx = static_cast<std::uint32_t>(field.nx());
    const std::uint32_t nv = static_cast<std::uint32_t>(field.nv());
    const std::uint8_t rep = static_cast<std::uint8_t>(field.rep);
    const double vmax = field.vgrid->v_max;
    const double time = field.time;
    out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
    out.write(reinterpret_cast<const char*>(&nx), sizeof nx);
    out.write(reinterpret_cast<const char*>(&nv), sizeof nv);
    out.write(reinterpret_cast<const char*>(&rep), sizeof rep);
    out.write(reinterpret_cast<const char*>(&vmax), sizeof vmax);
    out.write(reinterpret_cast<const char*>(&time), sizeof time);
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

inline PhaseField read_binary(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot file: " + path);
    std::uint32_t magic = 0, nx = 0, nv = 0;
    std::uint8_t rep = 0;
    double vmax = 0, time = 0;
    in.read(reinterpret_cast<char*>(&magic), sizeof magic);
    in.read(reinterpret_cast<char*>(&nx), sizeof nx);
    in.read(reinterpret_cast<char*>(&nv), sizeof nv);
    in.read(reinterpret_cast<char*>(&rep), sizeof rep);
    in.read(reinterpret_cast<char*>(&vmax), sizeof vmax);
    in.read(reinterpret_cast<char*>(&time), sizeof time);
    if (!in || magic != MAGIC) throw std::runtime_error("bad snapshot header: " + path);
    PhaseField field(static_cast<Representation>(rep), make_torus_grid(static_cast<int>(nx)),
                     make_velocity_grid(vmax, static_cast<int>(nv)));
    field.time = time;
    in.read(reinterpret_cast<char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("snapshot truncated: " + path);
    return field;
}

inline void write_csv(const PhaseField& field, const std::string& path, std::uint64_t config_hash = 0)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open snapshot file for writing: " + path);
    out << "# config_hash=0x" << std::hex << config_hash << std::dec << "\n";
    out.precision(17);
    out << "n_x,n_v,v_max,representation,time\n"
        << field.nx() << ',' << field.nv() << ',' << field.vgrid->v_max << ','
        << to_string(field.rep) << ',' << field.time << "\n";
    for (int i = 0; i < field.nx(); ++i) {
        for (int j = 0; j < field.nv(); ++j) {
            out << field.at(i, j);
            out << (j + 1 == field.nv() ? '\n' : ',');
        }
    }
}

}  // namespace snapshot

}  // namespace kfp
