#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "kfp/field.hpp"
#include "kfp/fourier.hpp"

namespace kfp {

/// interpolation used by the semi-Lagrangian x-shift
enum class TransportScheme {
    cubic,          // 4-point Lagrange (default)
    cubic_clamped,  // cubic with monotone clamping to the bracketing nodes
    quintic,        // 6-point Lagrange, for step-refinement studies
    spectral        // exact band-limited shift
};

inline TransportScheme transport_scheme_from_string(const std::string& s)
{
    if (s == "cubic") return TransportScheme::cubic;
    if (s == "cubic_clamped") return TransportScheme::cubic_clamped;
    if (s == "quintic") return TransportScheme::quintic;
    if (s == "spectral") return TransportScheme::spectral;
    throw std::invalid_argument("unknown transport scheme: " + s);
}

namespace detail {

inline std::array<double, 4> cubic_weights(double th)
{
    return {
        -th * (th - 1.0) * (th - 2.0) / 6.0,
        (th + 1.0) * (th - 1.0) * (th - 2.0) / 2.0,
        -(th + 1.0) * th * (th - 2.0) / 2.0,
        (th + 1.0) * th * (th - 1.0) / 6.0,
    };
}

inline std::array<double, 6> quintic_weights(double th)
{
    std::array<double, 6> w{};
    constexpr std::array<int, 6> off = {-2, -1, 0, 1, 2, 3};
    for (int k = 0; k < 6; ++k) {
        double num = 1.0, den = 1.0;
        for (int m = 0; m < 6; ++m) {
            if (m == k) continue;
            num *= th - static_cast<double>(off[static_cast<std::size_t>(m)]);
            den *= static_cast<double>(off[static_cast<std::size_t>(k)] - off[static_cast<std::size_t>(m)]);
        }
        w[static_cast<std::size_t>(k)] = num / den;
    }
    return w;
}

/// shift one periodic row left by `shift` domain units: out(x) = in(x - shift)
inline void shift_row(std::span<double> row, double shift, TransportScheme scheme,
                      std::vector<double>& scratch)
{
    const int n = static_cast<int>(row.size());
    if (scheme == TransportScheme::spectral) {
        spectral_shift(row, shift);
        return;
    }
    const double q = -shift * static_cast<double>(n);  // departure offset in index units
    const double qf = std::floor(q);
    const double th = q - qf;
    int base = static_cast<int>(qf) % n;
    if (base < 0) base += n;

    scratch.assign(row.begin(), row.end());
    auto node = [&](int i, int k) {
        int idx = (i + base + k) % n;
        if (idx < 0) idx += n;
        return scratch[static_cast<std::size_t>(idx)];
    };

    // evaluate relative to the base node so constant rows pass through bitwise
    if (scheme == TransportScheme::quintic) {
        const auto w = quintic_weights(th);
        for (int i = 0; i < n; ++i) {
            const double f0 = node(i, 0);
            row[static_cast<std::size_t>(i)] =
                f0 + w[0] * (node(i, -2) - f0) + w[1] * (node(i, -1) - f0) + w[3] * (node(i, 1) - f0) +
                w[4] * (node(i, 2) - f0) + w[5] * (node(i, 3) - f0);
        }
        return;
    }

    const auto w = cubic_weights(th);
    const bool clamp = scheme == TransportScheme::cubic_clamped;
    for (int i = 0; i < n; ++i) {
        const double f0 = node(i, 0), f1 = node(i, 1);
        double val = f0 + w[0] * (node(i, -1) - f0) + w[2] * (f1 - f0) + w[3] * (node(i, 2) - f0);
        if (clamp) val = std::clamp(val, std::min(f0, f1), std::max(f0, f1));
        row[static_cast<std::size_t>(i)] = val;
    }
}

}  // namespace detail

/// free-streaming substep: each velocity row is advected by -v_j dt / eps with
/// periodic interpolation; exact for x-independent fields
inline void transport_step_inplace(PhaseField& field, double dt, double eps, TransportScheme scheme)
{
    const int nx = field.nx(), nv = field.nv();
    std::vector<double> row(static_cast<std::size_t>(nx)), scratch;
    for (int j = 0; j < nv; ++j) {
        const double shift = field.vgrid->nodes[static_cast<std::size_t>(j)] * dt / eps;
        if (shift == 0.0) continue;
        for (int i = 0; i < nx; ++i) row[static_cast<std::size_t>(i)] = field.at(i, j);
        detail::shift_row(row, shift, scheme, scratch);
        for (int i = 0; i < nx; ++i) field.at(i, j) = row[static_cast<std::size_t>(i)];
    }
}

/// half transport step of the symmetric splitting
inline PhaseField transport_half_step(const PhaseField& h, double half_dt, double eps,
                                      TransportScheme scheme = TransportScheme::cubic)
{
    if (!(eps > 0)) throw std::invalid_argument("transport_half_step: eps must be positive");
    PhaseField out = h;
    transport_step_inplace(out, half_dt, eps, scheme);
    return out;
}

}  // namespace kfp
