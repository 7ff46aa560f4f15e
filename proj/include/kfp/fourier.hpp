#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "kfp/numeric.hpp"

namespace kfp {

using cplx = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n && (n & (n - 1)) == 0; }

/// in-place radix-2 Cooley-Tukey, sign=-1 forward / +1 inverse (unscaled)
inline void fft_pow2(std::vector<cplx>& a, int sign)
{
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * PI / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx t = w * a[i + k + len / 2];
                a[i + k] = u + t;
                a[i + k + len / 2] = u - t;
                w *= wl;
            }
        }
    }
}

/// direct O(n^2) transform for grid sizes that are not powers of two
inline std::vector<cplx> dft_direct(std::span<const cplx> a, int sign)
{
    const std::size_t n = a.size();
    std::vector<cplx> out(n, cplx(0, 0));
    for (std::size_t k = 0; k < n; ++k) {
        cplx s(0, 0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sign * 2.0 * PI * static_cast<double>(k * j % n) / static_cast<double>(n);
            s += a[j] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = s;
    }
    return out;
}

}  // namespace detail

/// forward DFT, convention X_k = sum_j x_j exp(-2*pi*i*j*k/n)
inline std::vector<cplx> dft(std::span<const double> x)
{
    std::vector<cplx> a(x.begin(), x.end());
    if (detail::is_pow2(a.size())) {
        detail::fft_pow2(a, -1);
        return a;
    }
    return detail::dft_direct(a, -1);
}

inline std::vector<double> idft_real(std::vector<cplx> a)
{
    const std::size_t n = a.size();
    if (detail::is_pow2(n))
        detail::fft_pow2(a, +1);
    else
        a = detail::dft_direct(a, +1);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real() / static_cast<double>(n);
    return out;
}

/// exact translation of a band-limited periodic sample set: y(x) = x(x - shift),
/// shift in units of the domain length (domain is [0,1))
inline void spectral_shift(std::span<double> values, double shift)
{
    const std::size_t n = values.size();
    auto a = dft(std::vector<double>(values.begin(), values.end()));
    for (std::size_t k = 0; k < n; ++k) {
        // signed frequency in [-n/2, n/2)
        const long kk = (k <= n / 2) ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
        if (2 * static_cast<std::size_t>(std::abs(kk)) == n) {
            // Nyquist mode has no well-defined phase; keep its cosine part
            const double c = std::cos(2.0 * PI * static_cast<double>(kk) * shift);
            a[k] *= c;
            continue;
        }
        const double ang = -2.0 * PI * static_cast<double>(kk) * shift;
        a[k] *= cplx(std::cos(ang), std::sin(ang));
    }
    auto y = idft_real(std::move(a));
    for (std::size_t i = 0; i < n; ++i) values[i] = y[i];
}

/// zero-mean solution of -u'' = s on the unit torus via modewise inversion
/// with the continuous symbol (2*pi*k)^2; requires a zero-mean source
inline std::vector<double> poisson_solve_periodic(std::span<const double> source, double mean_tol = 1e-10)
{
    const std::size_t n = source.size();
    if (n < 2) throw std::invalid_argument("poisson_solve_periodic: grid too small");
    double mean = pairwise_sum(source) / static_cast<double>(n);
    if (std::abs(mean) > mean_tol)
        throw std::invalid_argument("poisson_solve_periodic: source mean exceeds compatibility tolerance");
    auto a = dft(std::vector<double>(source.begin(), source.end()));
    a[0] = cplx(0, 0);
    for (std::size_t k = 1; k < n; ++k) {
        const long kk = (k <= n / 2) ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
        const double sym = 4.0 * PI * PI * static_cast<double>(kk) * static_cast<double>(kk);
        a[k] /= sym;
    }
    return idft_real(std::move(a));
}

/// spectral first derivative of a periodic sample set on [0,1)
inline std::vector<double> spectral_derivative(std::span<const double> values)
{
    const std::size_t n = values.size();
    auto a = dft(std::vector<double>(values.begin(), values.end()));
    for (std::size_t k = 0; k < n; ++k) {
        const long kk = (k <= n / 2) ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
        if (2 * static_cast<std::size_t>(std::abs(kk)) == n) {
            a[k] = cplx(0, 0);  // derivative of the Nyquist cosine has odd symmetry lost on the grid
            continue;
        }
        a[k] *= cplx(0.0, 2.0 * PI * static_cast<double>(kk));
    }
    return idft_real(std::move(a));
}

}  // namespace kfp
