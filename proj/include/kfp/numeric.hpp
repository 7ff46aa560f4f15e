#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace kfp {

constexpr double PI = 3.14159265358979323846;

/// pairwise (cascade) summation; error grows like log(n) instead of n
inline double pairwise_sum(std::span<const double> a)
{
    const std::size_t n = a.size();
    if (n <= 8) {
        double s = 0;
        for (double x : a) s += x;
        return s;
    }
    const std::size_t m = n / 2;
    return pairwise_sum(a.subspan(0, m)) + pairwise_sum(a.subspan(m));
}

inline double pairwise_sum(const std::vector<double>& a)
{
    return pairwise_sum(std::span<const double>(a));
}

/// standard Gaussian density (2*pi)^(-1/2) exp(-v^2/2)
inline double gaussian_weight(double v)
{
    return std::exp(-0.5 * v * v) / std::sqrt(2.0 * PI);
}

/// Japanese bracket <y> = sqrt(1 + y^2)
inline double bracket(double y)
{
    return std::sqrt(1.0 + y * y);
}

/// reduce to the fundamental domain [0,1)
inline double wrap_unit(double x)
{
    double y = x - std::floor(x);
    if (y >= 1.0) y -= 1.0;  // floor rounding at e.g. x = -1e-18
    return y;
}

/// representative of x mod 1 with minimal absolute value, in [-1/2, 1/2)
inline double wrap_symmetric(double x)
{
    double y = wrap_unit(x);
    return (y >= 0.5) ? y - 1.0 : y;
}

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

/// ordinary least squares y ~ intercept + slope * x
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0)
        throw std::invalid_argument("linear_fit: abscissae are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = (syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

/// probabilists' Hermite polynomial He_k, eigenfunctions of the
/// Ornstein-Uhlenbeck operator: L_OU He_k = -k He_k
inline double hermite_he(int k, double v)
{
    if (k < 0) throw std::invalid_argument("hermite_he: negative degree");
    double h0 = 1.0;
    if (k == 0) return h0;
    double h1 = v;
    for (int i = 1; i < k; ++i) {
        const double h2 = v * h1 - static_cast<double>(i) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

/// FNV-1a, used to stamp artifact files with their generating config
inline std::uint64_t fnv1a_hash(std::span<const char> bytes)
{
    std::uint64_t h = 1469598103934665603ull;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

inline bool all_finite(std::span<const double> a)
{
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace kfp
