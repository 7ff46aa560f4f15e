#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "kfp/field.hpp"
#include "kfp/fourier.hpp"
#include "kfp/numeric.hpp"

namespace kfp {

/// generator of the phi-entropy family on [0, infinity):
/// phi_beta(z) = (z^(2-beta) - (2-beta) z + 1 - beta) / (1 - beta) for beta in [0,1),
/// phi_1(z) = z log z - z + 1; the beta -> 1 limit is taken explicitly near one
inline double phi_entropy_generator(double beta, double z)
{
    if (z < 0) throw std::invalid_argument("phi: argument must be nonnegative");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("phi: beta must lie in [0,1]");
    if (std::abs(1.0 - beta) < 1e-8) {
        if (z == 0.0) return 1.0;  // z log z -> 0
        return z * std::log(z) - z + 1.0;
    }
    const double zp = (z == 0.0) ? 0.0 : std::exp((2.0 - beta) * std::log(z));
    return (zp - (2.0 - beta) * z + 1.0 - beta) / (1.0 - beta);
}

/// phi_beta'(z) = (2-beta)(z^(1-beta) - 1)/(1-beta); log z at beta = 1
inline double phi_entropy_derivative(double beta, double z)
{
    if (!(z > 0)) throw std::invalid_argument("phi': argument must be positive");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("phi': beta must lie in [0,1]");
    if (std::abs(1.0 - beta) < 1e-8) return std::log(z);
    return (2.0 - beta) * (std::exp((1.0 - beta) * std::log(z)) - 1.0) / (1.0 - beta);
}

namespace detail {

template <typename Ref>
double bregman_integral(const PhaseField& h1, const Ref& ref, double beta)
{
    const auto& w = h1.vgrid->weights;
    const double dx = h1.xgrid->dx;
    std::vector<double> col_terms(static_cast<std::size_t>(h1.nx()));
    std::vector<double> terms(static_cast<std::size_t>(h1.nv()));
    for (int i = 0; i < h1.nx(); ++i) {
        const auto col = h1.column(i);
        for (int j = 0; j < h1.nv(); ++j) {
            const double b = ref(i, j);
            if (!(b > 0))
                throw std::invalid_argument("relative_phi_entropy: reference must be positive");
            const double a = col[static_cast<std::size_t>(j)];
            terms[static_cast<std::size_t>(j)] =
                w[static_cast<std::size_t>(j)] *
                (phi_entropy_generator(beta, a) - phi_entropy_generator(beta, b) -
                 phi_entropy_derivative(beta, b) * (a - b));
        }
        col_terms[static_cast<std::size_t>(i)] = pairwise_sum(terms);
    }
    return pairwise_sum(col_terms) * dx;
}

}  // namespace detail

/// Bregman divergence int (phi(h1) - phi(h2) - phi'(h2)(h1 - h2)) dm
inline double relative_phi_entropy(const PhaseField& h1, const PhaseField& h2, double beta)
{
    if (!h1.same_grids(h2)) throw std::invalid_argument("relative_phi_entropy: grid mismatch");
    return detail::bregman_integral(h1, [&](int i, int j) { return h2.at(i, j); }, beta);
}

/// reference given as a macroscopic profile, constant in v per column
inline double relative_phi_entropy(const PhaseField& h1, const DensityField& rho, double beta)
{
    if (h1.nx() != rho.size()) throw std::invalid_argument("relative_phi_entropy: grid mismatch");
    return detail::bregman_integral(h1, [&](int i, int) { return rho[i]; }, beta);
}

inline double relative_phi_entropy_to_one(const PhaseField& h, double beta)
{
    return detail::bregman_integral(h, [](int, int) { return 1.0; }, beta);
}

/// two-sided entropy / L^2 comparison:
/// (1 - beta/2) Lambda^(-beta) ||h1-h2||^2 <= H_beta <= (1 - beta/2) lambda^(-beta) ||h1-h2||^2
struct CkBoundsReport {
    bool lower_ok = false;
    bool upper_ok = false;
    double entropy = 0;
    double norm_sq = 0;
    double lower_bound = 0;
    double upper_bound = 0;
    double slack = 0;  // min of the two signed margins
};

inline CkBoundsReport ck_bounds_check(const PhaseField& h1, const PhaseField& h2, double lambda,
                                      double Lambda, double beta, double tol = 1e-12)
{
    if (!(lambda > 0 && Lambda >= lambda))
        throw std::invalid_argument("ck_bounds_check: need 0 < lambda <= Lambda");
    for (const PhaseField* f : {&h1, &h2}) {
        for (double x : f->values) {
            if (x < 0 || x > Lambda + 1e-12)
                throw std::invalid_argument("ck_bounds_check: fields must take values in [0, Lambda]");
        }
    }
    CkBoundsReport r;
    r.entropy = relative_phi_entropy(h1, h2, beta);
    const double d = lp_norm_dm(h1, h2, 2);
    r.norm_sq = d * d;
    const double c = 1.0 - 0.5 * beta;
    r.lower_bound = c * std::pow(Lambda, -beta) * r.norm_sq;
    r.upper_bound = c * std::pow(lambda, -beta) * r.norm_sq;
    const double slack_lower = r.entropy - r.lower_bound;
    const double slack_upper = r.upper_bound - r.entropy;
    r.slack = std::min(slack_lower, slack_upper);
    r.lower_ok = slack_lower >= -tol;
    r.upper_ok = slack_upper >= -tol;
    return r;
}

/// entropy production of the collisional flow:
/// -(2-beta)/eps^2 * int h^(-beta) <h>^beta |dv h|^2 dm  (centered differences)
inline double entropy_dissipation(const PhaseField& h, double eps, double beta)
{
    detail::require_h(h, "entropy_dissipation");
    const auto& w = h.vgrid->weights;
    const double dv = h.vgrid->dv;
    const int nv = h.nv();
    std::vector<double> col_terms(static_cast<std::size_t>(h.nx()));
    std::vector<double> terms(static_cast<std::size_t>(nv));
    for (int i = 0; i < h.nx(); ++i) {
        const auto col = h.column(i);
        double mean = 0;
        {
            std::vector<double> mt(static_cast<std::size_t>(nv));
            for (int j = 0; j < nv; ++j) mt[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)] * col[static_cast<std::size_t>(j)];
            mean = pairwise_sum(mt);
        }
        const double mean_pow = (beta == 0.0) ? 1.0 : std::pow(std::max(mean, 0.0), beta);
        for (int j = 0; j < nv; ++j) {
            double grad;
            if (j == 0)
                grad = (col[1] - col[0]) / dv;
            else if (j == nv - 1)
                grad = (col[static_cast<std::size_t>(nv) - 1] - col[static_cast<std::size_t>(nv) - 2]) / dv;
            else
                grad = (col[static_cast<std::size_t>(j) + 1] - col[static_cast<std::size_t>(j) - 1]) / (2.0 * dv);
            const double hv = col[static_cast<std::size_t>(j)];
            const double h_pow = (beta == 0.0) ? 1.0 : std::exp(-beta * std::log(std::max(hv, 1e-300)));
            terms[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)] * h_pow * mean_pow * grad * grad;
        }
        col_terms[static_cast<std::size_t>(i)] = pairwise_sum(terms);
    }
    return -(2.0 - beta) / (eps * eps) * pairwise_sum(col_terms) * h.xgrid->dx;
}

/// zero-mean solution of -dxx u = source on the torus; the source must satisfy
/// the zero-mean compatibility condition to the given tolerance
inline DensityField poisson_solve_torus(const DensityField& source, double mean_tol = 1e-10)
{
    DensityField u(source.grid);
    u.values = poisson_solve_periodic(source.values, mean_tol);
    return u;
}

/// elliptic-regularity ratio (||dx u|| + ||dxx u||) / ||source|| in L^2 of the
/// torus; bounded by 1/(2 pi) + 1 independently of the source
inline double poisson_elliptic_estimate(const DensityField& source, double mean_tol = 1e-10)
{
    const DensityField u = poisson_solve_torus(source, mean_tol);
    const auto du = spectral_derivative(u.values);
    const auto d2u = spectral_derivative(du);
    auto l2 = [&](std::span<const double> a) {
        std::vector<double> t(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) t[k] = a[k] * a[k];
        return std::sqrt(pairwise_sum(t) * source.grid->dx);
    };
    const double src = l2(source.values);
    if (src == 0.0) return 0.0;
    return (l2(du) + l2(d2u)) / src;
}

struct ModifiedEntropy {
    double value = 0;       // ||h - M0||^2 + delta eps lambda (v . dx u, h_perp)
    double l2_sq = 0;       // ||h - M0||^2 in L^2(dm)
    double cross_term = 0;  // (v . dx u, h_perp)
};

/// hypocoercivity functional built from the macroscopic Poisson field
inline ModifiedEntropy modified_entropy(const PhaseField& h, double eps, double delta,
                                        double lambda_now)
{
    detail::require_h(h, "modified_entropy");
    if (!(delta > 0 && delta < 0.5))
        throw std::invalid_argument("modified_entropy: delta must lie in (0, 1/2)");
    const double M0 = total_mass(h);
    DensityField mean = velocity_mean(h);
    DensityField src(h.xgrid);
    for (int i = 0; i < mean.size(); ++i) src[i] = mean[i] - M0;
    DensityField u = poisson_solve_torus(src, 1e-8);
    const auto du = spectral_derivative(u.values);

    // (v . dx u, h_perp) = sum_i dx du_i <v h>_i since <v <h>> vanishes
    std::vector<double> terms(static_cast<std::size_t>(h.nx()));
    for (int i = 0; i < h.nx(); ++i)
        terms[static_cast<std::size_t>(i)] = du[static_cast<std::size_t>(i)] * velocity_moment(h, 1, i);
    ModifiedEntropy me;
    me.cross_term = pairwise_sum(terms) * h.xgrid->dx;
    const double d = l2_distance_to_constant(h, M0);
    me.l2_sq = d * d;
    me.value = me.l2_sq + delta * eps * lambda_now * me.cross_term;
    return me;
}

/// running minimum of min_x <h>^beta along a trajectory, the nonincreasing
/// coefficient floor entering the hypocoercivity estimate
struct LambdaEnvelope {
    std::vector<double> times;
    std::vector<double> lambda;        // running minimum, nonincreasing
    std::vector<double> integral;      // int_0^t (lambda_s + lambda_s') ds, telescoped

    static LambdaEnvelope build(std::span<const double> times, std::span<const double> min_mean_pow)
    {
        if (times.size() != min_mean_pow.size() || times.empty())
            throw std::invalid_argument("lambda_envelope: mismatched series");
        LambdaEnvelope env;
        env.times.assign(times.begin(), times.end());
        env.lambda.resize(times.size());
        env.integral.resize(times.size());
        double run = min_mean_pow[0];
        double acc = 0;  // trapezoid of lambda_s
        env.lambda[0] = run;
        env.integral[0] = 0;
        for (std::size_t k = 1; k < times.size(); ++k) {
            const double lk = std::min(run, min_mean_pow[k]);
            acc += 0.5 * (run + lk) * (times[k] - times[k - 1]);
            run = lk;
            env.lambda[k] = run;
            // int (lambda + lambda') = int lambda + lambda_t - lambda_0
            env.integral[k] = acc + run - env.lambda[0];
        }
        return env;
    }
};

enum class FitMode { exponential, power };

struct DecayFit {
    double rate = 0;
    double r_squared = 0;
};

/// slope of log(value) against t (exponential mode) or log(abscissa) (power mode)
inline DecayFit fit_decay_rate(std::span<const double> abscissa, std::span<const double> values,
                               FitMode mode, double window_lo = -1e300, double window_hi = 1e300)
{
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < abscissa.size(); ++k) {
        const double a = abscissa[k];
        if (a < window_lo || a > window_hi) continue;
        if (!(values[k] > 0))
            throw std::invalid_argument("fit_decay_rate: values must be positive");
        xs.push_back(mode == FitMode::exponential ? a : std::log(a));
        ys.push_back(std::log(values[k]));
    }
    if (xs.size() < 3) throw std::invalid_argument("fit_decay_rate: need at least three points in window");
    // constant series: log-values all equal, slope zero
    bool constant = true;
    for (double y : ys) constant = constant && (y == ys[0]);
    if (constant) return {0.0, 1.0};
    const LinearFit f = linear_fit(xs, ys);
    return {f.slope, f.r_squared};
}

}  // namespace kfp
