#pragma once

#include <utility>
#include <vector>

#include "alphaconv/alpha.hpp"

namespace alphaconv {

/// ln Gamma(x) for x > 0 (Lanczos g=7 approximation, ~1e-13 relative).
double log_gamma(double x);

/// Closed form for the integral of the scaled Gaussian analogue:
///   (2 pi beta / shrink)^(n/2) Gamma(beta - n/2) / Gamma(beta),
/// (2 pi / shrink)^(n/2) when beta = +inf. Requires beta > n/2 where the
/// Gamma factor has its pole.
double integral_g_alpha(int n, double beta, double shrink = 1.0);

/// Weight kernel (1 + |x|^2/(2 beta))^(-beta-order), e^(-|x|^2/2) at
/// beta = +inf; takes the squared norm. Order 1 is the mean-width weight,
/// order 2 the second-variation weight.
double weight_kernel_sq(double sq_norm, double beta, int order);

/// Point form of the kernel; pass x1 = 0 for one dimension.
double weight_kernel(double x0, double x1, double beta, int order);

struct WidthResult {
    enum class Route { Limit, Representation };
    double value = 0.0;
    Route route = Route::Representation;
    double quadrature_error_estimate = 0.0;
    // limit route only: (epsilon, difference quotient), epsilon decreasing
    std::vector<std::pair<double, double>> epsilon_schedule;
};

/// Default integration box for weighted integrals at this beta: radius
/// chosen so the analytic power-law (Gaussian) tail majorant falls below
/// `tail_share` of the closed-form head.
GridSpec meanwidth_box(int n, double beta, double tail_share, int max_m);

/// Representation route: quadrature of h_f * weight over the dual box plus
/// a linear-growth tail estimate. Throws "domain too small" when the
/// boundary contribution exceeds 1% of the head integral.
WidthResult mean_width_repr(const AlphaFn& f, const GridSpec& dual);
WidthResult mean_width_repr(const AlphaFn& f);  // default per-beta box

/// Limit route: difference quotients of the regularized-transform identity
///   base(G * (eps . f)) = |x|^2/2 - eps (base f + eps |x|^2/2)*,
/// Richardson-extrapolated (order 1) to eps = 0. The reference integral of
/// G_alpha comes from the closed form. epsilons must decrease strictly.
WidthResult mean_width_limit(const AlphaFn& f, std::span<const double> epsilons);
WidthResult mean_width_limit(const AlphaFn& f);  // schedule {0.02, 0.01, 0.005}

}  // namespace alphaconv
