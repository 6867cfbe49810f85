#include "alphaconv/meanwidth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace alphaconv {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double log_gamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("log_gamma: requires x > 0");
    // shift small arguments up through Gamma(x) = Gamma(x+1)/x
    double shift = 0.0;
    while (x < 0.5) {
        shift -= std::log(x);
        x += 1.0;
    }
    static const double c[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    const double z = x - 1.0;
    double a = c[0];
    for (int k = 1; k < 9; ++k) a += c[k] / (z + k);
    const double t = z + 7.5;
    return shift + 0.5 * std::log(kTwoPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

double integral_g_alpha(int n, double beta, double shrink) {
    if (n != 1 && n != 2)
        throw std::invalid_argument("integral_g_alpha: n must be 1 or 2");
    if (!(shrink > 0.0 && shrink <= 1.0))
        throw std::invalid_argument("integral_g_alpha: shrink must lie in (0,1]");
    if (beta == kInf)
        return std::pow(kTwoPi / shrink, 0.5 * n);
    if (!(beta > 0.5 * n))
        throw std::domain_error(
            "integral_g_alpha: divergent integral, requires beta > n/2");
    return std::pow(kTwoPi * beta / shrink, 0.5 * n) *
           std::exp(log_gamma(beta - 0.5 * n) - log_gamma(beta));
}

double weight_kernel_sq(double sq_norm, double beta, int order) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("weight_kernel: order must be 1 or 2");
    if (beta == kInf) return std::exp(-0.5 * sq_norm);
    return std::exp(-(beta + order) * std::log1p(0.5 * sq_norm / beta));
}

double weight_kernel(double x0, double x1, double beta, int order) {
    return weight_kernel_sq(x0 * x0 + x1 * x1, beta, order);
}

namespace {

// Tail of the G_alpha profile outside radius R, by the power-law (Gaussian)
// majorant of the radial reduction.
double g_tail_bound(int n, double beta, double R) {
    const double cn = (n == 1) ? 2.0 : kTwoPi;
    if (beta == kInf) {
        // int_R^inf r^{n-1} e^{-r^2/2} dr <= (R^{n-2} + ...) e^{-R^2/2}
        const double head = (n == 1) ? 1.0 / R : 1.0;
        return cn * head * std::exp(-0.5 * R * R);
    }
    const double p = 2.0 * beta - n;  // > 0 under the beta > n/2 gate
    return cn * std::pow(2.0 * beta, beta) * std::pow(R, -p) / p;
}

// The node-sampled sup under-reads the true conjugate by the hull sagitta,
// at most one eighth of the largest finite second difference of the base.
double conjugate_bias_unit(const GridFn& base) {
    const GridSpec& s = base.spec();
    double worst = 0.0;
    for (int a = 0; a < s.dim(); ++a) {
        const int m = s.count(a);
        const int lines = (s.dim() == 2) ? s.count(1 - a) : 1;
        for (int j = 0; j < lines; ++j)
            for (int i = 1; i + 1 < m; ++i) {
                double v0, v1, v2;
                if (s.dim() == 1) {
                    v0 = base[i - 1]; v1 = base[i]; v2 = base[i + 1];
                } else {
                    v0 = (a == 0) ? base.at(i - 1, j) : base.at(j, i - 1);
                    v1 = (a == 0) ? base.at(i, j) : base.at(j, i);
                    v2 = (a == 0) ? base.at(i + 1, j) : base.at(j, i + 1);
                }
                if (std::isfinite(v0) && std::isfinite(v1) && std::isfinite(v2))
                    worst = std::max(worst, (v0 + v2 - 2.0 * v1) / 8.0);
            }
    }
    return worst * base.spec().dim();
}

// Tail of |x| * weight_1 outside radius R (the linear-growth model for h).
double linear_weight_tail(int n, double beta, double R) {
    if (n == 1) {
        // int_R^inf x (1+x^2/2b)^(-b-1) dx = (1+R^2/2b)^(-b), exactly
        if (beta == kInf) return std::exp(-0.5 * R * R);
        return std::exp(-beta * std::log1p(0.5 * R * R / beta));
    }
    // 2 pi int_R^inf r^2 (1+r^2/2b)^(-b-1) dr, power-law majorant
    if (beta == kInf) return kTwoPi * (R + 1.0 / R) * std::exp(-0.5 * R * R);
    const double p = 2.0 * beta - 1.0;
    return kTwoPi * std::pow(2.0 * beta, beta + 1.0) * std::pow(R, -p) / p;
}

}  // namespace

GridSpec meanwidth_box(int n, double beta, double tail_share, int max_m) {
    const double head = integral_g_alpha(n, beta, 1.0);
    double R = 4.0;
    while (g_tail_bound(n, beta, R) > tail_share * head && R < 1e5) R *= 1.41421356;
    const double spacing_target = (n == 1) ? 0.02 : 0.08;
    int m = 2 * static_cast<int>(std::ceil(R / spacing_target)) + 1;
    m = std::min(m, max_m | 1);
    m = std::max(m, 129);
    return GridSpec::symmetric(n, R, m);
}

WidthResult mean_width_repr(const AlphaFn& f, const GridSpec& dual) {
    const int n = dual.dim();
    if (n != f.spec().dim())
        throw std::invalid_argument("mean_width_repr: dual dimension mismatch");
    const double beta = f.param().beta;
    ConjugateResult h = support_function(f, dual);
    if (!h.fn.all_finite())
        throw std::invalid_argument("mean_width_repr: support function not finite");

    std::vector<double> integrand(dual.size());
    std::vector<double> weights(dual.size());
    if (n == 1) {
        for (int i = 0; i < dual.count(0); ++i) {
            const double y = dual.coord(0, i);
            weights[i] = weight_kernel_sq(y * y, beta, 1);
            integrand[i] = h.fn[i] * weights[i];
        }
    } else {
        for (int i0 = 0; i0 < dual.count(0); ++i0)
            for (int i1 = 0; i1 < dual.count(1); ++i1) {
                const double y0 = dual.coord(0, i0);
                const double y1 = dual.coord(1, i1);
                const std::size_t k = dual.index(i0, i1);
                weights[k] = weight_kernel_sq(y0 * y0 + y1 * y1, beta, 1);
                integrand[k] = h.fn.at(i0, i1) * weights[k];
            }
    }
    IntegralEstimate head = integrate_values(dual, integrand);
    const double conj_bias =
        conjugate_bias_unit(f.base()) * integrate_values(dual, weights).value;

    // linear-growth tail: h(x) ~ s|x| beyond the box, s from boundary values
    double slope = 0.0;
    double R = dual.hi(0);
    if (n == 1) {
        slope = std::max({h.fn[0], h.fn[dual.count(0) - 1], 0.0}) / R;
    } else {
        R = std::min(dual.hi(0), dual.hi(1));
        const int m0 = dual.count(0), m1 = dual.count(1);
        for (int i0 = 0; i0 < m0; ++i0)
            for (int i1 = 0; i1 < m1; ++i1) {
                if (i0 != 0 && i0 != m0 - 1 && i1 != 0 && i1 != m1 - 1) continue;
                const double y0 = dual.coord(0, i0);
                const double y1 = dual.coord(1, i1);
                const double r = std::sqrt(y0 * y0 + y1 * y1);
                if (r > 0) slope = std::max(slope, h.fn.at(i0, i1) / r);
            }
        slope = std::max(slope, 0.0);
    }
    const double tail = slope * linear_weight_tail(n, beta, R);

    if (std::abs(head.value) > 0 && tail > 0.01 * std::abs(head.value))
        throw std::runtime_error(
            "mean_width_repr: domain too small, boundary contribution " +
            std::to_string(tail) + " exceeds 1% of the integral");

    WidthResult out;
    out.route = WidthResult::Route::Representation;
    out.value = head.value + tail;
    out.quadrature_error_estimate = head.error_estimate + tail + conj_bias;
    return out;
}

WidthResult mean_width_repr(const AlphaFn& f) {
    const int n = f.spec().dim();
    const double beta = f.param().beta;
    // radius from the ratio of the linear-growth tail to the unit-slope
    // head integral, padded; the 1% runtime gate still applies afterwards
    double R = 6.0;
    while (linear_weight_tail(n, beta, R) > 1e-5 && R < 1e5) R *= 1.41421356;
    const double spacing = (n == 1) ? 0.01 : 0.08;
    int m = 2 * static_cast<int>(std::ceil(R / spacing)) + 1;
    m = std::min(m, n == 1 ? 32769 : 1025);
    m = std::max(m, 129);
    return mean_width_repr(f, GridSpec::symmetric(n, R, m));
}

WidthResult mean_width_limit(const AlphaFn& f, std::span<const double> epsilons) {
    if (epsilons.empty())
        throw std::invalid_argument("mean_width_limit: empty epsilon schedule");
    for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
        if (!(epsilons[i] > epsilons[i + 1]))
            throw std::invalid_argument(
                "mean_width_limit: epsilon schedule must decrease strictly");

    const int n = f.spec().dim();
    const double beta = f.param().beta;
    const double i_g = integral_g_alpha(n, beta, 1.0);

    // work grid sized so the G_alpha tail is negligible against i_g
    GridSpec work = meanwidth_box(n, beta, n == 1 ? 1e-8 : 1e-6,
                                  n == 1 ? 65537 : 801);

    // |x|^2/2 on the work grid and on f's grid
    auto half_sq = [](const GridSpec& s) {
        std::vector<double> q(s.size());
        if (s.dim() == 1) {
            for (int i = 0; i < s.count(0); ++i) {
                const double x = s.coord(0, i);
                q[i] = 0.5 * x * x;
            }
        } else {
            for (int i0 = 0; i0 < s.count(0); ++i0)
                for (int i1 = 0; i1 < s.count(1); ++i1) {
                    const double x = s.coord(0, i0), y = s.coord(1, i1);
                    q[s.index(i0, i1)] = 0.5 * (x * x + y * y);
                }
        }
        return q;
    };
    const std::vector<double> q_work = half_sq(work);
    const std::vector<double> q_f = half_sq(f.spec());

    // the regularized conjugate carries the same sampling sagitta as the
    // representation route; charge it against the weight mass once
    std::vector<double> w1(work.size());
    for (std::size_t i = 0; i < w1.size(); ++i)
        w1[i] = weight_kernel_sq(2.0 * q_work[i], beta, 1);
    const double conj_bias =
        conjugate_bias_unit(f.base()) * integrate_values(work, w1).value;

    WidthResult out;
    out.route = WidthResult::Route::Limit;

    std::vector<double> quotients;
    for (double eps : epsilons) {
        // regularized conjugate of base f + eps |x|^2/2 onto the work grid
        std::vector<double> u(f.base().size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = f.base()[i] + eps * q_f[i];
        GridFn reg(f.spec(), Side::Convex, std::move(u));
        GridFn conj = legendre(reg, work).fn;

        std::vector<double> mass(work.size());
        for (std::size_t i = 0; i < mass.size(); ++i) {
            const double H = q_work[i] - eps * conj[i];
            if (beta == kInf) {
                mass[i] = std::exp(-H);
            } else {
                if (H <= -beta)
                    throw std::domain_error(
                        "mean_width_limit: sum with G_alpha undefined at epsilon=" +
                        std::to_string(eps));
                mass[i] = std::exp(-beta * std::log1p(H / beta));
            }
        }
        const double integral = integrate_values(work, mass).value;
        const double d = (integral - i_g) / eps;
        quotients.push_back(d);
        out.epsilon_schedule.emplace_back(eps, d);
    }

    if (quotients.size() == 1) {
        out.value = quotients[0];
        out.quadrature_error_estimate =
            std::abs(quotients[0]) * epsilons[0] + conj_bias;
        return out;
    }
    // order-1 Richardson on the two smallest epsilons
    const std::size_t k = quotients.size() - 1;
    const double r = epsilons[k - 1] / epsilons[k];
    out.value = (r * quotients[k] - quotients[k - 1]) / (r - 1.0);
    if (quotients.size() >= 3) {
        const double r2 = epsilons[k - 2] / epsilons[k - 1];
        const double prev = (r2 * quotients[k - 1] - quotients[k - 2]) / (r2 - 1.0);
        out.quadrature_error_estimate = std::abs(out.value - prev) + conj_bias;
    } else {
        out.quadrature_error_estimate = std::abs(out.value - quotients[k]) + conj_bias;
    }
    return out;
}

WidthResult mean_width_limit(const AlphaFn& f) {
    const double schedule[] = {0.02, 0.01, 0.005};
    return mean_width_limit(f, schedule);
}

}  // namespace alphaconv
