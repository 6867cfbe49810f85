#pragma once

#include <array>
#include <string>
#include <variant>

#include "alphaconv/grid.hpp"
#include "alphaconv/lft.hpp"

namespace alphaconv {

/// Concavity parameter alpha in (-inf, 0] with beta = -1/alpha
/// (beta = +inf for the log-concave case alpha = 0).
struct AlphaParam {
    double alpha = 0.0;
    double beta = kInf;

    static AlphaParam from_alpha(double a);
    static AlphaParam from_beta(double b);  // b in (0, +inf]

    bool log_concave() const { return beta == kInf; }

    /// kappa(n) = alpha / (1 + n*alpha) = 1/(n - beta); defined only for
    /// alpha >= -1/n (equivalently beta >= n), zero in the log-concave case.
    bool kappa_defined(int n) const;
    double kappa(int n) const;

    bool operator==(const AlphaParam&) const = default;
};

/// Convex base: (1 - f^alpha)/alpha pointwise (-log f when alpha = 0);
/// zero mass maps to +inf. Masses below 1e-300 count as zero.
GridFn convex_base(const GridFn& mass, AlphaParam p);

/// Pointwise inverse of convex_base: (1 + phi/beta)^(-beta), e^(-phi) when
/// beta = +inf; +inf maps to 0. Requires phi > -beta everywhere.
GridFn unbase(const GridFn& base, AlphaParam p);

/// An alpha-concave function: parameter, mass-side samples, and the cached
/// convex base. The base is kept because every downstream operation
/// consumes it and recomputing f^alpha near f ~ 0 loses precision.
class AlphaFn {
public:
    static AlphaFn from_mass(AlphaParam p, GridFn mass);
    static AlphaFn from_base(AlphaParam p, GridFn base);

    const AlphaParam& param() const { return param_; }
    const GridFn& mass() const { return mass_; }
    const GridFn& base() const { return base_; }
    const GridSpec& spec() const { return mass_.spec(); }

private:
    friend AlphaFn alpha_fn_unchecked(AlphaParam, GridFn);
    AlphaFn(AlphaParam p, GridFn mass, GridFn base);
    AlphaParam param_;
    GridFn mass_;
    GridFn base_;
};

/// h_f = (base f)* on the given dual grid.
ConjugateResult support_function(const AlphaFn& f, const GridSpec& dual);

/// Sum via bases: unbase(base f [] base g). Throws "sum undefined" when the
/// convolved base reaches -beta (cannot happen for f, g <= 1).
AlphaFn alpha_sum(const AlphaFn& f, const AlphaFn& g);

/// Homothety: base(lambda . f)(x) = lambda * (base f)(x/lambda), resampled
/// on the same grid with +inf outside the original box. When lambda < 1
/// pulls nodes outside the box, *resampled_outside is set if provided.
AlphaFn alpha_scale(double lambda, const AlphaFn& f,
                    bool* resampled_outside = nullptr);

/// [lambda . f] * [(1-lambda) . g] by the direct sup formula
///   sup_{y+z=x} [ lambda f(y/lambda)^alpha + (1-lambda) g(z/(1-lambda))^alpha ]^(1/alpha)
/// (geometric-mean form when alpha = 0). Equals
/// alpha_sum(alpha_scale(lambda, f), alpha_scale(1-lambda, g)).
AlphaFn convex_combination(double lambda, const AlphaFn& f, const AlphaFn& g);

struct ConcavityReport {
    bool pass = true;
    double worst_violation = 0.0;   // max over midpoints of mean - f(mid)
    std::size_t at_index = 0;       // flat node index of the worst midpoint
    std::array<double, 2> at_point{0, 0};
};

/// Midpoint alpha-concavity over all grid pairs whose midpoint is a node.
/// alpha = 0 uses the geometric mean, alpha = -inf the min convention.
ConcavityReport is_alpha_concave(const GridFn& mass, double alpha,
                                 double tol = 1e-10);

/// The alpha-analogue of the Gaussian: base exactly |x|^2/2 on the grid,
/// i.e. mass (1 + |x|^2/(2 beta))^(-beta), e^(-|x|^2/2) when beta = +inf.
AlphaFn make_g_alpha(const GridSpec& spec, AlphaParam p);

// --- descriptor zoo -------------------------------------------------------

struct IndicatorBody {
    enum class Kind { Box, Ball };
    Kind kind = Kind::Box;
    std::array<double, 2> lo{0, 0};      // Box
    std::array<double, 2> hi{0, 0};
    std::array<double, 2> center{0, 0};  // Ball
    double radius = 1.0;

    static IndicatorBody interval(double a, double b);
    static IndicatorBody box2(double a0, double b0, double a1, double b1);
    static IndicatorBody ball(double c0, double c1, double r);
    bool contains(double x0, double x1) const;
};

struct Indicator { IndicatorBody body; };
struct QuadraticBase { std::array<double, 2> center{0, 0}; double scale = 1.0; };
struct GAlphaDesc { AlphaParam param; };
struct LinearTilt { std::array<double, 2> a{0, 0}; double c = 0.0; };
struct UserTable { std::vector<double> values; };
struct UserClosure { PointFn eval; };

using FunctionDescriptor =
    std::variant<Indicator, QuadraticBase, GAlphaDesc, LinearTilt,
                 UserTable, UserClosure>;

/// Sample a descriptor on a grid. Indicators honour the requested side
/// (0/1 on the mass side, the 0/+inf convex indicator on the convex side);
/// other descriptors evaluate their defining formula.
GridFn sample(const FunctionDescriptor& d, const GridSpec& spec, Side side);

/// The standard test zoo: indicators plus functions defined by nonnegative
/// convex bases (so every member satisfies f <= 1 and sums with G_alpha are
/// always defined).
std::vector<std::pair<std::string, AlphaFn>> standard_zoo(AlphaParam p,
                                                          const GridSpec& spec);

}  // namespace alphaconv
