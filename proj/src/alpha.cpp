#include "alphaconv/alpha.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace alphaconv {

namespace {
// Masses below this count as exactly zero; f^alpha would overflow first.
constexpr double kMassFloor = 1e-300;
}

AlphaParam AlphaParam::from_alpha(double a) {
    if (std::isnan(a) || a > 0.0 || a == -kInf)
        throw std::invalid_argument("AlphaParam: alpha must lie in (-inf, 0]");
    AlphaParam p;
    p.alpha = a;
    p.beta = (a == 0.0) ? kInf : -1.0 / a;
    return p;
}

AlphaParam AlphaParam::from_beta(double b) {
    if (std::isnan(b) || b <= 0.0)
        throw std::invalid_argument("AlphaParam: beta must lie in (0, +inf]");
    AlphaParam p;
    p.beta = b;
    p.alpha = (b == kInf) ? 0.0 : -1.0 / b;
    return p;
}

bool AlphaParam::kappa_defined(int n) const {
    return alpha >= -1.0 / n;
}

double AlphaParam::kappa(int n) const {
    if (!kappa_defined(n))
        throw std::domain_error("kappa: requires alpha >= -1/n");
    if (log_concave()) return 0.0;
    if (beta == static_cast<double>(n))
        throw std::domain_error("kappa: infinite at the boundary alpha = -1/n");
    return 1.0 / (n - beta);
}

GridFn convex_base(const GridFn& mass, AlphaParam p) {
    if (mass.side() != Side::Mass)
        throw std::invalid_argument("convex_base: expects a mass-side function");
    std::vector<double> out(mass.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double f = mass[i];
        if (f < kMassFloor) {
            out[i] = kInf;
        } else if (p.alpha == 0.0) {
            out[i] = -std::log(f);
        } else {
            // (1 - f^alpha)/alpha = -expm1(alpha*log f)/alpha, stable near f=1
            out[i] = -std::expm1(p.alpha * std::log(f)) / p.alpha;
        }
    }
    return GridFn(mass.spec(), Side::Convex, std::move(out));
}

GridFn unbase(const GridFn& base, AlphaParam p) {
    if (base.side() != Side::Convex)
        throw std::invalid_argument("unbase: expects a convex-side function");
    std::vector<double> out(base.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double phi = base[i];
        if (phi == kInf) {
            out[i] = 0.0;
        } else if (p.log_concave()) {
            out[i] = std::exp(-phi);
        } else {
            if (phi <= -p.beta)
                throw std::domain_error(
                    "unbase: base value " + std::to_string(phi) + " at index " +
                    std::to_string(i) + " is <= -beta; the base of an "
                    "alpha-concave function always stays above -beta");
            out[i] = std::exp(-p.beta * std::log1p(phi / p.beta));
        }
    }
    return GridFn(base.spec(), Side::Mass, std::move(out));
}

AlphaFn::AlphaFn(AlphaParam p, GridFn mass, GridFn base)
    : param_(p), mass_(std::move(mass)), base_(std::move(base)) {}

AlphaFn alpha_fn_unchecked(AlphaParam p, GridFn base) {
    GridFn mass = unbase(base, p);
    return AlphaFn(p, std::move(mass), std::move(base));
}

AlphaFn AlphaFn::from_mass(AlphaParam p, GridFn mass) {
    GridFn base = convex_base(mass, p);
    if (!is_grid_convex(base, 1e-10))
        throw std::invalid_argument(
            "AlphaFn: the convex base fails midpoint convexity, the mass "
            "function is not alpha-concave at this alpha");
    // keep the cache coherent: mass := unbase(base)
    GridFn coherent = unbase(base, p);
    return AlphaFn(p, std::move(coherent), std::move(base));
}

AlphaFn AlphaFn::from_base(AlphaParam p, GridFn base) {
    if (!is_grid_convex(base, 1e-10))
        throw std::invalid_argument("AlphaFn: base is not convex along grid lines");
    return alpha_fn_unchecked(p, std::move(base));
}

ConjugateResult support_function(const AlphaFn& f, const GridSpec& dual) {
    return legendre(f.base(), dual);
}

AlphaFn alpha_sum(const AlphaFn& f, const AlphaFn& g) {
    if (!(f.param() == g.param()))
        throw std::invalid_argument("alpha_sum: parameter mismatch");
    GridFn conv = inf_convolve(f.base(), g.base());
    const AlphaParam p = f.param();
    if (!p.log_concave()) {
        for (std::size_t i = 0; i < conv.size(); ++i)
            if (conv[i] <= -p.beta)
                throw std::domain_error(
                    "alpha_sum: sum undefined, convolved base reaches " +
                    std::to_string(conv[i]) + " <= -beta at index " +
                    std::to_string(i));
    }
    return alpha_fn_unchecked(p, std::move(conv));
}

AlphaFn alpha_scale(double lambda, const AlphaFn& f, bool* resampled_outside) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("alpha_scale: lambda must be positive");
    const GridSpec& s = f.spec();
    const GridFn& base = f.base();
    bool outside = false;
    std::vector<double> out(s.size());
    auto eval = [&](double x0, double x1) {
        const double v = interp_at(base, x0 / lambda, x1 / lambda, kInf);
        if (v == kInf) {
            // distinguish "outside the box" from a sampled +inf
            const double eps0 = 1e-12 * std::max(1.0, std::abs(s.hi(0)));
            if (x0 / lambda < s.lo(0) - eps0 || x0 / lambda > s.hi(0) + eps0)
                outside = true;
            else if (s.dim() == 2) {
                const double eps1 = 1e-12 * std::max(1.0, std::abs(s.hi(1)));
                if (x1 / lambda < s.lo(1) - eps1 || x1 / lambda > s.hi(1) + eps1)
                    outside = true;
            }
            return kInf;
        }
        return lambda * v;
    };
    if (s.dim() == 1) {
        for (int i = 0; i < s.count(0); ++i) out[i] = eval(s.coord(0, i), 0.0);
    } else {
        for (int i0 = 0; i0 < s.count(0); ++i0)
            for (int i1 = 0; i1 < s.count(1); ++i1)
                out[s.index(i0, i1)] = eval(s.coord(0, i0), s.coord(1, i1));
    }
    if (resampled_outside) *resampled_outside = outside;
    return alpha_fn_unchecked(f.param(), GridFn(s, Side::Convex, std::move(out)));
}

namespace {

// Mass of f at an off-grid point; outside the box the zoo decays to zero.
double mass_at(const AlphaFn& f, double x0, double x1) {
    const double v = interp_at(f.mass(), x0, x1, 0.0);
    return (v < kMassFloor) ? 0.0 : v;
}

}  // namespace

AlphaFn convex_combination(double lambda, const AlphaFn& f, const AlphaFn& g) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("convex_combination: lambda must lie in (0,1)");
    if (!(f.param() == g.param()))
        throw std::invalid_argument("convex_combination: parameter mismatch");
    if (!(f.spec() == g.spec()))
        throw std::invalid_argument("convex_combination: grid spec mismatch");
    const GridSpec& s = f.spec();
    const AlphaParam p = f.param();
    const double mu = 1.0 - lambda;

    // Precompute the per-node terms so the decomposition scan is a pure
    // min-plus (alpha < 0) or max-plus (alpha = 0) pass.
    const std::size_t n = s.size();
    std::vector<double> tf(n), tg(n);
    auto fill = [&](const AlphaFn& fn, double w, std::vector<double>& t) {
        auto term = [&](double x0, double x1) {
            const double m = mass_at(fn, x0 / w, x1 / w);
            if (p.alpha == 0.0)
                return (m == 0.0) ? -kInf : w * std::log(m);
            return (m == 0.0) ? kInf : w * std::pow(m, p.alpha);
        };
        if (s.dim() == 1) {
            for (int i = 0; i < s.count(0); ++i) t[i] = term(s.coord(0, i), 0.0);
        } else {
            for (int i0 = 0; i0 < s.count(0); ++i0)
                for (int i1 = 0; i1 < s.count(1); ++i1)
                    t[s.index(i0, i1)] = term(s.coord(0, i0), s.coord(1, i1));
        }
    };
    fill(f, lambda, tf);
    fill(g, mu, tg);

    const bool logcase = (p.alpha == 0.0);
    std::vector<double> out(n, 0.0);
    if (s.dim() == 1) {
        const int m = s.count(0);
        const int c = [&] {
            const double r = s.origin_offset(0);
            if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, std::abs(r)))
                throw std::invalid_argument(
                    "convex_combination: grid has no node at the origin");
            return static_cast<int>(std::round(r));
        }();
        for (int i = 0; i < m; ++i) {
            double acc = logcase ? -kInf : kInf;
            const int jlo = std::max(0, i + c - (m - 1));
            const int jhi = std::min(m - 1, i + c);
            for (int j = jlo; j <= jhi; ++j) {
                const double v = tf[j] + tg[i + c - j];
                acc = logcase ? std::max(acc, v) : std::min(acc, v);
            }
            out[i] = logcase ? ((acc == -kInf) ? 0.0 : std::exp(acc))
                             : ((acc == kInf) ? 0.0 : std::pow(acc, 1.0 / p.alpha));
        }
    } else {
        const int m0 = s.count(0), m1 = s.count(1);
        auto off = [&](int axis) {
            const double r = s.origin_offset(axis);
            if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, std::abs(r)))
                throw std::invalid_argument(
                    "convex_combination: grid has no node at the origin");
            return static_cast<int>(std::round(r));
        };
        const int c0 = off(0), c1 = off(1);
        for (int i0 = 0; i0 < m0; ++i0)
            for (int i1 = 0; i1 < m1; ++i1) {
                double acc = logcase ? -kInf : kInf;
                const int j0lo = std::max(0, i0 + c0 - (m0 - 1));
                const int j0hi = std::min(m0 - 1, i0 + c0);
                const int j1lo = std::max(0, i1 + c1 - (m1 - 1));
                const int j1hi = std::min(m1 - 1, i1 + c1);
                for (int j0 = j0lo; j0 <= j0hi; ++j0)
                    for (int j1 = j1lo; j1 <= j1hi; ++j1) {
                        const double v = tf[s.index(j0, j1)] +
                                         tg[s.index(i0 + c0 - j0, i1 + c1 - j1)];
                        acc = logcase ? std::max(acc, v) : std::min(acc, v);
                    }
                out[s.index(i0, i1)] =
                    logcase ? ((acc == -kInf) ? 0.0 : std::exp(acc))
                            : ((acc == kInf) ? 0.0 : std::pow(acc, 1.0 / p.alpha));
            }
    }
    GridFn mass(s, Side::Mass, std::move(out));
    GridFn base = convex_base(mass, p);
    if (!p.log_concave()) {
        for (std::size_t i = 0; i < base.size(); ++i)
            if (base[i] <= -p.beta)
                throw std::domain_error("convex_combination: sum undefined");
    }
    return alpha_fn_unchecked(p, std::move(base));
}

ConcavityReport is_alpha_concave(const GridFn& mass, double alpha, double tol) {
    if (mass.side() != Side::Mass)
        throw std::invalid_argument("is_alpha_concave: expects a mass-side function");
    const GridSpec& s = mass.spec();
    const std::size_t n = s.size();

    // Powered values: comparing in the transformed scale turns the
    // per-pair power mean into an add-and-halve. Limit conventions:
    // alpha = -inf is the min, 0 the geometric mean, +inf the max.
    enum class Mode { Min, Log, Pow, Max };
    const Mode mode = (alpha == -kInf) ? Mode::Min
                    : (alpha == kInf)  ? Mode::Max
                    : (alpha == 0.0)   ? Mode::Log
                                       : Mode::Pow;
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = mass[i];
        switch (mode) {
            case Mode::Min:
            case Mode::Max: t[i] = f; break;
            case Mode::Log: t[i] = (f < kMassFloor) ? -kInf : std::log(f); break;
            case Mode::Pow:
                t[i] = (f < kMassFloor) ? (alpha < 0 ? kInf : 0.0)
                                        : std::pow(f, alpha);
                break;
        }
    }

    ConcavityReport rep;
    // mean in mass units for the violation report
    auto mean_mass = [&](std::size_t i, std::size_t j) {
        const double a = mass[i], b = mass[j];
        if (mode == Mode::Min) return std::min(a, b);
        if (mode == Mode::Max) return std::max(a, b);
        if (a < kMassFloor || b < kMassFloor) return alpha < 0 ? 0.0
            : std::pow(0.5 * (std::pow(a, alpha) + std::pow(b, alpha)), 1.0 / alpha);
        if (mode == Mode::Log) return std::sqrt(a * b);
        return std::pow(0.5 * (std::pow(a, alpha) + std::pow(b, alpha)), 1.0 / alpha);
    };
    auto violated = [&](std::size_t mid, std::size_t i, std::size_t j) -> bool {
        // the concavity inequality quantifies over the support only; for
        // alpha <= 0 a zero endpoint collapses the mean anyway
        if (mass[i] < kMassFloor || mass[j] < kMassFloor) return false;
        const double fm = t[mid];
        const double a = t[i], b = t[j];
        switch (mode) {
            case Mode::Min:
                return fm < std::min(a, b) - tol;
            case Mode::Max:
                return fm < std::max(a, b) - tol;
            case Mode::Log:
                if (a == -kInf || b == -kInf) return false;
                return fm < 0.5 * (a + b) - tol / std::max(kMassFloor, mass[mid] + tol);
            case Mode::Pow:
                // the power flips the order for alpha < 0; the mass-scale
                // tolerance is applied on the final report
                if (alpha < 0) {
                    if (a == kInf || b == kInf) return false;
                    return fm > 0.5 * (a + b) && mean_mass(i, j) - mass[mid] > tol;
                }
                return fm < 0.5 * (a + b) && mean_mass(i, j) - mass[mid] > tol;
        }
        return false;
    };
    auto consider = [&](std::size_t i, std::size_t mid, std::size_t j) {
        if (!violated(mid, i, j)) return;
        const double gap = mean_mass(i, j) - mass[mid];
        if (gap > rep.worst_violation) {
            rep.worst_violation = gap;
            rep.at_index = mid;
            const auto ij = s.unindex(mid);
            rep.at_point = {s.coord(0, ij[0]),
                            s.dim() == 2 ? s.coord(1, ij[1]) : 0.0};
            rep.pass = false;
        }
    };

    if (s.dim() == 1) {
        const int m = s.count(0);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; j += 2) consider(i, (i + j) / 2, j);
    } else {
        const int m0 = s.count(0), m1 = s.count(1);
        for (int i0 = 0; i0 < m0; ++i0)
            for (int i1 = 0; i1 < m1; ++i1)
                for (int j0 = i0 % 2; j0 < m0; j0 += 2)
                    for (int j1 = i1 % 2; j1 < m1; j1 += 2) {
                        consider(s.index(i0, i1),
                                 s.index((i0 + j0) / 2, (i1 + j1) / 2),
                                 s.index(j0, j1));
                    }
    }
    // re-check pass against the tolerance in mass units
    rep.pass = rep.worst_violation <= tol;
    return rep;
}

AlphaFn make_g_alpha(const GridSpec& spec, AlphaParam p) {
    std::vector<double> base(spec.size());
    if (spec.dim() == 1) {
        for (int i = 0; i < spec.count(0); ++i) {
            const double x = spec.coord(0, i);
            base[i] = 0.5 * x * x;
        }
    } else {
        for (int i0 = 0; i0 < spec.count(0); ++i0)
            for (int i1 = 0; i1 < spec.count(1); ++i1) {
                const double x = spec.coord(0, i0);
                const double y = spec.coord(1, i1);
                base[spec.index(i0, i1)] = 0.5 * (x * x + y * y);
            }
    }
    return AlphaFn::from_base(p, GridFn(spec, Side::Convex, std::move(base)));
}

IndicatorBody IndicatorBody::interval(double a, double b) {
    IndicatorBody k;
    k.kind = Kind::Box;
    k.lo = {a, 0};
    k.hi = {b, 0};
    if (!(a < b)) throw std::invalid_argument("indicator interval: need a < b");
    return k;
}

IndicatorBody IndicatorBody::box2(double a0, double b0, double a1, double b1) {
    IndicatorBody k;
    k.kind = Kind::Box;
    k.lo = {a0, a1};
    k.hi = {b0, b1};
    if (!(a0 < b0 && a1 < b1)) throw std::invalid_argument("indicator box: need lo < hi");
    return k;
}

IndicatorBody IndicatorBody::ball(double c0, double c1, double r) {
    IndicatorBody k;
    k.kind = Kind::Ball;
    k.center = {c0, c1};
    k.radius = r;
    if (!(r > 0)) throw std::invalid_argument("indicator ball: radius must be > 0");
    return k;
}

bool IndicatorBody::contains(double x0, double x1) const {
    if (kind == Kind::Box)
        return x0 >= lo[0] && x0 <= hi[0] && x1 >= lo[1] && x1 <= hi[1];
    const double d0 = x0 - center[0], d1 = x1 - center[1];
    return d0 * d0 + d1 * d1 <= radius * radius;
}

GridFn sample(const FunctionDescriptor& d, const GridSpec& spec, Side side) {
    if (const auto* ind = std::get_if<Indicator>(&d)) {
        IndicatorBody body = ind->body;
        if (spec.dim() == 1 && body.kind == IndicatorBody::Kind::Box) {
            body.lo[1] = -1.0;  // ignore the unused axis
            body.hi[1] = 1.0;
        }
        return sample_fn(
            [&body, side](double x0, double x1) {
                const bool in = body.contains(x0, x1);
                if (side == Side::Mass) return in ? 1.0 : 0.0;
                return in ? 0.0 : kInf;
            },
            spec, side);
    }
    if (const auto* q = std::get_if<QuadraticBase>(&d)) {
        return sample_fn(
            [q, dim = spec.dim()](double x0, double x1) {
                const double d0 = x0 - q->center[0];
                const double d1 = (dim == 2) ? x1 - q->center[1] : 0.0;
                return q->scale * 0.5 * (d0 * d0 + d1 * d1);
            },
            spec, side);
    }
    if (const auto* g = std::get_if<GAlphaDesc>(&d)) {
        const double beta = g->param.beta;
        return sample_fn(
            [beta, dim = spec.dim()](double x0, double x1) {
                const double sq = x0 * x0 + (dim == 2 ? x1 * x1 : 0.0);
                if (beta == kInf) return std::exp(-0.5 * sq);
                return std::exp(-beta * std::log1p(0.5 * sq / beta));
            },
            spec, side);
    }
    if (const auto* l = std::get_if<LinearTilt>(&d)) {
        return sample_fn(
            [l, dim = spec.dim()](double x0, double x1) {
                return l->a[0] * x0 + (dim == 2 ? l->a[1] * x1 : 0.0) + l->c;
            },
            spec, side);
    }
    if (const auto* t = std::get_if<UserTable>(&d)) {
        if (t->values.size() != spec.size())
            throw std::invalid_argument("sample: table size does not match grid");
        return GridFn(spec, side, t->values);
    }
    const auto& c = std::get<UserClosure>(d);
    return sample_fn(c.eval, spec, side);
}

std::vector<std::pair<std::string, AlphaFn>> standard_zoo(AlphaParam p,
                                                          const GridSpec& spec) {
    const int dim = spec.dim();
    auto from_base_fn = [&](PointFn base) {
        return AlphaFn::from_base(p, sample_fn(base, spec, Side::Convex));
    };
    auto sq = [dim](double x0, double x1) {
        return x0 * x0 + (dim == 2 ? x1 * x1 : 0.0);
    };
    std::vector<std::pair<std::string, AlphaFn>> zoo;
    zoo.emplace_back("indicator[-1,1]",
                     AlphaFn::from_mass(p, sample(Indicator{dim == 1
                         ? IndicatorBody::interval(-1, 1)
                         : IndicatorBody::box2(-1, 1, -1, 1)}, spec, Side::Mass)));
    zoo.emplace_back("indicator[0.5,2]",
                     AlphaFn::from_mass(p, sample(Indicator{dim == 1
                         ? IndicatorBody::interval(0.5, 2)
                         : IndicatorBody::box2(0.5, 2, 0.5, 2)}, spec, Side::Mass)));
    zoo.emplace_back("g_alpha", make_g_alpha(spec, p));
    zoo.emplace_back("g_shift", from_base_fn([&](double x0, double x1) {
        const double d0 = x0 - 1.0, d1 = (dim == 2) ? x1 - 0.5 : 0.0;
        return 0.5 * (d0 * d0 + d1 * d1);
    }));
    zoo.emplace_back("g_tilt", from_base_fn([&](double x0, double x1) {
        return 0.5 * sq(x0, x1) + 0.5 * x0 + 0.2;
    }));
    zoo.emplace_back("cone", from_base_fn([&](double x0, double x1) {
        return std::sqrt(sq(x0, x1));
    }));
    zoo.emplace_back("flat_quad", from_base_fn([&](double x0, double x1) {
        return std::max(0.5 * sq(x0, x1) - 1.0, 0.0);
    }));
    zoo.emplace_back("steep_quad", from_base_fn([&](double x0, double x1) {
        return sq(x0, x1);
    }));
    return zoo;
}

}  // namespace alphaconv
