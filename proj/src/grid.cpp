#include "alphaconv/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace alphaconv {

namespace {

void check_axis(double lo, double hi, int m) {
    if (!(lo < hi))
        throw std::invalid_argument("GridSpec: lo must be < hi");
    if (m < 3)
        throw std::invalid_argument("GridSpec: need at least 3 nodes per axis");
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("GridSpec: bounds must be finite");
}

}  // namespace

GridSpec GridSpec::line(double lo, double hi, int m) {
    check_axis(lo, hi, m);
    GridSpec s;
    s.dim_ = 1;
    s.lo_ = {lo, 0};
    s.hi_ = {hi, 0};
    s.m_ = {m, 1};
    s.h_ = {(hi - lo) / (m - 1), 0};
    return s;
}

GridSpec GridSpec::box(double lo0, double hi0, int m0,
                       double lo1, double hi1, int m1) {
    check_axis(lo0, hi0, m0);
    check_axis(lo1, hi1, m1);
    GridSpec s;
    s.dim_ = 2;
    s.lo_ = {lo0, lo1};
    s.hi_ = {hi0, hi1};
    s.m_ = {m0, m1};
    s.h_ = {(hi0 - lo0) / (m0 - 1), (hi1 - lo1) / (m1 - 1)};
    return s;
}

GridSpec GridSpec::symmetric(int dim, double radius, int m) {
    if (dim == 1) return line(-radius, radius, m);
    if (dim == 2) return box(-radius, radius, m, -radius, radius, m);
    throw std::invalid_argument("GridSpec: dim must be 1 or 2");
}

double GridSpec::max_spacing() const {
    double h = h_[0];
    if (dim_ == 2) h = std::max(h, h_[1]);
    return h;
}

std::size_t GridSpec::size() const {
    return static_cast<std::size_t>(m_[0]) * static_cast<std::size_t>(m_[1]);
}

std::size_t GridSpec::index(int i0, int i1) const {
    return static_cast<std::size_t>(i0) * static_cast<std::size_t>(m_[1]) +
           static_cast<std::size_t>(i1);
}

std::array<int, 2> GridSpec::unindex(std::size_t flat) const {
    const int m1 = m_[1];
    return {static_cast<int>(flat / m1), static_cast<int>(flat % m1)};
}

bool GridSpec::origin_aligned() const {
    for (int a = 0; a < dim_; ++a) {
        const double c = origin_offset(a);
        if (std::abs(c - std::round(c)) > 1e-9 * std::max(1.0, std::abs(c)))
            return false;
    }
    return true;
}

GridFn::GridFn(GridSpec spec, Side side, std::vector<double> values)
    : spec_(spec), side_(side), values_(std::move(values)) {
    if (values_.size() != spec_.size())
        throw std::invalid_argument("GridFn: value count does not match grid");
    bool any_finite = false;
    bool any_positive = false;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (std::isnan(v))
            throw std::invalid_argument("GridFn: NaN at index " + std::to_string(i));
        if (side_ == Side::Mass) {
            if (!std::isfinite(v))
                throw std::invalid_argument("GridFn: non-finite mass value at index " +
                                            std::to_string(i));
            if (v < 0.0)
                throw std::invalid_argument("GridFn: negative mass value at index " +
                                            std::to_string(i));
            if (v > 0.0) any_positive = true;
        } else {
            if (v == -kInf)
                throw std::invalid_argument("GridFn: -inf convex value at index " +
                                            std::to_string(i));
            if (std::isfinite(v)) any_finite = true;
        }
    }
    if (side_ == Side::Mass && !any_positive)
        throw std::invalid_argument("GridFn: mass function is identically zero");
    if (side_ == Side::Convex && !any_finite)
        throw std::invalid_argument("GridFn: convex function is identically +inf");
}

double GridFn::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double GridFn::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

bool GridFn::all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return std::isfinite(v); });
}

GridFn sample_fn(const PointFn& fn, const GridSpec& spec, Side side) {
    std::vector<double> v(spec.size());
    if (spec.dim() == 1) {
        for (int i = 0; i < spec.count(0); ++i) v[i] = fn(spec.coord(0, i), 0.0);
    } else {
        for (int i0 = 0; i0 < spec.count(0); ++i0)
            for (int i1 = 0; i1 < spec.count(1); ++i1)
                v[spec.index(i0, i1)] = fn(spec.coord(0, i0), spec.coord(1, i1));
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (side == Side::Mass && (!std::isfinite(v[i]) || v[i] < 0.0))
            throw std::invalid_argument(
                "sample: invalid mass-side value at index " + std::to_string(i));
        if (side == Side::Convex && (v[i] == -kInf || std::isnan(v[i])))
            throw std::invalid_argument(
                "sample: invalid convex-side value at index " + std::to_string(i));
    }
    return GridFn(spec, side, std::move(v));
}

namespace {

// Trapezoid weight along one axis: h * (1/2 at the ends, 1 inside).
inline double axis_weight(int i, int m, double h) {
    return (i == 0 || i == m - 1) ? 0.5 * h : h;
}

double trapezoid(const GridSpec& s, std::span<const double> v, int stride) {
    // stride > 1 integrates the every-stride-th subgrid (spacing stride*h);
    // valid when (m-1) is divisible by stride on every axis.
    double total = 0.0;
    if (s.dim() == 1) {
        const int m = (s.count(0) - 1) / stride + 1;
        const double h = s.spacing(0) * stride;
        for (int i = 0; i < m; ++i)
            total += axis_weight(i, m, h) * v[static_cast<std::size_t>(i) * stride];
    } else {
        const int m0 = (s.count(0) - 1) / stride + 1;
        const int m1 = (s.count(1) - 1) / stride + 1;
        const double h0 = s.spacing(0) * stride;
        const double h1 = s.spacing(1) * stride;
        for (int i0 = 0; i0 < m0; ++i0) {
            const double w0 = axis_weight(i0, m0, h0);
            double row = 0.0;
            for (int i1 = 0; i1 < m1; ++i1)
                row += axis_weight(i1, m1, h1) * v[s.index(i0 * stride, i1 * stride)];
            total += w0 * row;
        }
    }
    return total;
}

IntegralEstimate estimate(const GridSpec& s, std::span<const double> v) {
    IntegralEstimate out;
    out.value = trapezoid(s, v, 1);
    // rounding floor: long-sum accumulation keeps discretization estimators
    // from reporting errors below what summation itself can resolve
    std::vector<double> absval(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) absval[i] = std::abs(v[i]);
    const double floor_err = 32.0 * std::numeric_limits<double>::epsilon() *
                             trapezoid(s, absval, 1);
    bool halvable = true;
    for (int a = 0; a < s.dim(); ++a)
        if ((s.count(a) - 1) % 2 != 0) halvable = false;
    if (halvable) {
        const double coarse = trapezoid(s, v, 2);
        out.error_estimate = std::abs(out.value - coarse) / 3.0 + floor_err;
    } else {
        // Second-difference bound: |E| <= sum_axes h_a^2/12 * int |f''_aa|.
        double bound = 0.0;
        for (int a = 0; a < s.dim(); ++a) {
            const double h = s.spacing(a);
            double acc = 0.0;
            if (s.dim() == 1) {
                for (int i = 1; i + 1 < s.count(0); ++i)
                    acc += std::abs(v[i - 1] - 2 * v[i] + v[i + 1]) / h;
            } else {
                const int other = 1 - a;
                for (int j = 0; j < s.count(other); ++j)
                    for (int i = 1; i + 1 < s.count(a); ++i) {
                        const double d2 = (a == 0)
                            ? v[s.index(i - 1, j)] - 2 * v[s.index(i, j)] + v[s.index(i + 1, j)]
                            : v[s.index(j, i - 1)] - 2 * v[s.index(j, i)] + v[s.index(j, i + 1)];
                        acc += std::abs(d2) / h * s.spacing(other);
                    }
            }
            bound += h * h / 12.0 * acc;
        }
        out.error_estimate = bound + floor_err;
    }
    return out;
}

}  // namespace

double integrate(const GridFn& f) {
    if (f.side() != Side::Mass)
        throw std::invalid_argument("integrate: expects a mass-side function");
    return trapezoid(f.spec(), f.values(), 1);
}

IntegralEstimate integrate_with_error(const GridFn& f) {
    if (f.side() != Side::Mass)
        throw std::invalid_argument("integrate: expects a mass-side function");
    return estimate(f.spec(), f.values());
}

IntegralEstimate integrate_values(const GridSpec& spec, std::span<const double> v) {
    if (v.size() != spec.size())
        throw std::invalid_argument("integrate_values: size mismatch");
    for (double x : v)
        if (!std::isfinite(x))
            throw std::invalid_argument("integrate_values: non-finite value");
    return estimate(spec, v);
}

Gradient gradient_central(const GridFn& f) {
    if (!f.all_finite())
        throw std::invalid_argument("gradient_central: +inf value present");
    const GridSpec& s = f.spec();
    Gradient g{s, {}};
    g.component.resize(s.dim());
    for (int a = 0; a < s.dim(); ++a) {
        g.component[a].assign(s.size(), 0.0);
        const double h = s.spacing(a);
        const int m = s.count(a);
        const int other = (s.dim() == 2) ? s.count(1 - a) : 1;
        for (int j = 0; j < other; ++j) {
            auto val = [&](int i) {
                if (s.dim() == 1) return f[i];
                return (a == 0) ? f.at(i, j) : f.at(j, i);
            };
            auto idx = [&](int i) {
                if (s.dim() == 1) return static_cast<std::size_t>(i);
                return (a == 0) ? s.index(i, j) : s.index(j, i);
            };
            g.component[a][idx(0)] = (val(1) - val(0)) / h;
            for (int i = 1; i + 1 < m; ++i)
                g.component[a][idx(i)] = (val(i + 1) - val(i - 1)) / (2.0 * h);
            g.component[a][idx(m - 1)] = (val(m - 1) - val(m - 2)) / h;
        }
    }
    return g;
}

double interp_at(const GridFn& f, double x0, double x1, double outside) {
    const GridSpec& s = f.spec();
    auto locate = [&](int axis, double x, int& k, double& t) -> bool {
        const double lo = s.lo(axis), hi = s.hi(axis), h = s.spacing(axis);
        const double eps = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
        if (x < lo - eps || x > hi + eps) return false;
        double u = (x - lo) / h;
        // snap to a node when within rounding of it; keeps node evaluation
        // exact and indicator edges crisp under rescaling
        const double r = std::round(u);
        if (std::abs(u - r) < 1e-9) u = r;
        k = static_cast<int>(std::floor(u));
        k = std::clamp(k, 0, s.count(axis) - 2);
        t = u - k;
        t = std::clamp(t, 0.0, 1.0);
        return true;
    };
    auto lerp = [](double a, double b, double t) {
        if (t <= 0.0) return a;
        if (t >= 1.0) return b;
        if (a == kInf || b == kInf) return kInf;
        return a + t * (b - a);
    };
    int k0 = 0, k1 = 0;
    double t0 = 0.0, t1 = 0.0;
    if (!locate(0, x0, k0, t0)) return outside;
    if (s.dim() == 1)
        return lerp(f[k0], f[k0 + 1], t0);
    if (!locate(1, x1, k1, t1)) return outside;
    const double a = lerp(f.at(k0, k1), f.at(k0, k1 + 1), t1);
    const double b = lerp(f.at(k0 + 1, k1), f.at(k0 + 1, k1 + 1), t1);
    return lerp(a, b, t0);
}

}  // namespace alphaconv
