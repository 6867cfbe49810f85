#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace alphaconv {

// Extended reals. +inf is the one admissible non-finite value and only on
// the convex side; it is kept as IEEE infinity so that order and addition
// stay exact (absorbing element), never as a large-magnitude sentinel.
using ExtReal = double;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Side { Convex, Mass };

/// Uniform axis-aligned grid on a box in R^d, d in {1,2}.
/// Node k on axis a sits at lo(a) + k*spacing(a); the affine indexing is the
/// only coordinate rule used anywhere, so coordinates never drift.
class GridSpec {
public:
    static GridSpec line(double lo, double hi, int m);
    static GridSpec box(double lo0, double hi0, int m0,
                        double lo1, double hi1, int m1);
    /// Symmetric box [-radius, radius]^dim with m nodes per axis.
    static GridSpec symmetric(int dim, double radius, int m);

    int dim() const { return dim_; }
    int count(int axis) const { return m_[axis]; }
    double lo(int axis) const { return lo_[axis]; }
    double hi(int axis) const { return hi_[axis]; }
    double spacing(int axis) const { return h_[axis]; }
    double max_spacing() const;

    double coord(int axis, int k) const { return lo_[axis] + k * h_[axis]; }

    std::size_t size() const;
    std::size_t index(int i0, int i1 = 0) const;
    std::array<int, 2> unindex(std::size_t flat) const;

    /// Index of the origin on an axis (-lo/h); integral iff 0 is a node.
    double origin_offset(int axis) const { return -lo_[axis] / h_[axis]; }
    /// True when every axis has the origin on a node (within 1e-9 of an
    /// integer index). Exact grid decompositions y+z=x exist only then.
    bool origin_aligned() const;

    bool operator==(const GridSpec&) const = default;

private:
    GridSpec() = default;
    int dim_ = 1;
    std::array<double, 2> lo_{0, 0};
    std::array<double, 2> hi_{0, 0};
    std::array<double, 2> h_{0, 0};
    std::array<int, 2> m_{0, 1};
};

/// Sampled extended-real function on a GridSpec. Immutable after
/// construction; the constructor enforces the side invariants:
///   mass side:   all values finite, >= 0, not identically zero
///   convex side: no -inf/NaN, at least one finite value
class GridFn {
public:
    GridFn(GridSpec spec, Side side, std::vector<double> values);

    const GridSpec& spec() const { return spec_; }
    Side side() const { return side_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double at(int i0, int i1 = 0) const { return values_[spec_.index(i0, i1)]; }
    std::size_t size() const { return values_.size(); }

    double min_value() const;
    double max_value() const;
    bool all_finite() const;

private:
    GridSpec spec_;
    Side side_;
    std::vector<double> values_;
};

/// Per-axis components of a finite-difference gradient.
struct Gradient {
    GridSpec spec;
    std::vector<std::vector<double>> component;  // component[axis][flat index]

    double squared_norm(std::size_t flat) const {
        double s = 0.0;
        for (const auto& c : component) s += c[flat] * c[flat];
        return s;
    }
};

/// Point evaluator used by the low-level sampler; for 1D grids the second
/// coordinate is always 0.
using PointFn = std::function<double(double, double)>;

/// Sample an evaluator on a grid. Rejects values that violate the side
/// invariants, reporting the flat index of the offending node.
GridFn sample_fn(const PointFn& fn, const GridSpec& spec, Side side);

/// Composite trapezoid quadrature (tensor product in 2D). Mass side only.
double integrate(const GridFn& f);

struct IntegralEstimate {
    double value = 0.0;
    double error_estimate = 0.0;  // >= 0
};

/// integrate() plus an a-posteriori error estimate: Richardson comparison
/// against the every-other-node subgrid when all axis counts are odd,
/// a second-difference bound otherwise.
IntegralEstimate integrate_with_error(const GridFn& f);

/// Signed trapezoid quadrature over raw values (no side constraints), with
/// the same error estimate as integrate_with_error. Values must be finite.
IntegralEstimate integrate_values(const GridSpec& spec, std::span<const double> v);

/// Central differences in the interior, one-sided at the box boundary.
/// Rejects any +inf value.
Gradient gradient_central(const GridFn& f);

/// Multilinear interpolation at an off-node point; +inf corners propagate.
/// Points outside the box evaluate to `outside`.
double interp_at(const GridFn& f, double x0, double x1, double outside);

}  // namespace alphaconv
