#pragma once

#include "alphaconv/grid.hpp"

namespace alphaconv {

/// Primal/dual grid pairing for the discrete Legendre transform.
struct DualPair {
    GridSpec primal;
    GridSpec dual;

    /// Pair a function's grid with the default slope-derived dual box.
    static DualPair with_default_dual(const GridFn& phi);
};

/// Discrete conjugate plus a truncation diagnostic: boundary_hits counts
/// dual nodes whose argmax landed on the edge of the sampled input box,
/// which signals that the sup may continue beyond the sampled domain.
struct ConjugateResult {
    GridFn fn;
    long boundary_hits = 0;
    bool argmax_on_boundary() const { return boundary_hits > 0; }
};

/// Default dual grid: symmetric box whose radius is the largest one-sided
/// slope of phi along each axis (finite nodes only), padded by `pad`,
/// with the same node count as the primal axis.
GridSpec default_dual_spec(const GridFn& phi, double pad = 0.1);

/// phi*(y) = max over grid nodes x of <x,y> - phi(x), for every dual node y.
/// One upper-hull/merge pass per axis (two nested 1D transforms in 2D);
/// the sup ranges over sampled nodes only. Ties break toward the smaller
/// node index. Rejects an identically +inf input.
ConjugateResult legendre(const GridFn& phi, const GridSpec& dual);
ConjugateResult legendre(const GridFn& phi, const DualPair& pair);

/// Largest convex minorant of the sampled data restricted to the grid:
/// lower hull evaluated at the nodes in 1D, the double transform through a
/// default dual grid in 2D.
GridFn convex_envelope(const GridFn& phi);

/// (phi [] psi)(x) = min over grid decompositions y+z=x of phi(y)+psi(z).
/// Dual route (phi*+psi*)* for finite convex inputs, direct index scan
/// otherwise (the dual route would silently convexify, and on +inf-bearing
/// indicator bases the scan is exact).
GridFn inf_convolve(const GridFn& phi, const GridFn& psi);

/// (f * g)(x) = max over grid decompositions y+z=x of f(y)g(z). Mass side.
GridFn sup_convolve(const GridFn& f, const GridFn& g);

/// Midpoint convexity along every axis line (and both diagonals in 2D):
/// +inf allowed only as a contiguous run at the ends of each line.
bool is_grid_convex(const GridFn& phi, double tol = 1e-10);

namespace detail {
/// 1D discrete conjugate core: nodes at lo + i*h with values v (may contain
/// +inf), queries at dlo + j*dh ascending. Writes the conjugate values and
/// the argmax node indices. Returns false when every value is +inf.
bool llt_1d(double lo, double h, std::span<const double> v,
            double dlo, double dh, int q,
            std::span<double> out, std::span<int> argmax);
}  // namespace detail

}  // namespace alphaconv
