#include "alphaconv/lft.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace alphaconv {

namespace detail {

bool llt_1d(double lo, double h, std::span<const double> v,
            double dlo, double dh, int q,
            std::span<double> out, std::span<int> argmax) {
    const int m = static_cast<int>(v.size());
    // Lower hull of the finite nodes (x_i, v_i), monotone chain. Collinear
    // middle points are dropped, which keeps the left endpoint of a flat
    // edge as the argmax -- the smaller-index tie rule.
    std::vector<int> hull;
    hull.reserve(16);
    for (int i = 0; i < m; ++i) {
        if (v[i] == kInf) continue;
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2];
            const int b = hull[hull.size() - 1];
            // drop b when slope(a,b) >= slope(b,i)
            const double lhs = (v[b] - v[a]) * (i - b);
            const double rhs = (v[i] - v[b]) * (b - a);
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    if (hull.empty()) return false;

    const int K = static_cast<int>(hull.size());
    int k = 0;
    for (int j = 0; j < q; ++j) {
        const double y = dlo + j * dh;
        // advance while the next hull edge still improves strictly
        while (k + 1 < K) {
            const int a = hull[k], b = hull[k + 1];
            const double slope = (v[b] - v[a]) / ((b - a) * h);
            if (slope < y)
                ++k;
            else
                break;
        }
        const int i = hull[k];
        out[j] = (lo + i * h) * y - v[i];
        argmax[j] = i;
    }
    return true;
}

}  // namespace detail

namespace {

// Queries on one dual axis must ascend for the hull merge.
void check_dual_axis(const GridSpec& dual) {
    for (int a = 0; a < dual.dim(); ++a)
        if (!(dual.spacing(a) > 0))
            throw std::invalid_argument("legendre: dual axis not ascending");
}

}  // namespace

DualPair DualPair::with_default_dual(const GridFn& phi) {
    return {phi.spec(), default_dual_spec(phi)};
}

GridSpec default_dual_spec(const GridFn& phi, double pad) {
    const GridSpec& s = phi.spec();
    double radius = 0.0;
    for (int a = 0; a < s.dim(); ++a) {
        const double h = s.spacing(a);
        const int m = s.count(a);
        const int lines = (s.dim() == 2) ? s.count(1 - a) : 1;
        for (int j = 0; j < lines; ++j) {
            for (int i = 0; i + 1 < m; ++i) {
                double a0, a1;
                if (s.dim() == 1) {
                    a0 = phi[i];
                    a1 = phi[i + 1];
                } else {
                    a0 = (a == 0) ? phi.at(i, j) : phi.at(j, i);
                    a1 = (a == 0) ? phi.at(i + 1, j) : phi.at(j, i + 1);
                }
                if (std::isfinite(a0) && std::isfinite(a1))
                    radius = std::max(radius, std::abs(a1 - a0) / h);
            }
        }
    }
    radius = std::max(radius * (1.0 + pad), 1e-3);
    const int m = s.count(0);
    return (s.dim() == 1) ? GridSpec::symmetric(1, radius, m)
                          : GridSpec::symmetric(2, radius, std::max(m, s.count(1)));
}

ConjugateResult legendre(const GridFn& phi, const DualPair& pair) {
    if (!(phi.spec() == pair.primal))
        throw std::invalid_argument("legendre: function does not live on the pair's primal grid");
    return legendre(phi, pair.dual);
}

ConjugateResult legendre(const GridFn& phi, const GridSpec& dual) {
    if (phi.side() != Side::Convex)
        throw std::invalid_argument("legendre: expects a convex-side function");
    if (dual.dim() != phi.spec().dim())
        throw std::invalid_argument("legendre: dual dimension mismatch");
    check_dual_axis(dual);
    const GridSpec& s = phi.spec();
    long boundary = 0;

    if (s.dim() == 1) {
        const int q = dual.count(0);
        std::vector<double> out(q);
        std::vector<int> arg(q);
        if (!detail::llt_1d(s.lo(0), s.spacing(0), phi.values(),
                            dual.lo(0), dual.spacing(0), q, out, arg))
            throw std::invalid_argument("legendre: input is identically +inf");
        for (int j = 0; j < q; ++j)
            if (arg[j] == 0 || arg[j] == s.count(0) - 1) ++boundary;
        return {GridFn(dual, Side::Convex, std::move(out)), boundary};
    }

    // Pass 1: conjugate each x0-row over x1 onto the dual axis 1.
    const int m0 = s.count(0), m1 = s.count(1);
    const int q0 = dual.count(0), q1 = dual.count(1);
    std::vector<double> t1(static_cast<std::size_t>(m0) * q1, -kInf);
    std::vector<double> row(m1);
    std::vector<double> rowout(q1);
    std::vector<int> rowarg(q1);
    for (int i0 = 0; i0 < m0; ++i0) {
        for (int i1 = 0; i1 < m1; ++i1) row[i1] = phi.at(i0, i1);
        if (!detail::llt_1d(s.lo(1), s.spacing(1), row,
                            dual.lo(1), dual.spacing(1), q1, rowout, rowarg))
            continue;  // all-inf row: stays -inf, dropped in pass 2
        for (int j1 = 0; j1 < q1; ++j1) {
            t1[static_cast<std::size_t>(i0) * q1 + j1] = rowout[j1];
            if (rowarg[j1] == 0 || rowarg[j1] == m1 - 1) ++boundary;
        }
    }

    // Pass 2: for each dual axis-1 node, conjugate -t1 over x0.
    std::vector<double> out(static_cast<std::size_t>(q0) * q1);
    std::vector<double> col(m0);
    std::vector<double> colout(q0);
    std::vector<int> colarg(q0);
    bool any = false;
    for (int j1 = 0; j1 < q1; ++j1) {
        for (int i0 = 0; i0 < m0; ++i0) {
            const double g = t1[static_cast<std::size_t>(i0) * q1 + j1];
            col[i0] = (g == -kInf) ? kInf : -g;
        }
        if (!detail::llt_1d(s.lo(0), s.spacing(0), col,
                            dual.lo(0), dual.spacing(0), q0, colout, colarg))
            continue;
        any = true;
        for (int j0 = 0; j0 < q0; ++j0) {
            out[dual.index(j0, j1)] = colout[j0];
            if (colarg[j0] == 0 || colarg[j0] == m0 - 1) ++boundary;
        }
    }
    if (!any)
        throw std::invalid_argument("legendre: input is identically +inf");
    return {GridFn(dual, Side::Convex, std::move(out)), boundary};
}

namespace {

// 1D largest convex minorant at the nodes: hull of the finite range,
// +inf outside it.
std::vector<double> lower_hull_envelope_1d(std::span<const double> v, double h) {
    const int m = static_cast<int>(v.size());
    std::vector<int> hull;
    for (int i = 0; i < m; ++i) {
        if (v[i] == kInf) continue;
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2];
            const int b = hull[hull.size() - 1];
            if ((v[b] - v[a]) * (i - b) >= (v[i] - v[b]) * (b - a))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    std::vector<double> out(m, kInf);
    if (hull.empty()) return out;
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        const int a = hull[e], b = hull[e + 1];
        const double slope = (v[b] - v[a]) / ((b - a) * h);
        for (int i = a; i <= b; ++i) out[i] = v[a] + slope * (i - a) * h;
    }
    if (hull.size() == 1) out[hull[0]] = v[hull[0]];
    else {
        out[hull.front()] = v[hull.front()];
        out[hull.back()] = v[hull.back()];
    }
    return out;
}

}  // namespace

GridFn convex_envelope(const GridFn& phi) {
    if (phi.side() != Side::Convex)
        throw std::invalid_argument("convex_envelope: expects a convex-side function");
    const GridSpec& s = phi.spec();
    if (s.dim() == 1) {
        auto out = lower_hull_envelope_1d(phi.values(), s.spacing(0));
        return GridFn(s, Side::Convex, std::move(out));
    }
    // 2D: double transform through a dense default dual grid.
    GridSpec dual = default_dual_spec(phi);
    GridFn star = legendre(phi, dual).fn;
    return legendre(star, s).fn;
}

namespace {

int origin_index(const GridSpec& s, int axis) {
    const double c = s.origin_offset(axis);
    const double r = std::round(c);
    if (std::abs(c - r) > 1e-9 * std::max(1.0, std::abs(c)))
        throw std::invalid_argument(
            "convolution: grid has no node at the origin, no exact decompositions");
    return static_cast<int>(r);
}

void check_same_spec(const GridFn& a, const GridFn& b, const char* who) {
    if (!(a.spec() == b.spec()))
        throw std::invalid_argument(std::string(who) + ": grid spec mismatch");
}

}  // namespace

bool is_grid_convex(const GridFn& phi, double tol) {
    const GridSpec& s = phi.spec();
    auto line_ok = [&](auto value, int n) {
        int first = -1, last = -1;
        for (int i = 0; i < n; ++i) {
            if (value(i) < kInf) {
                if (first < 0) first = i;
                last = i;
            }
        }
        if (first < 0) return true;
        for (int i = first; i <= last; ++i)
            if (value(i) == kInf) return false;  // +inf hole inside the line
        for (int i = first + 1; i < last; ++i)
            if (value(i - 1) + value(i + 1) - 2.0 * value(i) < -tol) return false;
        return true;
    };
    if (s.dim() == 1)
        return line_ok([&](int i) { return phi[i]; }, s.count(0));
    const int m0 = s.count(0), m1 = s.count(1);
    for (int j = 0; j < m1; ++j)
        if (!line_ok([&](int i) { return phi.at(i, j); }, m0)) return false;
    for (int i = 0; i < m0; ++i)
        if (!line_ok([&](int j) { return phi.at(i, j); }, m1)) return false;
    // both diagonal directions, every offset
    for (int d0 = -(m1 - 1); d0 < m0; ++d0) {
        const int len = std::min(m0 - std::max(d0, 0), m1 - std::max(-d0, 0));
        if (len < 3) continue;
        const int i0 = std::max(d0, 0), j0 = std::max(-d0, 0);
        if (!line_ok([&](int t) { return phi.at(i0 + t, j0 + t); }, len)) return false;
        const int j1 = m1 - 1 - j0;
        if (!line_ok([&](int t) { return phi.at(i0 + t, j1 - t); }, len)) return false;
    }
    return true;
}

namespace {

GridFn inf_convolve_direct(const GridFn& phi, const GridFn& psi) {
    const GridSpec& s = phi.spec();
    std::vector<double> out(s.size(), kInf);
    if (s.dim() == 1) {
        const int m = s.count(0);
        const int c = origin_index(s, 0);
        for (int i = 0; i < m; ++i) {
            double best = kInf;
            const int jlo = std::max(0, i + c - (m - 1));
            const int jhi = std::min(m - 1, i + c);
            for (int j = jlo; j <= jhi; ++j) {
                const double a = phi[j];
                if (a == kInf) continue;
                const double b = psi[i + c - j];
                if (b == kInf) continue;
                best = std::min(best, a + b);
            }
            out[i] = best;
        }
    } else {
        const int m0 = s.count(0), m1 = s.count(1);
        const int c0 = origin_index(s, 0), c1 = origin_index(s, 1);
        for (int i0 = 0; i0 < m0; ++i0)
            for (int i1 = 0; i1 < m1; ++i1) {
                double best = kInf;
                const int j0lo = std::max(0, i0 + c0 - (m0 - 1));
                const int j0hi = std::min(m0 - 1, i0 + c0);
                const int j1lo = std::max(0, i1 + c1 - (m1 - 1));
                const int j1hi = std::min(m1 - 1, i1 + c1);
                for (int j0 = j0lo; j0 <= j0hi; ++j0)
                    for (int j1 = j1lo; j1 <= j1hi; ++j1) {
                        const double a = phi.at(j0, j1);
                        if (a == kInf) continue;
                        const double b = psi.at(i0 + c0 - j0, i1 + c1 - j1);
                        if (b == kInf) continue;
                        best = std::min(best, a + b);
                    }
                out[s.index(i0, i1)] = best;
            }
    }
    return GridFn(s, Side::Convex, std::move(out));
}

GridFn inf_convolve_dual(const GridFn& phi, const GridFn& psi) {
    const GridSpec& s = phi.spec();
    // shared dual box covering both slope ranges, denser than the primal
    GridSpec da = default_dual_spec(phi);
    GridSpec db = default_dual_spec(psi);
    const double radius = std::max(da.hi(0), db.hi(0));
    const int m = 2 * std::max(s.count(0), s.dim() == 2 ? s.count(1) : 3) - 1;
    GridSpec dual = GridSpec::symmetric(s.dim(), radius, m);

    GridFn a = legendre(phi, dual).fn;
    GridFn b = legendre(psi, dual).fn;
    std::vector<double> sum(a.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = a[i] + b[i];
    GridFn added(dual, Side::Convex, std::move(sum));
    return legendre(added, s).fn;
}

}  // namespace

GridFn inf_convolve(const GridFn& phi, const GridFn& psi) {
    if (phi.side() != Side::Convex || psi.side() != Side::Convex)
        throw std::invalid_argument("inf_convolve: expects convex-side functions");
    check_same_spec(phi, psi, "inf_convolve");
    if (phi.all_finite() && psi.all_finite() &&
        is_grid_convex(phi) && is_grid_convex(psi))
        return inf_convolve_dual(phi, psi);
    return inf_convolve_direct(phi, psi);
}

GridFn sup_convolve(const GridFn& f, const GridFn& g) {
    if (f.side() != Side::Mass || g.side() != Side::Mass)
        throw std::invalid_argument("sup_convolve: expects mass-side functions");
    check_same_spec(f, g, "sup_convolve");
    const GridSpec& s = f.spec();
    std::vector<double> out(s.size(), 0.0);
    if (s.dim() == 1) {
        const int m = s.count(0);
        const int c = origin_index(s, 0);
        for (int i = 0; i < m; ++i) {
            double best = 0.0;
            const int jlo = std::max(0, i + c - (m - 1));
            const int jhi = std::min(m - 1, i + c);
            for (int j = jlo; j <= jhi; ++j) {
                const double a = f[j];
                if (a == 0.0) continue;
                best = std::max(best, a * g[i + c - j]);
            }
            out[i] = best;
        }
    } else {
        const int m0 = s.count(0), m1 = s.count(1);
        const int c0 = origin_index(s, 0), c1 = origin_index(s, 1);
        for (int i0 = 0; i0 < m0; ++i0)
            for (int i1 = 0; i1 < m1; ++i1) {
                double best = 0.0;
                const int j0lo = std::max(0, i0 + c0 - (m0 - 1));
                const int j0hi = std::min(m0 - 1, i0 + c0);
                const int j1lo = std::max(0, i1 + c1 - (m1 - 1));
                const int j1hi = std::min(m1 - 1, i1 + c1);
                for (int j0 = j0lo; j0 <= j0hi; ++j0)
                    for (int j1 = j1lo; j1 <= j1hi; ++j1) {
                        const double a = f.at(j0, j1);
                        if (a == 0.0) continue;
                        best = std::max(best, a * g.at(i0 + c0 - j0, i1 + c1 - j1));
                    }
                out[s.index(i0, i1)] = best;
            }
    }
    return GridFn(s, Side::Mass, std::move(out));
}

}  // namespace alphaconv
