#pragma once

#include <map>
#include <optional>
#include <string>

#include "alphaconv/meanwidth.hpp"

namespace alphaconv {

/// Structured verdict of one inequality check. pass <=> slack >= -tolerance.
struct CheckReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;       // lhs - rhs
    double tolerance = 0.0;
    bool pass = false;
    std::map<std::string, double> diagnostics;

    static CheckReport make(std::string name, double lhs, double rhs,
                            double tolerance,
                            std::map<std::string, double> diagnostics = {});
};

/// kappa-power mean of two positive numbers (geometric mean at kappa = 0).
double power_mean(double a, double b, double lambda, double kappa);

/// Integral form of the concavity inequality for alpha-sums:
///   integral of [lambda.f] * [(1-lambda).g]  >=  kappa-mean of the integrals.
/// kappa comes from the shared parameter (requires alpha >= -1/n); the
/// override makes the classic volume case reachable, where indicator inputs
/// are parameter-independent and the mean is taken at kappa = 1/n.
CheckReport check_bbl(const AlphaFn& f, const AlphaFn& g, double lambda,
                      std::optional<double> kappa_override = std::nullopt);

/// Right-hand side of the width lower bound:
///   integral(G_alpha) * [ n/2 + ((If/IG)^kappa - 1)/kappa ],
/// with the log form at kappa = 0.
double urysohn_rhs(const AlphaFn& f);

/// Width lower bound: mean_width_repr(f) against urysohn_rhs(f).
CheckReport check_urysohn(const AlphaFn& f);

/// Weighted Poincare-type bound at finite beta > n:
///   int |grad psi|^2 w1  >=  (kappa-1)/IG * (int psi w1)^2
///                            + (beta+1)/beta * int psi^2 w2,
/// kappa = 1/(n - beta). psi must be finite on the grid.
CheckReport check_poincare(const GridFn& psi, int n, double beta);

/// Sharp Gaussian case: int |grad psi|^2 dgamma >= Var_gamma(psi), with
/// gamma the standard Gaussian probability measure.
CheckReport check_gaussian_poincare(const GridFn& psi);

/// Finite-difference check of the conjugate's variation formulas along
/// phi_t = |x|^2/2 + t psi:  d/dt phi_t*(y)|_0 = -psi(y)  and
/// d^2/dt^2 phi_t*(y)|_0 = |psi'(y)|^2. phi0 must sample |x|^2/2; the
/// conjugate is evaluated through a C^2 interpolant of psi so that the
/// t-derivatives exist (a node-sampled sup is piecewise linear in t).
CheckReport check_variation_formulas(const GridFn& phi0, const GridFn& psi,
                                     std::span<const double> epsilons);

}  // namespace alphaconv
