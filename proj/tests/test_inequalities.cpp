#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "alphaconv/inequalities.hpp"

using namespace alphaconv;

namespace {
const double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

GridSpec wide_grid() { return GridSpec::symmetric(1, 8.0, 1025); }

GridFn sample_psi(const GridSpec& s, double (*fn)(double)) {
    std::vector<double> v(s.size());
    for (int i = 0; i < s.count(0); ++i) v[i] = fn(s.coord(0, i));
    return GridFn(s, Side::Convex, std::move(v));
}
}

TEST_CASE("check report: pass is slack >= -tolerance") {
    CheckReport r = CheckReport::make("x", 1.0, 2.0, 0.5);
    CHECK(r.slack == -1.0);
    CHECK_FALSE(r.pass);
    CheckReport ok = CheckReport::make("x", 1.0, 1.0 + 1e-10, 1e-9);
    CHECK(ok.pass);
}

TEST_CASE("power_mean: limits and special cases") {
    CHECK(power_mean(2.0, 4.0, 0.5, 1.0) == doctest::Approx(3.0));
    CHECK(power_mean(2.0, 4.0, 0.5, 0.0) == doctest::Approx(std::sqrt(8.0)));
    CHECK(power_mean(3.0, 3.0, 0.25, -1.0) == doctest::Approx(3.0));
    CHECK(power_mean(0.0, 4.0, 0.5, -0.5) == 0.0);
}

TEST_CASE("bbl: interval indicators reduce to volume addition at kappa=1") {
    GridSpec s = wide_grid();
    for (double a : {0.0, -0.5}) {
        AlphaParam p = AlphaParam::from_alpha(a);
        AlphaFn f = AlphaFn::from_mass(
            p, sample(Indicator{IndicatorBody::interval(0.0, 2.0)}, s, Side::Mass));
        AlphaFn g = AlphaFn::from_mass(
            p, sample(Indicator{IndicatorBody::interval(0.0, 4.0)}, s, Side::Mass));
        CheckReport r = check_bbl(f, g, 0.5, 1.0);  // the classic volume case
        CHECK(r.pass);
        CHECK(std::abs(r.lhs - 3.0) <= s.spacing(0));
        CHECK(std::abs(r.rhs - 3.0) <= s.spacing(0));
        CHECK(std::abs(r.slack) <= s.spacing(0));
    }
}

TEST_CASE("bbl: equality at f = g within the computed tolerance") {
    GridSpec s = wide_grid();
    for (double beta : {2.5, kInf}) {
        AlphaFn g = make_g_alpha(s, AlphaParam::from_beta(beta));
        CheckReport r = check_bbl(g, g, 0.5);
        CHECK(r.pass);
        CHECK(std::abs(r.slack) <= r.tolerance);
    }
}

TEST_CASE("bbl: translates are the log-concave equality case") {
    GridSpec s = wide_grid();
    AlphaParam p = AlphaParam::from_alpha(0.0);
    AlphaFn g = make_g_alpha(s, p);
    AlphaFn shifted = AlphaFn::from_base(
        p, sample(UserClosure{[](double x, double) { return 0.5 * (x - 1.0) * (x - 1.0); }},
                  s, Side::Convex));
    CheckReport r = check_bbl(g, shifted, 0.5);
    CHECK(r.pass);
    CHECK(std::abs(r.slack) <= 1e-3 + r.tolerance);
}

TEST_CASE("bbl: randomized concave pairs all pass") {
    GridSpec s = wide_grid();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double betas[] = {1.3, 2.0, 5.0, kInf};
    for (int trial = 0; trial < 12; ++trial) {
        AlphaParam p = AlphaParam::from_beta(betas[trial % 4]);
        auto random_fn = [&] {
            const double a = 0.4 + 1.2 * u(rng);
            const double c = -1.5 + 3.0 * u(rng);
            const double b = 0.5 * u(rng);
            const double e = 0.3 * u(rng);
            return AlphaFn::from_base(
                p, sample(UserClosure{[=](double x, double) {
                       return 0.5 * a * (x - c) * (x - c) + b * std::abs(x) + e;
                   }},
                   s, Side::Convex));
        };
        CheckReport r = check_bbl(random_fn(), random_fn(), 0.2 + 0.6 * u(rng));
        CHECK(r.pass);
    }
}

TEST_CASE("bbl: rejects alpha below -1/n without an override") {
    GridSpec s = wide_grid();
    AlphaParam p = AlphaParam::from_alpha(-1.5);
    AlphaFn g = make_g_alpha(s, p);
    CHECK_THROWS_AS(check_bbl(g, g, 0.5), std::domain_error);
}

TEST_CASE("urysohn_rhs: closed-form anchors") {
    GridSpec s = GridSpec::symmetric(1, 48.0, 6145);  // beta=2 tails are fat
    // the bound at f = G_alpha collapses to (n/2) * integral(G)
    for (double beta : {2.0, 3.0, kInf}) {
        AlphaFn g = make_g_alpha(s, AlphaParam::from_beta(beta));
        CHECK(std::abs(urysohn_rhs(g) - 0.5 * integral_g_alpha(1, beta)) <= 2e-3);
    }
    // kappa = -1 at beta = 2: doubling the mass gives exactly pi
    AlphaParam p2 = AlphaParam::from_beta(2.0);
    AlphaFn doubled = AlphaFn::from_mass(
        p2, sample(UserClosure{[](double x, double) {
                return 2.0 * std::pow(1.0 + 0.25 * x * x, -2.0);
            }},
            s, Side::Mass));
    CHECK(std::abs(urysohn_rhs(doubled) - kPi) <= 2e-3);
}

TEST_CASE("urysohn_rhs: log-concave reduction formula branch") {
    GridSpec s = GridSpec::symmetric(1, 16.0, 2049);
    AlphaParam p = AlphaParam::from_alpha(0.0);
    AlphaFn f = AlphaFn::from_mass(
        p, sample(Indicator{IndicatorBody::interval(-1.0, 1.0)}, s, Side::Mass));
    const double integral_f = integrate(f.mass());
    const double want = kSqrt2Pi * (0.5 + std::log(integral_f / kSqrt2Pi));
    CHECK(urysohn_rhs(f) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("check_urysohn: equality at the gaussian analogue") {
    GridSpec s = GridSpec::symmetric(1, 16.0, 2049);
    for (double beta : {2.5, 4.0, 10.0, kInf}) {
        AlphaFn g = make_g_alpha(s, AlphaParam::from_beta(beta));
        CheckReport r = check_urysohn(g);
        CHECK(r.pass);
        CHECK(std::abs(r.slack) / std::abs(r.rhs) <= 1e-2);
        const double want = 0.5 * integral_g_alpha(1, beta);
        CHECK(std::abs(r.lhs - want) / want <= 1e-2);
        CHECK(std::abs(r.rhs - want) / want <= 1e-2);
    }
}

TEST_CASE("check_urysohn: indicator with the frozen gaussian-moment value") {
    GridSpec s = GridSpec::symmetric(1, 16.0, 2049);
    AlphaFn f = AlphaFn::from_mass(
        AlphaParam::from_alpha(0.0),
        sample(Indicator{IndicatorBody::interval(-1.0, 1.0)}, s, Side::Mass));
    CheckReport r = check_urysohn(f);
    CHECK(r.pass);
    CHECK(std::abs(r.lhs - 2.0) <= 2e-2);
    // quadrature reads int f = 2 + h, which feeds through the log term
    CHECK(std::abs(r.rhs - 0.687) <= 2.5 * s.spacing(0));
    CHECK(r.slack > 1.0);
}

TEST_CASE("check_urysohn: the zoo passes") {
    GridSpec s = GridSpec::symmetric(1, 16.0, 2049);
    for (double beta : {2.5, 4.0, kInf}) {
        AlphaParam p = AlphaParam::from_beta(beta);
        for (const auto& [name, fn] : standard_zoo(p, s)) {
            INFO(name, " beta=", beta);
            CheckReport r = check_urysohn(fn);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("check_poincare: constants make the bound vacuous") {
    GridSpec s = GridSpec::symmetric(1, 12.0, 2049);
    GridFn psi(s, Side::Convex, std::vector<double>(s.size(), 2.5));
    for (double beta : {10.0, 200.0}) {
        CheckReport r = check_poincare(psi, 1, beta);
        CHECK(r.pass);
        CHECK(r.lhs == 0.0);
        CHECK(r.rhs <= 0.0);
    }
}

TEST_CASE("check_poincare: linear function near equality at large beta") {
    GridSpec s = GridSpec::symmetric(1, 12.0, 4097);
    GridFn psi = sample_psi(s, [](double x) { return x; });
    CheckReport r = check_poincare(psi, 1, 1e4);
    CHECK(r.pass);
    CHECK(std::abs(r.lhs - kSqrt2Pi) <= 2e-2);
    CHECK(r.slack >= -1e-12);
    CHECK(r.slack <= 1e-2);
}

TEST_CASE("check_poincare: quadratic passes with positive slack") {
    GridSpec s = GridSpec::symmetric(1, 12.0, 4097);
    GridFn psi = sample_psi(s, [](double x) { return x * x; });
    CheckReport r = check_poincare(psi, 1, 50.0);
    CHECK(r.pass);
    CHECK(r.slack > 0.0);
}

TEST_CASE("check_poincare: domain gates") {
    GridSpec s = GridSpec::symmetric(1, 12.0, 257);
    GridFn psi = sample_psi(s, [](double x) { return x; });
    CHECK_THROWS_AS(check_poincare(psi, 1, 0.5), std::domain_error);
    CHECK_THROWS_AS(check_poincare(psi, 1, kInf), std::domain_error);
}

TEST_CASE("gaussian poincare: sharp at linear, slack 2 at quadratic") {
    GridSpec s = GridSpec::symmetric(1, 12.0, 4097);
    CheckReport lin = check_gaussian_poincare(sample_psi(s, [](double x) { return x; }));
    CHECK(lin.pass);
    CHECK(std::abs(lin.lhs - lin.rhs) <= 1e-4);

    CheckReport con = check_gaussian_poincare(
        GridFn(s, Side::Convex, std::vector<double>(s.size(), 3.0)));
    CHECK(con.pass);
    CHECK(std::abs(con.slack) <= 1e-10);

    CheckReport quad =
        check_gaussian_poincare(sample_psi(s, [](double x) { return x * x; }));
    CHECK(quad.pass);
    CHECK(quad.lhs == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(quad.rhs == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::abs(quad.slack - 2.0) <= 1e-3);
}

TEST_CASE("generalized bound converges to the gaussian one") {
    GridSpec s = GridSpec::symmetric(1, 12.0, 4097);
    GridFn psi = sample_psi(s, [](double x) { return x * x; });
    const double gauss_slack = check_gaussian_poincare(psi).slack;
    double prev_gap = kInf;
    for (double beta : {50.0, 200.0, 1e3, 1e4}) {
        CheckReport r = check_poincare(psi, 1, beta);
        CHECK(r.pass);
        const double gap = std::abs(r.slack / integral_g_alpha(1, beta) - gauss_slack);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap <= 5e-3);
}

TEST_CASE("variation formulas: constants and linear tilts are exact") {
    GridSpec s = GridSpec::symmetric(1, 8.0, 2049);
    GridFn phi0 = sample(QuadraticBase{}, s, Side::Convex);
    const double eps[] = {1e-3};

    CheckReport c = check_variation_formulas(
        phi0, GridFn(s, Side::Convex, std::vector<double>(s.size(), 0.7)), eps);
    CHECK(c.pass);
    CHECK(c.diagnostics.at("first_variation_err") <= 1e-10);
    CHECK(c.diagnostics.at("second_variation_err") <= 1e-7);

    CheckReport l = check_variation_formulas(
        phi0, sample_psi(s, [](double x) { return 0.8 * x + 0.2; }), eps);
    CHECK(l.pass);
    CHECK(l.diagnostics.at("first_variation_err") <= 1e-9);
    CHECK(l.diagnostics.at("second_variation_err_grid") <= 1e-8);
}

TEST_CASE("variation formulas: cos within 1e-4 with the O(t^2) law") {
    GridSpec s = GridSpec::symmetric(1, 8.0, 2049);
    GridFn phi0 = sample(QuadraticBase{}, s, Side::Convex);
    const double eps[] = {1e-3};
    CheckReport r = check_variation_formulas(
        phi0, sample_psi(s, [](double x) { return std::cos(x); }), eps);
    CHECK(r.pass);
    CHECK(r.rhs <= 1e-4);  // observed worst error over both formulas
    CHECK(r.diagnostics.at("halving_ratio_first") >= 3.0);
    CHECK(r.diagnostics.at("halving_ratio_second") >= 3.0);
}

TEST_CASE("variation formulas: preconditions") {
    GridSpec s = GridSpec::symmetric(1, 8.0, 257);
    GridFn psi = sample_psi(s, [](double x) { return std::cos(x); });
    const double eps[] = {1e-3};
    CHECK_THROWS_AS(check_variation_formulas(psi, psi, eps), std::invalid_argument);
    GridFn phi0 = sample(QuadraticBase{}, s, Side::Convex);
    CHECK_THROWS_AS(
        check_variation_formulas(phi0, psi, std::span<const double>(eps, 0)),
        std::invalid_argument);
}
