#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "alphaconv/meanwidth.hpp"

using namespace alphaconv;

namespace {
const double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

GridSpec zoo_grid() { return GridSpec::symmetric(1, 16.0, 2049); }
}

TEST_CASE("log_gamma: anchor values") {
    CHECK(std::abs(log_gamma(1.0)) <= 1e-12);
    CHECK(std::abs(log_gamma(2.0)) <= 1e-12);
    CHECK(std::abs(log_gamma(0.5) - std::log(std::sqrt(kPi))) <= 1e-10);
    CHECK(std::abs(log_gamma(10.0) - std::log(362880.0)) <= 1e-10);
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-3.0), std::domain_error);
}

TEST_CASE("log_gamma: factorials and half-integers") {
    double logfact = 0.0;  // log((k-1)!) accumulated exactly in double sums
    for (int k = 2; k <= 20; ++k) {
        logfact += std::log(static_cast<double>(k - 1));
        CHECK(std::abs(log_gamma(static_cast<double>(k)) - logfact) <= 1e-10);
    }
    // Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
    double lg = std::log(std::sqrt(kPi));
    for (int k = 0; k <= 12; ++k) {
        CHECK(std::abs(log_gamma(k + 0.5) - lg) <= 1e-10);
        lg += std::log(k + 0.5);
    }
    // recurrence stays consistent down into the small-argument branch
    CHECK(std::abs(log_gamma(0.01) - (log_gamma(1.01) - std::log(0.01))) <= 1e-10);
}

TEST_CASE("integral_g_alpha: closed forms") {
    CHECK(std::abs(integral_g_alpha(1, 2.0) - kPi) <= 1e-12);
    CHECK(std::abs(integral_g_alpha(1, kInf) - kSqrt2Pi) <= 1e-13);
    // beta = 4: sqrt(8 pi) Gamma(3.5) / Gamma(4) with Gamma(3.5) = 15 sqrt(pi)/8
    const double want14 = std::sqrt(8.0 * kPi) * (15.0 * std::sqrt(kPi) / 8.0) / 6.0;
    CHECK(std::abs(integral_g_alpha(1, 4.0) - want14) <= 1e-12);
    // n = 2 reduces to 2 pi beta / (beta - 1)
    CHECK(std::abs(integral_g_alpha(2, 2.0) - 4.0 * kPi) <= 1e-12);
    CHECK(std::abs(integral_g_alpha(2, 2.25) - 2.0 * kPi * 2.25 / 1.25) <= 1e-12);
    CHECK(std::abs(integral_g_alpha(2, kInf) - 2.0 * kPi) <= 1e-12);

    CHECK_THROWS_AS(integral_g_alpha(1, 0.5), std::domain_error);
    CHECK_THROWS_AS(integral_g_alpha(2, 1.0), std::domain_error);
}

TEST_CASE("integral_g_alpha: shrink scaling identity") {
    for (double beta : {2.0, 3.5, kInf})
        for (double shrink : {1.0, 0.98, 0.5}) {
            const double lhs = integral_g_alpha(1, beta, shrink);
            const double rhs = std::pow(shrink, -0.5) * integral_g_alpha(1, beta, 1.0);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
        }
}

TEST_CASE("integral_g_alpha: quadrature oracle in 2D") {
    const double beta = 2.5;
    GridSpec s = GridSpec::symmetric(2, 23.0, 461);
    GridFn g = sample(GAlphaDesc{AlphaParam::from_beta(beta)}, s, Side::Mass);
    const double quad = integrate(g);
    const double closed = integral_g_alpha(2, beta);
    CHECK(std::abs(quad - closed) / closed < 1e-3);
}

TEST_CASE("weight_kernel: pointwise values") {
    for (double beta : {1.0, 2.0, 50.0, kInf}) {
        CHECK(weight_kernel_sq(0.0, beta, 1) == 1.0);
        CHECK(weight_kernel_sq(0.0, beta, 2) == 1.0);
    }
    CHECK(weight_kernel_sq(4.0, 2.0, 1) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(weight_kernel_sq(2.0, kInf, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(weight_kernel_sq(1.0, 2.0, 3), std::invalid_argument);
}

TEST_CASE("mean_width_repr: G_alpha hits the closed-form half-dimension value") {
    for (double beta : {2.5, 4.0, kInf}) {
        AlphaFn g = make_g_alpha(zoo_grid(), AlphaParam::from_beta(beta));
        WidthResult w = mean_width_repr(g);
        const double want = 0.5 * integral_g_alpha(1, beta);
        CHECK(std::abs(w.value - want) / want < 1e-2);
        CHECK(w.route == WidthResult::Route::Representation);
    }
}

TEST_CASE("mean_width_repr: gaussian moment for the indicator") {
    AlphaParam p = AlphaParam::from_alpha(0.0);
    AlphaFn f = AlphaFn::from_mass(
        p, sample(Indicator{IndicatorBody::interval(-1.0, 1.0)}, zoo_grid(), Side::Mass));
    WidthResult w = mean_width_repr(f);
    CHECK(std::abs(w.value - 2.0) < 1e-2);  // int |y| exp(-y^2/2) dy = 2
}

TEST_CASE("mean_width_repr: spike at the origin has zero width") {
    GridSpec s = zoo_grid();
    std::vector<double> spike(s.size(), 0.0);
    spike[s.size() / 2] = 1.0;
    AlphaFn f = AlphaFn::from_mass(AlphaParam::from_beta(3.0),
                                   GridFn(s, Side::Mass, spike));
    WidthResult w = mean_width_repr(f);
    CHECK(std::abs(w.value) <= 1e-12);
}

TEST_CASE("mean_width_repr: undersized dual box is diagnosed") {
    AlphaFn g = make_g_alpha(zoo_grid(), AlphaParam::from_beta(2.5));
    CHECK_THROWS_WITH_AS(mean_width_repr(g, GridSpec::symmetric(1, 2.0, 257)),
                         doctest::Contains("domain too small"), std::runtime_error);
}

TEST_CASE("mean_width_repr: monotone in the function up to quadrature error") {
    for (double beta : {3.0, kInf}) {
        AlphaParam p = AlphaParam::from_beta(beta);
        GridSpec s = zoo_grid();
        AlphaFn small = AlphaFn::from_mass(
            p, sample(Indicator{IndicatorBody::interval(-1.0, 1.0)}, s, Side::Mass));
        AlphaFn big = AlphaFn::from_mass(
            p, sample(Indicator{IndicatorBody::interval(-2.0, 2.0)}, s, Side::Mass));
        WidthResult ws = mean_width_repr(small);
        WidthResult wb = mean_width_repr(big);
        CHECK(ws.value <= wb.value +
                              2.0 * (ws.quadrature_error_estimate +
                                     wb.quadrature_error_estimate));

        AlphaFn g = make_g_alpha(s, p);
        AlphaFn lifted = AlphaFn::from_base(
            p, sample(UserClosure{[](double x, double) { return 0.5 * x * x + 0.2; }},
                      s, Side::Convex));
        WidthResult wg = mean_width_repr(g);
        WidthResult wl = mean_width_repr(lifted);  // lifted base => smaller mass
        CHECK(wl.value <= wg.value +
                              2.0 * (wg.quadrature_error_estimate +
                                     wl.quadrature_error_estimate));
    }
}

TEST_CASE("mean_width_limit: routes agree on G_alpha") {
    for (double beta : {2.5, 4.0, kInf}) {
        AlphaFn g = make_g_alpha(zoo_grid(), AlphaParam::from_beta(beta));
        WidthResult lim = mean_width_limit(g);
        WidthResult rep = mean_width_repr(g);
        CHECK(std::abs(lim.value - rep.value) / std::abs(rep.value) <= 1e-2);
        CHECK(lim.route == WidthResult::Route::Limit);
        REQUIRE(lim.epsilon_schedule.size() == 3);
        CHECK(lim.epsilon_schedule[0].first == 0.02);
        CHECK(lim.epsilon_schedule[2].first == 0.005);
    }
}

TEST_CASE("mean_width_limit: spike at the origin is the neutral element") {
    GridSpec s = zoo_grid();
    std::vector<double> spike(s.size(), 0.0);
    spike[s.size() / 2] = 1.0;
    AlphaFn f = AlphaFn::from_mass(AlphaParam::from_beta(3.0),
                                   GridFn(s, Side::Mass, spike));
    WidthResult w = mean_width_limit(f);
    CHECK(std::abs(w.value) <= 1e-3);
}

TEST_CASE("mean_width_limit: indicator against the gaussian moment") {
    AlphaParam p = AlphaParam::from_alpha(0.0);
    AlphaFn f = AlphaFn::from_mass(
        p, sample(Indicator{IndicatorBody::interval(-1.0, 1.0)}, zoo_grid(), Side::Mass));
    WidthResult w = mean_width_limit(f);
    CHECK(std::abs(w.value - 2.0) / 2.0 <= 1e-2);
}

TEST_CASE("mean_width_limit: schedule must decrease strictly") {
    AlphaFn g = make_g_alpha(zoo_grid(), AlphaParam::from_beta(3.0));
    const double bad[] = {0.01, 0.02};
    CHECK_THROWS_AS(mean_width_limit(g, bad), std::invalid_argument);
    const double empty[] = {0.0};
    CHECK_THROWS_AS(mean_width_limit(g, std::span<const double>(empty, 0)),
                    std::invalid_argument);
}

TEST_CASE("mean width in 2D: gaussian case hits n/2 times the mass") {
    GridSpec s = GridSpec::symmetric(2, 8.0, 257);
    AlphaFn g = make_g_alpha(s, AlphaParam::from_alpha(0.0));
    WidthResult rep = mean_width_repr(g);
    const double want = integral_g_alpha(2, kInf);  // (n/2) int G with n = 2
    CHECK(std::abs(rep.value - want) / want <= 1e-2);
    WidthResult lim = mean_width_limit(g);
    CHECK(std::abs(lim.value - rep.value) / std::abs(rep.value) <= 1e-2);
}

TEST_CASE("mean_width routes agree across the zoo") {
    for (double beta : {2.5, 4.0, kInf}) {
        AlphaParam p = AlphaParam::from_beta(beta);
        for (const auto& [name, fn] : standard_zoo(p, zoo_grid())) {
            INFO(name, " beta=", beta);
            WidthResult lim = mean_width_limit(fn);
            WidthResult rep = mean_width_repr(fn);
            CHECK(std::abs(lim.value - rep.value) / std::abs(rep.value) <= 1e-2);
        }
    }
}
