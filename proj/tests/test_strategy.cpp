#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "asianpde/errors.hpp"
#include "asianpde/strategy.hpp"
#include "oracles.hpp"

using namespace asianpde;

namespace {

MarketSpec flat_market(double rate, double nu, double rho, double T = 1.0) {
    MarketSpec m;
    m.rate = rate;
    m.maturity = T;
    m.dividend_density = PiecewiseConstant::constant(nu, T);
    m.weighting_density = PiecewiseConstant::constant(rho, T);
    return m;
}

MarketSpec piecewise_market() {
    MarketSpec m;
    m.rate = 0.03;
    m.maturity = 2.0;
    m.dividend_density = PiecewiseConstant({{0.0, 0.01}, {1.0, 0.02}}, 2.0);
    m.weighting_density = PiecewiseConstant({{0.0, 1.0}, {0.5, 2.0}, {1.5, 0.5}}, 2.0);
    return m;
}

}  // namespace

TEST_CASE("piecewise constant density") {
    const PiecewiseConstant d({{0.0, 1.0}, {0.5, 3.0}}, 2.0);
    CHECK(d(0.25) == 1.0);
    CHECK(d(0.5) == 3.0);
    CHECK(d(2.0) == 3.0);
    CHECK(d.integral(0.0, 2.0) == doctest::Approx(0.5 + 4.5).epsilon(1e-15));
    CHECK(d.integral(0.25, 1.0) == doctest::Approx(0.25 + 1.5).epsilon(1e-15));
    CHECK(d.min_value() == 1.0);
    CHECK(d.max_value() == 3.0);
    CHECK(d.scaled(2.0)(1.0) == 6.0);
    CHECK_THROWS_AS(PiecewiseConstant({{0.1, 1.0}}, 1.0), ConfigError);
    CHECK_THROWS_AS(PiecewiseConstant({{0.0, 1.0}, {0.0, 2.0}}, 1.0), ConfigError);
    CHECK_THROWS_AS(PiecewiseConstant({{0.0, 1.0}, {1.0, 2.0}}, 1.0), ConfigError);
}

TEST_CASE("reference market gives b(t) = 1 - t at every knot") {
    const auto drift = build_drift(MarketSpec::reference());
    for (std::size_t i = 0; i < drift.knots().size(); ++i)
        CHECK(drift.values()[i] == doctest::Approx(1.0 - drift.knots()[i]).epsilon(1e-15));
    CHECK(drift.m1() == 1.0);
    CHECK(drift.m2() == 1.0);
    CHECK(drift.ell() == 1.0);
}

TEST_CASE("positive rate matches closed form and quadrature oracle") {
    const double r = 0.05;
    const auto drift = build_drift(flat_market(r, 0.0, 1.0));
    for (std::size_t i = 0; i < drift.knots().size(); i += 32) {
        const double t = drift.knots()[i];
        const double closed = (1.0 - std::exp(-r * (1.0 - t))) / r;
        const double quad = oracle::drift_by_quadrature(r, 0.0, 1.0, 1.0, t);
        CHECK(std::fabs(drift.values()[i] - quad) <= 1e-10);
        CHECK(std::fabs(drift.values()[i] - closed) <= 1e-12);
    }
}

TEST_CASE("dividends and rate together match the quadrature oracle") {
    const auto drift = build_drift(flat_market(0.04, 0.1, 1.5, 3.0), 257);
    for (std::size_t i = 0; i < drift.knots().size(); i += 16) {
        const double t = drift.knots()[i];
        CHECK(std::fabs(drift.values()[i] - oracle::drift_by_quadrature(0.04, 0.1, 1.5, 3.0, t)) <= 1e-10);
    }
}

TEST_CASE("b(T) = 0 exactly and b is nonincreasing") {
    for (const auto& m : {MarketSpec::reference(), flat_market(0.05, 0.02, 2.0, 3.0), piecewise_market()}) {
        const auto drift = build_drift(m);
        CHECK(drift.values().back() == 0.0);
        CHECK(eval_drift(drift, m.maturity) == 0.0);
        CHECK(drift.ell() > 0.0);
        for (std::size_t i = 1; i < drift.values().size(); ++i) CHECK(drift.values()[i] <= drift.values()[i - 1]);
    }
}

TEST_CASE("slope bounds") {
    SUBCASE("reference") {
        const auto [m1, m2] = slope_bounds(MarketSpec::reference());
        CHECK(m1 == 1.0);
        CHECK(m2 == 1.0);
    }
    SUBCASE("rate 0.05") {
        const auto [m1, m2] = slope_bounds(flat_market(0.05, 0.0, 1.0));
        CHECK(m1 == doctest::Approx(std::exp(-0.05)).epsilon(1e-15));
        CHECK(m2 == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("scaling rho scales both bounds") {
        const auto base = piecewise_market();
        auto scaled = base;
        scaled.weighting_density = base.weighting_density.scaled(2.5);
        const auto [a1, a2] = slope_bounds(base);
        const auto [b1, b2] = slope_bounds(scaled);
        CHECK(b1 == doctest::Approx(2.5 * a1).epsilon(1e-14));
        CHECK(b2 == doctest::Approx(2.5 * a2).epsilon(1e-14));
    }
    SUBCASE("knot slopes lie inside [-m2, -m1]") {
        for (const auto& m : {flat_market(0.05, 0.0, 1.0), flat_market(0.02, 0.07, 0.8, 2.0), piecewise_market()}) {
            const auto drift = build_drift(m);
            const auto& k = drift.knots();
            const auto& v = drift.values();
            for (std::size_t i = 1; i < k.size(); ++i) {
                const double slope = (v[i] - v[i - 1]) / (k[i] - k[i - 1]);
                CHECK(slope >= -drift.m2() * (1 + 1e-9));
                CHECK(slope <= -drift.m1() * (1 - 1e-9));
            }
        }
    }
    SUBCASE("analytic slope matches a centred difference of the closed form") {
        const auto m = piecewise_market();
        for (double t : {0.2, 0.7, 1.2, 1.8}) {
            const double h = 1e-5;
            const double fd = -(drift_value(m, t + h) - drift_value(m, t - h)) / (2 * h);
            CHECK(drift_neg_slope(m, t) == doctest::Approx(fd).epsilon(1e-8));
        }
    }
}

TEST_CASE("eval_drift interpolation") {
    const auto drift = build_drift(flat_market(0.05, 0.0, 1.0), 65);
    const auto& k = drift.knots();
    const auto& v = drift.values();
    CHECK(eval_drift(drift, k[10]) == v[10]);
    CHECK(eval_drift(drift, 0.5 * (k[10] + k[11])) == doctest::Approx(0.5 * (v[10] + v[11])).epsilon(1e-15));
    CHECK(eval_drift(drift, 1.0) == 0.0);
    CHECK_THROWS_AS(eval_drift(drift, -0.1), ConfigError);
    CHECK_THROWS_AS(eval_drift(drift, 1.1), ConfigError);
}

TEST_CASE("refining knots shrinks interpolation error quadratically") {
    const auto m = flat_market(0.8, 0.0, 1.0);
    const double t = 0.3 + 1.0 / 257.0;
    const double exact = drift_value(m, t);
    const double e1 = std::fabs(eval_drift(build_drift(m, 33), t) - exact);
    const double e2 = std::fabs(eval_drift(build_drift(m, 65), t) - exact);
    const double e3 = std::fabs(eval_drift(build_drift(m, 129), t) - exact);
    const double h1 = 1.0 / 32;
    CHECK(e1 <= 0.8 * 0.8 * h1 * h1);
    CHECK(e2 <= 0.8 * 0.8 * h1 * h1 / 4);
    CHECK(e3 <= 0.8 * 0.8 * h1 * h1 / 16);
}

TEST_CASE("market validation") {
    CHECK_THROWS_AS(build_drift(MarketSpec::reference(), 1), ConfigError);
    auto bad_rho = MarketSpec::reference();
    bad_rho.weighting_density = PiecewiseConstant({{0.0, 1.0}, {0.5, 0.0}}, 1.0);
    CHECK_THROWS_AS(build_drift(bad_rho), ConfigError);
    auto neg_rho = MarketSpec::reference();
    neg_rho.weighting_density = PiecewiseConstant::constant(-1.0, 1.0);
    CHECK_THROWS_AS(build_drift(neg_rho), ConfigError);
    auto strike = MarketSpec::reference();
    strike.strike = 0.5;
    CHECK_THROWS_AS(build_drift(strike), ConfigError);
    auto neg_rate = MarketSpec::reference();
    neg_rate.rate = -0.01;
    CHECK_THROWS_AS(build_drift(neg_rate), ConfigError);
    auto horizon = MarketSpec::reference();
    horizon.weighting_density = PiecewiseConstant::constant(1.0, 2.0);
    CHECK_THROWS_AS(build_drift(horizon), ConfigError);
    auto neg_div = MarketSpec::reference();
    neg_div.dividend_density = PiecewiseConstant::constant(-0.1, 1.0);
    CHECK_THROWS_AS(build_drift(neg_div), ConfigError);
}

TEST_CASE("drift id depends on the market") {
    const auto a = build_drift(MarketSpec::reference());
    const auto b = build_drift(MarketSpec::reference());
    const auto c = build_drift(flat_market(0.05, 0.0, 1.0));
    CHECK(a.id() == b.id());
    CHECK(a.id() != c.id());
}
