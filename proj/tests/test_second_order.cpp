#include <doctest.h>

#include <cmath>

#include "fbfade/errors.hpp"
#include "fbfade/first_order.hpp"
#include "fbfade/second_order.hpp"
#include "oracles.hpp"

using namespace fbfade;

namespace {
const ShapeParams kNearRayleigh{1.0, 1e-8, 1.0, 1.0, 1.0, 1.0};
const ShapeParams kSetC{1.0, 5.0, 2.0, 1.0, 0.5, 1.0};
}  // namespace

TEST_CASE("Clarke Doppler context") {
    const auto ctx = DopplerContext::clarke(10.0);
    CHECK(ctx.rho_dd0 == doctest::Approx(2.0 * M_PI * M_PI * 100.0));
    CHECK_THROWS_AS(validate(DopplerContext{0.0, 1.0}), DomainError);
}

TEST_CASE("lcr reduces to the Rayleigh formula") {
    for (double fd : {1.0, 37.0}) {
        const auto ctx = DopplerContext::clarke(fd);
        for (int i = 0; i < 40; ++i) {
            const double u = 0.05 + (3.0 - 0.05) * i / 39.0;
            CHECK(oracle::rel_err(lcr(kNearRayleigh, u, ctx), oracle::rayleigh_lcr(u, fd)) < 1e-4);
            CHECK(oracle::rel_err(afd(kNearRayleigh, u, ctx).value, oracle::rayleigh_afd(u, fd)) < 1e-4);
        }
    }
}

TEST_CASE("lcr vanishes at both ends") {
    const auto ctx = DopplerContext::clarke(1.0);
    CHECK(lcr(kSetC, 1e-6, ctx) < 1e-12);
    CHECK(lcr(kSetC, 8.0, ctx) < 1e-12);
    CHECK(lcr(kSetC, 1e-6, ctx) >= 0.0);
}

TEST_CASE("both quadrature schemes agree") {
    const auto ctx = DopplerContext::clarke(1.0);
    LcrConfig gj;
    gj.quad_scheme = QuadScheme::GaussJacobi;
    for (const ShapeParams& p : {kSetC, ShapeParams{1.0, 10.0, 3.0, 2.0, 0.04, 1.0}, ShapeParams{1.0, 1.0, 1.0, 1.0, 1.4, 1.0}}) {
        for (double db : {-30.0, -10.0, 0.0, 5.0}) {
            const double u = std::pow(10.0, db / 20.0);
            CHECK(oracle::rel_err(lcr(p, u, ctx, gj), lcr(p, u, ctx)) < 1e-7);
        }
    }
}

TEST_CASE("lcr reference values for a shadowed set") {
    // Independent high-precision evaluation of the crossing-rate integral.
    const auto ctx = DopplerContext::clarke(1.0);
    const std::pair<double, double> table[] = {{-30.0, 2.29e-4}, {-20.0, 0.00692}, {0.0, 0.261}, {5.0, 0.0393}};
    for (const auto& [db, ref] : table) CHECK(oracle::rel_err(lcr(kSetC, std::pow(10.0, db / 20.0), ctx), ref) < 5e-3);
}

TEST_CASE("afd is the CDF over the crossing rate") {
    const auto ctx = DopplerContext::clarke(2.0);
    for (double db : {-25.0, -10.0, 0.0, 3.0}) {
        const double u = std::pow(10.0, db / 20.0);
        const AfdResult a = afd(kSetC, u, ctx);
        CHECK(std::abs(a.value * a.lcr - a.cdf) <= 1e-12 * a.cdf);
        CHECK(oracle::rel_err(a.cdf, cdf_envelope(kSetC, u, 1.0)) < 1e-14);
        CHECK_FALSE(a.underflow);
    }
}

TEST_CASE("lcr domain errors") {
    const auto ctx = DopplerContext::clarke(1.0);
    ShapeParams p = kSetC;
    p.los_frac = 0.5;
    CHECK_THROWS_AS(lcr(p, 1.0, ctx), DomainError);
    p.kappa = 0.0;
    CHECK_NOTHROW(lcr(p, 1.0, ctx));
    ShapeParams inf = kSetC;
    inf.eta = INFINITY;
    CHECK_THROWS_AS(lcr(inf, 1.0, ctx), DomainError);
    CHECK_THROWS_AS(lcr(kSetC, 0.0, ctx), DomainError);
}

TEST_CASE("lcr shape on a log grid (informational)") {
    const auto ctx = DopplerContext::clarke(1.0);
    for (const ShapeParams& p : {kSetC, ShapeParams{1.0, 10.0, 1.0, 1.0, 0.1, 1.0}}) {
        int sign_changes = 0;
        double prev = lcr(p, std::pow(10.0, -40.0 / 20.0), ctx), prev_d = 0.0;
        for (int i = 1; i <= 120; ++i) {
            const double cur = lcr(p, std::pow(10.0, (-40.0 + 0.4 * i) / 20.0), ctx);
            const double d = cur - prev;
            if (i > 1 && (d > 0) != (prev_d > 0)) ++sign_changes;
            prev = cur;
            prev_d = d;
        }
        MESSAGE("sign changes of the discrete derivative: " << sign_changes);
        CHECK(prev >= 0.0);
    }
}
