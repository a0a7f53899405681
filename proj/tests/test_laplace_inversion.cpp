#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fbfade/errors.hpp"
#include "fbfade/laplace_inversion.hpp"
#include "oracles.hpp"

using namespace fbfade;
using cplx = std::complex<double>;

TEST_CASE("invert: elementary transform pairs") {
    CHECK(std::abs(invert([](cplx s) { return 1.0 / s; }, 3.0) - 1.0) < 1e-10);
    CHECK(oracle::rel_err(invert([](cplx s) { return 1.0 / (s + 1.0); }, 2.0), std::exp(-2.0)) < 1e-10);
    CHECK(oracle::rel_err(invert([](cplx s) { return 1.0 / (s * s + 1.0); }, 1.5), std::sin(1.5)) < 1e-9);
}

TEST_CASE("invert: branch-point image against a contour-integral oracle") {
    const auto F = [](cplx s) { return std::pow(1.0 + s, -1.5); };
    const double ref = oracle::bromwich_parabolic(F, 1.0);
    CHECK(oracle::rel_err(ref, 2.0 * std::exp(-1.0) / std::sqrt(std::numbers::pi)) < 1e-13);
    CHECK(oracle::rel_err(invert(F, 1.0), ref) < 1e-10);
    // Euler summation controls the absolute error, here relative to max f = f(1/2) ~ 0.48.
    for (double t : {0.05, 0.4, 3.0, 12.0}) {
        INFO("t = " << t);
        CHECK(std::abs(invert(F, t) - oracle::bromwich_parabolic(F, t)) < 1e-10);
    }
}

TEST_CASE("invert: argument checks") {
    const auto F = [](cplx s) { return 1.0 / s; };
    CHECK_THROWS_AS(invert(F, 0.0), DomainError);
    CHECK_THROWS_AS(invert(F, -1.0), DomainError);
    InversionConfig bad;
    bad.euler_m = 0;
    CHECK_THROWS_AS(invert(F, 1.0, bad), DomainError);
}

TEST_CASE("invert: a non-finite image is reported, not returned") {
    const auto F = [](cplx) { return cplx(std::nan(""), 0.0); };
    CHECK_THROWS_AS(invert(F, 1.0), NumericalError);
}

TEST_CASE("invert: more precision_decimals moves the contour but keeps the value") {
    const auto F = [](cplx s) { return 1.0 / ((s + 1.0) * (s + 2.0)); };
    InversionConfig hi;
    hi.precision_decimals = 14;
    const double ref = std::exp(-1.0) - std::exp(-2.0);
    CHECK(oracle::rel_err(invert(F, 1.0), ref) < 1e-10);
    CHECK(oracle::rel_err(invert(F, 1.0, hi), ref) < 1e-10);
}
