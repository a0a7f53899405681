#pragma once

namespace fbfade {

/// ln Gamma(x) for x > 0. Lanczos (g = 7) away from the zeros at 1 and 2; Taylor series in
/// zeta values near them so the result keeps full relative accuracy. Throws DomainError for x <= 0.
double log_gamma(double x);

struct Kummer1F1Config {
    int series_max_terms = 500;
    double series_tol = 1e-13;
    double asymptotic_threshold = 50.0;  ///< z* above which the large-z expansion is tried first
    int asymptotic_terms = 12;
};

/// Confluent hypergeometric 1F1(a; b; z) for b > 0 and z >= 0.
/// Taylor series with compensated summation for z <= z*, large-z expansion
/// e^z z^(a-b) Gamma(b)/Gamma(a) sum_k (b-a)_k (1-a)_k / (k! z^k) above it; the series is
/// the fallback when the expansion has not settled within its term budget.
double kummer_1f1(double a, double b, double z, const Kummer1F1Config& cfg = {});

/// ln 1F1(a; b; z) for a > 0, b > 0, z >= 0. Does not overflow for large z.
double log_kummer_1f1(double a, double b, double z, const Kummer1F1Config& cfg = {});

/// Modified Bessel function of the first kind I_nu(z), nu >= 0, z >= 0.
double bessel_i(double nu, double z);

}  // namespace fbfade
