#include "fbfade/laplace_inversion.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fbfade/errors.hpp"

namespace fbfade {

void validate(const InversionConfig& cfg) {
    if (cfg.euler_m < 1) throw DomainError("euler_m", "must be >= 1");
    if (cfg.euler_n < cfg.euler_m) throw DomainError("euler_n", "must be >= euler_m");
    if (!(cfg.precision_decimals >= 4.0 && cfg.precision_decimals <= 15.0))
        throw DomainError("precision_decimals", "must lie in [4, 15]");
    if (!(cfg.max_arg > 0.0)) throw DomainError("max_arg", "must be > 0");
}

double invert(const LaplaceImage& image, double t, const InversionConfig& cfg) {
    validate(cfg);
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t", "must be finite and > 0");

    const double A = cfg.precision_decimals * std::numbers::ln10;
    const double a = A / (2.0 * t);
    if (a > cfg.max_arg) throw DomainError("t", "contour abscissa exceeds max_arg");
    const double scale = std::exp(0.5 * A) / t;

    const int total = cfg.euler_n + cfg.euler_m + 1;
    // partial[k] = s_k, the alternating series truncated after term k.
    std::vector<double> partial(total + 1);
    double sum = 0.0;
    for (int k = 0; k <= total; ++k) {
        const std::complex<double> s(a, k * std::numbers::pi / t);
        const std::complex<double> F = image(s);
        if (!std::isfinite(F.real()) || !std::isfinite(F.imag()))
            throw NumericalError("Laplace image is not finite at s = " + std::to_string(s.real()) + " + " +
                                 std::to_string(s.imag()) + "i");
        const double term = (k == 0 ? 0.5 : (k % 2 == 0 ? 1.0 : -1.0)) * F.real();
        sum += term;
        partial[k] = scale * sum;
    }

    // Euler average of s_n .. s_{n+m} with binomial weights 2^-m C(m, j).
    auto euler = [&](int n) {
        double binom = 1.0;
        double acc = 0.0;
        for (int j = 0; j <= cfg.euler_m; ++j) {
            acc += binom * partial[n + j];
            binom = binom * (cfg.euler_m - j) / (j + 1.0);
        }
        return std::ldexp(acc, -cfg.euler_m);
    };
    const double e0 = euler(cfg.euler_n);
    const double e1 = euler(cfg.euler_n + 1);
    if (!std::isfinite(e0) || !std::isfinite(e1)) throw NumericalError("Euler summation overflowed");

    const double tol = std::pow(10.0, -cfg.precision_decimals + 4.0) * std::max(1.0, std::abs(e0));
    if (std::abs(e1 - e0) > tol)
        throw NumericalError("Euler summation has not settled: consecutive averages differ by " +
                             std::to_string(std::abs(e1 - e0)));
    return e1;
}

}  // namespace fbfade
