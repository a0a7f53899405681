#include "fbfade/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fbfade/errors.hpp"

namespace fbfade {

namespace {

// zeta(2) .. zeta(30)
constexpr std::array<double, 29> kZeta{
    1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915, 1.0369277551433699263,
    1.0173430619844491397, 1.0083492773819228268, 1.0040773561979443394, 1.0020083928260822144,
    1.0009945751278180853, 1.0004941886041194646, 1.0002460865533080483, 1.0001227133475784891,
    1.0000612481350587048, 1.0000305882363070205, 1.0000152822594086519, 1.0000076371976378998,
    1.0000038172932649998, 1.0000019082127165539, 1.0000009539620338728, 1.0000004769329867878,
    1.0000002384505027277, 1.0000001192199259653, 1.0000000596081890513, 1.0000000298035035147,
    1.0000000149015548284, 1.0000000074507117898, 1.0000000037253340248, 1.0000000018626597235,
    1.0000000009313274324};

constexpr std::array<double, 9> kLanczos{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// ln Gamma(1 + e) for |e| <= 0.2
double log_gamma_1p_series(double e) {
    double sum = 0.0;
    double power = -e;
    for (std::size_t k = 2; k < kZeta.size() + 2; ++k) {
        power *= -e;
        sum += kZeta[k - 2] * power / static_cast<double>(k);
    }
    return -std::numbers::egamma * e + sum;
}

double log_gamma_lanczos(double x) {
    x -= 1.0;
    double a = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (x + static_cast<double>(i));
    const double t = x + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

// Neumaier variant of Kahan summation; robust when a term exceeds the running sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
    void scale(double f) {
        sum *= f;
        comp *= f;
    }
};

struct LogScaled {
    double log_abs = 0.0;
    double sign = 1.0;
    bool ok = false;
};

constexpr double kRescale = 1e250;
const double kLogRescale = std::log(kRescale);

// Taylor series of 1F1 with running rescaling so that huge z cannot overflow.
LogScaled kummer_series(double a, double b, double z, const Kummer1F1Config& cfg) {
    CompensatedSum acc;
    acc.add(1.0);
    double term = 1.0;
    double log_scale = 0.0;
    LogScaled out;
    for (int k = 0; k < cfg.series_max_terms; ++k) {
        const double ratio = (a + k) * z / ((b + k) * (k + 1.0));
        term *= ratio;
        acc.add(term);
        if (std::abs(acc.sum) > kRescale) {
            acc.scale(1.0 / kRescale);
            term /= kRescale;
            log_scale += kLogRescale;
        }
        if (term == 0.0) {
            out.ok = true;
            break;
        }
        const double next = std::abs((a + k + 1) * z / ((b + k + 1) * (k + 2.0)));
        if (next < 1.0) {
            const double tail = std::abs(term) * next / (1.0 - next);
            if (tail <= cfg.series_tol * std::abs(acc.value())) {
                out.ok = true;
                break;
            }
        }
    }
    const double v = acc.value();
    if (v == 0.0) {
        out.log_abs = -std::numeric_limits<double>::infinity();
        out.sign = 1.0;
        return out;
    }
    out.sign = v < 0.0 ? -1.0 : 1.0;
    out.log_abs = log_scale + std::log(std::abs(v));
    return out;
}

// Leading large-z expansion; valid for a > 0 (the e^{-z}-suppressed branch is dropped).
LogScaled kummer_asymptotic(double a, double b, double z, const Kummer1F1Config& cfg) {
    LogScaled out;
    if (!(a > 0.0)) return out;
    double term = 1.0;
    double sum = 1.0;
    bool settled = false;
    for (int k = 0; k < cfg.asymptotic_terms; ++k) {
        term *= (b - a + k) * (1.0 - a + k) / ((k + 1.0) * z);
        sum += term;
        if (term == 0.0 || std::abs(term) <= 1e-11 * std::abs(sum)) {
            settled = true;
            break;
        }
    }
    if (!settled || !(sum > 0.0)) return out;
    out.log_abs = z + (a - b) * std::log(z) + log_gamma(b) - log_gamma(a) + std::log(sum);
    out.ok = true;
    return out;
}

LogScaled kummer_dispatch(double a, double b, double z, const Kummer1F1Config& cfg) {
    if (!(b > 0.0)) throw DomainError("b", "1F1 requires b > 0");
    if (!(z >= 0.0)) throw DomainError("z", "1F1 is implemented for z >= 0");
    if (cfg.series_max_terms < 1 || !(cfg.series_tol > 0.0) || !(cfg.asymptotic_threshold > 0.0))
        throw DomainError("Kummer1F1Config", "invalid configuration");
    if (z == 0.0) return {0.0, 1.0, true};

    if (z > cfg.asymptotic_threshold) {
        if (auto r = kummer_asymptotic(a, b, z, cfg); r.ok) return r;
        if (auto r = kummer_series(a, b, z, cfg); r.ok) return r;
    } else {
        if (auto r = kummer_series(a, b, z, cfg); r.ok) return r;
        if (auto r = kummer_asymptotic(a, b, z, cfg); r.ok) return r;
    }
    throw ConvergenceError("1F1(" + std::to_string(a) + "; " + std::to_string(b) + "; " + std::to_string(z) +
                           ") did not converge within the term budgets");
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("x", "log_gamma requires x > 0");
    if (std::isinf(x)) return x;
    if (std::abs(x - 1.0) <= 0.2) return log_gamma_1p_series(x - 1.0);
    if (std::abs(x - 2.0) <= 0.2) {
        const double e = x - 2.0;
        return std::log1p(e) + log_gamma_1p_series(e);
    }
    if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
    return log_gamma_lanczos(x);
}

double kummer_1f1(double a, double b, double z, const Kummer1F1Config& cfg) {
    const LogScaled r = kummer_dispatch(a, b, z, cfg);
    return r.sign * std::exp(r.log_abs);
}

double log_kummer_1f1(double a, double b, double z, const Kummer1F1Config& cfg) {
    if (!(a > 0.0)) throw DomainError("a", "log_kummer_1f1 requires a > 0");
    return kummer_dispatch(a, b, z, cfg).log_abs;
}

double bessel_i(double nu, double z) {
    if (!(nu >= 0.0)) throw DomainError("nu", "bessel_i requires nu >= 0");
    if (!(z >= 0.0)) throw DomainError("z", "bessel_i requires z >= 0");
    if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;

    const double mu4 = 4.0 * nu * nu;
    if (z > 40.0 && z > mu4) {
        double term = 1.0;
        double sum = 1.0;
        bool settled = false;
        for (int k = 1; k <= 40; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double next = -term * (mu4 - odd * odd) / (8.0 * k * z);
            if (std::abs(next) > std::abs(term)) break;
            term = next;
            sum += term;
            if (std::abs(term) <= 1e-15 * std::abs(sum)) {
                settled = true;
                break;
            }
        }
        if (settled) return std::exp(z - 0.5 * std::log(2.0 * std::numbers::pi * z)) * sum;
    }

    // Power series, all terms positive; rescaled like the 1F1 series.
    const double q = 0.25 * z * z;
    double term = 1.0;
    CompensatedSum acc;
    acc.add(1.0);
    double log_scale = 0.0;
    constexpr int kMaxTerms = 200000;
    bool settled = false;
    for (int k = 1; k <= kMaxTerms; ++k) {
        term *= q / (k * (nu + k));
        acc.add(term);
        if (acc.sum > kRescale) {
            acc.scale(1.0 / kRescale);
            term /= kRescale;
            log_scale += kLogRescale;
        }
        if (q < (k + 1.0) * (nu + k + 1.0) && term <= 1e-17 * acc.value()) {
            settled = true;
            break;
        }
    }
    if (!settled) throw ConvergenceError("bessel_i: power series did not converge");
    const double log_pre = nu * std::log(0.5 * z) - log_gamma(nu + 1.0);
    return std::exp(log_pre + log_scale + std::log(acc.value()));
}

}  // namespace fbfade
