#include "fbfade/perf_metrics.hpp"

#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "fbfade/errors.hpp"
#include "fbfade/first_order.hpp"

namespace fbfade {

namespace {

constexpr double kRouteTol = 1e-12;
constexpr double kCancellationTol = 1e-10;

// M(-z) in real arithmetic for z >= 0, written out factor by factor:
//   (1 + 2 wx g z/K')^(-mu/2) (1 + 2 wy g z/K')^(-mu/2)
//   [1 + kappa g z/m (t/(K' + 2 wx g z) + (1-t)/(K' + 2 wy g z))]^(-m),   K' = mu(1+kappa).
// Multiplying the LoS fractions through by (1+eta) gives the familiar eta-form; this one also
// covers eta = inf.
double mgf_negative_explicit(const ShapeParams& p, double z) {
    const double k1 = p.mu * (1.0 + p.kappa);
    const double gz = p.gbar * z;
    const double wx = p.inphase_weight();
    const double wy = p.quadrature_weight();
    const double diffuse = std::pow(1.0 + 2.0 * wx * gz / k1, -0.5 * p.mu) * std::pow(1.0 + 2.0 * wy * gz / k1, -0.5 * p.mu);
    if (p.los_inert()) return diffuse;
    const double t = p.los_frac;
    const double los = p.mu * p.kappa * gz / p.m * (t / (k1 + 2.0 * wx * gz) + (1.0 - t) / (k1 + 2.0 * wy * gz));
    return diffuse * std::pow(1.0 + los, -p.m);
}

void check_route(double explicit_value, double route_value, const char* what) {
    const double scale = std::max(std::abs(route_value), std::numeric_limits<double>::min());
    if (std::abs(explicit_value - route_value) > kRouteTol * scale)
        throw NumericalError(std::string(what) + ": explicit form and MGF route disagree");
}

void check_m_ary(int M) {
    if (M < 2 || M > kMaxMAry) throw DomainError("M", "must lie in [2, " + std::to_string(kMaxMAry) + "]");
}

// Neumaier-compensated alternating sum of C(M-1, n)/(n+1) * value(n); rejects results whose
// cancellation leaves fewer than ten significant digits.
template <typename Term>
double alternating_sum(int M, Term&& value) {
    double sum = 0.0, comp = 0.0, magnitude = 0.0;
    for (int n = 1; n <= M - 1; ++n) {
        const double sign = n % 2 == 1 ? 1.0 : -1.0;
        const double term = sign * static_cast<double>(binomial(M - 1, n)) / (n + 1.0) * value(n);
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        magnitude += std::abs(term);
    }
    const double total = sum + comp;
    if (std::numeric_limits<double>::epsilon() * magnitude > kCancellationTol * std::abs(total))
        throw NumericalError("M-FSK alternating sum lost too many digits to cancellation (M = " + std::to_string(M) + ")");
    return total;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
    if (n < 0 || n > kMaxMAry || k < 0 || k > n) throw DomainError("binomial", "arguments out of range");
    // Pascal's triangle: every entry up to row 64 fits in 64 bits, and only additions are involved.
    static const auto table = [] {
        std::array<std::array<std::uint64_t, kMaxMAry + 1>, kMaxMAry + 1> t{};
        for (int r = 0; r <= kMaxMAry; ++r) {
            t[r][0] = t[r][r] = 1;
            for (int j = 1; j < r; ++j) t[r][j] = t[r - 1][j - 1] + t[r - 1][j];
        }
        return t;
    }();
    return table[n][k];
}

double sep_dbpsk_explicit(const ShapeParams& params) { return 0.5 * mgf_negative_explicit(validate(params), 1.0); }

double sep_dbpsk_via_mgf(const ShapeParams& params) { return 0.5 * mgf(params, -1.0).real(); }

double sep_dbpsk(const ShapeParams& params) {
    const double value = sep_dbpsk_explicit(params);
    check_route(value, sep_dbpsk_via_mgf(params), "DBPSK");
    return value;
}

double sep_mfsk_explicit(const ShapeParams& params, int M) {
    check_m_ary(M);
    const ShapeParams p = validate(params);
    return alternating_sum(M, [&](int n) { return mgf_negative_explicit(p, n / (n + 1.0)); });
}

double sep_mfsk_via_mgf(const ShapeParams& params, int M) {
    check_m_ary(M);
    return alternating_sum(M, [&](int n) { return mgf(params, -n / (n + 1.0)).real(); });
}

double sep_mfsk_noncoherent(const ShapeParams& params, int M) {
    check_m_ary(M);
    const ShapeParams p = validate(params);
    for (int n = 1; n <= M - 1; ++n) {
        const double z = n / (n + 1.0);
        check_route(mgf_negative_explicit(p, z), mgf(p, -z).real(), "M-FSK");
    }
    return sep_mfsk_explicit(p, M);
}

double awgn_sep_dbpsk(double gamma) { return 0.5 * std::exp(-gamma); }

double awgn_sep_mfsk_noncoherent(double gamma, int M) {
    check_m_ary(M);
    double sum = 0.0;
    for (int n = 1; n <= M - 1; ++n) {
        const double sign = n % 2 == 1 ? 1.0 : -1.0;
        sum += sign * static_cast<double>(binomial(M - 1, n)) / (n + 1.0) * std::exp(-n * gamma / (n + 1.0));
    }
    return sum;
}

std::vector<double> sep_curve(const ShapeParams& params, const SepQuery& query) {
    if (query.scheme == Scheme::NoncoherentMFSK) check_m_ary(query.m_ary);
    std::vector<double> out;
    out.reserve(query.gbar_grid.size());
    for (double g : query.gbar_grid) {
        if (!(g > 0.0)) throw DomainError("gbar_grid", "must be > 0");
        ShapeParams p = params;
        p.gbar = g;
        out.push_back(query.scheme == Scheme::DBPSK ? sep_dbpsk(p) : sep_mfsk_noncoherent(p, query.m_ary));
    }
    return out;
}

double sep_dbpsk_by_integration(const ShapeParams& params, const InversionConfig& cfg) {
    const ShapeParams p = validate(params);
    auto integrand = [&](double g) { return g > 0.0 ? awgn_sep_dbpsk(g) * pdf_snr(p, g, cfg) : 0.0; };
    const double upper = 60.0 + 50.0 * p.gbar;
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, upper, 15, 1e-11, &error);
}

}  // namespace fbfade
