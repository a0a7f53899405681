#include "fbfade/second_order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fbfade/errors.hpp"
#include "fbfade/first_order.hpp"
#include "fbfade/quadrature.hpp"
#include "fbfade/special_functions.hpp"

namespace fbfade {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct LcrTerms {
    double log_prefactor;  // everything outside the integral
    double half_mu;        // mu/2
    double eta;
    double decay;          // coefficient of x in the exponent
    double kummer_rate;    // A u^2
    double m;
};

LcrTerms lcr_terms(const ShapeParams& p, double u, const DopplerContext& ctx) {
    const double mu = p.mu;
    const double eta = p.eta;
    const double kappa = p.kappa;
    const double m = p.m;
    const double K = mu * (1.0 + eta) * (1.0 + kappa);
    const double los = mu * kappa * (1.0 + eta) / (2.0 * eta) + m;
    const double u2 = u * u;

    LcrTerms t;
    t.log_prefactor = m * std::log(m) + (mu - 0.5) * std::log(K) + 0.5 * std::log(ctx.rho_dd0) -
                      (mu - 1.0) * std::numbers::ln2 - 2.0 * log_gamma(0.5 * mu) - 0.5 * mu * std::log(eta) -
                      m * std::log(los) - 0.5 * std::log(2.0 * std::numbers::pi) + (2.0 * mu - 1.0) * std::log(u) -
                      0.5 * K * u2;
    t.half_mu = 0.5 * mu;
    t.eta = eta;
    t.decay = -mu * (1.0 - eta * eta) * (1.0 + kappa) * u2 / (2.0 * eta);
    t.kummer_rate = kappa * mu * mu * (1.0 + eta) * (1.0 + eta) * (1.0 + kappa) / (4.0 * eta * eta) / los * u2;
    t.m = m;
    return t;
}

// Log of the integrand without the endpoint factors (x(1-x))^(mu/2-1).
double log_smooth_part(const LcrTerms& t, double x) {
    return 0.5 * std::log1p((t.eta - 1.0) * x) + t.decay * x + log_kummer_1f1(t.m, t.half_mu, t.kummer_rate * x);
}

double log_sum_exp(const std::vector<double>& v) {
    const double top = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(top)) return top;
    double acc = 0.0;
    for (double x : v) acc += std::exp(x - top);
    return top + std::log(acc);
}

double log_integral(const LcrTerms& t, QuadScheme scheme, int points) {
    const double e = t.half_mu - 1.0;
    std::vector<double> terms;
    terms.reserve(points);
    if (scheme == QuadScheme::TanhSinh) {
        const UnitRule rule = tanh_sinh_rule(points, std::min(e, 0.0));
        for (int i = 0; i < points; ++i) {
            const double x = rule.x[i];
            const double xc = rule.complement[i];
            if (!(x > 0.0) || !(xc > 0.0) || !(rule.w[i] > 0.0)) continue;
            terms.push_back(std::log(rule.w[i]) + e * (std::log(x) + std::log(xc)) + log_smooth_part(t, x));
        }
    } else {
        const UnitRule rule = gauss_jacobi_rule(points, e, e);
        for (int i = 0; i < points; ++i) terms.push_back(std::log(rule.w[i]) + log_smooth_part(t, rule.x[i]));
    }
    if (terms.empty()) return kNegInf;
    return log_sum_exp(terms);
}

}  // namespace

DopplerContext DopplerContext::clarke(double fd) {
    DopplerContext ctx;
    ctx.fd = fd;
    ctx.rho_dd0 = 2.0 * std::numbers::pi * std::numbers::pi * fd * fd;
    validate(ctx);
    return ctx;
}

void validate(const DopplerContext& ctx) {
    if (!(ctx.fd > 0.0) || !std::isfinite(ctx.fd)) throw DomainError("fd", "must be finite and > 0");
    if (!(ctx.rho_dd0 > 0.0) || !std::isfinite(ctx.rho_dd0)) throw DomainError("rho_dd0", "must be finite and > 0");
}

double lcr(const ShapeParams& params, double u, const DopplerContext& ctx, const LcrConfig& cfg) {
    const ShapeParams p = validate(params);
    validate(ctx);
    if (p.los_frac != 1.0 && !p.los_inert())
        throw DomainError("los_frac", "the closed-form LCR needs all LoS power in phase (rho = inf)");
    if (!(p.eta > 0.0) || !std::isfinite(p.eta)) throw DomainError("eta", "must be finite and > 0");
    if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("u", "must be finite and > 0");
    if (cfg.quad_points < 16) throw DomainError("quad_points", "must be >= 16");
    if (!(cfg.rel_tol > 0.0)) throw DomainError("rel_tol", "must be > 0");

    const LcrTerms terms = lcr_terms(p, u, ctx);
    const double coarse = log_integral(terms, cfg.quad_scheme, cfg.quad_points);
    const double fine = log_integral(terms, cfg.quad_scheme, 2 * cfg.quad_points);
    if (!std::isfinite(fine)) return 0.0;
    // Values agree to rel_tol when their logs agree to about rel_tol.
    if (std::abs(std::expm1(coarse - fine)) > cfg.rel_tol)
        throw ConvergenceError("LCR quadrature: " + std::to_string(cfg.quad_points) + " and " +
                               std::to_string(2 * cfg.quad_points) + " points differ by " +
                               std::to_string(std::abs(std::expm1(coarse - fine))));
    return std::exp(terms.log_prefactor + fine);
}

AfdResult afd(const ShapeParams& params, double u, const DopplerContext& ctx, const LcrConfig& cfg,
              const InversionConfig& inv) {
    AfdResult out;
    out.lcr = lcr(params, u, ctx, cfg);
    out.cdf = cdf_envelope(params, u, 1.0, inv);
    if (!(out.lcr > std::numeric_limits<double>::min())) {
        out.underflow = true;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.value = out.cdf / out.lcr;
    return out;
}

}  // namespace fbfade
