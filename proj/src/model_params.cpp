#include "fbfade/model_params.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "fbfade/errors.hpp"

namespace fbfade {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RootPair {
    std::complex<double> first;
    std::complex<double> second;
};

// Roots of a*y^2 + b*y + 1. The larger-magnitude root comes from the cancellation-free
// combination; the other follows from the product 1/a.
RootPair unit_quadratic_roots(double a, double b) {
    if (a == 0.0) {
        if (b == 0.0) return {{kInf, 0.0}, {kInf, 0.0}};
        return {{-1.0 / b, 0.0}, {kInf, 0.0}};
    }
    const double disc = b * b - 4.0 * a;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double qq = -0.5 * (b + (b >= 0.0 ? sq : -sq));
        return {{qq / a, 0.0}, {1.0 / qq, 0.0}};
    }
    const double re = -b / (2.0 * a);
    const double im = std::abs(std::sqrt(-disc) / (2.0 * a));
    return {{re, im}, {re, -im}};
}

double require(const std::optional<double>& v, const char* name) {
    if (!v) throw DomainError(name, "required by this legacy model");
    return *v;
}

double require_positive(const std::optional<double>& v, const char* name) {
    const double x = require(v, name);
    if (!(x > 0.0)) throw DomainError(name, "must be > 0");
    return x;
}

double require_nonnegative(const std::optional<double>& v, const char* name) {
    const double x = require(v, name);
    if (!(x >= 0.0)) throw DomainError(name, "must be >= 0");
    return x;
}

constexpr std::array<std::pair<LegacyModel, std::string_view>, 12> kModelNames{{
    {LegacyModel::OneSidedGaussian, "one-sided-gaussian"},
    {LegacyModel::Rayleigh, "rayleigh"},
    {LegacyModel::NakagamiM, "nakagami-m"},
    {LegacyModel::Hoyt, "hoyt"},
    {LegacyModel::EtaMu, "eta-mu"},
    {LegacyModel::Rice, "rice"},
    {LegacyModel::EtaKappaSym, "eta-kappa-sym"},
    {LegacyModel::EtaKappaAsym, "eta-kappa-asym"},
    {LegacyModel::Beckmann, "beckmann"},
    {LegacyModel::KappaMu, "kappa-mu"},
    {LegacyModel::RicianShadowed, "rician-shadowed"},
    {LegacyModel::KappaMuShadowed, "kappa-mu-shadowed"},
}};

}  // namespace

double ShapeParams::rho() const {
    if (los_frac >= 1.0) return kInf;
    return std::sqrt(los_frac / (1.0 - los_frac));
}

double ShapeParams::inphase_weight() const {
    if (std::isinf(eta)) return 1.0;
    return eta / (1.0 + eta);
}

double ShapeParams::quadrature_weight() const {
    if (std::isinf(eta)) return 0.0;
    return 1.0 / (1.0 + eta);
}

double los_frac_from_rho(double rho) {
    if (!(rho >= 0.0)) throw DomainError("rho", "must be >= 0");
    if (std::isinf(rho)) return 1.0;
    const double r2 = rho * rho;
    return r2 / (1.0 + r2);
}

ShapeParams validate(const ShapeParams& params) {
    if (!(params.gbar > 0.0) || std::isinf(params.gbar)) throw DomainError("gbar", "must be finite and > 0");
    if (!(params.kappa >= 0.0) || std::isinf(params.kappa)) throw DomainError("kappa", "must be finite and >= 0");
    if (!(params.mu > 0.0) || std::isinf(params.mu)) throw DomainError("mu", "must be finite and > 0");
    if (!(params.m > 0.0) || std::isinf(params.m)) throw DomainError("m", "must be finite and > 0");
    if (!(params.eta >= 0.0)) throw DomainError("eta", "must be >= 0");
    if (!(params.los_frac >= 0.0 && params.los_frac <= 1.0)) throw DomainError("los_frac", "must lie in [0, 1]");

    ShapeParams out = params;
    if (out.los_inert()) {
        out.m = 1.0;
        out.los_frac = 0.5;
    }
    return out;
}

ComponentPowers component_powers(const ShapeParams& params, double omega) {
    const double diffuse = omega / (params.mu * (1.0 + params.kappa));
    const double los = omega * params.kappa / (1.0 + params.kappa);
    return {diffuse * params.inphase_weight(), diffuse * params.quadrature_weight(),
            los * params.los_frac, los * (1.0 - params.los_frac)};
}

PhysicalParams to_physical(const ShapeParams& params, std::optional<double> omega) {
    const ShapeParams v = validate(params);
    const double mu_round = std::round(v.mu);
    if (mu_round < 1.0 || mu_round != v.mu) throw DomainError("mu", "must be a positive integer for the cluster model");
    const double om = omega.value_or(v.gbar);
    if (!(om > 0.0)) throw DomainError("omega", "must be > 0");

    const ComponentPowers c = component_powers(v, om);
    PhysicalParams phys;
    phys.sigma_x2 = c.sigma_x2;
    phys.sigma_y2 = c.sigma_y2;
    phys.p = std::sqrt(c.p2);
    phys.q = std::sqrt(c.q2);
    phys.mu_int = static_cast<int>(mu_round);
    phys.m = v.m;
    phys.omega = om;
    return phys;
}

ShapeParams to_shape(const PhysicalParams& phys, double gbar) {
    if (phys.mu_int < 1) throw DomainError("mu_int", "must be >= 1");
    if (!(phys.sigma_x2 >= 0.0) || !(phys.sigma_y2 >= 0.0)) throw DomainError("sigma", "variances must be >= 0");
    const double diffuse = phys.mu_int * (phys.sigma_x2 + phys.sigma_y2);
    if (!(diffuse > 0.0)) throw DomainError("sigma", "diffuse power must be > 0");
    const double p2 = phys.p * phys.p;
    const double q2 = phys.q * phys.q;

    ShapeParams s;
    s.gbar = gbar;
    s.mu = phys.mu_int;
    s.m = phys.m;
    s.kappa = (p2 + q2) / diffuse;
    s.eta = phys.sigma_y2 == 0.0 ? kInf : phys.sigma_x2 / phys.sigma_y2;
    s.los_frac = (p2 + q2) > 0.0 ? p2 / (p2 + q2) : 0.5;
    return validate(s);
}

MgfFactorization factorize(const ShapeParams& params) {
    const ShapeParams v = validate(params);
    const double wx = v.inphase_weight();
    const double wy = v.quadrature_weight();
    const double k1 = 1.0 + v.kappa;
    const double t = v.los_frac;

    MgfFactorization f;
    f.alpha2 = 4.0 * wx * wy / (v.mu * v.mu * k1 * k1);
    f.beta2 = -2.0 / (v.mu * k1);
    f.alpha1 = f.alpha2 + 2.0 * v.kappa * (t * wy + (1.0 - t) * wx) / (v.m * v.mu * k1 * k1);
    f.beta1 = -(2.0 / v.mu + v.kappa / v.m) / k1;

    const RootPair d = unit_quadratic_roots(f.alpha1, f.beta1);
    const RootPair c = unit_quadratic_roots(f.alpha2, f.beta2);
    f.delta1 = d.first;
    f.delta2 = d.second;
    f.c1 = c.first;
    f.c2 = c.second;
    return f;
}

std::complex<double> factored_mgf(const MgfFactorization& f, const ShapeParams& params,
                                  std::complex<double> s) {
    const ShapeParams v = validate(params);
    const std::complex<double> y = v.gbar * s;
    std::complex<double> out{1.0, 0.0};
    auto apply = [&](std::complex<double> root, double exponent) {
        if (std::isinf(root.real())) return;
        out *= std::pow(1.0 - y / root, exponent);
    };
    apply(f.c1, v.m - 0.5 * v.mu);
    apply(f.c2, v.m - 0.5 * v.mu);
    apply(f.delta1, -v.m);
    apply(f.delta2, -v.m);
    return out;
}

ShapeParams special_case(LegacyModel model, const LegacyParams& legacy) {
    ShapeParams s;
    s.gbar = legacy.gbar;
    switch (model) {
        case LegacyModel::OneSidedGaussian:
            s.kappa = 0.0, s.mu = 1.0, s.eta = 0.0;
            break;
        case LegacyModel::Rayleigh:
            s.kappa = 0.0, s.mu = 1.0, s.eta = 1.0;
            break;
        case LegacyModel::NakagamiM:
            s.kappa = 0.0, s.mu = require_positive(legacy.m, "m"), s.eta = 1.0;
            break;
        case LegacyModel::Hoyt:
            // q is taken as the variance ratio; the classical Nakagami-q (amplitude ratio) maps to q^2.
            s.kappa = 0.0, s.mu = 1.0, s.eta = require_nonnegative(legacy.q, "q");
            break;
        case LegacyModel::EtaMu:
            // The published eta-mu model has 2*mu Gaussian branches, i.e. 2*mu FB clusters
            // (Hoyt is eta-mu with mu = 1/2, Nakagami-m has m = 2*mu).
            s.kappa = 0.0;
            s.mu = 2.0 * require_positive(legacy.mu, "mu");
            s.eta = require_nonnegative(legacy.eta, "eta");
            break;
        case LegacyModel::Rice:
            s.kappa = require_nonnegative(legacy.K, "K"), s.mu = 1.0, s.m = M_LARGE, s.eta = 1.0;
            break;
        case LegacyModel::EtaKappaSym: {
            const double eta = require_nonnegative(legacy.eta, "eta");
            s.kappa = require_nonnegative(legacy.kappa, "kappa"), s.mu = 1.0, s.m = M_LARGE, s.eta = eta;
            // Dominant and scattered components share the imbalance: p^2/q^2 = sigma_x^2/sigma_y^2 = eta.
            s.los_frac = los_frac_from_rho(std::sqrt(eta));
            break;
        }
        case LegacyModel::EtaKappaAsym:
            s.kappa = require_nonnegative(legacy.kappa, "kappa"), s.mu = 1.0, s.m = M_LARGE;
            s.eta = require_nonnegative(legacy.eta, "eta"), s.los_frac = 0.0;
            break;
        case LegacyModel::Beckmann:
            s.kappa = require_nonnegative(legacy.K, "K"), s.mu = 1.0, s.m = M_LARGE;
            s.eta = require_nonnegative(legacy.q, "q");
            s.los_frac = los_frac_from_rho(require_nonnegative(legacy.r, "r"));
            break;
        case LegacyModel::KappaMu:
            s.kappa = require_nonnegative(legacy.kappa, "kappa"), s.mu = require_positive(legacy.mu, "mu");
            s.m = M_LARGE, s.eta = 1.0;
            break;
        case LegacyModel::RicianShadowed:
            s.kappa = require_nonnegative(legacy.kappa, "kappa"), s.mu = 1.0;
            s.m = require_positive(legacy.m, "m"), s.eta = 1.0;
            break;
        case LegacyModel::KappaMuShadowed:
            s.kappa = require_nonnegative(legacy.kappa, "kappa"), s.mu = require_positive(legacy.mu, "mu");
            s.m = require_positive(legacy.m, "m"), s.eta = 1.0;
            break;
    }
    return validate(s);
}

std::string_view to_string(LegacyModel model) {
    for (const auto& [m, name] : kModelNames)
        if (m == model) return name;
    return "unknown";
}

std::optional<LegacyModel> legacy_model_from_string(std::string_view name) {
    for (const auto& [m, n] : kModelNames)
        if (n == name) return m;
    return std::nullopt;
}

}  // namespace fbfade
