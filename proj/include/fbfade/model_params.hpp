#pragma once

#include <complex>
#include <optional>
#include <string_view>

namespace fbfade {

/// Surrogate for the m -> infinity rows of the legacy-model table (non-fluctuating LoS).
/// The bracket term (1 - a/m)^-m differs from exp(a) by a relative amount close to a^2/(2m);
/// with |a| <= kappa*mu that is below 1e-3 for kappa*mu <= 10.
inline constexpr double M_LARGE = 5.0e4;

/// Shape parameterization of the Fluctuating Beckmann distribution.
///
/// The LoS in-phase/quadrature imbalance rho^2 = p^2/q^2 is stored as
/// los_frac = rho^2/(1+rho^2) = p^2/(p^2+q^2), so that rho = 0 and rho = inf are both exact.
/// eta = sigma_x^2/sigma_y^2 may be +infinity.
struct ShapeParams {
    double gbar = 1.0;
    double kappa = 0.0;
    double mu = 1.0;
    double m = 1.0;
    double eta = 1.0;
    double los_frac = 0.5;

    /// rho = sqrt(t/(1-t)); +inf when los_frac == 1.
    double rho() const;
    /// With no LoS power, m and los_frac have no effect on any statistic.
    bool los_inert() const { return kappa == 0.0; }

    /// Fraction of diffuse power in the in-phase branch, eta/(1+eta); 1 for eta = inf.
    double inphase_weight() const;
    /// Fraction of diffuse power in the quadrature branch, 1/(1+eta); 0 for eta = inf.
    double quadrature_weight() const;

    friend bool operator==(const ShapeParams&, const ShapeParams&) = default;
};

/// t = rho^2/(1+rho^2), accepting rho = +inf.
double los_frac_from_rho(double rho);

/// Generative-model quantities for the cluster model. Powers are absolute (units of omega).
struct PhysicalParams {
    double sigma_x2 = 0.0;  ///< per-cluster in-phase diffuse variance
    double sigma_y2 = 0.0;  ///< per-cluster quadrature diffuse variance
    double p = 0.0;         ///< total in-phase LoS amplitude, p^2 = sum p_i^2
    double q = 0.0;         ///< total quadrature LoS amplitude
    int mu_int = 1;         ///< cluster count
    double m = 1.0;         ///< Nakagami shape of the LoS fluctuation xi
    double omega = 1.0;     ///< mu*(sigma_x2 + sigma_y2) + p^2 + q^2
};

/// Checks every field; on kappa == 0 the inert fields are reset to m = 1, los_frac = 0.5.
/// Throws DomainError naming the offending field.
ShapeParams validate(const ShapeParams& params);

/// Per-cluster diffuse variances and total LoS powers for mean power omega.
/// Valid for real mu; used by analytic oracles that never sample clusters.
struct ComponentPowers {
    double sigma_x2;
    double sigma_y2;
    double p2;
    double q2;
};
ComponentPowers component_powers(const ShapeParams& params, double omega);

/// Inverts the shape definition. omega defaults to gbar. Requires integer mu.
PhysicalParams to_physical(const ShapeParams& params, std::optional<double> omega = std::nullopt);

/// Recovers the shape parameters; gbar is supplied by the caller (the SNR scale is not physical).
ShapeParams to_shape(const PhysicalParams& phys, double gbar);

/// Coefficients of the two quadratics whose roots factor the MGF, in the variable y = gbar*s:
///
///   P1(y) = alpha1 y^2 + beta1 y + 1  (bracket numerator, roots delta1, delta2)
///   P2(y) = alpha2 y^2 + beta2 y + 1  (diffuse factor product, roots c1, c2)
///
/// so that M(s) = P2(y)^(m - mu/2) * P1(y)^(-m).
///
/// With wx = eta/(1+eta), wy = 1/(1+eta) the coefficients are
///   alpha2 = 4 wx wy / (mu^2 (1+kappa)^2),   beta2 = -2/(mu (1+kappa)),
///   alpha1 = alpha2 + 2 kappa (t wy + (1-t) wx) / (m mu (1+kappa)^2),
///   beta1  = -(2/mu + kappa/m)/(1+kappa).
/// The alpha1 term is kappa (rho^2 + eta)/((1+rho^2) m mu (1+eta)(1+kappa)^2) rewritten with
/// rho^2/(1+rho^2) = t and eta/(1+eta) = wx, which stays finite at eta = inf.
///
/// A vanishing leading coefficient (eta = 0 or inf, or kappa*t-type cancellations) leaves a
/// linear factor; its missing root is stored as +inf and contributes a factor of exactly 1.
struct MgfFactorization {
    double alpha1 = 0.0;
    double beta1 = 0.0;
    double alpha2 = 0.0;
    double beta2 = 0.0;
    std::complex<double> delta1;
    std::complex<double> delta2;
    std::complex<double> c1;
    std::complex<double> c2;

    bool delta_roots_real() const { return delta1.imag() == 0.0 && delta2.imag() == 0.0; }
};

MgfFactorization factorize(const ShapeParams& params);

/// Evaluates M(s) from the root form prod (1 - y/c_i)^(m - mu/2) prod (1 - y/delta_i)^(-m).
std::complex<double> factored_mgf(const MgfFactorization& f, const ShapeParams& params,
                                  std::complex<double> s);

enum class LegacyModel {
    OneSidedGaussian,
    Rayleigh,
    NakagamiM,
    Hoyt,
    EtaMu,
    Rice,
    EtaKappaSym,
    EtaKappaAsym,
    Beckmann,
    KappaMu,
    RicianShadowed,
    KappaMuShadowed,
};

/// Named parameters of the legacy models. Which fields are required depends on the model:
///   NakagamiM: m;  Hoyt: q (variance ratio);  EtaMu: eta, mu;  Rice: K;
///   EtaKappaSym/Asym: kappa, eta;  Beckmann: K, q (variance ratio), r (LoS amplitude ratio);
///   KappaMu: kappa, mu;  RicianShadowed: kappa, m;  KappaMuShadowed: kappa, mu, m.
struct LegacyParams {
    double gbar = 1.0;
    std::optional<double> m;
    std::optional<double> q;
    std::optional<double> eta;
    std::optional<double> mu;
    std::optional<double> K;
    std::optional<double> kappa;
    std::optional<double> r;
};

ShapeParams special_case(LegacyModel model, const LegacyParams& legacy);

std::string_view to_string(LegacyModel model);
std::optional<LegacyModel> legacy_model_from_string(std::string_view name);

}  // namespace fbfade
