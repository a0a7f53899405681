#pragma once

#include "fbfade/laplace_inversion.hpp"
#include "fbfade/model_params.hpp"

namespace fbfade {

struct DopplerContext {
    double fd = 1.0;       ///< maximum Doppler shift, Hz
    double rho_dd0 = 0.0;  ///< -rho''(0), rad^2/s^2

    /// Isotropic scattering: rho(tau) = J0(2 pi fd tau), so -rho''(0) = 2 pi^2 fd^2.
    static DopplerContext clarke(double fd);
};

/// Throws DomainError unless fd > 0 and rho_dd0 > 0.
void validate(const DopplerContext& ctx);

enum class QuadScheme { TanhSinh, GaussJacobi };

struct LcrConfig {
    QuadScheme quad_scheme = QuadScheme::TanhSinh;
    int quad_points = 200;
    double rel_tol = 1e-8;  ///< required agreement between quad_points and 2*quad_points
};

/// Level crossing rate (crossings per second) of the envelope normalized to its RMS value,
/// for LoS power entirely in phase (los_frac == 1):
///
///   N(u) = m^m K^(mu-1/2) sqrt(-rho''(0)) u^(2mu-1) exp(-K u^2/2)
///          / (2^(mu-1) Gamma(mu/2)^2 eta^(mu/2) (mu kappa (1+eta)/(2 eta) + m)^m sqrt(2 pi))
///          * int_0^1 [1+(eta-1)x]^(1/2) (x(1-x))^(mu/2-1) exp(-mu(1-eta^2)(1+kappa)u^2 x/(2 eta))
///                    1F1(m; mu/2; A u^2 x) dx
///
/// with K = mu(1+eta)(1+kappa) and A = [kappa mu^2 (1+eta)^2 (1+kappa)/(4 eta^2)] / [mu kappa (1+eta)/(2 eta) + m].
/// Evaluated in log space; gbar is ignored. Throws DomainError for los_frac != 1 or eta not in (0, inf),
/// ConvergenceError when the doubled quadrature disagrees by more than rel_tol.
double lcr(const ShapeParams& params, double u, const DopplerContext& ctx, const LcrConfig& cfg = {});

struct AfdResult {
    double value = 0.0;  ///< seconds; +inf when the crossing rate underflows
    double lcr = 0.0;
    double cdf = 0.0;
    bool underflow = false;
};

/// Average fade duration F_R(u)/N(u) with F_R the envelope CDF at unit mean power.
AfdResult afd(const ShapeParams& params, double u, const DopplerContext& ctx, const LcrConfig& cfg = {},
              const InversionConfig& inv = {});

}  // namespace fbfade
