#pragma once

#include <array>
#include <complex>
#include <vector>

#include "fbfade/laplace_inversion.hpp"
#include "fbfade/model_params.hpp"

namespace fbfade {

/// Ordered, strictly positive abscissae (SNR or envelope). `scale` records how the points were
/// generated; the points themselves are always linear values.
struct EvalGrid {
    enum class Scale { Linear, dB };

    std::vector<double> points;
    Scale scale = Scale::Linear;

    /// n points evenly spaced in [lo, hi].
    static EvalGrid linear(double lo, double hi, int n);
    /// n points evenly spaced in dB between lo_db and hi_db; the values are 10^(x/10).
    static EvalGrid decibel(double lo_db, double hi_db, int n);
};

/// Throws DomainError unless the points are finite, strictly positive and strictly increasing.
void validate(const EvalGrid& grid);

/// Smallest positive real singularity of the MGF in s (+inf if there is none).
double mgf_abscissa(const ShapeParams& params);

/// M(s) = E[exp(s gamma)]:
///
///   M(s) = D1^(-mu/2) D2^(-mu/2) [1 - kappa/(m(1+kappa)) (t y/D1 + (1-t) y/D2)]^(-m),
///   D1 = 1 - 2 wx y/(mu(1+kappa)),  D2 = 1 - 2 wy y/(mu(1+kappa)),  y = gbar s,
///
/// with wx = eta/(1+eta), wy = 1/(1+eta). Principal branches. Throws DomainError when
/// Re(s) reaches mgf_abscissa(params).
std::complex<double> mgf(const ShapeParams& params, std::complex<double> s);

/// PDF of the SNR by numerical inversion of M(-s). Evaluation points below 1e-8 gbar are
/// continued from that point by the leading small-gamma behaviour gamma^(mu-1).
double pdf_snr(const ShapeParams& params, double gamma, const InversionConfig& cfg = {});

/// CDF of the SNR by inversion of M(-s)/s, clamped to [0, 1]; below 1e-8 gbar it follows gamma^mu.
double cdf_snr(const ShapeParams& params, double gamma, const InversionConfig& cfg = {});

/// CDF over a grid; a running maximum removes inversion noise so the result is non-decreasing.
std::vector<double> cdf_snr(const ShapeParams& params, const EvalGrid& grid, const InversionConfig& cfg = {});

/// Envelope R with E[R^2] = omega: f_R(r) = 2 r f_gamma(r^2) with gbar replaced by omega.
double pdf_envelope(const ShapeParams& params, double r, double omega, const InversionConfig& cfg = {});
/// F_R(r) = F_gamma(r^2) with gbar replaced by omega.
double cdf_envelope(const ShapeParams& params, double r, double omega, const InversionConfig& cfg = {});

/// Upper bound on P(gamma > x): min over 0 < s < mgf_abscissa of M(s) e^(-s x).
double chernoff_tail_bound(const ShapeParams& params, double x);

/// Independent route to M(s): the MGF of the cluster model conditioned on the LoS amplitude xi is
/// averaged over xi, with u = m xi^2 ~ Gamma(m, 1), by generalized Gauss-Laguerre quadrature.
/// The node count starts at `quad_nodes` and doubles (up to 1024) until two consecutive results
/// agree; ConvergenceError if they still differ by more than 1e-8 relative.
std::complex<double> mgf_via_conditional_average(const ShapeParams& params, std::complex<double> s,
                                                 int quad_nodes = 64);

/// Truncated confluent Lauricella series
///   sum over n1..n6 with n1+..+n6 <= max_order of  prod (a_i)_{n_i} x_i^{n_i} / n_i!  / (c)_{n1+..+n6}.
/// Requires sum |x_i| < 5 and max_order <= 30. ConvergenceError when the last order shell still
/// contributes more than 1e-10 of the total.
double phi2_series_oracle(const std::array<double, 6>& a, double c, const std::array<double, 6>& x,
                          int max_order);

/// PDF of the SNR assembled from the Lauricella series:
///   f(g) = alpha2^(m-mu/2) g^(mu-1) / (gbar^mu Gamma(mu) alpha1^m)
///          * Phi2(mu/2, mu/2, -m, -m, m, m; mu; -g c1/gbar, -g c2/gbar, -g c1/gbar, -g c2/gbar,
///                 -g delta1/gbar, -g delta2/gbar).
/// Only for parameter sets whose roots are real and finite (DomainError otherwise).
double pdf_snr_series(const ShapeParams& params, double gamma, int max_order = 30);

}  // namespace fbfade
