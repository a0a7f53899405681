#pragma once

// Independent reference values used only by the tests. Nothing here calls into the library's
// MGF, inversion or hypergeometric code.

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

using cplx = std::complex<double>;

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Legacy-model MGFs in their textbook forms, written from the physical description of each model.

inline double mgf_one_sided_gaussian(double gbar, double s) { return 1.0 / std::sqrt(1.0 - 2.0 * gbar * s); }

inline double mgf_rayleigh(double gbar, double s) { return 1.0 / (1.0 - gbar * s); }

inline double mgf_nakagami(double gbar, double m, double s) { return std::pow(1.0 - gbar * s / m, -m); }

// Two independent zero-mean Gaussians with LoS offsets p, q: the MGF of (X+p)^2 + (Y+q)^2.
inline double mgf_beckmann_physical(double sx2, double sy2, double p2, double q2, double s) {
    const double dx = 1.0 - 2.0 * sx2 * s;
    const double dy = 1.0 - 2.0 * sy2 * s;
    return std::exp(p2 * s / dx + q2 * s / dy) / std::sqrt(dx * dy);
}

// Hoyt with q the in-phase/quadrature variance ratio.
inline double mgf_hoyt(double gbar, double q, double s) {
    return mgf_beckmann_physical(gbar * q / (1.0 + q), gbar / (1.0 + q), 0.0, 0.0, s);
}

// eta-mu (format 1): 2*mu Gaussian branch pairs with variance ratio eta.
inline double mgf_eta_mu(double gbar, double eta, double mu, double s) {
    const double sx2 = gbar * eta / (2.0 * mu * (1.0 + eta));
    const double sy2 = gbar / (2.0 * mu * (1.0 + eta));
    return std::pow((1.0 - 2.0 * sx2 * s) * (1.0 - 2.0 * sy2 * s), -mu);
}

inline double mgf_rice(double gbar, double K, double s) {
    const double d = 1.0 + K - gbar * s;
    return (1.0 + K) / d * std::exp(K * gbar * s / d);
}

inline double mgf_kappa_mu(double gbar, double kappa, double mu, double s) {
    const double d = mu * (1.0 + kappa) - gbar * s;
    return std::pow(mu * (1.0 + kappa) / d, mu) * std::exp(mu * kappa * gbar * s / d);
}

// kappa-mu shadowed: (1 - s/a)^(m - mu) (1 - s/b)^(-m), with a = mu(1+kappa)/gbar and
// b = mu(1+kappa)m/((mu kappa + m) gbar).
inline double mgf_kappa_mu_shadowed(double gbar, double kappa, double mu, double m, double s) {
    const double a = mu * (1.0 + kappa) / gbar;
    const double b = mu * (1.0 + kappa) * m / ((mu * kappa + m) * gbar);
    return std::pow(1.0 - s / a, m - mu) * std::pow(1.0 - s / b, -m);
}

// Beckmann from (K, variance ratio q, LoS amplitude ratio r) at mean power gbar.
inline double mgf_beckmann(double gbar, double K, double q, double r, double s) {
    const double diffuse = gbar / (1.0 + K);
    const double los = gbar * K / (1.0 + K);
    const double t = r * r / (1.0 + r * r);
    return mgf_beckmann_physical(diffuse * q / (1.0 + q), diffuse / (1.0 + q), los * t, los * (1.0 - t), s);
}

// 1F1(a; b; z) for rational a, b, z from `terms` exactly summed rational terms.
inline double kummer_rational(long a_num, long a_den, long b_num, long b_den, long z_num, long z_den, int terms) {
    using boost::multiprecision::cpp_rational;
    const cpp_rational a(a_num, a_den), b(b_num, b_den), z(z_num, z_den);
    cpp_rational term = 1, sum = 1;
    for (int k = 0; k < terms; ++k) {
        term *= (a + k) * z / ((b + k) * (k + 1));
        sum += term;
    }
    return static_cast<double>(sum);
}

// Inverse Laplace transform by the trapezoidal rule on a parabolic deformation of the Bromwich
// contour, s(u) = (N/t)(0.1309 - 0.1194 u^2 + 0.25 i u). F must be analytic to the right of the
// parabola (branch cuts on the negative real axis are fine).
inline double bromwich_parabolic(const std::function<cplx(cplx)>& F, double t, int N = 32) {
    const double h = 3.0 / N;
    const double scale = N / t;
    double acc = 0.0;
    for (int k = 0; k < 4 * N; ++k) {
        const double u = (k + 0.5) * h;
        const cplx s = scale * cplx(0.1309 - 0.1194 * u * u, 0.25 * u);
        const cplx ds = scale * cplx(-0.2388 * u, 0.25);
        acc += (std::exp(s * t) * F(s) * ds).imag();
    }
    return acc * h / std::numbers::pi;
}

// Classical Clarke-model Rayleigh envelope statistics, u normalized to the RMS value.
inline double rayleigh_lcr(double u, double fd) {
    return std::sqrt(2.0 * std::numbers::pi) * fd * u * std::exp(-u * u);
}
inline double rayleigh_afd(double u, double fd) {
    return std::expm1(u * u) / (std::sqrt(2.0 * std::numbers::pi) * fd * u);
}

}  // namespace oracle
