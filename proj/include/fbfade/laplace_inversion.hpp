#pragma once

#include <complex>
#include <functional>

namespace fbfade {

struct InversionConfig {
    int euler_m = 20;               ///< binomial averaging order
    int euler_n = 25;               ///< terms of the alternating series before averaging
    double precision_decimals = 12; ///< A; the contour sits at a = A ln(10) / (2 t)
    double max_arg = 1e15;          ///< largest admissible contour abscissa a
};

/// Throws DomainError unless euler_m >= 1, euler_n >= euler_m, precision_decimals in [4, 15], max_arg > 0.
void validate(const InversionConfig& cfg);

using LaplaceImage = std::function<std::complex<double>(std::complex<double>)>;

/// f(t) from its Laplace transform F by the Fourier-series method with Euler summation
/// (Abate and Whitt). F is sampled on the vertical line Re(s) = a, at
/// a + k pi i / t for k = 0 .. euler_n + euler_m.
///
/// Throws NumericalError when a sample is not finite or when the Euler averages over n and n + 1
/// terms disagree by more than the accuracy implied by `precision_decimals`.
double invert(const LaplaceImage& image, double t, const InversionConfig& cfg = {});

}  // namespace fbfade
