#pragma once

#include <vector>

namespace fbfade {

/// Nodes and weights on [0, 1]. `complement[i] == 1 - x[i]`, computed without cancellation so that
/// integrands singular at x = 1 can be evaluated accurately.
struct UnitRule {
    std::vector<double> x;
    std::vector<double> complement;
    std::vector<double> w;
};

/// Double-exponential (tanh-sinh) rule on [0, 1] with `points` nodes.
/// `endpoint_exponent` is the smallest power e > -1 in an integrand behaving like x^e or (1-x)^e near
/// the endpoints; the truncation of the transformed axis is widened until such a factor has decayed.
UnitRule tanh_sinh_rule(int points, double endpoint_exponent = 0.0);

/// Gauss-Jacobi rule on [0, 1] for the weight x^a (1-x)^b, a, b > -1. Weights include the weight function.
UnitRule gauss_jacobi_rule(int points, double a, double b);

/// Generalized Gauss-Laguerre rule for the weight u^alpha e^-u on (0, inf), alpha > -1.
/// Weights are normalized to sum to one, i.e. they integrate against the Gamma(alpha+1, 1) density.
/// Rules are cached per (points, alpha); the returned reference stays valid for the program lifetime.
struct HalfLineRule {
    std::vector<double> x;
    std::vector<double> w;
};
const HalfLineRule& gamma_laguerre_rule(int points, double alpha);

}  // namespace fbfade
