#include "fbfade/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "fbfade/errors.hpp"
#include "fbfade/special_functions.hpp"

namespace fbfade {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix, weights the
// squared first components of the normalized eigenvectors.
std::pair<Eigen::VectorXd, Eigen::VectorXd> golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& off) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw NumericalError("Golub-Welsch eigen decomposition failed");
    Eigen::VectorXd w = solver.eigenvectors().row(0).transpose().array().square();
    return {solver.eigenvalues(), w};
}

}  // namespace

UnitRule tanh_sinh_rule(int points, double endpoint_exponent) {
    if (points < 3) throw DomainError("points", "tanh-sinh needs at least 3 nodes");
    if (!(endpoint_exponent > -1.0)) throw DomainError("endpoint_exponent", "must be > -1");

    // Stop where x^(e+1) < 1e-18 or where x would underflow.
    const double decay = 18.0 * std::numbers::ln10 / (endpoint_exponent + 1.0);
    const double tmax = std::asinh(std::min(decay, 700.0) / std::numbers::pi);
    const double h = 2.0 * tmax / (points - 1);

    UnitRule rule;
    rule.x.reserve(points);
    rule.complement.reserve(points);
    rule.w.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double tau = -tmax + i * h;
        const double v = std::numbers::pi * std::sinh(tau);
        const double x = 1.0 / (1.0 + std::exp(-v));
        const double xc = 1.0 / (1.0 + std::exp(v));
        rule.x.push_back(x);
        rule.complement.push_back(xc);
        rule.w.push_back(h * std::numbers::pi * std::cosh(tau) * x * xc);
    }
    return rule;
}

UnitRule gauss_jacobi_rule(int points, double a, double b) {
    if (points < 1) throw DomainError("points", "must be >= 1");
    if (!(a > -1.0) || !(b > -1.0)) throw DomainError("exponent", "Jacobi exponents must be > -1");

    // Monic recurrence on [0, 1] for x^a (1-x)^b, obtained from the [-1, 1] Jacobi recurrence
    // with weight (1-y)^b (1+y)^a under x = (1+y)/2.
    const double al = b;
    const double be = a;
    Eigen::VectorXd diag(points);
    Eigen::VectorXd off(points > 1 ? points - 1 : 0);
    for (int k = 0; k < points; ++k) {
        const double s = 2.0 * k + al + be;
        double ak;
        if (k == 0)
            ak = (be - al) / (al + be + 2.0);
        else
            ak = (be * be - al * al) / (s * (s + 2.0));
        diag(k) = 0.5 * (1.0 + ak);
        if (k + 1 < points) {
            const double n = k + 1.0;
            const double sn = 2.0 * n + al + be;
            double bk = 4.0 * n * (n + al) * (n + be) * (n + al + be) / (sn * sn * (sn + 1.0) * (sn - 1.0));
            if (n == 1.0) bk = 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + al + be) * (2.0 + al + be) * (3.0 + al + be));
            off(k) = 0.5 * std::sqrt(bk);
        }
    }
    auto [nodes, w] = golub_welsch(diag, off);
    const double mass = std::exp(log_gamma(a + 1.0) + log_gamma(b + 1.0) - log_gamma(a + b + 2.0));

    UnitRule rule;
    rule.x.resize(points);
    rule.complement.resize(points);
    rule.w.resize(points);
    for (int i = 0; i < points; ++i) {
        rule.x[i] = nodes(i);
        rule.complement[i] = 1.0 - nodes(i);
        rule.w[i] = mass * w(i);
    }
    return rule;
}

const HalfLineRule& gamma_laguerre_rule(int points, double alpha) {
    if (points < 1) throw DomainError("points", "must be >= 1");
    if (!(alpha > -1.0)) throw DomainError("alpha", "must be > -1");

    static std::mutex mutex;
    static std::map<std::pair<int, double>, std::unique_ptr<HalfLineRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{points, alpha}];
    if (slot) return *slot;

    Eigen::VectorXd diag(points);
    Eigen::VectorXd off(points > 1 ? points - 1 : 0);
    for (int i = 0; i < points; ++i) {
        diag(i) = 2.0 * i + alpha + 1.0;
        if (i + 1 < points) off(i) = std::sqrt((i + 1.0) * (i + 1.0 + alpha));
    }
    auto [nodes, w] = golub_welsch(diag, off);

    auto rule = std::make_unique<HalfLineRule>();
    rule->x.assign(nodes.data(), nodes.data() + points);
    rule->w.assign(w.data(), w.data() + points);
    slot = std::move(rule);
    return *slot;
}

}  // namespace fbfade
