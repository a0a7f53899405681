#include "fbfade/first_order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fbfade/errors.hpp"
#include "fbfade/parallel.hpp"
#include "fbfade/quadrature.hpp"
#include "fbfade/special_functions.hpp"

namespace fbfade {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSmallArg = 1e-8;   // inversion clamp, in units of gbar
constexpr double kNoiseFloor = 1e-9;  // tolerated negative density, in units of 1/gbar

ShapeParams unit_gbar(const ShapeParams& params) {
    ShapeParams p = validate(params);
    p.gbar = 1.0;
    return p;
}

double min_positive_real(double current, std::complex<double> root) {
    if (root.imag() != 0.0 || !std::isfinite(root.real()) || !(root.real() > 0.0)) return current;
    return std::min(current, root.real());
}

// Inverse Laplace transform of M(-s) (or M(-s)/s) for gbar = 1 at x >= kSmallArg.
double invert_unit(const ShapeParams& unit, double x, bool cumulative, const InversionConfig& cfg) {
    auto image = [&](std::complex<double> s) {
        const std::complex<double> v = mgf(unit, -s);
        return cumulative ? v / s : v;
    };
    return invert(image, x, cfg);
}

double unit_pdf(const ShapeParams& unit, double x, const InversionConfig& cfg) {
    const double xe = std::max(x, kSmallArg);
    double f = invert_unit(unit, xe, false, cfg);
    if (f < 0.0) {
        if (f < -kNoiseFloor)
            throw NumericalError("inverted density is negative (" + std::to_string(f) + ") beyond the noise floor");
        f = 0.0;
    }
    if (x < kSmallArg) f *= std::pow(x / kSmallArg, unit.mu - 1.0);
    return f;
}

double unit_cdf(const ShapeParams& unit, double x, const InversionConfig& cfg) {
    const double xe = std::max(x, kSmallArg);
    double F = std::clamp(invert_unit(unit, xe, true, cfg), 0.0, 1.0);
    if (x < kSmallArg) F *= std::pow(x / kSmallArg, unit.mu);
    return F;
}

}  // namespace

EvalGrid EvalGrid::linear(double lo, double hi, int n) {
    if (n < 1) throw DomainError("grid", "needs at least one point");
    EvalGrid g;
    g.scale = Scale::Linear;
    g.points.resize(n);
    for (int i = 0; i < n; ++i) g.points[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    validate(g);
    return g;
}

EvalGrid EvalGrid::decibel(double lo_db, double hi_db, int n) {
    if (n < 1) throw DomainError("grid", "needs at least one point");
    EvalGrid g;
    g.scale = Scale::dB;
    g.points.resize(n);
    for (int i = 0; i < n; ++i) {
        const double db = n == 1 ? lo_db : lo_db + (hi_db - lo_db) * i / (n - 1);
        g.points[i] = std::pow(10.0, db / 10.0);
    }
    validate(g);
    return g;
}

void validate(const EvalGrid& grid) {
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        const double x = grid.points[i];
        if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("grid", "points must be finite and > 0");
        if (i > 0 && !(x > grid.points[i - 1])) throw DomainError("grid", "points must be strictly increasing");
    }
}

double mgf_abscissa(const ShapeParams& params) {
    const ShapeParams p = validate(params);
    const double k1 = p.mu * (1.0 + p.kappa);
    double y = kInf;
    if (p.inphase_weight() > 0.0) y = std::min(y, k1 / (2.0 * p.inphase_weight()));
    if (p.quadrature_weight() > 0.0) y = std::min(y, k1 / (2.0 * p.quadrature_weight()));
    if (!p.los_inert()) {
        const MgfFactorization f = factorize(p);
        y = min_positive_real(y, f.delta1);
        y = min_positive_real(y, f.delta2);
    }
    return y / p.gbar;
}

std::complex<double> mgf(const ShapeParams& params, std::complex<double> s) {
    const ShapeParams p = validate(params);
    if (s.real() > 0.0 && !(s.real() < mgf_abscissa(p)))
        throw DomainError("s", "at or beyond the MGF singularity");

    const std::complex<double> y = p.gbar * s;
    const double k1 = p.mu * (1.0 + p.kappa);
    const std::complex<double> d1 = 1.0 - 2.0 * p.inphase_weight() * y / k1;
    const std::complex<double> d2 = 1.0 - 2.0 * p.quadrature_weight() * y / k1;

    const std::complex<double> out = std::pow(d1, -0.5 * p.mu) * std::pow(d2, -0.5 * p.mu);
    if (p.los_inert()) return out;

    const double t = p.los_frac;
    const std::complex<double> bracket =
        1.0 - p.kappa / (p.m * (1.0 + p.kappa)) * (t * y / d1 + (1.0 - t) * y / d2);
    if (s.real() <= 0.0 && !(d1.real() > 0.0 && d2.real() > 0.0 && bracket.real() > 0.0))
        throw NumericalError("MGF factor left the principal branch in the left half-plane");
    return out * std::pow(bracket, -p.m);
}

double pdf_snr(const ShapeParams& params, double gamma, const InversionConfig& cfg) {
    if (!(gamma > 0.0)) throw DomainError("gamma", "must be > 0");
    const ShapeParams unit = unit_gbar(params);
    return unit_pdf(unit, gamma / params.gbar, cfg) / params.gbar;
}

double cdf_snr(const ShapeParams& params, double gamma, const InversionConfig& cfg) {
    if (!(gamma > 0.0)) throw DomainError("gamma", "must be > 0");
    const ShapeParams unit = unit_gbar(params);
    return unit_cdf(unit, gamma / params.gbar, cfg);
}

std::vector<double> cdf_snr(const ShapeParams& params, const EvalGrid& grid, const InversionConfig& cfg) {
    validate(grid);
    const ShapeParams unit = unit_gbar(params);
    std::vector<double> out(grid.points.size());
    parallel_for(out.size(), [&](std::size_t i) { out[i] = unit_cdf(unit, grid.points[i] / params.gbar, cfg); });
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::max(out[i], out[i - 1]);
    return out;
}

double pdf_envelope(const ShapeParams& params, double r, double omega, const InversionConfig& cfg) {
    if (!(r > 0.0)) throw DomainError("r", "must be > 0");
    if (!(omega > 0.0)) throw DomainError("omega", "must be > 0");
    ShapeParams p = params;
    p.gbar = omega;
    return 2.0 * r * pdf_snr(p, r * r, cfg);
}

double cdf_envelope(const ShapeParams& params, double r, double omega, const InversionConfig& cfg) {
    if (!(r > 0.0)) throw DomainError("r", "must be > 0");
    if (!(omega > 0.0)) throw DomainError("omega", "must be > 0");
    ShapeParams p = params;
    p.gbar = omega;
    return cdf_snr(p, r * r, cfg);
}

double chernoff_tail_bound(const ShapeParams& params, double x) {
    const ShapeParams unit = unit_gbar(params);
    const double xu = x / params.gbar;
    if (!(xu > 0.0)) return 1.0;
    const double hi = mgf_abscissa(unit);
    auto objective = [&](double s) { return std::log(mgf(unit, s).real()) - s * xu; };

    // log M(s) - s x is convex in s; golden-section search on (0, hi).
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0;
    double b = std::isfinite(hi) ? hi * (1.0 - 1e-9) : 1e3;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * b; ++it) {
        if (fc < fd) {
            b = d, d = c, fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    return std::min(1.0, std::exp(std::min(fc, fd)));
}

std::complex<double> mgf_via_conditional_average(const ShapeParams& params, std::complex<double> s,
                                                 int quad_nodes) {
    if (quad_nodes < 64) throw DomainError("quad_nodes", "must be >= 64");
    const ShapeParams p = validate(params);
    if (s.real() > 0.0 && !(s.real() < mgf_abscissa(p)))
        throw DomainError("s", "at or beyond the MGF singularity");

    const ComponentPowers c = component_powers(p, p.gbar);
    const std::complex<double> ax = 1.0 - 2.0 * c.sigma_x2 * s;
    const std::complex<double> ay = 1.0 - 2.0 * c.sigma_y2 * s;
    const std::complex<double> diffuse = std::pow(ax, -0.5 * p.mu) * std::pow(ay, -0.5 * p.mu);
    if (p.los_inert()) return diffuse;

    // Conditioned on xi the LoS term is exp(xi^2 s (p^2/ax + q^2/ay)); with u = m xi^2 ~ Gamma(m, 1)
    // it reads exp(rate u).
    // Substituting u = y / (1 - Re rate) moves the decay of the integrand into the Laguerre weight, so only
    // the oscillation exp(i Im(rate) y / scale) is left to the nodes.
    const std::complex<double> rate = s * (c.p2 / ax + c.q2 / ay) / p.m;
    const double scale = 1.0 - rate.real();
    if (!(scale > 0.0)) throw NumericalError("conditional MGF average: LoS rate has real part >= 1");
    const double freq = rate.imag() / scale;
    auto average = [&](int n) {
        const HalfLineRule& rule = gamma_laguerre_rule(n, p.m - 1.0);
        std::complex<double> acc = 0.0;
        for (int i = 0; i < n; ++i) acc += rule.w[i] * std::exp(std::complex<double>(0.0, freq * rule.x[i]));
        return acc * std::pow(scale, -p.m);
    };

    constexpr int kMaxNodes = 1024;
    std::complex<double> prev = average(quad_nodes);
    double diff = kInf;
    for (int n = 2 * quad_nodes; n <= kMaxNodes; n *= 2) {
        const std::complex<double> cur = average(n);
        diff = std::abs(cur - prev) / std::abs(cur);
        prev = cur;
        if (diff <= 1e-12) break;
    }
    if (!(diff <= 1e-8))
        throw ConvergenceError("conditional MGF average did not settle (relative change " + std::to_string(diff) +
                               ")");
    return diffuse * prev;
}

double phi2_series_oracle(const std::array<double, 6>& a, double c, const std::array<double, 6>& x, int max_order) {
    if (max_order < 0 || max_order > 30) throw DomainError("max_order", "must lie in [0, 30]");
    double spread = 0.0;
    for (double xi : x) spread += std::abs(xi);
    if (!(spread < 5.0)) throw DomainError("args", "sum of |x_i| must be < 5");
    if (!(c > 0.0)) throw DomainError("c", "must be > 0");

    // shell[N] = sum over |n| = N of prod (a_i)_{n_i} x_i^{n_i} / n_i!
    std::vector<double> shell(max_order + 1, 0.0);
    auto recurse = [&](auto&& self, int i, int used, double prod) -> void {
        if (i == 6) {
            shell[used] += prod;
            return;
        }
        double term = prod;
        for (int n = 0; used + n <= max_order; ++n) {
            self(self, i + 1, used + n, term);
            term *= (a[i] + n) * x[i] / (n + 1.0);
            if (term == 0.0) break;
        }
    };
    recurse(recurse, 0, 0, 1.0);

    double total = 0.0;
    double poch = 1.0;
    double last = 0.0;
    for (int N = 0; N <= max_order; ++N) {
        last = shell[N] / poch;
        total += last;
        poch *= c + N;
    }
    if (max_order > 0 && std::abs(last) > 1e-10 * std::abs(total))
        throw ConvergenceError("Lauricella series: last order shell is still " + std::to_string(last));
    return total;
}

double pdf_snr_series(const ShapeParams& params, double gamma, int max_order) {
    if (!(gamma > 0.0)) throw DomainError("gamma", "must be > 0");
    const ShapeParams p = validate(params);
    const MgfFactorization f = factorize(p);
    const std::array<std::complex<double>, 4> roots{f.c1, f.c2, f.delta1, f.delta2};
    for (const auto& r : roots)
        if (r.imag() != 0.0 || !std::isfinite(r.real()))
            throw DomainError("params", "series assembly needs real, finite roots");
    if (!(f.alpha1 > 0.0) || !(f.alpha2 > 0.0)) throw DomainError("params", "degenerate factorization");

    const double g = gamma / p.gbar;
    const double mu = p.mu;
    const double m = p.m;
    const std::array<double, 6> a{0.5 * mu, 0.5 * mu, -m, -m, m, m};
    const std::array<double, 6> x{-g * f.c1.real(), -g * f.c2.real(), -g * f.c1.real(),
                                  -g * f.c2.real(), -g * f.delta1.real(), -g * f.delta2.real()};
    const double log_pre = (m - 0.5 * mu) * std::log(f.alpha2) - m * std::log(f.alpha1) + (mu - 1.0) * std::log(g) -
                           log_gamma(mu) - std::log(p.gbar);
    return std::exp(log_pre) * phi2_series_oracle(a, mu, x, max_order);
}

}  // namespace fbfade
