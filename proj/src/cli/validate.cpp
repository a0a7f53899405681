#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "fbfade/cli.hpp"
#include "fbfade/first_order.hpp"
#include "fbfade/monte_carlo.hpp"
#include "fbfade/perf_metrics.hpp"
#include "fbfade/second_order.hpp"

namespace fbfade::cli {

namespace {

using json = nlohmann::ordered_json;

struct Report {
    json checks = json::array();
    bool pass = true;

    // A check passes when value <= threshold.
    void add(const std::string& name, double value, double threshold) {
        const bool ok = value <= threshold;
        pass = pass && ok;
        checks.push_back({{"name", name}, {"pass", ok}, {"value", value}, {"threshold", threshold}});
    }
    void add_bool(const std::string& name, bool ok) {
        pass = pass && ok;
        checks.push_back({{"name", name}, {"pass", ok}});
    }
    void add_error(const std::string& name, const std::exception& e) {
        pass = false;
        checks.push_back({{"name", name}, {"pass", false}, {"error", e.what()}});
    }
};

ShapeParams random_params(Rng& rng) {
    ShapeParams p;
    p.gbar = 0.1 + 9.9 * rng.uniform();
    p.kappa = 10.0 * rng.uniform();
    p.mu = 0.5 + 3.5 * rng.uniform();
    p.m = 0.5 + 9.5 * rng.uniform();
    p.eta = std::exp(std::log(0.05) + (std::log(20.0) - std::log(0.05)) * rng.uniform());
    p.los_frac = rng.uniform();
    return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <typename F>
void guarded(Report& report, const std::string& name, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report.add_error(name, e);
    }
}

void mgf_suite(Report& report, std::uint64_t seed) {
    Rng rng({seed, 1});
    std::vector<ShapeParams> sets;
    for (int i = 0; i < 20; ++i) sets.push_back(random_params(rng));

    guarded(report, "mgf.normalization", [&] {
        double worst = 0.0;
        for (const auto& p : sets) worst = std::max(worst, std::abs(mgf(p, 0.0) - 1.0));
        report.add("mgf.normalization", worst, 1e-12);
    });
    guarded(report, "mgf.mean", [&] {
        double worst = 0.0;
        for (const auto& p : sets) {
            const double h = 1e-6 / p.gbar;
            const double d = (mgf(p, h).real() - mgf(p, -h).real()) / (2.0 * h);
            worst = std::max(worst, rel(d, p.gbar));
        }
        report.add("mgf.mean", worst, 1e-5);
    });
    guarded(report, "mgf.two_route", [&] {
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            for (double s : {-0.1, -0.5, -1.0, -2.0, -5.0}) {
                const auto a = mgf(sets[i], s / sets[i].gbar);
                const auto b = mgf_via_conditional_average(sets[i], s / sets[i].gbar);
                worst = std::max(worst, std::abs(a - b) / std::abs(a));
            }
        }
        report.add("mgf.two_route", worst, 1e-8);
    });
}

void first_order_suite(Report& report, std::uint64_t seed) {
    const ShapeParams p{1.0, 1.0, 2.0, 10.0, 0.1, 0.0909};
    guarded(report, "pdf.normalization", [&] {
        double err = 0.0;
        const double upper = 50.0 * p.gbar;
        const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double g) { return g > 0.0 ? pdf_snr(p, g) : 0.0; }, 0.0, upper, 12, 1e-10, &err);
        report.add("pdf.normalization", std::abs(1.0 - mass) + chernoff_tail_bound(p, upper), 1e-6);
    });
    guarded(report, "cdf.derivative", [&] {
        double worst = 0.0;
        for (int i = 1; i <= 50; ++i) {
            const double g = 0.08 * i;
            const double h = 1e-4;
            const double d = (cdf_snr(p, g + h) - cdf_snr(p, g - h)) / (2.0 * h);
            worst = std::max(worst, std::abs(d - pdf_snr(p, g)));
        }
        report.add("cdf.derivative", worst, 1e-5);
    });
    guarded(report, "cdf.ks", [&] {
        const std::size_t n = 200000;
        auto samples = sample_power(to_physical(p), n, {seed, 2});
        std::sort(samples.begin(), samples.end());
        auto grid = [&](const std::vector<double>& x) {
            EvalGrid g;
            g.points = x;
            return cdf_snr(p, g);
        };
        const double d = ks_upper_bound(samples, grid, 2000);
        // 0.1% critical value of the KS distribution plus the checkpoint slack.
        report.add("cdf.ks", d, 1.95 / std::sqrt(static_cast<double>(n)) + 2.0 / 2000.0);
    });
}

void second_order_suite(Report& report, std::uint64_t seed) {
    const ShapeParams rayleigh{1.0, 1e-8, 1.0, 1.0, 1.0, 1.0};
    const DopplerContext ctx = DopplerContext::clarke(1.0);
    guarded(report, "lcr.rayleigh", [&] {
        double worst_lcr = 0.0;
        double worst_afd = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double u = 0.05 + (3.0 - 0.05) * i / 19.0;
            const double ref = std::sqrt(2.0 * std::numbers::pi) * u * std::exp(-u * u);
            const AfdResult a = afd(rayleigh, u, ctx);
            worst_lcr = std::max(worst_lcr, rel(a.lcr, ref));
            worst_afd = std::max(worst_afd, rel(a.value, -std::expm1(-u * u) / ref));
        }
        report.add("lcr.rayleigh", worst_lcr, 1e-4);
        report.add("afd.rayleigh", worst_afd, 1e-4);
    });
    guarded(report, "lcr.trace", [&] {
        const ShapeParams p{1.0, 5.0, 2.0, 1.0, 0.5, 1.0};
        const std::vector<double> u{std::pow(10.0, -10.0 / 20.0), 1.0};
        BatchTraceConfig cfg;
        cfg.realizations = 20;
        cfg.samples = 200000;
        const auto est = empirical_second_order_batch(to_physical(p, 1.0), ctx, u, cfg, {seed, 3});
        double worst = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) worst = std::max(worst, rel(est.lcr_hat[k], lcr(p, u[k], ctx)));
        report.add("lcr.trace", worst, 0.1);
    });
}

void sep_suite(Report& report) {
    const ShapeParams base{1.0, 10.0, 2.0, 4.0, 0.5, 1.0 / 6.0};
    guarded(report, "sep.routes", [&] {
        double worst = 0.0;
        for (double db = 0.0; db <= 30.0; db += 1.0) {
            ShapeParams p = base;
            p.gbar = std::pow(10.0, db / 10.0);
            worst = std::max(worst, rel(sep_dbpsk_explicit(p), sep_dbpsk_via_mgf(p)));
            for (int M : {2, 4, 8}) worst = std::max(worst, rel(sep_mfsk_explicit(p, M), sep_mfsk_via_mgf(p, M)));
        }
        report.add("sep.routes", worst, 1e-12);
    });
    guarded(report, "sep.limits", [&] {
        ShapeParams p = base;
        p.gbar = 1e-300;
        report.add_bool("sep.limits",
                        sep_dbpsk(p) == 0.5 && sep_mfsk_noncoherent(p, 2) == 0.5 && sep_mfsk_noncoherent(p, 4) == 0.75);
    });
    guarded(report, "sep.integration", [&] {
        ShapeParams p = base;
        p.gbar = 10.0;
        report.add("sep.integration", std::abs(sep_dbpsk_by_integration(p) - sep_dbpsk(p)), 1e-6);
    });
    guarded(report, "sep.ordering", [&] {
        bool ok = true;
        for (double db = 5.0; db <= 30.0; db += 1.0) {
            ShapeParams p = base;
            p.gbar = std::pow(10.0, db / 10.0);
            ok = ok && sep_dbpsk(p) < sep_mfsk_noncoherent(p, 2) && sep_mfsk_noncoherent(p, 2) < sep_mfsk_noncoherent(p, 4);
        }
        report.add_bool("sep.ordering", ok);
    });
}

void monte_carlo_suite(Report& report, std::uint64_t seed) {
    guarded(report, "mc.mean", [&] {
        const std::vector<ShapeParams> sets{{1.0, 0.0, 1.0, 1.0, 1.0, 0.5},
                                            {2.0, 10.0, 2.0, 1.5, 0.3, 0.7},
                                            {0.5, 1.0, 3.0, 0.5, 4.0, 0.1}};
        double worst = 0.0;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const std::size_t n = 200000;
            SampleOptions opts;
            opts.gbar = sets[i].gbar;
            const auto x = sample_power(to_physical(sets[i]), n, {seed, 10 + i}, opts);
            double mean = 0.0, sq = 0.0;
            for (double v : x) mean += v;
            mean /= n;
            for (double v : x) sq += (v - mean) * (v - mean);
            const double se = std::sqrt(sq / (n - 1.0) / n);
            worst = std::max(worst, std::abs(mean - sets[i].gbar) / se);
        }
        report.add("mc.mean_in_se", worst, 4.0);
    });
}

}  // namespace

nlohmann::ordered_json run_validation(const std::string& suite, std::uint64_t seed) {
    static const std::vector<std::string> kSuites{"all", "mgf", "first-order", "second-order", "sep", "monte-carlo"};
    if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end())
        throw std::invalid_argument("unknown suite '" + suite + "'");

    Report report;
    const bool all = suite == "all";
    if (all || suite == "mgf") mgf_suite(report, seed);
    if (all || suite == "first-order") first_order_suite(report, seed);
    if (all || suite == "second-order") second_order_suite(report, seed);
    if (all || suite == "sep") sep_suite(report);
    if (all || suite == "monte-carlo") monte_carlo_suite(report, seed);

    json out;
    out["schema"] = 1;
    out["tool"] = "fbfade";
    out["version"] = kToolVersion;
    out["suite"] = suite;
    out["seed"] = seed;
    out["pass"] = report.pass;
    out["checks"] = report.checks;
    return out;
}

}  // namespace fbfade::cli
