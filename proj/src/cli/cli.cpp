#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "fbfade/cli.hpp"
#include "fbfade/errors.hpp"
#include "fbfade/first_order.hpp"
#include "fbfade/monte_carlo.hpp"
#include "fbfade/parallel.hpp"
#include "fbfade/perf_metrics.hpp"
#include "fbfade/second_order.hpp"
#include "fbfade/trace_io.hpp"

namespace fbfade::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct ArgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Shared {
    double gbar = 1.0;
    double kappa = 0.0;
    double mu = 1.0;
    double m = 1.0;
    double eta = 1.0;
    std::string rho = "1";
    std::string grid;
    std::string out;
    std::string format = "csv";
    std::string config;
    std::uint64_t seed = 0;
};

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
    bool db = false;
};

double parse_number(const std::string& text, const std::string& what) {
    if (text == "inf" || text == "+inf" || text == "Inf") return kInf;
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw ArgError(what + ": not a number: '" + text + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ArgError(what + ": not a number: '" + text + "'");
    }
}

GridSpec parse_grid(const std::string& text) {
    if (text.empty()) throw ArgError("--grid is required (lo:hi:n[:dB])");
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3 && parts.size() != 4) throw ArgError("--grid must be lo:hi:n[:dB]");
    GridSpec g;
    g.lo = parse_number(parts[0], "--grid lo");
    g.hi = parse_number(parts[1], "--grid hi");
    const double n = parse_number(parts[2], "--grid n");
    if (!(n >= 1.0) || n != std::floor(n) || n > 1e7) throw ArgError("--grid n must be a positive integer");
    g.n = static_cast<int>(n);
    if (parts.size() == 4) {
        if (parts[3] != "dB" && parts[3] != "db") throw ArgError("--grid suffix must be dB");
        g.db = true;
    }
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || (g.n > 1 && !(g.hi > g.lo)))
        throw ArgError("--grid needs finite lo < hi");
    return g;
}

// ":dB" keeps the endpoints as linear values and spaces the points evenly in dB between them.
std::vector<double> grid_values(const GridSpec& g) {
    if (g.db && !(g.lo > 0.0)) throw ArgError("--grid with dB spacing needs lo > 0");
    std::vector<double> v(g.n);
    const double l0 = g.db ? std::log10(g.lo) : 0.0;
    const double l1 = g.db ? std::log10(g.hi) : 0.0;
    for (int i = 0; i < g.n; ++i) {
        if (i == 0 || i == g.n - 1) {
            v[i] = i == 0 ? g.lo : g.hi;
        } else {
            const double f = static_cast<double>(i) / (g.n - 1);
            v[i] = g.db ? std::pow(10.0, l0 + (l1 - l0) * f) : g.lo + (g.hi - g.lo) * f;
        }
    }
    return v;
}

std::vector<double> positive_grid(const Shared& sh) {
    auto v = grid_values(parse_grid(sh.grid));
    EvalGrid g;
    g.points = v;
    validate(g);
    return v;
}

ShapeParams shape_of(const Shared& sh) {
    const double rho = parse_number(sh.rho, "--rho");
    ShapeParams p;
    p.gbar = sh.gbar;
    p.kappa = sh.kappa;
    p.mu = sh.mu;
    p.m = sh.m;
    p.eta = sh.eta;
    p.los_frac = los_frac_from_rho(rho);
    return validate(p);
}

json number_or_string(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

json base_meta(const std::string& command, const Shared& sh, const ShapeParams& p) {
    json meta;
    meta["tool"] = "fbfade";
    meta["version"] = kToolVersion;
    meta["command"] = command;
    meta["params"] = {{"gbar", p.gbar},          {"kappa", p.kappa}, {"mu", p.mu},
                      {"m", p.m},                {"eta", number_or_string(p.eta)},
                      {"rho", sh.rho},           {"los_frac", p.los_frac}};
    if (!sh.grid.empty()) meta["grid"] = sh.grid;
    return meta;
}

void emit(const CurveTable& table, const Shared& sh, std::ostream& out) {
    if (sh.format != "csv" && sh.format != "json") throw ArgError("--format must be csv or json");
    std::ofstream file;
    std::ostream* os = &out;
    if (!sh.out.empty()) {
        file.open(sh.out, std::ios::binary);
        if (!file) throw ArgError("cannot open --out " + sh.out);
        os = &file;
    }
    if (sh.format == "csv")
        table.write_csv(*os);
    else
        table.write_json(*os);
    os->flush();
}

template <typename F>
std::vector<double> map_parallel(const std::vector<double>& x, F&& f) {
    std::vector<double> y(x.size());
    parallel_for(x.size(), [&](std::size_t i) { y[i] = f(x[i]); });
    return y;
}

// Config values replace whatever the command line set for the same option.
void apply_config(const std::string& path, CLI::App& app, CLI::App& sub) {
    std::ifstream is(path);
    if (!is) throw ArgError("cannot read --config " + path);
    json cfg;
    try {
        cfg = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ArgError(std::string("--config: ") + e.what());
    }
    if (!cfg.is_object() || !cfg.contains("schema") || cfg["schema"] != 1)
        throw ArgError("--config must be a JSON object with \"schema\": 1");
    for (const auto& [key, value] : cfg.items()) {
        if (key == "schema") continue;
        if (key == "config") throw ArgError("--config: nested config is not allowed");
        CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (!opt) opt = app.get_option_no_throw("--" + key);
        if (!opt && key == "model") opt = sub.get_option_no_throw("model");
        if (!opt) throw ArgError("--config: unknown key '" + key + "'");
        std::string text;
        if (value.is_string())
            text = value.get<std::string>();
        else if (value.is_boolean())
            text = value.get<bool>() ? "true" : "false";
        else if (value.is_number())
            text = format_double(value.get<double>());
        else
            throw ArgError("--config: value of '" + key + "' must be a string, number or boolean");
        opt->clear();
        opt->add_result(text);
        opt->run_callback();
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fluctuating Beckmann fading model: first- and second-order statistics, SEP and Monte Carlo",
                 "fbfade"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Shared sh;
    app.add_option("--gbar", sh.gbar, "mean SNR (linear)");
    app.add_option("--kappa", sh.kappa, "LoS to diffuse power ratio");
    app.add_option("--mu", sh.mu, "cluster parameter");
    app.add_option("--m", sh.m, "LoS fluctuation severity");
    app.add_option("--eta", sh.eta, "diffuse in-phase/quadrature power ratio (accepts inf)");
    app.add_option("--rho", sh.rho, "LoS in-phase/quadrature amplitude ratio (accepts inf)");
    app.add_option("--grid", sh.grid, "abscissa grid lo:hi:n[:dB]");
    app.add_option("--out", sh.out, "output file (default: stdout)");
    app.add_option("--format", sh.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", sh.seed, "RNG seed for stochastic commands");
    app.add_option("--config", sh.config, "JSON config (\"schema\": 1); its values override flags");

    auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help)->fallthrough(); };

    auto* c_mgf = sub("mgf", "MGF on a grid of real s (linear grid, s may be negative)");

    bool envelope = false;
    double omega = 1.0;
    auto* c_pdf = sub("pdf", "PDF of the SNR, or of the envelope with --envelope");
    auto* c_cdf = sub("cdf", "CDF of the SNR, or of the envelope with --envelope");
    for (auto* c : {c_pdf, c_cdf}) {
        c->add_flag("--envelope", envelope, "abscissa is the envelope r");
        c->add_option("--omega", omega, "E[R^2] for envelope statistics");
    }

    double fd = 1.0;
    std::string quad = "tanh-sinh";
    int quad_points = 200;
    int mc_realizations = 0;
    std::size_t mc_samples = 1000000;
    double dt_fd = 0.002;
    int sinusoids = 33;
    auto* c_lcr = sub("lcr", "level crossing rate of the RMS-normalized envelope (needs --rho inf)");
    auto* c_afd = sub("afd", "average fade duration of the RMS-normalized envelope (needs --rho inf)");
    for (auto* c : {c_lcr, c_afd}) {
        c->add_option("--fd", fd, "maximum Doppler shift, Hz");
        c->add_option("--quad", quad, "tanh-sinh or gauss-jacobi")->check(CLI::IsMember({"tanh-sinh", "gauss-jacobi"}));
        c->add_option("--quad-points", quad_points, "quadrature nodes (doubled for the internal check)");
        c->add_option("--mc-realizations", mc_realizations, "add trace-counting estimates from this many realizations");
        c->add_option("--mc-samples", mc_samples, "samples per realization");
        c->add_option("--dt-fd", dt_fd, "sample interval times fd");
        c->add_option("--sinusoids", sinusoids, "sinusoids per Gaussian process");
    }

    std::string scheme = "dbpsk";
    int m_ary = 2;
    std::size_t mc_draws = 0;
    auto* c_sep = sub("sep", "symbol error probability over a grid of mean SNR");
    c_sep->add_option("--scheme", scheme, "dbpsk or mfsk")->check(CLI::IsMember({"dbpsk", "mfsk"}));
    c_sep->add_option("--M", m_ary, "M-FSK constellation size");
    c_sep->add_option("--mc-draws", mc_draws, "add a Monte Carlo estimate from this many SNR draws");

    std::size_t n_samples = 10000;
    std::string split = "uniform";
    int hist_bins = 0;
    auto* c_sample = sub("sample", "i.i.d. SNR samples from the cluster model (integer mu)");
    c_sample->add_option("--n", n_samples, "number of samples");
    c_sample->add_option("--split", split, "LoS split over clusters")->check(CLI::IsMember({"uniform", "single"}));
    c_sample->add_option("--hist", hist_bins, "emit a density histogram with this many bins instead (range from --grid if given)");

    double duration = 100.0;
    std::string ts_ratio = "inf";
    std::string trace_format = "binary";
    auto* c_trace = sub("trace", "time-correlated envelope trace (Clarke Doppler)");
    c_trace->add_option("--duration", duration, "seconds");
    c_trace->add_option("--fd", fd, "maximum Doppler shift, Hz");
    c_trace->add_option("--dt-fd", dt_fd, "sample interval times fd (<= 0.01)");
    c_trace->add_option("--ts-ratio", ts_ratio, "xi is redrawn every ts_ratio/fd seconds (inf: once)");
    c_trace->add_option("--sinusoids", sinusoids, "sinusoids per Gaussian process");
    c_trace->add_option("--split", split, "LoS split over clusters")->check(CLI::IsMember({"uniform", "single"}));
    c_trace->add_option("--trace-format", trace_format, "binary or csv")->check(CLI::IsMember({"binary", "csv"}));

    std::string suite = "all";
    auto* c_validate = sub("validate", "run the consistency and Monte Carlo oracle suites");
    c_validate->add_option("--suite", suite, "all, mgf, first-order, second-order, sep or monte-carlo");

    std::string model;
    double legacy_q = 0.0, legacy_K = 0.0, legacy_r = 0.0;
    auto* c_reduce = sub("reduce", "FB parameters of a legacy fading model");
    c_reduce->add_option("model", model, "rayleigh, nakagami-m, hoyt, eta-mu, rice, ...")->required();
    auto* o_q = c_reduce->add_option("--q", legacy_q, "Hoyt/Beckmann variance ratio");
    auto* o_K = c_reduce->add_option("--K", legacy_K, "Rice/Beckmann K factor");
    auto* o_r = c_reduce->add_option("--r", legacy_r, "Beckmann LoS amplitude ratio");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "fbfade: " << e.what() << '\n';
        return 2;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        if (!sh.config.empty()) apply_config(sh.config, app, *active);

        if (active == c_validate) {
            const json report = run_validation(suite, sh.seed);
            std::ofstream file;
            std::ostream* os = &out;
            if (!sh.out.empty()) {
                file.open(sh.out, std::ios::binary);
                if (!file) throw ArgError("cannot open --out " + sh.out);
                os = &file;
            }
            *os << report.dump(2) << '\n';
            return report["pass"].get<bool>() ? 0 : 1;
        }

        if (active == c_reduce) {
            const auto which = legacy_model_from_string(model);
            if (!which) throw ArgError("unknown model '" + model + "'");
            LegacyParams lp;
            lp.gbar = sh.gbar;
            auto given = [&](const char* name) { return app.get_option(name)->count() > 0; };
            if (given("--m")) lp.m = sh.m;
            if (given("--mu")) lp.mu = sh.mu;
            if (given("--eta")) lp.eta = sh.eta;
            if (given("--kappa")) lp.kappa = sh.kappa;
            if (o_q->count() > 0) lp.q = legacy_q;
            if (o_K->count() > 0) lp.K = legacy_K;
            if (o_r->count() > 0) lp.r = legacy_r;
            const ShapeParams p = special_case(*which, lp);
            CurveTable t;
            t.meta["tool"] = "fbfade";
            t.meta["version"] = kToolVersion;
            t.meta["command"] = "reduce";
            t.meta["model"] = std::string(to_string(*which));
            t.add_column("gbar", {p.gbar});
            t.add_column("kappa", {p.kappa});
            t.add_column("mu", {p.mu});
            t.add_column("m", {p.m});
            t.add_column("eta", {p.eta});
            t.add_column("rho", {p.rho()});
            t.add_column("los_frac", {p.los_frac});
            emit(t, sh, out);
            return 0;
        }

        const ShapeParams p = shape_of(sh);
        CurveTable t;
        t.meta = base_meta(active->get_name(), sh, p);

        if (active == c_mgf) {
            const GridSpec g = parse_grid(sh.grid);
            if (g.db) throw ArgError("mgf takes a linear grid of s values");
            const auto s = grid_values(g);
            t.add_column("s", s);
            t.add_column("mgf", map_parallel(s, [&](double x) { return mgf(p, x).real(); }));
        } else if (active == c_pdf || active == c_cdf) {
            const bool is_pdf = active == c_pdf;
            const auto x = positive_grid(sh);
            std::vector<double> y;
            if (envelope) {
                t.meta["options"] = {{"envelope", true}, {"omega", omega}};
                y = map_parallel(x, [&](double r) {
                    return is_pdf ? pdf_envelope(p, r, omega) : cdf_envelope(p, r, omega);
                });
            } else {
                y = map_parallel(x, [&](double g) { return is_pdf ? pdf_snr(p, g) : cdf_snr(p, g); });
            }
            if (!is_pdf)
                for (std::size_t i = 1; i < y.size(); ++i) y[i] = std::max(y[i], y[i - 1]);
            t.add_column(envelope ? "r" : "gamma", x);
            t.add_column(is_pdf ? "pdf" : "cdf", y);
        } else if (active == c_lcr || active == c_afd) {
            const auto u = positive_grid(sh);
            const DopplerContext ctx = DopplerContext::clarke(fd);
            LcrConfig lc;
            lc.quad_scheme = quad == "gauss-jacobi" ? QuadScheme::GaussJacobi : QuadScheme::TanhSinh;
            lc.quad_points = quad_points;
            t.meta["options"] = {{"fd", fd}, {"quad", quad}, {"quad_points", quad_points}};
            t.add_column("u", u);
            if (active == c_lcr) {
                t.add_column("lcr", map_parallel(u, [&](double x) { return lcr(p, x, ctx, lc); }));
            } else {
                std::vector<AfdResult> res(u.size());
                parallel_for(u.size(), [&](std::size_t i) { res[i] = afd(p, u[i], ctx, lc); });
                std::vector<double> a, l, c, flag;
                for (const auto& r : res) {
                    a.push_back(r.value);
                    l.push_back(r.lcr);
                    c.push_back(r.cdf);
                    flag.push_back(r.underflow ? 1.0 : 0.0);
                }
                t.add_column("afd", a);
                t.add_column("lcr", l);
                t.add_column("cdf", c);
                t.add_column("underflow", flag);
            }
            if (mc_realizations > 0) {
                BatchTraceConfig bc;
                bc.realizations = mc_realizations;
                bc.samples = mc_samples;
                bc.dt_fd = dt_fd;
                bc.sinusoids = sinusoids;
                const auto est = empirical_second_order_batch(to_physical(p, 1.0), ctx, u, bc, {sh.seed, 0});
                t.meta["rng"] = {{"seed", sh.seed}, {"stream", 0}};
                t.meta["monte_carlo"] = {{"realizations", mc_realizations}, {"samples", mc_samples},
                                         {"dt_fd", dt_fd}, {"sinusoids", sinusoids}};
                std::vector<double> crossings(est.n_crossings.begin(), est.n_crossings.end());
                t.add_column(active == c_lcr ? "lcr_mc" : "afd_mc", active == c_lcr ? est.lcr_hat : est.afd_hat);
                t.add_column("crossings", crossings);
            }
        } else if (active == c_sep) {
            SepQuery q;
            q.scheme = scheme == "mfsk" ? Scheme::NoncoherentMFSK : Scheme::DBPSK;
            q.m_ary = m_ary;
            q.gbar_grid = positive_grid(sh);
            t.meta["options"] = {{"scheme", scheme}, {"M", m_ary}};
            t.add_column("gbar", q.gbar_grid);
            t.add_column("sep", sep_curve(p, q));
            if (mc_draws > 0) {
                ShapeParams unit = p;
                unit.gbar = 1.0;
                SampleOptions so;
                so.gbar = 1.0;
                const auto x = sample_power(to_physical(unit, 1.0), mc_draws, {sh.seed, 0}, so);
                std::vector<double> mean, se;
                for (double g : q.gbar_grid) {
                    double s1 = 0.0, s2 = 0.0;
                    for (double v : x) {
                        const double e = q.scheme == Scheme::DBPSK ? awgn_sep_dbpsk(g * v)
                                                                  : awgn_sep_mfsk_noncoherent(g * v, m_ary);
                        s1 += e;
                        s2 += e * e;
                    }
                    const double n = static_cast<double>(x.size());
                    const double mu_hat = s1 / n;
                    mean.push_back(mu_hat);
                    se.push_back(std::sqrt(std::max(0.0, s2 / n - mu_hat * mu_hat) / (n - 1.0)));
                }
                t.meta["rng"] = {{"seed", sh.seed}, {"stream", 0}};
                t.meta["monte_carlo"] = {{"draws", mc_draws}};
                t.add_column("sep_mc", mean);
                t.add_column("sep_mc_se", se);
            }
        } else if (active == c_sample) {
            SampleOptions so;
            so.gbar = p.gbar;
            so.split = split == "single" ? LosSplit::SingleCluster : LosSplit::Uniform;
            const auto x = sample_power(to_physical(p), n_samples, {sh.seed, 0}, so);
            t.meta["rng"] = {{"seed", sh.seed}, {"stream", 0}};
            t.meta["options"] = {{"n", n_samples}, {"split", split}, {"hist", hist_bins}};
            if (hist_bins > 0) {
                // --grid, when given, fixes the bin range; only its endpoints are used.
                Histogram h;
                if (sh.grid.empty()) {
                    h = histogram_pdf(x, hist_bins);
                } else {
                    const GridSpec g = parse_grid(sh.grid);
                    h = histogram_pdf(x, hist_bins, g.lo, g.hi);
                }
                std::vector<double> lo(h.edges.begin(), h.edges.end() - 1), hi(h.edges.begin() + 1, h.edges.end());
                t.add_column("bin_lo", lo);
                t.add_column("bin_hi", hi);
                t.add_column("density", h.density);
                t.add_column("std_error", h.std_error);
            } else {
                t.add_column("snr", x);
            }
        } else if (active == c_trace) {
            const DopplerContext ctx = DopplerContext::clarke(fd);
            const double ratio = parse_number(ts_ratio, "--ts-ratio");
            TraceOptions to;
            to.sinusoids = sinusoids;
            to.split = split == "single" ? LosSplit::SingleCluster : LosSplit::Uniform;
            const FadingTrace tr = sample_trace(to_physical(p, 1.0), duration, dt_fd / fd, ctx, ratio, {sh.seed, 0}, to);
            if (trace_format == "binary") {
                if (sh.out.empty()) throw ArgError("trace --trace-format binary needs --out");
                save_trace(sh.out, tr, false);
            } else if (sh.out.empty()) {
                write_trace_csv(out, tr);
            } else {
                save_trace(sh.out, tr, true);
            }
            return 0;
        }
        emit(t, sh, out);
        return 0;
    } catch (const ArgError& e) {
        err << "fbfade: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "fbfade: invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "fbfade: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "fbfade: numerical error: " << e.what() << '\n';
        return 3;
    } catch (const ConvergenceError& e) {
        err << "fbfade: convergence failure: " << e.what() << '\n';
        return 3;
    } catch (const CLI::ParseError& e) {
        err << "fbfade: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace fbfade::cli
