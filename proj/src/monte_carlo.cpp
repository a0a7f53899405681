#include "fbfade/monte_carlo.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "fbfade/errors.hpp"
#include "fbfade/parallel.hpp"

namespace fbfade {

namespace {

constexpr std::size_t kSampleBlock = 1 << 16;
constexpr std::uint64_t kResyncEvery = 1024;

struct ClusterLos {
    std::vector<double> p;
    std::vector<double> q;
};

ClusterLos split_los(const PhysicalParams& phys, LosSplit split) {
    const auto n = static_cast<std::size_t>(phys.mu_int);
    ClusterLos out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    if (split == LosSplit::SingleCluster) {
        out.p[0] = phys.p;
        out.q[0] = phys.q;
    } else {
        const double r = 1.0 / std::sqrt(static_cast<double>(n));
        std::fill(out.p.begin(), out.p.end(), phys.p * r);
        std::fill(out.q.begin(), out.q.end(), phys.q * r);
    }
    return out;
}

double draw_xi(Rng& rng, double m) { return std::sqrt(rng.gamma(m) / m); }

}  // namespace

void validate(const PhysicalParams& phys) {
    if (phys.mu_int < 1) throw DomainError("mu_int", "must be >= 1");
    if (!(phys.sigma_x2 >= 0.0) || !(phys.sigma_y2 >= 0.0)) throw DomainError("sigma", "variances must be >= 0");
    if (!(phys.p >= 0.0) || !(phys.q >= 0.0)) throw DomainError("los", "amplitudes must be >= 0");
    if (!(phys.m > 0.0)) throw DomainError("m", "must be > 0");
    if (!(phys.omega > 0.0)) throw DomainError("omega", "must be > 0");
}

std::vector<double> sample_power(const PhysicalParams& phys, std::size_t n, const RngSpec& rng,
                                 const SampleOptions& opts) {
    validate(phys);
    if (n < 1) throw DomainError("n", "must be >= 1");
    const double gbar = opts.gbar.value_or(phys.omega);
    if (!(gbar > 0.0)) throw DomainError("gbar", "must be > 0");

    const ClusterLos los = split_los(phys, opts.split);
    const double sx = std::sqrt(phys.sigma_x2);
    const double sy = std::sqrt(phys.sigma_y2);
    const double scale = gbar / phys.omega;

    std::vector<double> out(n);
    const std::size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
    parallel_for(blocks, [&](std::size_t b) {
        Rng r(child_stream(rng, b));
        const std::size_t end = std::min(n, (b + 1) * kSampleBlock);
        for (std::size_t i = b * kSampleBlock; i < end; ++i) {
            const double xi = draw_xi(r, phys.m);
            double w = 0.0;
            for (int k = 0; k < phys.mu_int; ++k) {
                const double x = sx * r.normal() + los.p[k] * xi;
                const double y = sy * r.normal() + los.q[k] * xi;
                w += x * x + y * y;
            }
            out[i] = w * scale;
        }
    });
    return out;
}

SosProcess::SosProcess(double fd, double dt, int sinusoids, Rng& rng)
    : dt_(dt), amplitude_(std::sqrt(2.0 / sinusoids)) {
    if (sinusoids < 16) throw DomainError("sinusoids", "must be >= 16");
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    omega_.resize(sinusoids);
    phase_.resize(sinusoids);
    for (int j = 0; j < sinusoids; ++j) {
        omega_[j] = 2.0 * std::numbers::pi * fd * std::cos(theta + 2.0 * std::numbers::pi * j / sinusoids);
        phase_[j] = 2.0 * std::numbers::pi * rng.uniform();
    }
    re_.resize(sinusoids);
    im_.resize(sinusoids);
    rot_re_.resize(sinusoids);
    rot_im_.resize(sinusoids);
    for (int j = 0; j < sinusoids; ++j) {
        rot_re_[j] = std::cos(omega_[j] * dt_);
        rot_im_[j] = std::sin(omega_[j] * dt_);
    }
}

void SosProcess::resync() {
    const double t = static_cast<double>(index_) * dt_;
    for (std::size_t j = 0; j < omega_.size(); ++j) {
        const double a = omega_[j] * t + phase_[j];
        re_[j] = std::cos(a);
        im_[j] = std::sin(a);
    }
}

double SosProcess::next() {
    if (index_ % kResyncEvery == 0) resync();
    double sum = 0.0;
    const std::size_t n = omega_.size();
    for (std::size_t j = 0; j < n; ++j) {
        sum += re_[j];
        const double r = re_[j] * rot_re_[j] - im_[j] * rot_im_[j];
        im_[j] = re_[j] * rot_im_[j] + im_[j] * rot_re_[j];
        re_[j] = r;
    }
    ++index_;
    return amplitude_ * sum;
}

TraceGenerator::TraceGenerator(const PhysicalParams& phys, double dt, const DopplerContext& ctx, double ts_ratio,
                               const RngSpec& rng, const TraceOptions& opts)
    : phys_(phys), rng_(rng), sx_(std::sqrt(phys.sigma_x2)), sy_(std::sqrt(phys.sigma_y2)) {
    validate(phys);
    validate(ctx);
    if (!(dt > 0.0)) throw DomainError("dt", "must be > 0");
    if (dt * ctx.fd > 0.01) throw DomainError("dt", "dt * fd must be <= 0.01");
    if (!(ts_ratio >= 1.0)) throw DomainError("ts_ratio", "must be >= 1");

    const ClusterLos los = split_los(phys, opts.split);
    p_ = los.p;
    q_ = los.q;
    x_.reserve(phys.mu_int);
    y_.reserve(phys.mu_int);
    for (int k = 0; k < phys.mu_int; ++k) {
        x_.emplace_back(ctx.fd, dt, opts.sinusoids, rng_);
        y_.emplace_back(ctx.fd, dt, opts.sinusoids, rng_);
    }
    if (std::isfinite(ts_ratio))
        block_len_ = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(ts_ratio / (ctx.fd * dt))));
    if (opts.fixed_xi) {
        if (!(*opts.fixed_xi >= 0.0)) throw DomainError("xi", "must be >= 0");
        xi_ = *opts.fixed_xi;
    } else {
        draw_xi();
    }
}

void TraceGenerator::draw_xi() { xi_ = fbfade::draw_xi(rng_, phys_.m); }

void TraceGenerator::fill(std::span<double> out) {
    const double inv_omega = 1.0 / phys_.omega;
    for (double& v : out) {
        if (block_len_ != 0 && emitted_ != 0 && emitted_ % block_len_ == 0) draw_xi();
        double w = 0.0;
        for (std::size_t k = 0; k < x_.size(); ++k) {
            const double a = sx_ * x_[k].next() + p_[k] * xi_;
            const double b = sy_ * y_[k].next() + q_[k] * xi_;
            w += a * a + b * b;
        }
        v = std::sqrt(w * inv_omega);
        ++emitted_;
    }
}

FadingTrace sample_trace(const PhysicalParams& phys, double duration, double dt, const DopplerContext& ctx,
                         double ts_ratio, const RngSpec& rng, const TraceOptions& opts) {
    if (!(duration >= dt)) throw DomainError("duration", "must cover at least one sample");
    TraceGenerator gen(phys, dt, ctx, ts_ratio, rng, opts);
    FadingTrace trace;
    trace.dt = dt;
    trace.fd = ctx.fd;
    trace.xi = gen.xi();
    trace.params = phys;
    trace.samples.resize(static_cast<std::size_t>(std::llround(duration / dt)));
    gen.fill(trace.samples);
    return trace;
}

CrossingCounts::CrossingCounts(std::vector<double> u, double dt_)
    : thresholds(std::move(u)), upcrossings(thresholds.size(), 0), below(thresholds.size(), 0), dt(dt_) {
    for (double x : thresholds)
        if (!(x > 0.0)) throw DomainError("thresholds", "must be > 0");
}

void CrossingCounts::add(std::span<const double> block, std::optional<double> previous) {
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        const double u = thresholds[k];
        std::uint64_t up = 0;
        std::uint64_t lo = 0;
        bool was_below = previous ? *previous < u : false;
        bool have_prev = previous.has_value();
        for (double r : block) {
            const bool is_below = r < u;
            if (have_prev && was_below && !is_below) ++up;
            lo += is_below;
            was_below = is_below;
            have_prev = true;
        }
        upcrossings[k] += up;
        below[k] += lo;
    }
    samples += block.size();
}

void CrossingCounts::merge(const CrossingCounts& other) {
    if (other.thresholds != thresholds || other.dt != dt) throw DomainError("counts", "incompatible counters");
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        upcrossings[k] += other.upcrossings[k];
        below[k] += other.below[k];
    }
    samples += other.samples;
}

EmpiricalSecondOrder summarize(const CrossingCounts& counts) {
    EmpiricalSecondOrder out;
    out.thresholds = counts.thresholds;
    out.total_time = static_cast<double>(counts.samples) * counts.dt;
    const std::size_t n = counts.thresholds.size();
    out.lcr_hat.resize(n);
    out.afd_hat.resize(n);
    out.fraction_below.resize(n);
    out.insufficient.resize(n);
    out.n_crossings = counts.upcrossings;
    for (std::size_t k = 0; k < n; ++k) {
        const double c = static_cast<double>(counts.upcrossings[k]);
        const double below_time = static_cast<double>(counts.below[k]) * counts.dt;
        out.lcr_hat[k] = out.total_time > 0.0 ? c / out.total_time : 0.0;
        out.afd_hat[k] = c > 0.0 ? below_time / c : std::numeric_limits<double>::infinity();
        out.fraction_below[k] = out.total_time > 0.0 ? below_time / out.total_time : 0.0;
        out.insufficient[k] = counts.upcrossings[k] < 50;
    }
    return out;
}

EmpiricalSecondOrder empirical_second_order(const FadingTrace& trace, const std::vector<double>& thresholds) {
    for (double r : trace.samples)
        if (!(r >= 0.0)) throw DomainError("trace", "samples must be >= 0");
    CrossingCounts counts(thresholds, trace.dt);
    counts.add(trace.samples);
    return summarize(counts);
}

EmpiricalSecondOrder empirical_second_order_batch(const PhysicalParams& phys, const DopplerContext& ctx,
                                                  const std::vector<double>& thresholds, const BatchTraceConfig& cfg,
                                                  const RngSpec& rng) {
    validate(phys);
    validate(ctx);
    if (cfg.realizations < 1) throw DomainError("realizations", "must be >= 1");
    if (cfg.samples < 2) throw DomainError("samples", "must be >= 2");
    const double dt = cfg.dt_fd / ctx.fd;
    const bool stratify = cfg.stratify_xi && !std::isfinite(cfg.ts_ratio);

    std::vector<CrossingCounts> parts(cfg.realizations);
    parallel_for(parts.size(), [&](std::size_t r) {
        const RngSpec spec = child_stream(rng, r);
        TraceOptions opts;
        opts.sinusoids = cfg.sinusoids;
        if (stratify) {
            Rng aux(child_stream(spec, 1));
            const double level = (static_cast<double>(r) + aux.uniform()) / cfg.realizations;
            opts.fixed_xi = std::sqrt(boost::math::gamma_p_inv(phys.m, level) / phys.m);
        }
        TraceGenerator gen(phys, dt, ctx, cfg.ts_ratio, spec, opts);

        CrossingCounts counts(thresholds, dt);
        std::vector<double> block(std::min<std::size_t>(cfg.samples, kSampleBlock));
        std::optional<double> last;
        for (std::size_t done = 0; done < cfg.samples;) {
            const std::size_t len = std::min(block.size(), cfg.samples - done);
            std::span<double> view(block.data(), len);
            gen.fill(view);
            counts.add(view, last);
            last = view.back();
            done += len;
        }
        parts[r] = std::move(counts);
    });

    CrossingCounts total(thresholds, dt);
    for (const auto& part : parts) total.merge(part);
    return summarize(total);
}

Histogram histogram_pdf(std::span<const double> samples, int bins, double lo, double hi) {
    if (bins < 10) throw DomainError("bins", "must be >= 10");
    if (!(hi > lo)) throw DomainError("range", "hi must exceed lo");
    if (samples.empty()) throw DomainError("samples", "must not be empty");

    Histogram h;
    h.n = samples.size();
    h.edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i) h.edges[i] = lo + (hi - lo) * i / bins;
    std::vector<std::uint64_t> counts(bins, 0);
    const double width = (hi - lo) / bins;
    for (double x : samples) {
        if (!(x >= lo) || x > hi) continue;
        const auto i = std::min(bins - 1, static_cast<int>((x - lo) / width));
        ++counts[i];
    }
    h.density.resize(bins);
    h.std_error.resize(bins);
    const double n = static_cast<double>(h.n);
    for (int i = 0; i < bins; ++i) {
        const double w = h.edges[i + 1] - h.edges[i];
        const double p = static_cast<double>(counts[i]) / n;
        h.density[i] = p / w;
        h.std_error[i] = std::sqrt(p * (1.0 - p) / n) / w;
    }
    return h;
}

Histogram histogram_pdf(std::span<const double> samples, int bins) {
    if (samples.empty()) throw DomainError("samples", "must not be empty");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    return histogram_pdf(samples, bins, *lo, *hi);
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double F = cdf(sorted[i]);
        d = std::max({d, (i + 1.0) / n - F, F - static_cast<double>(i) / n});
    }
    return d;
}

double ks_upper_bound(std::span<const double> sorted,
                      const std::function<std::vector<double>(const std::vector<double>&)>& cdf_grid,
                      std::size_t checkpoints) {
    const std::size_t n = sorted.size();
    if (n == 0) throw DomainError("samples", "must not be empty");
    checkpoints = std::max<std::size_t>(2, std::min(checkpoints, n));

    // Indices of distinct checkpoint values, always including the first and last sample.
    std::vector<std::size_t> idx;
    std::vector<double> points;
    for (std::size_t j = 0; j < checkpoints; ++j) {
        const std::size_t i = j * (n - 1) / (checkpoints - 1);
        if (!points.empty() && !(sorted[i] > points.back())) continue;
        idx.push_back(i);
        points.push_back(sorted[i]);
    }
    const std::vector<double> F = cdf_grid(points);
    if (F.size() != points.size()) throw DomainError("cdf_grid", "returned the wrong number of values");

    const double nn = static_cast<double>(n);
    double bound = F.front();
    // On [points[j], points[j+1]) the ECDF lies in [(idx[j]+1)/n, idx[j+1]/n] and F in [F[j], F[j+1]].
    for (std::size_t j = 0; j + 1 < points.size(); ++j) {
        const double ecdf_lo = (idx[j] + 1.0) / nn;
        const double ecdf_hi = static_cast<double>(idx[j + 1]) / nn;
        bound = std::max({bound, ecdf_hi - F[j], F[j + 1] - ecdf_lo});
    }
    bound = std::max(bound, 1.0 - F.back());
    return bound;
}

}  // namespace fbfade
