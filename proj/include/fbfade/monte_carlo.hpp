#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fbfade/model_params.hpp"
#include "fbfade/rng.hpp"
#include "fbfade/second_order.hpp"

namespace fbfade {

/// How the total LoS amplitudes p, q are spread over the clusters. Only p^2 and q^2 matter.
enum class LosSplit { Uniform, SingleCluster };

struct SampleOptions {
    std::optional<double> gbar;  ///< output SNR scale; defaults to omega (i.e. raw power)
    LosSplit split = LosSplit::Uniform;
};

/// Throws DomainError for negative variances/amplitudes, mu_int < 1, m <= 0 or omega <= 0.
void validate(const PhysicalParams& phys);

/// i.i.d. SNR draws from the cluster model: xi^2 ~ Gamma(m, 1/m) and
/// W = sum_i (X_i + p_i xi)^2 + (Y_i + q_i xi)^2 with X_i ~ N(0, sigma_x2), Y_i ~ N(0, sigma_y2),
/// scaled by gbar/omega. Work is split into fixed blocks with their own child streams, so the
/// output does not depend on the number of threads.
std::vector<double> sample_power(const PhysicalParams& phys, std::size_t n, const RngSpec& rng,
                                 const SampleOptions& opts = {});

/// Unit-variance Gaussian process with autocorrelation J0(2 pi fd tau), synthesized as
/// sqrt(2/M) sum_j cos(2 pi fd cos(theta + 2 pi j/M) t + phi_j) with random theta and phases.
/// An odd M keeps every Doppler frequency distinct, so time averages converge to J0.
class SosProcess {
public:
    SosProcess(double fd, double dt, int sinusoids, Rng& rng);
    double next();

private:
    void resync();

    std::vector<double> omega_;  // angular frequencies
    std::vector<double> phase_;
    std::vector<double> re_, im_;
    std::vector<double> rot_re_, rot_im_;
    double dt_;
    double amplitude_;
    std::uint64_t index_ = 0;
};

struct TraceOptions {
    int sinusoids = 33;             ///< per Gaussian process, >= 16
    LosSplit split = LosSplit::Uniform;
    std::optional<double> fixed_xi; ///< overrides the first draw of xi
};

/// Streaming generator of the envelope R(t)/sqrt(omega): 2 mu SoS processes scaled by sigma_x, sigma_y
/// plus the LoS term xi (p_i, q_i). xi is redrawn every ts_ratio/fd seconds (never when ts_ratio is inf).
class TraceGenerator {
public:
    TraceGenerator(const PhysicalParams& phys, double dt, const DopplerContext& ctx, double ts_ratio,
                   const RngSpec& rng, const TraceOptions& opts = {});

    void fill(std::span<double> out);
    double xi() const { return xi_; }

private:
    void draw_xi();

    PhysicalParams phys_;
    Rng rng_;
    std::vector<SosProcess> x_, y_;
    std::vector<double> p_, q_;
    double sx_, sy_;
    double xi_ = 1.0;
    std::uint64_t block_len_ = 0;  // 0: xi never redrawn
    std::uint64_t emitted_ = 0;
};

struct FadingTrace {
    std::vector<double> samples;  ///< envelope normalized by sqrt(omega)
    double dt = 0.0;
    double fd = 0.0;
    double xi = 1.0;              ///< LoS fluctuation of the first (or only) block
    PhysicalParams params;
};

/// Throws DomainError when dt*fd > 0.01, ts_ratio < 1 or duration < dt.
FadingTrace sample_trace(const PhysicalParams& phys, double duration, double dt, const DopplerContext& ctx,
                         double ts_ratio, const RngSpec& rng, const TraceOptions& opts = {});

/// Integer crossing bookkeeping; counters from independent realizations merge by addition.
/// An upcrossing is a sample strictly below u followed by one at or above u.
struct CrossingCounts {
    std::vector<double> thresholds;
    std::vector<std::uint64_t> upcrossings;
    std::vector<std::uint64_t> below;  ///< samples strictly below u
    std::uint64_t samples = 0;
    double dt = 0.0;

    CrossingCounts() = default;
    CrossingCounts(std::vector<double> u, double dt);

    /// Counts within one contiguous block; `previous` is the sample preceding it, if any.
    void add(std::span<const double> block, std::optional<double> previous = std::nullopt);
    void merge(const CrossingCounts& other);
};

struct EmpiricalSecondOrder {
    std::vector<double> thresholds;
    std::vector<double> lcr_hat;             ///< crossings per second
    std::vector<double> afd_hat;             ///< seconds; +inf with no crossing
    std::vector<std::uint64_t> n_crossings;
    std::vector<double> fraction_below;      ///< time fraction below u
    std::vector<bool> insufficient;          ///< fewer than 50 crossings
    double total_time = 0.0;
};

EmpiricalSecondOrder summarize(const CrossingCounts& counts);
EmpiricalSecondOrder empirical_second_order(const FadingTrace& trace, const std::vector<double>& thresholds);

struct BatchTraceConfig {
    int realizations = 200;
    std::size_t samples = 1000000;  ///< per realization
    double dt_fd = 0.002;
    int sinusoids = 33;
    double ts_ratio = std::numeric_limits<double>::infinity();
    /// With a single xi per realization, draw xi^2 at the stratified quantiles (r + U_r)/R of
    /// Gamma(m, 1/m) instead of independently; unbiased, with far less realization-to-realization variance.
    bool stratify_xi = true;
};

/// Merged crossing statistics over independent realizations, one child stream per realization.
EmpiricalSecondOrder empirical_second_order_batch(const PhysicalParams& phys, const DopplerContext& ctx,
                                                  const std::vector<double>& thresholds, const BatchTraceConfig& cfg,
                                                  const RngSpec& rng);

struct Histogram {
    std::vector<double> edges;      ///< bins + 1 edges
    std::vector<double> density;    ///< count / (n * width), n includes samples outside the range
    std::vector<double> std_error;  ///< sqrt(p (1 - p) / n) / width
    std::size_t n = 0;
};

/// Density histogram with multinomial standard errors; bins >= 10.
Histogram histogram_pdf(std::span<const double> samples, int bins, double lo, double hi);
/// Same over [min, max] of the samples.
Histogram histogram_pdf(std::span<const double> samples, int bins);

/// Exact Kolmogorov-Smirnov distance of sorted samples to cdf.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Rigorous upper bound on the KS distance that needs the CDF only at about `checkpoints` sample
/// quantiles: between consecutive checkpoints both the ECDF and the (monotone) CDF are bracketed by
/// their endpoint values. `cdf_grid` receives strictly increasing points.
double ks_upper_bound(std::span<const double> sorted,
                      const std::function<std::vector<double>(const std::vector<double>&)>& cdf_grid,
                      std::size_t checkpoints = 20000);

}  // namespace fbfade
