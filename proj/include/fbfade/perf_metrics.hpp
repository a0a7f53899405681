#pragma once

#include <cstdint>
#include <vector>

#include "fbfade/laplace_inversion.hpp"
#include "fbfade/model_params.hpp"

namespace fbfade {

enum class Scheme { DBPSK, NoncoherentMFSK };

struct SepQuery {
    Scheme scheme = Scheme::DBPSK;
    int m_ary = 2;                  ///< constellation size, M-FSK only
    std::vector<double> gbar_grid;  ///< linear mean SNRs
};

/// Largest M accepted by the M-FSK routines; C(M-1, n) stays exact in 64-bit integers.
inline constexpr int kMaxMAry = 64;

/// Exact binomial coefficient C(n, k) for n <= 64.
std::uint64_t binomial(int n, int k);

/// DBPSK symbol error probability 1/2 M(-1), evaluated from the explicit real-valued product form
/// and checked against the complex MGF to 1e-12 (NumericalError on mismatch).
double sep_dbpsk(const ShapeParams& params);
double sep_dbpsk_explicit(const ShapeParams& params);
double sep_dbpsk_via_mgf(const ShapeParams& params);

/// Noncoherent orthogonal M-FSK: sum_{n=1}^{M-1} (-1)^(n+1) C(M-1, n) / (n+1) * M(-n/(n+1)).
/// Terms come from the explicit form and are checked one by one against the MGF route.
/// DomainError for M outside [2, 64]; NumericalError when cancellation in the alternating sum
/// costs more than 1e-10 relative accuracy.
double sep_mfsk_noncoherent(const ShapeParams& params, int M);
double sep_mfsk_explicit(const ShapeParams& params, int M);
double sep_mfsk_via_mgf(const ShapeParams& params, int M);

/// Conditional error probabilities on an AWGN channel at SNR gamma.
double awgn_sep_dbpsk(double gamma);
double awgn_sep_mfsk_noncoherent(double gamma, int M);

/// SEP over query.gbar_grid with the other shape parameters taken from `params`.
std::vector<double> sep_curve(const ShapeParams& params, const SepQuery& query);

/// Integral of 1/2 e^-g f(g) over [0, 60 + 50 gbar] by adaptive Gauss-Kronrod, with the PDF
/// obtained by Laplace inversion. An independent check on sep_dbpsk.
double sep_dbpsk_by_integration(const ShapeParams& params, const InversionConfig& cfg = {});

}  // namespace fbfade
