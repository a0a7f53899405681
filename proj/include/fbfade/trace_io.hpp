#pragma once

#include <iosfwd>
#include <string>

#include "fbfade/monte_carlo.hpp"

namespace fbfade {

/// Binary layout, little-endian: "FBTR", u32 version (1), f64 dt, f64 fd, f64 xi, u64 n, n x f64 samples.
void write_trace_binary(std::ostream& os, const FadingTrace& trace);
/// Reads the binary layout; the physical parameters are not stored and come back defaulted.
/// Throws DomainError on a bad magic, unknown version or truncated input.
FadingTrace read_trace_binary(std::istream& is);

/// CSV with header "time,envelope"; values printed with %.17g.
void write_trace_csv(std::ostream& os, const FadingTrace& trace);

void save_trace(const std::string& path, const FadingTrace& trace, bool csv);

}  // namespace fbfade
