#include "fbfade/trace_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "fbfade/errors.hpp"

namespace fbfade {

namespace {

constexpr std::array<char, 4> kMagic{'F', 'B', 'T', 'R'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& os, T value) {
    std::array<unsigned char, sizeof(T)> bytes{};
    std::uint64_t bits = 0;
    if constexpr (sizeof(T) == 8)
        bits = std::bit_cast<std::uint64_t>(value);
    else
        bits = std::bit_cast<std::uint32_t>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    os.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T get_le(std::istream& is) {
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) throw DomainError("trace", "truncated input");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    if constexpr (sizeof(T) == 8)
        return std::bit_cast<T>(bits);
    else
        return std::bit_cast<T>(static_cast<std::uint32_t>(bits));
}

}  // namespace

void write_trace_binary(std::ostream& os, const FadingTrace& trace) {
    os.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(os, kVersion);
    put_le<double>(os, trace.dt);
    put_le<double>(os, trace.fd);
    put_le<double>(os, trace.xi);
    put_le<std::uint64_t>(os, trace.samples.size());
    for (double v : trace.samples) put_le<double>(os, v);
}

FadingTrace read_trace_binary(std::istream& is) {
    std::array<char, 4> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw DomainError("trace", "bad magic");
    if (get_le<std::uint32_t>(is) != kVersion) throw DomainError("trace", "unsupported version");
    FadingTrace trace;
    trace.dt = get_le<double>(is);
    trace.fd = get_le<double>(is);
    trace.xi = get_le<double>(is);
    const auto n = get_le<std::uint64_t>(is);
    trace.samples.resize(n);
    for (auto& v : trace.samples) v = get_le<double>(is);
    return trace;
}

void write_trace_csv(std::ostream& os, const FadingTrace& trace) {
    os << "time,envelope\n";
    char buf[64];
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", static_cast<double>(i) * trace.dt, trace.samples[i]);
        os << buf;
    }
}

void save_trace(const std::string& path, const FadingTrace& trace, bool csv) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DomainError("out", "cannot open " + path);
    if (csv)
        write_trace_csv(os, trace);
    else
        write_trace_binary(os, trace);
    if (!os) throw DomainError("out", "write failed for " + path);
}

}  // namespace fbfade
