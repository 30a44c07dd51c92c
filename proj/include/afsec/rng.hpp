#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace afsec {

using Engine = std::mt19937_64;

/// Engine seeded from (seed, keys...). Distinct key tuples give independent
/// streams, so work can be split across threads without changing results.
Engine make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

/// CN(0, variance): real and imaginary parts independent N(0, variance / 2).
std::complex<double> complex_gaussian(Engine& engine, double variance);

/// Seed namespaces, mixed into the first key so oracle and harness streams never collide.
inline constexpr std::uint64_t kHarnessStreams = 0x4841524e455353ULL;
inline constexpr std::uint64_t kOracleStreams = 0x4f5241434c45ULL;

}  // namespace afsec
