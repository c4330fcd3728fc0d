#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sll {

enum class ReadoutKind { dense, powerlaw, exponential, ultrasparse };

// Sorted nonincreasing, nonnegative, unit-norm readout vector.
struct Readout {
    std::vector<double> v;
    ReadoutKind kind = ReadoutKind::powerlaw;
    double beta = 0.0;   // powerlaw exponent
    double rate = 0.0;   // exponential decay rate
    int p = 0;           // ultrasparse support size

    int k() const { return static_cast<int>(v.size()); }
    double norm2() const;
};

// v_i^2 = i^{-2 beta} / sum_j j^{-2 beta}
Readout make_powerlaw_readout(int k, double beta);
// v_i proportional to exp(-rate * i)
Readout make_exponential_readout(int k, double rate);
// i.i.d. draws from values[] scaled by 1/sqrt(k), sorted, renormalized;
// values must be positive (e.g. a discretized density of sqrt(k) v)
Readout make_dense_readout(int k, const std::vector<double>& values,
                           std::uint64_t seed);
// uniform density on [lo, hi] / sqrt(normalizer), the paper's dense example
Readout make_dense_uniform_readout(int k, double lo, double hi,
                                   std::uint64_t seed);
// first p of the supplied positive entries, normalized; rest zero
Readout make_ultrasparse_readout(int k, const std::vector<double>& head);

Readout make_readout(const std::string& kind, int k, double beta, double rate,
                     int p, std::uint64_t seed);

} // namespace sll
