#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "nibe/group.hpp"

namespace nibe::test {

inline SourceElement toy_elem(const BilinearGroup& G, std::uint64_t v) {
    return G.exp(G.generator(), Scalar{Int(v)});
}

inline std::uint64_t toy_value(const SourceElement& e) {
    std::uint64_t v = 0;
    for (unsigned char b : e.bytes) v = (v << 8) | b;
    return v;
}

inline std::uint64_t toy_value(const TargetElement& e) {
    std::uint64_t v = 0;
    for (unsigned char b : e.bytes) v = (v << 8) | b;
    return v;
}

// Chi-square statistic for uniform bins.
inline double chi_square(const std::vector<std::uint64_t>& counts, std::uint64_t total) {
    double expected = static_cast<double>(total) / counts.size();
    double stat = 0;
    for (std::uint64_t c : counts) {
        double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

// Critical value at alpha = 0.001 via the Wilson-Hilferty approximation.
inline double chi_square_crit_001(std::size_t dof) {
    double d = static_cast<double>(dof);
    double z = 3.0902;  // upper 0.1% quantile of the standard normal
    double t = 1.0 - 2.0 / (9.0 * d) + z * std::sqrt(2.0 / (9.0 * d));
    return d * t * t * t;
}

// 3-sigma band for a Bernoulli(p) rate estimated from n samples.
inline double three_sigma(double p, std::uint64_t n) {
    return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace nibe::test
