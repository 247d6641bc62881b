#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "qpalm/types.hpp"

namespace qpalm {

// Derives an independent substream seed from a base seed and a label, so that
// every consumer of randomness can be rewired without perturbing the others.
std::uint64_t derive_seed(std::uint64_t base, std::string_view stream_name);

// Seeded generator with hand-rolled uniform/normal transforms. The standard
// distributions are not bit-identical across library implementations, so we
// only rely on the mt19937_64 engine (which is fully specified) and do the
// float conversions ourselves.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform();
    // Uniform in [lo, hi).
    double uniform(double lo, double hi);
    // Standard normal via Box-Muller (one spare cached).
    double normal();
    // Integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    Vec uniform_vec(int n, double lo, double hi);
    Vec normal_vec(int n);
    Mat normal_mat(int rows, int cols);

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace qpalm
