#pragma once

#include <cstdint>

#include "emdipole/forward.hpp"

namespace emdipole {

struct NoiseSpec {
  double delta = 0.0;  // relative Frobenius noise level per (frequency, sign) block
  std::uint64_t seed = 0;
};

/// Perturbs each L x 3 block F(k_j) of the +x and -x samples independently:
///   F^delta = F + delta * |F| * (R1 + i R2) / |R1 + i R2|
/// with R1, R2 standard normal and |.| the Frobenius norm. Each block draws from its own
/// mt19937_64 stream seeded by (seed, j, sign), so the result does not depend on evaluation order.
MeasurementSet add_noise(const MeasurementSet& ms, const NoiseSpec& spec);

}  // namespace emdipole
