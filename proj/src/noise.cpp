#include "emdipole/noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace emdipole {

namespace {

std::mt19937_64 block_stream(std::uint64_t seed, std::size_t j, Sign sign) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(static_cast<std::uint64_t>(j) >> 32),
                    static_cast<std::uint32_t>(sign)};
  return std::mt19937_64(seq);
}

}  // namespace

MeasurementSet add_noise(const MeasurementSet& ms, const NoiseSpec& spec) {
  if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta)) throw std::invalid_argument("noise level must be >= 0");
  MeasurementSet out = ms;
  if (spec.delta == 0.0) return out;

  const std::size_t L = ms.direction_count();
  const std::size_t N = ms.grid().size();
  const auto blocks = static_cast<long long>(2 * N);

#pragma omp parallel for schedule(static)
  for (long long b = 0; b < blocks; ++b) {
    const auto j = static_cast<std::size_t>(b / 2);
    const auto sign = static_cast<Sign>(b % 2);
    auto rng = block_stream(spec.seed, j, sign);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<CVec3> draw(L);
    double data_norm2 = 0.0, draw_norm2 = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      for (int c = 0; c < 3; ++c) {
        const double re = normal(rng);
        const double im = normal(rng);
        draw[l][c] = Complex(re, im);
      }
      data_norm2 += ms.at(l, sign, j).squaredNorm();
      draw_norm2 += draw[l].squaredNorm();
    }
    const double scale = spec.delta * std::sqrt(data_norm2) / std::sqrt(draw_norm2);
    for (std::size_t l = 0; l < L; ++l) out.at(l, sign, j) += scale * draw[l];
  }
  return out;
}

}  // namespace emdipole
