#include "emdipole/forward.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace emdipole {

namespace {

void require_positive_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("wavenumber must be positive and finite");
}

// ik/4pi * e^{-ik x.z}
Complex phase_factor(const Vec3& x, const Vec3& z, double k) {
  const double arg = -k * x.dot(z);
  return Complex(0.0, k / (4.0 * std::numbers::pi)) * Complex(std::cos(arg), std::sin(arg));
}

}  // namespace

FrequencyGrid::FrequencyGrid(double k_max, std::size_t count) : k_max_(k_max), count_(count) {
  if (!(k_max > 0.0) || !std::isfinite(k_max)) throw std::invalid_argument("frequency grid: k_max must be positive");
  if (count < 2) throw std::invalid_argument("frequency grid: at least two nodes are required");
}

std::size_t FrequencyGrid::nodes_up_to(double k) const {
  if (!(k > 0.0)) return 0;
  const double limit = k * (1.0 + 1e-12);
  std::size_t n = static_cast<std::size_t>(std::floor(k / step())) + 1;
  n = std::min(n, count_);
  while (n > 0 && node(n - 1) > limit) --n;
  return n;
}

std::size_t FrequencyGrid::index_of(double k) const {
  const double pos = k / step() - 1.0;
  const auto j = static_cast<long long>(std::llround(pos));
  if (j < 0 || j >= static_cast<long long>(count_) ||
      std::abs(node(static_cast<std::size_t>(j)) - k) > 1e-9 * std::max(1.0, std::abs(k))) {
    throw std::invalid_argument("wavenumber " + std::to_string(k) + " is not a node of the frequency grid");
  }
  return static_cast<std::size_t>(j);
}

std::size_t default_node_count(double k_max, double r_max) {
  if (!(k_max > 0.0)) throw std::invalid_argument("default_node_count: k_max must be positive");
  const double r = std::max(r_max, 1e-3);
  auto n = static_cast<std::size_t>(std::ceil(8.0 * k_max * r / std::numbers::pi));
  n = std::max<std::size_t>(n, 2);
  if (n % 2 != 0) ++n;
  return n;
}

MeasurementSet::MeasurementSet(DirectionSet directions, FrequencyGrid grid)
    : directions_(std::move(directions)), grid_(grid), samples_(2 * directions_.size() * grid.size(), CVec3::Zero()) {}

MeasurementSet::MeasurementSet(DirectionSet directions, FrequencyGrid grid, std::vector<CVec3> samples)
    : directions_(std::move(directions)), grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != 2 * directions_.size() * grid_.size()) {
    throw std::invalid_argument("measurement set expects " + std::to_string(2 * directions_.size() * grid_.size()) +
                                " samples, got " + std::to_string(samples_.size()));
  }
  for (const auto& s : samples_) {
    if (!s.allFinite()) throw std::invalid_argument("measurement set contains a non-finite sample");
  }
}

CVec3 far_field_mag(const UnitVec3& x, const Vec3& z, const CVec3& q, double k) {
  require_positive_k(k);
  return phase_factor(x.vec(), z, k) * cross(x.vec(), q);
}

CVec3 far_field_elec(const UnitVec3& x, const Vec3& z, const CVec3& q, double k) {
  require_positive_k(k);
  return phase_factor(x.vec(), z, k) * cross(x.vec(), cross(q, x.vec()));
}

CVec3 far_field(const Dipole& d, const UnitVec3& x, double k) {
  return d.kind == DipoleKind::magnetic ? far_field_mag(x, d.location, d.strength, k)
                                        : far_field_elec(x, d.location, d.strength, k);
}

CVec3 far_field_scene(const UnitVec3& x, double k, const Scene& scene) {
  require_positive_k(k);
  CVec3 total = CVec3::Zero();
  for (const auto& d : scene.dipoles()) total += far_field(d, x, k);
  return total;
}

MeasurementSet simulate_measurements(const Scene& scene, const DirectionSet& ds, const FrequencyGrid& grid) {
  MeasurementSet ms(ds, grid);
  const auto cells = static_cast<long long>(2 * ds.size());
  // Each (direction, sign) row is written by exactly one iteration.
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < cells; ++c) {
    const auto l = static_cast<std::size_t>(c / 2);
    const auto sign = static_cast<Sign>(c % 2);
    const UnitVec3 x = sign == Sign::plus ? ds[l] : -ds[l];
    for (std::size_t j = 0; j < grid.size(); ++j) ms.at(l, sign, j) = far_field_scene(x, grid.node(j), scene);
  }
  return ms;
}

}  // namespace emdipole
