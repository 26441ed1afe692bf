#pragma once

#include <cstddef>
#include <vector>

#include "emdipole/geometry.hpp"
#include "emdipole/scene.hpp"

namespace emdipole {

/// Uniform wavenumber nodes k_j = j * k_max / N, j = 1..N (k = 0 is excluded).
class FrequencyGrid {
 public:
  FrequencyGrid(double k_max, std::size_t count);

  double k_max() const { return k_max_; }
  std::size_t size() const { return count_; }
  double step() const { return k_max_ / static_cast<double>(count_); }
  /// Node j in [0, size()) is the wavenumber (j + 1) * step().
  double node(std::size_t j) const { return static_cast<double>(j + 1) * step(); }

  /// Number of leading nodes with k_j <= k (relative slack 1e-12).
  std::size_t nodes_up_to(double k) const;

  /// Index of the node equal to `k` within relative tolerance 1e-9; throws if there is none.
  std::size_t index_of(double k) const;

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  double k_max_;
  std::size_t count_;
};

/// Node count giving step * r_max <= pi / 8 (at least 16 nodes per period of the slowest integrand), rounded
/// up to an even number so that k_max / 2 is a node.
std::size_t default_node_count(double k_max, double r_max);

enum class Sign : int { plus = 0, minus = 1 };

/// Electric far-field samples E(sigma * x_l, k_j) on a direction set and frequency grid.
class MeasurementSet {
 public:
  /// Zero-filled set.
  MeasurementSet(DirectionSet directions, FrequencyGrid grid);
  MeasurementSet(DirectionSet directions, FrequencyGrid grid, std::vector<CVec3> samples);

  const DirectionSet& directions() const { return directions_; }
  const FrequencyGrid& grid() const { return grid_; }
  std::size_t direction_count() const { return directions_.size(); }

  const CVec3& at(std::size_t l, Sign s, std::size_t j) const { return samples_[index(l, s, j)]; }
  CVec3& at(std::size_t l, Sign s, std::size_t j) { return samples_[index(l, s, j)]; }

  /// Flat storage, direction-major then sign (+, -) then frequency.
  const std::vector<CVec3>& samples() const { return samples_; }

  std::size_t index(std::size_t l, Sign s, std::size_t j) const {
    return (l * 2 + static_cast<std::size_t>(s)) * grid_.size() + j;
  }

  friend bool operator==(const MeasurementSet&, const MeasurementSet&) = default;

 private:
  DirectionSet directions_;
  FrequencyGrid grid_;
  std::vector<CVec3> samples_;
};

/// (ik/4pi) e^{-ik x.z} (x cross q)
CVec3 far_field_mag(const UnitVec3& x, const Vec3& z, const CVec3& q, double k);
/// (ik/4pi) e^{-ik x.z} x cross (q cross x)
CVec3 far_field_elec(const UnitVec3& x, const Vec3& z, const CVec3& q, double k);
CVec3 far_field(const Dipole& d, const UnitVec3& x, double k);
CVec3 far_field_scene(const UnitVec3& x, double k, const Scene& scene);

MeasurementSet simulate_measurements(const Scene& scene, const DirectionSet& ds, const FrequencyGrid& grid);

}  // namespace emdipole
