#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "emdipole/imaging.hpp"

namespace emdipole {

/// Rectangular lattice of sampling points. An axis with count 1 is frozen at its lower coordinate,
/// which is how planar grids are encoded.
struct SamplingGrid {
  Vec3 lower = Vec3::Zero();
  Vec3 upper = Vec3::Zero();
  std::array<std::size_t, 3> counts{1, 1, 1};

  void validate() const;
  std::size_t size() const { return counts[0] * counts[1] * counts[2]; }
  /// Lexicographic (i, j, k) -> i * ny * nz + j * nz + k.
  std::size_t linear_index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * counts[1] + j) * counts[2] + k;
  }
  std::array<std::size_t, 3> multi_index(std::size_t index) const;
  double coordinate(int axis, std::size_t i) const;
  Vec3 node(std::size_t index) const;
  /// Spacing along `axis` (0 for frozen axes).
  double spacing(int axis) const;
  /// Length of one cell diagonal over the non-frozen axes.
  double cell_diagonal() const;
  /// Diagonal of the whole box.
  double diameter() const { return (upper - lower).norm(); }
};

/// Sampled indicators. `*_base` are the vote fractions, the others are raised to rho.
struct IndicatorField {
  SamplingGrid grid;
  double rho = 1.0;
  std::vector<double> base_mag, base_elec;
  std::vector<double> values_mag, values_elec;
};

/// Both indicators at every node. Nodes are independent, so evaluation is parallel and the
/// result does not depend on thread count.
IndicatorField evaluate_field(const MeasurementSet& ms, const SamplingGrid& grid, const ImagingParams& params);
IndicatorField evaluate_field(const BandIntegrator& integrator, const SamplingGrid& grid, const ImagingParams& params);

struct Peak {
  Vec3 location;
  std::size_t index = 0;  // linear node index
  double value = 0.0;     // rho-powered indicator
  double base = 0.0;      // vote fraction
};

inline constexpr double kDefaultPeakThreshold = 0.5;

/// Grid nodes whose vote fraction exceeds `threshold` and that are local maxima over the
/// 26-neighborhood. A plateau of equal values counts once, at its lowest linear index, and only
/// if no neighbor of the plateau is larger. Sorted by descending value, then index.
std::vector<Peak> extract_peaks(const IndicatorField& field, DipoleKind kind, double threshold = kDefaultPeakThreshold);

}  // namespace emdipole
