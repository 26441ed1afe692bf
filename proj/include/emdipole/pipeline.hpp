#pragma once

#include "emdipole/localization.hpp"
#include "emdipole/scene.hpp"
#include "emdipole/strengths.hpp"

namespace emdipole {

struct ReconstructionConfig {
  ImagingParams imaging{};                 // localization: K = 100, eps = 0.2, rho = 4
  double strength_k = kDefaultStrengthK;   // K used by the strength formulas
  double threshold = kDefaultPeakThreshold;
  // Keep a peak only if more than `threshold` of the directions are explained by the dipole
  // recovered there (see dipole_support).
  bool confirm_peaks = true;
  double support_tolerance = kSupportTolerance;
};

struct ReconstructionResult {
  IndicatorField field;
  ReconstructionReport report;
};

/// Locate both dipole kinds on `grid`, then recover each strength with a direction pair chosen
/// to keep every other located dipole (of either kind) off the pair's planes. If no pair avoids
/// all of them, only dipoles of the same kind are considered; if that fails too, the dipole is
/// listed under `failures`.
///
/// With `confirm_peaks`, every peak is first recovered against all peaks, scored with
/// dipole_support at the localization K and cut-off, and dropped into `rejected` unless its
/// support exceeds `threshold`. Strengths are then recomputed against the confirmed set only.
ReconstructionResult reconstruct(const MeasurementSet& ms, const SamplingGrid& grid, const ReconstructionConfig& config);

}  // namespace emdipole
