#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emdipole/geometry.hpp"

namespace emdipole {

enum class DipoleKind { magnetic, electric };

std::string_view to_string(DipoleKind kind);
DipoleKind dipole_kind_from_string(std::string_view s);

/// Point source. `strength` is the polarization strength q = tau * p; only the product is observable.
struct Dipole {
  DipoleKind kind = DipoleKind::magnetic;
  Vec3 location = Vec3::Zero();
  CVec3 strength = CVec3::Zero();
};

inline constexpr double kMinLocationSeparation = 1e-9;

/// Ground-truth dipole array. Rejects zero strengths and coincident locations.
class Scene {
 public:
  Scene() = default;
  explicit Scene(std::vector<Dipole> dipoles);

  std::span<const Dipole> dipoles() const { return dipoles_; }
  std::size_t size() const { return dipoles_.size(); }
  bool empty() const { return dipoles_.empty(); }
  std::size_t magnetic_count() const;
  std::size_t electric_count() const { return size() - magnetic_count(); }

  /// Largest |z_m| over the array (0 when empty).
  double max_radius() const;

 private:
  std::vector<Dipole> dipoles_;
};

/// |q_rec - q_true| / |q_true| over the six real components. Rejects q_true = 0.
double relative_error(const CVec3& q_true, const CVec3& q_rec);

/// One dipole produced by the reconstruction pipeline.
struct RecoveredDipole {
  DipoleKind kind = DipoleKind::magnetic;
  Vec3 location = Vec3::Zero();
  CVec3 strength = CVec3::Zero();
  std::size_t first_direction = 0;
  std::size_t second_direction = 0;
  double k_max = 0.0;
  double support = 0.0;  // fraction of directions explained by this dipole; 0 when not checked
};

/// A located dipole whose strength could not be recovered.
struct RecoveryFailure {
  DipoleKind kind = DipoleKind::magnetic;
  Vec3 location = Vec3::Zero();
  std::string reason;
};

// Indicator peak whose band integrals are not explained by a single dipole at that node.
struct RejectedCandidate {
  DipoleKind kind = DipoleKind::magnetic;
  Vec3 location = Vec3::Zero();
  double support = 0.0;
};

struct ReconstructionReport {
  std::vector<RecoveredDipole> dipoles;
  std::vector<RecoveryFailure> failures;
  std::vector<RejectedCandidate> rejected;
};

struct DipoleMatch {
  std::size_t truth_index = 0;
  std::size_t report_index = 0;
  double location_error = 0.0;
  bool kind_correct = false;
  double strength_error = 0.0;
};

struct MatchResult {
  std::vector<DipoleMatch> matches;
  std::vector<std::size_t> missed;    // truth indices without a partner
  std::vector<std::size_t> spurious;  // report indices without a partner
};

/// Greedy nearest-neighbor pairing of truth and report dipoles within `radius`.
/// Candidate pairs are taken in order of increasing distance (ties: lower truth, then report index).
MatchResult match_report(const Scene& truth, const ReconstructionReport& report, double radius);

}  // namespace emdipole
