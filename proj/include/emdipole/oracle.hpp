#pragma once

#include <cstddef>
#include <vector>

#include "emdipole/geometry.hpp"
#include "emdipole/scene.hpp"

namespace emdipole {

/// Planes {z : x_l . (z - z_m) = 0} generated by source locations and observation directions.
class PlaneArrangement {
 public:
  PlaneArrangement(std::vector<Vec3> locations, std::vector<DipoleKind> kinds, DirectionSet directions);
  /// All sources treated as magnetic.
  PlaneArrangement(std::vector<Vec3> locations, DirectionSet directions);
  static PlaneArrangement from_scene(const Scene& scene, DirectionSet directions);

  const std::vector<Vec3>& locations() const { return locations_; }
  const std::vector<DipoleKind>& kinds() const { return kinds_; }
  const DirectionSet& directions() const { return directions_; }

 private:
  std::vector<Vec3> locations_;
  std::vector<DipoleKind> kinds_;
  DirectionSet directions_;
};

enum class PlaneSubset { all, magnetic_only, electric_only };

inline constexpr double kDefaultPlaneTolerance = 1e-9;

/// Number of pairs (l, m) in the subset with |x_l . (z - z_m)| <= tol.
int count_planes(const Vec3& z, const PlaneArrangement& pa, PlaneSubset subset = PlaneSubset::all,
                 double tol = kDefaultPlaneTolerance);

/// In-plane variant: z, every location and every direction must have third component 0
/// (|x3| <= 1e-12), otherwise std::invalid_argument.
int count_planes_planar(const Vec3& z, const PlaneArrangement& pa, double tol = kDefaultPlaneTolerance);

/// Whether a direction set satisfies the hypotheses of the uniqueness results for M1 magnetic
/// and M2 electric dipoles.
struct DirectionCheck {
  std::size_t direction_count = 0;
  bool pairwise_non_collinear = false;
  bool no_three_coplanar = false;
  bool in_plane = false;
  std::size_t required_general = 0;  // L >= max(4 M1, 4 M2)
  std::size_t required_planar = 0;   // L >  max(2 M1, 2 M2)
  bool meets_general = false;        // no-three-coplanar and count bound
  bool meets_planar = false;         // in-plane, pairwise independent and count bound
};

DirectionCheck check_directions(const DirectionSet& ds, std::size_t magnetic, std::size_t electric);

}  // namespace emdipole
