#include "emdipole/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace emdipole {

namespace {

constexpr double kInPlaneTolerance = 1e-12;

}  // namespace

PlaneArrangement::PlaneArrangement(std::vector<Vec3> locations, std::vector<DipoleKind> kinds, DirectionSet directions)
    : locations_(std::move(locations)), kinds_(std::move(kinds)), directions_(std::move(directions)) {
  if (kinds_.size() != locations_.size()) throw std::invalid_argument("plane arrangement: one kind per location");
  for (std::size_t i = 0; i < locations_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if ((locations_[i] - locations_[j]).norm() <= kMinLocationSeparation)
        throw std::invalid_argument("plane arrangement: locations must be distinct");
}

PlaneArrangement::PlaneArrangement(std::vector<Vec3> locations, DirectionSet directions)
    : PlaneArrangement(locations, std::vector<DipoleKind>(locations.size(), DipoleKind::magnetic),
                       std::move(directions)) {}

PlaneArrangement PlaneArrangement::from_scene(const Scene& scene, DirectionSet directions) {
  std::vector<Vec3> locations;
  std::vector<DipoleKind> kinds;
  for (const auto& d : scene.dipoles()) {
    locations.push_back(d.location);
    kinds.push_back(d.kind);
  }
  return PlaneArrangement(std::move(locations), std::move(kinds), std::move(directions));
}

int count_planes(const Vec3& z, const PlaneArrangement& pa, PlaneSubset subset, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("count_planes: tolerance must be positive");
  int count = 0;
  for (std::size_t m = 0; m < pa.locations().size(); ++m) {
    const DipoleKind kind = pa.kinds()[m];
    if (subset == PlaneSubset::magnetic_only && kind != DipoleKind::magnetic) continue;
    if (subset == PlaneSubset::electric_only && kind != DipoleKind::electric) continue;
    const Vec3 delta = z - pa.locations()[m];
    for (const auto& x : pa.directions())
      if (std::abs(x.vec().dot(delta)) <= tol) ++count;
  }
  return count;
}

int count_planes_planar(const Vec3& z, const PlaneArrangement& pa, double tol) {
  auto in_plane = [](const Vec3& v) { return std::abs(v[2]) <= kInPlaneTolerance; };
  if (!in_plane(z)) throw std::invalid_argument("count_planes_planar: sample point is out of plane");
  for (const auto& loc : pa.locations())
    if (!in_plane(loc)) throw std::invalid_argument("count_planes_planar: source location is out of plane");
  for (const auto& d : pa.directions())
    if (!in_plane(d.vec())) throw std::invalid_argument("count_planes_planar: direction is out of plane");
  return count_planes(z, pa, PlaneSubset::all, tol);
}

DirectionCheck check_directions(const DirectionSet& ds, std::size_t magnetic, std::size_t electric) {
  DirectionCheck c;
  c.direction_count = ds.size();
  c.pairwise_non_collinear = pairwise_non_collinear(ds.directions());
  c.no_three_coplanar = no_three_coplanar(ds);
  c.in_plane = std::all_of(ds.begin(), ds.end(), [](const UnitVec3& d) { return std::abs(d[2]) <= kInPlaneTolerance; });
  c.required_general = 4 * std::max(magnetic, electric);
  c.required_planar = 2 * std::max(magnetic, electric) + 1;
  c.meets_general = c.no_three_coplanar && c.direction_count >= c.required_general;
  c.meets_planar = c.in_plane && c.pairwise_non_collinear && c.direction_count >= c.required_planar;
  return c;
}

}  // namespace emdipole
