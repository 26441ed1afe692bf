#include "emdipole/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace emdipole {

UnitVec3::UnitVec3(const Vec3& v) : v_(v) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > kUnitNormTolerance) {
    throw std::invalid_argument("direction is not a unit vector (norm " + std::to_string(v.norm()) + ")");
  }
}

UnitVec3 UnitVec3::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  return UnitVec3(Tag{}, v / n);
}

std::string_view to_string(DirectionProvenance p) {
  switch (p) {
    case DirectionProvenance::fibonacci: return "fibonacci";
    case DirectionProvenance::planar: return "planar";
    case DirectionProvenance::explicit_list: return "explicit";
  }
  return "explicit";
}

DirectionProvenance provenance_from_string(std::string_view s) {
  if (s == "fibonacci") return DirectionProvenance::fibonacci;
  if (s == "planar") return DirectionProvenance::planar;
  if (s == "explicit") return DirectionProvenance::explicit_list;
  throw std::invalid_argument("unknown direction provenance '" + std::string(s) + "'");
}

bool pairwise_non_collinear(std::span<const UnitVec3> directions) {
  for (std::size_t i = 0; i < directions.size(); ++i) {
    for (std::size_t j = i + 1; j < directions.size(); ++j) {
      if (directions[i].vec().cross(directions[j].vec()).norm() <= kDirectionTolerance) return false;
    }
  }
  return true;
}

DirectionSet::DirectionSet(std::vector<UnitVec3> directions, DirectionProvenance provenance)
    : directions_(std::move(directions)), provenance_(provenance) {
  if (directions_.empty()) throw std::invalid_argument("direction set must contain at least one direction");
  if (!pairwise_non_collinear(directions_)) {
    throw std::invalid_argument("direction set contains two collinear directions");
  }
  if (provenance_ == DirectionProvenance::planar) {
    for (const auto& d : directions_) {
      if (d[2] != 0.0) throw std::invalid_argument("planar direction set has a direction with nonzero x3");
    }
  }
}

DirectionSet fibonacci_directions(int count) {
  if (count < 1) throw std::invalid_argument("fibonacci_directions: L must be >= 1");
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<UnitVec3> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int l = 1; l <= count; ++l) {
    const double x3 = 1.0 - 2.0 * l / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - x3 * x3));
    const double azimuth = 2.0 * std::numbers::pi * l * phi;
    out.emplace_back(r * std::cos(azimuth), r * std::sin(azimuth), x3);
  }
  return DirectionSet(std::move(out), DirectionProvenance::fibonacci);
}

DirectionSet planar_directions(int count) {
  if (count < 1) throw std::invalid_argument("planar_directions: L must be >= 1");
  std::vector<UnitVec3> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int l = 1; l <= count; ++l) {
    const double angle = std::numbers::pi * l / count;
    out.emplace_back(std::cos(angle), std::sin(angle), 0.0);
  }
  return DirectionSet(std::move(out), DirectionProvenance::planar);
}

DirectionSet explicit_directions(std::vector<UnitVec3> directions) {
  return DirectionSet(std::move(directions), DirectionProvenance::explicit_list);
}

bool no_three_coplanar(std::span<const UnitVec3> d) {
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (std::abs(triple_product(d[i].vec(), d[j].vec(), d[k].vec())) <= kDirectionTolerance) return false;
  return true;
}

bool no_three_coplanar(const DirectionSet& ds) { return no_three_coplanar(ds.directions()); }

}  // namespace emdipole
