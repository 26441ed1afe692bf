#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace emdipole {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

/// Tolerance on |a x b| (pairwise) and |a . (b x c)| (triples) for direction-set checks.
inline constexpr double kDirectionTolerance = 1e-10;
inline constexpr double kUnitNormTolerance = 1e-12;

/// A direction on the unit sphere. Construction normalizes nothing; it validates.
class UnitVec3 {
 public:
  /// Throws std::invalid_argument unless |v| = 1 within kUnitNormTolerance.
  explicit UnitVec3(const Vec3& v);
  UnitVec3(double x, double y, double z) : UnitVec3(Vec3(x, y, z)) {}

  /// Rescales `v` to unit length; rejects the zero vector.
  static UnitVec3 normalized(const Vec3& v);

  const Vec3& vec() const { return v_; }
  double operator[](int i) const { return v_[i]; }
  UnitVec3 operator-() const { return UnitVec3(Tag{}, -v_); }

  friend bool operator==(const UnitVec3& a, const UnitVec3& b) { return a.v_ == b.v_; }

 private:
  struct Tag {};
  UnitVec3(Tag, const Vec3& v) : v_(v) {}
  Vec3 v_;
};

enum class DirectionProvenance { fibonacci, planar, explicit_list };

std::string_view to_string(DirectionProvenance p);
DirectionProvenance provenance_from_string(std::string_view s);

/// Ordered observation directions. Index l in [0, size()) addresses direction l+1 of the lattice.
class DirectionSet {
 public:
  /// Validates the set: non-empty, pairwise non-collinear, and in-plane when provenance is planar.
  DirectionSet(std::vector<UnitVec3> directions, DirectionProvenance provenance);

  std::size_t size() const { return directions_.size(); }
  const UnitVec3& operator[](std::size_t l) const { return directions_[l]; }
  std::span<const UnitVec3> directions() const { return directions_; }
  DirectionProvenance provenance() const { return provenance_; }

  auto begin() const { return directions_.begin(); }
  auto end() const { return directions_.end(); }

  friend bool operator==(const DirectionSet&, const DirectionSet&) = default;

 private:
  std::vector<UnitVec3> directions_;
  DirectionProvenance provenance_;
};

/// Golden-ratio lattice: x3 = 1 - 2l/L, azimuth 2*pi*l*phi, l = 1..L.
DirectionSet fibonacci_directions(int count);

/// Half-circle in the x1-x2 plane: (cos(pi l/L), sin(pi l/L), 0), l = 1..L.
DirectionSet planar_directions(int count);

DirectionSet explicit_directions(std::vector<UnitVec3> directions);

bool pairwise_non_collinear(std::span<const UnitVec3> directions);
bool no_three_coplanar(const DirectionSet& ds);
bool no_three_coplanar(std::span<const UnitVec3> directions);

// Real/complex vector helpers. Complex vectors are paired with real directions through the
// bilinear (non-conjugating) products, which is what the far-field algebra needs.

inline CVec3 complexify(const Vec3& v) { return v.cast<Complex>(); }

// Eigen's cross conjugates complex results, so the bilinear form is spelled out.
inline CVec3 cross(const CVec3& a, const CVec3& b) {
  return CVec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}
inline CVec3 cross(const Vec3& a, const CVec3& b) { return cross(complexify(a), b); }
inline CVec3 cross(const CVec3& a, const Vec3& b) { return cross(a, complexify(b)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) { return a.cross(b); }

/// Bilinear dot a . b (no conjugation).
inline Complex dot(const Vec3& a, const CVec3& b) { return a.cast<Complex>().transpose() * b; }
inline Complex dot(const CVec3& a, const CVec3& b) { return a.transpose() * b; }

/// Hermitian product a . conj(b).
inline Complex dot_conj(const CVec3& a, const CVec3& b) { return a.transpose() * b.conjugate(); }

inline double triple_product(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

/// Euclidean norm over the six real components.
inline double norm(const CVec3& v) { return v.norm(); }

}  // namespace emdipole
