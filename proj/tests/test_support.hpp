#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "emdipole/scene.hpp"

namespace emdipole::testing {

inline Dipole mag(Vec3 z, CVec3 q) { return {DipoleKind::magnetic, z, q}; }
inline Dipole elec(Vec3 z, CVec3 q) { return {DipoleKind::electric, z, q}; }
inline CVec3 cv(Complex a, Complex b, Complex c) { return CVec3(a, b, c); }

// Three magnetic and three electric dipoles on the coordinate axes.
inline Scene six_mixed_scene() {
  return Scene({
      mag({-1, 0, 0}, cv(1, 1, -1)),
      mag({0, -1, 0}, cv(-0.5, 0, 1)),
      mag({0, 0, -1}, cv(-1, 0.2, 0)),
      elec({1, 0, 0}, cv(1, 1, 1)),
      elec({0, 1, 0}, cv(0.5, 0, 1)),
      elec({0, 0, 1}, cv(1, 0.2, 0)),
  });
}

// Nineteen magnetic dipoles in the plane x3 = 0 with single-axis complex strengths.
inline Scene nineteen_planar_scene() {
  using C = Complex;
  const std::vector<std::pair<Vec3, CVec3>> rows = {
      {{1.4, 1.4, 0}, cv(C(1.20, 1.49), 0, 0)},   {{0.8, 1.4, 0}, cv(0, C(-1.40, -0.63), 0)},
      {{0.4, 1.0, 0}, cv(C(1.00, -0.96), 0, 0)},  {{-0.2, 1.0, 0}, cv(C(1.20, 0.84), 0, 0)},
      {{-0.8, 1.0, 0}, cv(0, C(0.83, -1.41), 0)}, {{-1.2, 0.6, 0}, cv(C(0.90, 1.43), 0, 0)},
      {{0, 0.6, 0}, cv(0, 0, C(1.35, -0.97))},    {{-0.8, -0.2, 0}, cv(0, 0, C(1.19, 1.28))},
      {{-1.2, -0.2, 0}, cv(C(1.45, -0.58), 0, 0)}, {{-0.8, -0.6, 0}, cv(0, 0, C(0.67, 1.44))},
      {{-0.6, -0.8, 0}, cv(C(-1.08, -1.47), 0, 0)}, {{-0.2, -1.2, 0}, cv(C(1.00, 1.39), 0, 0)},
      {{-0.2, -0.8, 0}, cv(0, C(-1.16, 1.44), 0)}, {{0.6, 0, 0}, cv(C(-0.52, -0.70), 0, 0)},
      {{0.6, -1.2, 0}, cv(C(1.02, 1.15), 0, 0)},  {{1.0, -0.8, 0}, cv(C(0.77, 0.79), 0, 0)},
      {{1.0, -0.2, 0}, cv(C(1.42, -1.07), 0, 0)}, {{1.0, 0.4, 0}, cv(0, C(0.82, 0.87), 0)},
      {{1.4, 0.8, 0}, cv(C(-1.32, -0.65), 0, 0)},
  };
  std::vector<Dipole> ds;
  for (const auto& [z, q] : rows) ds.push_back(mag(z, q));
  return Scene(ds);
}

inline Vec3 random_vec(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  return Vec3(u(rng), u(rng), u(rng));
}

inline CVec3 random_cvec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return CVec3(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

// Random scene of `count` dipoles of mixed kinds in [-1, 1]^3.
inline Scene random_scene(std::mt19937_64& rng, int count, bool real_strengths = false) {
  std::vector<Dipole> ds;
  std::bernoulli_distribution coin;
  for (int i = 0; i < count; ++i) {
    CVec3 q = random_cvec(rng);
    if (real_strengths) q = complexify(q.real());
    ds.push_back({coin(rng) ? DipoleKind::magnetic : DipoleKind::electric, random_vec(rng), q});
  }
  return Scene(ds);
}

inline double max_abs_diff(const CVec3& a, const CVec3& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace emdipole::testing
