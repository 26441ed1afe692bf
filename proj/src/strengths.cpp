#include "emdipole/strengths.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "emdipole/errors.hpp"

namespace emdipole {

namespace {

void require_pair(const DirectionSet& ds, DirectionPair pair) {
  if (pair.first >= ds.size() || pair.second >= ds.size()) throw std::out_of_range("direction index out of range");
  if (ds[pair.first].vec().cross(ds[pair.second].vec()).norm() <= kPairAdmissibility) {
    throw std::invalid_argument("direction pair is collinear");
  }
}

std::vector<UnitVec3> pair_directions(const BandIntegrator& integrator, DirectionPair pair) {
  if (pair.first >= integrator.direction_count() || pair.second >= integrator.direction_count()) {
    throw std::out_of_range("direction index out of range");
  }
  const auto& x = integrator.direction(pair.first);
  const auto& y = integrator.direction(pair.second);
  if (x.vec().cross(y.vec()).norm() <= kPairAdmissibility) throw std::invalid_argument("direction pair is collinear");
  return {x, y};
}

}  // namespace

DirectionPair select_pair(const Vec3& target, std::span<const Vec3> others, const DirectionSet& ds) {
  if (ds.size() < 2) throw NoAdmissiblePair("select_pair: fewer than two directions");
  const std::size_t L = ds.size();

  // Smallest plane separation of each direction from the other dipoles.
  std::vector<double> separation(L, std::numeric_limits<double>::infinity());
  for (std::size_t l = 0; l < L; ++l)
    for (const auto& z : others) separation[l] = std::min(separation[l], std::abs(ds[l].vec().dot(z - target)));

  bool found = false;
  DirectionPair best{0, 0};
  double best_sep = -1.0, best_cross = -1.0;
  for (std::size_t a = 0; a < L; ++a) {
    if (separation[a] <= kPairAdmissibility) continue;
    for (std::size_t b = a + 1; b < L; ++b) {
      if (separation[b] <= kPairAdmissibility) continue;
      const double cross_norm = ds[a].vec().cross(ds[b].vec()).norm();
      if (cross_norm <= kPairAdmissibility) continue;
      const double sep = std::min(separation[a], separation[b]);
      if (!found || sep > best_sep || (sep == best_sep && cross_norm > best_cross)) {
        found = true;
        best = {a, b};
        best_sep = sep;
        best_cross = cross_norm;
      }
    }
  }
  if (!found) throw NoAdmissiblePair("no pair of observation directions separates the target from every other dipole");
  return best;
}

CVec3 strength_from_mag_projections(const Vec3& x, const Vec3& y, const CVec3& fx, const CVec3& fy) {
  const Vec3 yx = y.cross(x);
  const double yx2 = yx.squaredNorm();
  const CVec3 x_cross_fx = cross(x, fx);
  const Complex along_x = dot(yx, CVec3(fy + cross(y, x_cross_fx))) / yx2;
  return along_x * complexify(x) - x_cross_fx;
}

CVec3 strength_from_elec_projections(const Vec3& x, const Vec3& y, const CVec3& fx, const CVec3& fy) {
  const Vec3 yx = y.cross(x);
  const double yx2 = yx.squaredNorm();
  const Complex along_x = dot(yx, CVec3(cross(y, fy) - cross(y, fx))) / yx2;
  return along_x * complexify(x) + fx;
}

CVec3 recover_strength_mag(const Vec3& z, DirectionPair pair, const BandIntegrator& integrator) {
  const auto d = pair_directions(integrator, pair);
  return strength_from_mag_projections(d[0].vec(), d[1].vec(), integrator.mag(z, pair.first),
                                       integrator.mag(z, pair.second));
}

CVec3 recover_strength_mag(const Vec3& z, DirectionPair pair, const MeasurementSet& ms, double k_max) {
  return recover_strength_mag(z, pair, BandIntegrator(ms, k_max));
}

CVec3 recover_strength_elec(const Vec3& z, DirectionPair pair, const BandIntegrator& integrator) {
  const auto d = pair_directions(integrator, pair);
  return strength_from_elec_projections(d[0].vec(), d[1].vec(), integrator.elec(z, pair.first),
                                        integrator.elec(z, pair.second));
}

CVec3 recover_strength_elec(const Vec3& z, DirectionPair pair, const MeasurementSet& ms, double k_max) {
  return recover_strength_elec(z, pair, BandIntegrator(ms, k_max));
}

namespace {

struct Projection {
  Vec3 x;
  CVec3 F;
};

std::vector<Projection> voting_projections(const Vec3& z, DipoleKind kind, const BandIntegrator& integrator,
                                           double epsilon) {
  std::vector<Projection> out;
  for (std::size_t l = 0; l < integrator.direction_count(); ++l) {
    const auto f = integrator.evaluate(z, l);
    const CVec3& F = kind == DipoleKind::magnetic ? f.mag : f.elec;
    if (F.norm() > epsilon) out.push_back({integrator.direction(l).vec(), F});
  }
  return out;
}

CVec3 predicted(DipoleKind kind, const Vec3& x, const CVec3& q) {
  return kind == DipoleKind::magnetic ? cross(x, q) : cross(x, cross(q, x));
}

// Minimizes sum |F - P q|^2 / |F|^2 over `use`. Both projections P satisfy P^T P = I - x x^T;
// P^T F is F x x (magnetic) or F - (x.F) x (electric).
std::optional<CVec3> weighted_fit(DipoleKind kind, const std::vector<Projection>& votes, const std::vector<bool>& use) {
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  CVec3 rhs = CVec3::Zero();
  int used = 0;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    if (!use[i]) continue;
    const auto& [x, F] = votes[i];
    const double w = 1.0 / F.squaredNorm();
    normal += w * (Eigen::Matrix3d::Identity() - x * x.transpose());
    rhs += w * (kind == DipoleKind::magnetic ? CVec3(cross(F, x)) : CVec3(F - dot(complexify(x), F) * complexify(x)));
    ++used;
  }
  if (used < 2) return std::nullopt;
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(normal);
  // A single direction (or a collinear set) leaves the component along x undetermined.
  if (std::abs(lu.determinant()) <= 1e-10 * std::pow(normal.norm(), 3)) return std::nullopt;
  return CVec3(lu.inverse().cast<Complex>() * rhs);
}

}  // namespace

std::optional<CVec3> fit_strength(const Vec3& z, DipoleKind kind, const BandIntegrator& integrator, double epsilon,
                                  double tolerance) {
  const auto votes = voting_projections(z, kind, integrator, epsilon);
  std::vector<bool> use(votes.size(), true);
  auto q = weighted_fit(kind, votes, use);
  // Directions crossed by another dipole's plane carry extra terms; refit without them.
  for (int round = 0; round < 8 && q; ++round) {
    std::vector<bool> next(votes.size());
    for (std::size_t i = 0; i < votes.size(); ++i) {
      next[i] = (votes[i].F - predicted(kind, votes[i].x, *q)).norm() <= tolerance * votes[i].F.norm();
    }
    if (next == use) break;
    const auto refit = weighted_fit(kind, votes, next);
    if (!refit) break;
    use = std::move(next);
    q = refit;
  }
  return q;
}

double dipole_support(const Vec3& z, DipoleKind kind, const CVec3& q, const BandIntegrator& integrator, double epsilon,
                      double tolerance) {
  const std::size_t L = integrator.direction_count();
  int explained = 0;
  for (std::size_t l = 0; l < L; ++l) {
    const auto f = integrator.evaluate(z, l);
    const CVec3& F = kind == DipoleKind::magnetic ? f.mag : f.elec;
    const double size = F.norm();
    if (!(size > epsilon)) continue;
    if ((F - predicted(kind, integrator.direction(l).vec(), q)).norm() <= tolerance * size) ++explained;
  }
  return static_cast<double>(explained) / static_cast<double>(L);
}

double strength_error_constant(const Vec3& target, std::span<const Vec3> other_locations,
                               std::span<const double> other_strength_norms, const Vec3& x, const Vec3& y) {
  if (other_locations.size() != other_strength_norms.size()) {
    throw std::invalid_argument("strength_error_constant: locations and strengths differ in length");
  }
  const double yx = y.cross(x).norm();
  double sum_x = 0.0, sum_y = 0.0;
  for (std::size_t m = 0; m < other_locations.size(); ++m) {
    const Vec3 delta = target - other_locations[m];
    sum_x += other_strength_norms[m] / std::abs(x.dot(delta));
    sum_y += other_strength_norms[m] / std::abs(y.dot(delta));
  }
  return (1.0 + yx) / yx * sum_x + sum_y / yx;
}

Vec3 recover_single_dipole_location(const MeasurementSet& ms, DirectionTriple triple, double k_lo, double k_hi) {
  const auto& grid = ms.grid();
  const std::size_t lo = grid.index_of(k_lo);
  const std::size_t hi = grid.index_of(k_hi);
  if (hi <= lo) throw std::invalid_argument("recover_single_dipole_location: need k_lo < k_hi");
  const double klo = grid.node(lo);
  const double khi = grid.node(hi);

  Eigen::Matrix3d normals;
  Vec3 projections;
  for (int r = 0; r < 3; ++r) {
    const std::size_t l = triple[static_cast<std::size_t>(r)];
    if (l >= ms.direction_count()) throw std::out_of_range("direction index out of range");
    const CVec3& e_lo = ms.at(l, Sign::plus, lo);
    const CVec3& e_hi = ms.at(l, Sign::plus, hi);

    const CVec3 a = e_lo / klo;
    const CVec3 b = e_hi / khi;
    const double scale = std::max(a.norm(), b.norm());
    if (!(scale > 0.0) || (a - b).norm() <= 1e-8 * scale) {
      throw DegenerateData("direction " + std::to_string(l) +
                           " carries no location information (x cross q = 0 or x . z = 0)");
    }

    // Trapezoid of (1/k) E(x,k) . conj(E(x,k_lo)) over the nodes k_lo..k_hi.
    Complex integral = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      const double w = (j == lo || j == hi) ? 0.5 : 1.0;
      integral += w * dot_conj(ms.at(l, Sign::plus, j), e_lo) / grid.node(j);
    }
    integral *= grid.step();

    const Complex numerator = Complex(0.0, 1.0) * (klo * dot_conj(e_hi, e_lo) - khi * dot_conj(e_lo, e_lo));
    projections[r] = (numerator / (khi * klo * integral)).real();
    normals.row(r) = ms.directions()[l].vec().transpose();
  }

  if (std::abs(normals.determinant()) <= kDirectionTolerance) {
    throw SingularSystem("recover_single_dipole_location: directions are nearly linearly dependent");
  }
  return normals.fullPivLu().solve(projections);
}

CVec3 recover_single_dipole_strength_fixed_k(const Vec3& z, DirectionPair pair, const MeasurementSet& ms,
                                             std::size_t j, double consistency_tol) {
  require_pair(ms.directions(), pair);
  if (j >= ms.grid().size()) throw std::out_of_range("frequency index out of range");
  const double k = ms.grid().node(j);
  const auto& x = ms.directions()[pair.first];
  const auto& y = ms.directions()[pair.second];

  // x cross q = (4pi / ik) e^{ik x.z} E(x, k)
  auto projection = [&](const UnitVec3& d, const CVec3& e) {
    const double arg = k * d.vec().dot(z);
    return CVec3((4.0 * std::numbers::pi / Complex(0.0, k)) * Complex(std::cos(arg), std::sin(arg)) * e);
  };
  const CVec3& ex = ms.at(pair.first, Sign::plus, j);
  const CVec3& ey = ms.at(pair.second, Sign::plus, j);
  const CVec3 q = strength_from_mag_projections(x.vec(), y.vec(), projection(x, ex), projection(y, ey));

  const double data_norm = std::sqrt(ex.squaredNorm() + ey.squaredNorm());
  if (!(data_norm > 0.0)) throw DegenerateData("far-field data vanish at both directions");
  const double residual =
      std::sqrt((far_field_mag(x, z, q, k) - ex).squaredNorm() + (far_field_mag(y, z, q, k) - ey).squaredNorm());
  if (residual > consistency_tol * data_norm) {
    throw DegenerateData("recovered strength does not reproduce the measured far field (relative residual " +
                         std::to_string(residual / data_norm) + ")");
  }
  return q;
}

}  // namespace emdipole
