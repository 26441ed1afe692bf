#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>

#include "emdipole/imaging.hpp"

namespace emdipole {

using DirectionPair = std::pair<std::size_t, std::size_t>;
using DirectionTriple = std::array<std::size_t, 3>;

/// Minimum |x . (z_m - z_target)| and |x cross y| for a pair to be admissible.
inline constexpr double kPairAdmissibility = 1e-6;
inline constexpr double kDefaultStrengthK = 200.0;
/// Relative mismatch |F - P| <= tol |F| under which a direction's band integral counts as
/// explained by a candidate dipole.
inline constexpr double kSupportTolerance = 0.5;

/// Picks the admissible pair (first < second) maximizing, lexicographically, the smallest plane
/// separation min_m min(|x.(z_m - target)|, |y.(z_m - target)|) and then |x cross y|.
/// Throws NoAdmissiblePair when no pair qualifies.
DirectionPair select_pair(const Vec3& target, std::span<const Vec3> others, const DirectionSet& ds);

/// q from the two transverse projections x cross q and y cross q (magnetic form):
///   q = [(y x x)/|y x x|^2 . (Fy + y x (x x Fx))] x - x x Fx
CVec3 strength_from_mag_projections(const Vec3& x, const Vec3& y, const CVec3& fx, const CVec3& fy);

/// q from x cross (q cross x) and y cross (q cross y) (electric form):
///   q = [(y x x)/|y x x|^2 . (y x Fy - y x Fx)] x + Fx
CVec3 strength_from_elec_projections(const Vec3& x, const Vec3& y, const CVec3& fx, const CVec3& fy);

/// Strength of a located magnetic dipole from band integrals at (z, x_first) and (z, x_second).
CVec3 recover_strength_mag(const Vec3& z, DirectionPair pair, const BandIntegrator& integrator);
CVec3 recover_strength_mag(const Vec3& z, DirectionPair pair, const MeasurementSet& ms, double k_max);
CVec3 recover_strength_elec(const Vec3& z, DirectionPair pair, const BandIntegrator& integrator);
CVec3 recover_strength_elec(const Vec3& z, DirectionPair pair, const MeasurementSet& ms, double k_max);

/// q of a single dipole at z fitted to the band integrals of the given kind at the directions
/// where they exceed `epsilon`, in relative least squares. Directions whose relative mismatch
/// exceeds `tolerance` are dropped and the fit repeated until the kept set is stable.
/// Returns nullopt with fewer than two non-collinear usable directions.
std::optional<CVec3> fit_strength(const Vec3& z, DipoleKind kind, const BandIntegrator& integrator, double epsilon,
                                  double tolerance = kSupportTolerance);

/// Fraction of directions whose band integral of the given kind at z exceeds `epsilon` and is
/// reproduced by the projection of a single dipole (kind, q) at z: x cross q for magnetic,
/// x cross (q cross x) for electric.
double dipole_support(const Vec3& z, DipoleKind kind, const CVec3& q, const BandIntegrator& integrator, double epsilon,
                      double tolerance = kSupportTolerance);

/// Explicit constant C of the O(1/K) strength error bound |q - q_K| <= C / K for the target at
/// `target` recovered with directions (x, y), given the other dipoles' locations and |q_m|.
double strength_error_constant(const Vec3& target, std::span<const Vec3> other_locations,
                               std::span<const double> other_strength_norms, const Vec3& x, const Vec3& y);

/// Single magnetic dipole location from multi-frequency data at three directions, using the
/// +x samples on the nodes k_lo..k_hi (both must be grid nodes). Throws DegenerateData when
/// E(x, k_lo)/k_lo == E(x, k_hi)/k_hi (to 1e-8 relative) for a chosen direction, and
/// SingularSystem when the directions are nearly dependent.
Vec3 recover_single_dipole_location(const MeasurementSet& ms, DirectionTriple triple, double k_lo, double k_hi);

/// Single magnetic dipole strength from the samples at one frequency node and a known location.
/// The result is re-simulated at both directions; a relative residual above `consistency_tol`
/// (or all-zero data) raises DegenerateData.
CVec3 recover_single_dipole_strength_fixed_k(const Vec3& z, DirectionPair pair, const MeasurementSet& ms,
                                             std::size_t j, double consistency_tol = 1e-6);

}  // namespace emdipole
