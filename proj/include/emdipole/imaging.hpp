#pragma once

#include <cstddef>
#include <vector>

#include "emdipole/forward.hpp"
#include "emdipole/scene.hpp"

namespace emdipole {

/// Relative accuracy the band-integral quadrature is held to on the test scenes, in units of sum |q_m|.
inline constexpr double kQuadratureTolerance = 1e-3;

struct ImagingParams {
  double k_max = 100.0;   // K: upper limit of the band integral
  double epsilon = 0.2;   // cut-off applied to |F(z, x, K)|
  double rho = 4.0;       // sharpening exponent applied to the vote fraction

  void validate() const;
};

/// Both decoupling integrals at one point and direction.
struct BandIntegrals {
  CVec3 mag;   // (2pi/K) int_0^K (1/ik) [e^{ik x.z} E(x,k) - e^{-ik x.z} E(-x,k)] dk
  CVec3 elec;  // same with the + sign
};

/// Composite-trapezoid evaluation of the band integrals over the nodes k_1..k_n <= K of a
/// measurement set, with the [0, k_1) sliver filled by the value at k_1. The effective upper
/// limit is k_n, the last node not exceeding K.
///
/// Precomputes the weighted, 1/(ik)-scaled samples once so that evaluating many points is a
/// pair of length-n phase sums per direction.
class BandIntegrator {
 public:
  BandIntegrator(const MeasurementSet& ms, double k_max);

  std::size_t direction_count() const { return directions_.size(); }
  const UnitVec3& direction(std::size_t l) const { return directions_[l]; }
  double effective_k_max() const { return k_eff_; }
  std::size_t node_count() const { return n_; }

  BandIntegrals evaluate(const Vec3& z, std::size_t l) const;
  CVec3 mag(const Vec3& z, std::size_t l) const { return evaluate(z, l).mag; }
  CVec3 elec(const Vec3& z, std::size_t l) const { return evaluate(z, l).elec; }

 private:
  std::vector<UnitVec3> directions_;
  double step_ = 0.0;
  double k_eff_ = 0.0;
  std::size_t n_ = 0;
  // Per direction, per component: n weighted samples, real and imaginary parts split.
  std::vector<double> plus_re_, plus_im_, minus_re_, minus_im_;
};

CVec3 band_integral_mag(const Vec3& z, std::size_t l, const MeasurementSet& ms, double k_max);
CVec3 band_integral_elec(const Vec3& z, std::size_t l, const MeasurementSet& ms, double k_max);

/// T_eps(t): 1 if t > eps, else 0.
inline int cutoff(double t, double epsilon) { return t > epsilon ? 1 : 0; }

/// Vote fractions (1/L) sum_l T_eps(|F(z, x_l, K)|) for both kinds, before sharpening.
struct IndicatorBase {
  double mag = 0.0;
  double elec = 0.0;
};

IndicatorBase indicator_base(const Vec3& z, const BandIntegrator& integrator, double epsilon);

/// [(1/L) sum_l T_eps(|F_kind(z, x_l, K)|)]^rho
double indicator(const Vec3& z, const MeasurementSet& ms, const ImagingParams& params, DipoleKind kind);
double indicator(const Vec3& z, const BandIntegrator& integrator, const ImagingParams& params, DipoleKind kind);

}  // namespace emdipole
