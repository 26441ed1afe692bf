#include "emdipole/imaging.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace emdipole {

namespace {

// Phases are advanced by complex multiplication and re-anchored with an exact sincos at this stride.
constexpr std::size_t kPhaseReanchor = 64;

}  // namespace

void ImagingParams::validate() const {
  if (!(k_max > 0.0) || !std::isfinite(k_max)) throw std::invalid_argument("imaging: K must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("imaging: epsilon must be positive");
  if (!(rho >= 1.0) || !std::isfinite(rho)) throw std::invalid_argument("imaging: rho must be >= 1");
}

BandIntegrator::BandIntegrator(const MeasurementSet& ms, double k_max)
    : directions_(ms.directions().begin(), ms.directions().end()), step_(ms.grid().step()) {
  if (!(k_max > 0.0)) throw std::invalid_argument("band integral: K must be positive");
  n_ = ms.grid().nodes_up_to(k_max);
  if (n_ < 2) throw std::invalid_argument("band integral: K must cover at least two frequency nodes");
  k_eff_ = ms.grid().node(n_ - 1);

  const std::size_t L = directions_.size();
  for (auto* v : {&plus_re_, &plus_im_, &minus_re_, &minus_im_}) v->assign(L * 3 * n_, 0.0);

  const double scale = 2.0 * std::numbers::pi / k_eff_;
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t j = 0; j < n_; ++j) {
      // Trapezoid weights on k_1..k_n plus the left-endpoint sliver [0, k_1).
      double w = step_;
      if (j == 0) w = 1.5 * step_;
      if (j == n_ - 1) w = 0.5 * step_;
      const double k = ms.grid().node(j);
      const Complex factor = scale * w / Complex(0.0, k);
      const CVec3 gp = factor * ms.at(l, Sign::plus, j);
      const CVec3 gm = factor * ms.at(l, Sign::minus, j);
      for (int c = 0; c < 3; ++c) {
        const std::size_t at = (l * 3 + static_cast<std::size_t>(c)) * n_ + j;
        plus_re_[at] = gp[c].real();
        plus_im_[at] = gp[c].imag();
        minus_re_[at] = gm[c].real();
        minus_im_[at] = gm[c].imag();
      }
    }
  }
}

BandIntegrals BandIntegrator::evaluate(const Vec3& z, std::size_t l) const {
  if (l >= directions_.size()) throw std::out_of_range("band integral: direction index out of range");
  const double s = directions_[l].vec().dot(z);

  // A = sum_j e^{i k_j s} G+_j,  B = sum_j e^{-i k_j s} G-_j
  double a_re[3] = {0, 0, 0}, a_im[3] = {0, 0, 0}, b_re[3] = {0, 0, 0}, b_im[3] = {0, 0, 0};
  const double* pr[3];
  const double* pi[3];
  const double* mr[3];
  const double* mi[3];
  for (int c = 0; c < 3; ++c) {
    const std::size_t base = (l * 3 + static_cast<std::size_t>(c)) * n_;
    pr[c] = plus_re_.data() + base;
    pi[c] = plus_im_.data() + base;
    mr[c] = minus_re_.data() + base;
    mi[c] = minus_im_.data() + base;
  }

  const double step_re = std::cos(step_ * s);
  const double step_im = std::sin(step_ * s);
  double cr = 0.0, ci = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    if (j % kPhaseReanchor == 0) {
      const double arg = static_cast<double>(j + 1) * step_ * s;
      cr = std::cos(arg);
      ci = std::sin(arg);
    } else {
      const double nr = cr * step_re - ci * step_im;
      ci = cr * step_im + ci * step_re;
      cr = nr;
    }
    for (int c = 0; c < 3; ++c) {
      // (cr + i ci) * G+
      a_re[c] += cr * pr[c][j] - ci * pi[c][j];
      a_im[c] += cr * pi[c][j] + ci * pr[c][j];
      // (cr - i ci) * G-
      b_re[c] += cr * mr[c][j] + ci * mi[c][j];
      b_im[c] += cr * mi[c][j] - ci * mr[c][j];
    }
  }

  BandIntegrals out;
  for (int c = 0; c < 3; ++c) {
    const Complex a(a_re[c], a_im[c]);
    const Complex b(b_re[c], b_im[c]);
    out.mag[c] = a - b;
    out.elec[c] = a + b;
  }
  return out;
}

CVec3 band_integral_mag(const Vec3& z, std::size_t l, const MeasurementSet& ms, double k_max) {
  return BandIntegrator(ms, k_max).mag(z, l);
}

CVec3 band_integral_elec(const Vec3& z, std::size_t l, const MeasurementSet& ms, double k_max) {
  return BandIntegrator(ms, k_max).elec(z, l);
}

IndicatorBase indicator_base(const Vec3& z, const BandIntegrator& integrator, double epsilon) {
  const std::size_t L = integrator.direction_count();
  int mag_votes = 0, elec_votes = 0;
  for (std::size_t l = 0; l < L; ++l) {
    const auto f = integrator.evaluate(z, l);
    mag_votes += cutoff(f.mag.norm(), epsilon);
    elec_votes += cutoff(f.elec.norm(), epsilon);
  }
  return {static_cast<double>(mag_votes) / static_cast<double>(L),
          static_cast<double>(elec_votes) / static_cast<double>(L)};
}

double indicator(const Vec3& z, const BandIntegrator& integrator, const ImagingParams& params, DipoleKind kind) {
  params.validate();
  const auto base = indicator_base(z, integrator, params.epsilon);
  return std::pow(kind == DipoleKind::magnetic ? base.mag : base.elec, params.rho);
}

double indicator(const Vec3& z, const MeasurementSet& ms, const ImagingParams& params, DipoleKind kind) {
  return indicator(z, BandIntegrator(ms, params.k_max), params, kind);
}

}  // namespace emdipole
