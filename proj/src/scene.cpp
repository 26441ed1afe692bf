#include "emdipole/scene.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

namespace emdipole {

std::string_view to_string(DipoleKind kind) { return kind == DipoleKind::magnetic ? "magnetic" : "electric"; }

DipoleKind dipole_kind_from_string(std::string_view s) {
  if (s == "magnetic") return DipoleKind::magnetic;
  if (s == "electric") return DipoleKind::electric;
  throw std::invalid_argument("unknown dipole kind '" + std::string(s) + "'");
}

Scene::Scene(std::vector<Dipole> dipoles) : dipoles_(std::move(dipoles)) {
  for (std::size_t i = 0; i < dipoles_.size(); ++i) {
    const auto& d = dipoles_[i];
    if (!d.location.allFinite() || !d.strength.allFinite()) {
      throw std::invalid_argument("dipole " + std::to_string(i) + " has non-finite data");
    }
    if (!(d.strength.norm() > 0.0)) {
      throw std::invalid_argument("dipole " + std::to_string(i) + " has zero polarization strength");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if ((dipoles_[j].location - d.location).norm() <= kMinLocationSeparation) {
        throw std::invalid_argument("dipoles " + std::to_string(j) + " and " + std::to_string(i) +
                                    " share a location");
      }
    }
  }
}

std::size_t Scene::magnetic_count() const {
  return static_cast<std::size_t>(
      std::count_if(dipoles_.begin(), dipoles_.end(), [](const Dipole& d) { return d.kind == DipoleKind::magnetic; }));
}

double Scene::max_radius() const {
  double r = 0.0;
  for (const auto& d : dipoles_) r = std::max(r, d.location.norm());
  return r;
}

double relative_error(const CVec3& q_true, const CVec3& q_rec) {
  const double denom = q_true.norm();
  if (!(denom > 0.0)) throw std::invalid_argument("relative_error: reference strength is zero");
  return (q_rec - q_true).norm() / denom;
}

MatchResult match_report(const Scene& truth, const ReconstructionReport& report, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("match_report: radius must be positive");
  const auto& t = truth.dipoles();
  const auto& r = report.dipoles;

  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double d = (t[i].location - r[j].location).norm();
      if (d <= radius) candidates.emplace_back(d, i, j);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<bool> truth_used(t.size(), false), report_used(r.size(), false);
  MatchResult out;
  for (const auto& [d, i, j] : candidates) {
    if (truth_used[i] || report_used[j]) continue;
    truth_used[i] = report_used[j] = true;
    out.matches.push_back({i, j, d, t[i].kind == r[j].kind, relative_error(t[i].strength, r[j].strength)});
  }
  std::sort(out.matches.begin(), out.matches.end(),
            [](const DipoleMatch& a, const DipoleMatch& b) { return a.truth_index < b.truth_index; });
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!truth_used[i]) out.missed.push_back(i);
  for (std::size_t j = 0; j < r.size(); ++j)
    if (!report_used[j]) out.spurious.push_back(j);
  return out;
}

}  // namespace emdipole
