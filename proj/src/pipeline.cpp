#include "emdipole/pipeline.hpp"

#include <optional>
#include <stdexcept>

#include "emdipole/errors.hpp"

namespace emdipole {

namespace {

struct Candidate {
  DipoleKind kind;
  Vec3 location;
  double support = 0.0;
};

// Pair selection against all other candidates, falling back to the same kind only.
std::optional<DirectionPair> choose_pair(const std::vector<Candidate>& set, std::size_t i, const DirectionSet& ds,
                                         std::string& reason) {
  std::vector<Vec3> all_others, same_kind;
  for (std::size_t j = 0; j < set.size(); ++j) {
    if (j == i) continue;
    all_others.push_back(set[j].location);
    if (set[j].kind == set[i].kind) same_kind.push_back(set[j].location);
  }
  try {
    try {
      return select_pair(set[i].location, all_others, ds);
    } catch (const NoAdmissiblePair&) {
      return select_pair(set[i].location, same_kind, ds);
    }
  } catch (const NoAdmissiblePair& e) {
    reason = e.what();
    return std::nullopt;
  }
}

RecoveredDipole recover(const Candidate& c, DirectionPair pair, const BandIntegrator& integrator) {
  RecoveredDipole d;
  d.kind = c.kind;
  d.location = c.location;
  d.first_direction = pair.first;
  d.second_direction = pair.second;
  d.k_max = integrator.effective_k_max();
  d.support = c.support;
  d.strength = c.kind == DipoleKind::magnetic ? recover_strength_mag(c.location, pair, integrator)
                                              : recover_strength_elec(c.location, pair, integrator);
  return d;
}

}  // namespace

ReconstructionResult reconstruct(const MeasurementSet& ms, const SamplingGrid& grid, const ReconstructionConfig& config) {
  config.imaging.validate();
  if (config.strength_k > ms.grid().k_max() * (1.0 + 1e-12) || config.imaging.k_max > ms.grid().k_max() * (1.0 + 1e-12)) {
    throw std::invalid_argument("reconstruct: K exceeds the largest measured wavenumber");
  }
  if (!(config.support_tolerance > 0.0)) throw std::invalid_argument("reconstruct: support tolerance must be positive");

  ReconstructionResult result;
  const BandIntegrator locator(ms, config.imaging.k_max);
  result.field = evaluate_field(locator, grid, config.imaging);

  std::vector<Candidate> candidates;
  for (DipoleKind kind : {DipoleKind::magnetic, DipoleKind::electric})
    for (const auto& p : extract_peaks(result.field, kind, config.threshold)) candidates.push_back({kind, p.location});

  const BandIntegrator integrator(ms, config.strength_k);
  std::string reason;

  if (config.confirm_peaks) {
    std::vector<Candidate> confirmed;
    for (const auto& c : candidates) {
      const auto q = fit_strength(c.location, c.kind, locator, config.imaging.epsilon, config.support_tolerance);
      const double support =
          q ? dipole_support(c.location, c.kind, *q, locator, config.imaging.epsilon, config.support_tolerance) : 0.0;
      if (support > config.threshold) {
        confirmed.push_back({c.kind, c.location, support});
      } else {
        result.report.rejected.push_back({c.kind, c.location, support});
      }
    }
    candidates = std::move(confirmed);
  }

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto pair = choose_pair(candidates, i, ms.directions(), reason);
    if (!pair) {
      result.report.failures.push_back({candidates[i].kind, candidates[i].location, reason});
      continue;
    }
    result.report.dipoles.push_back(recover(candidates[i], *pair, integrator));
  }
  return result;
}

}  // namespace emdipole
