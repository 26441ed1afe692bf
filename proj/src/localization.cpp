#include "emdipole/localization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace emdipole {

void SamplingGrid::validate() const {
  if (!lower.allFinite() || !upper.allFinite()) throw std::invalid_argument("sampling grid: non-finite corner");
  for (int a = 0; a < 3; ++a) {
    if (counts[static_cast<std::size_t>(a)] < 1) throw std::invalid_argument("sampling grid: axis count must be >= 1");
    if (upper[a] < lower[a]) throw std::invalid_argument("sampling grid: upper corner below lower corner");
  }
}

std::array<std::size_t, 3> SamplingGrid::multi_index(std::size_t index) const {
  const std::size_t k = index % counts[2];
  const std::size_t rest = index / counts[2];
  return {rest / counts[1], rest % counts[1], k};
}

double SamplingGrid::coordinate(int axis, std::size_t i) const {
  const std::size_t n = counts[static_cast<std::size_t>(axis)];
  if (n == 1) return lower[axis];
  return lower[axis] + (upper[axis] - lower[axis]) * static_cast<double>(i) / static_cast<double>(n - 1);
}

Vec3 SamplingGrid::node(std::size_t index) const {
  const auto m = multi_index(index);
  return {coordinate(0, m[0]), coordinate(1, m[1]), coordinate(2, m[2])};
}

double SamplingGrid::spacing(int axis) const {
  const std::size_t n = counts[static_cast<std::size_t>(axis)];
  return n == 1 ? 0.0 : (upper[axis] - lower[axis]) / static_cast<double>(n - 1);
}

double SamplingGrid::cell_diagonal() const {
  return std::sqrt(spacing(0) * spacing(0) + spacing(1) * spacing(1) + spacing(2) * spacing(2));
}

IndicatorField evaluate_field(const BandIntegrator& integrator, const SamplingGrid& grid, const ImagingParams& params) {
  grid.validate();
  params.validate();
  IndicatorField field;
  field.grid = grid;
  field.rho = params.rho;
  const std::size_t n = grid.size();
  field.base_mag.resize(n);
  field.base_elec.resize(n);
  field.values_mag.resize(n);
  field.values_elec.resize(n);

#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto base = indicator_base(grid.node(idx), integrator, params.epsilon);
    field.base_mag[idx] = base.mag;
    field.base_elec[idx] = base.elec;
    field.values_mag[idx] = std::pow(base.mag, params.rho);
    field.values_elec[idx] = std::pow(base.elec, params.rho);
  }
  return field;
}

IndicatorField evaluate_field(const MeasurementSet& ms, const SamplingGrid& grid, const ImagingParams& params) {
  params.validate();
  return evaluate_field(BandIntegrator(ms, params.k_max), grid, params);
}

namespace {

template <typename Visit>
void for_each_neighbor(const SamplingGrid& g, std::size_t index, Visit&& visit) {
  const auto m = g.multi_index(index);
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj)
      for (int dk = -1; dk <= 1; ++dk) {
        if (di == 0 && dj == 0 && dk == 0) continue;
        const long long i = static_cast<long long>(m[0]) + di;
        const long long j = static_cast<long long>(m[1]) + dj;
        const long long k = static_cast<long long>(m[2]) + dk;
        if (i < 0 || j < 0 || k < 0 || i >= static_cast<long long>(g.counts[0]) ||
            j >= static_cast<long long>(g.counts[1]) || k >= static_cast<long long>(g.counts[2]))
          continue;
        visit(g.linear_index(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k)));
      }
}

}  // namespace

std::vector<Peak> extract_peaks(const IndicatorField& field, DipoleKind kind, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw std::invalid_argument("extract_peaks: threshold must be in (0, 1]");
  const auto& base = kind == DipoleKind::magnetic ? field.base_mag : field.base_elec;
  const auto& values = kind == DipoleKind::magnetic ? field.values_mag : field.values_elec;
  const auto& grid = field.grid;
  if (base.size() != grid.size() || values.size() != grid.size()) {
    throw std::invalid_argument("extract_peaks: field size does not match its grid");
  }

  std::vector<bool> visited(grid.size(), false);
  std::vector<Peak> peaks;
  std::vector<std::size_t> stack, plateau;
  for (std::size_t start = 0; start < grid.size(); ++start) {
    if (visited[start] || !(base[start] > threshold)) continue;
    // Flood the plateau of nodes equal to base[start]; nodes are scanned in increasing index, so
    // `start` is the plateau's lowest index.
    const double level = base[start];
    bool is_max = true;
    plateau.clear();
    stack.assign(1, start);
    visited[start] = true;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      plateau.push_back(cur);
      for_each_neighbor(grid, cur, [&](std::size_t nb) {
        if (base[nb] > level) {
          is_max = false;
        } else if (base[nb] == level && !visited[nb]) {
          visited[nb] = true;
          stack.push_back(nb);
        }
      });
    }
    if (is_max) peaks.push_back({grid.node(start), start, values[start], level});
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.index < b.index;
  });
  return peaks;
}

}  // namespace emdipole
