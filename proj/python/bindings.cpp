#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "emdipole/errors.hpp"
#include "emdipole/io.hpp"
#include "emdipole/noise.hpp"
#include "emdipole/oracle.hpp"
#include "emdipole/pipeline.hpp"

namespace py = pybind11;
using namespace emdipole;

namespace {

DirectionSet directions_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw std::invalid_argument("directions must have shape (L, 3)");
  std::vector<UnitVec3> out;
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < r.shape(0); ++i) out.push_back(UnitVec3::normalized(Vec3(r(i, 0), r(i, 1), r(i, 2))));
  return explicit_directions(std::move(out));
}

py::array_t<double> directions_array(const DirectionSet& ds) {
  py::array_t<double> out({static_cast<py::ssize_t>(ds.size()), py::ssize_t{3}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t l = 0; l < ds.size(); ++l)
    for (int c = 0; c < 3; ++c) w(static_cast<py::ssize_t>(l), c) = ds[l][c];
  return out;
}

// Samples as a (L, 2, N, 3) complex array, sign axis ordered (+x, -x).
py::array_t<Complex> samples_array(const MeasurementSet& ms) {
  const auto L = static_cast<py::ssize_t>(ms.direction_count());
  const auto N = static_cast<py::ssize_t>(ms.grid().size());
  py::array_t<Complex> out({L, py::ssize_t{2}, N, py::ssize_t{3}});
  auto w = out.mutable_unchecked<4>();
  for (py::ssize_t l = 0; l < L; ++l)
    for (int s = 0; s < 2; ++s)
      for (py::ssize_t j = 0; j < N; ++j) {
        const CVec3& e = ms.at(static_cast<std::size_t>(l), static_cast<Sign>(s), static_cast<std::size_t>(j));
        for (int c = 0; c < 3; ++c) w(l, s, j, c) = e[c];
      }
  return out;
}

py::array_t<double> grid_values(const SamplingGrid& g, const std::vector<double>& v) {
  py::array_t<double> out({static_cast<py::ssize_t>(g.counts[0]), static_cast<py::ssize_t>(g.counts[1]),
                           static_cast<py::ssize_t>(g.counts[2])});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_emdipole, m) {
  m.doc() = "Far-field simulation and sampling reconstruction of magnetic and electric dipole arrays";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::enum_<DipoleKind>(m, "DipoleKind")
      .value("magnetic", DipoleKind::magnetic)
      .value("electric", DipoleKind::electric);

  py::class_<Dipole>(m, "Dipole")
      .def(py::init([](DipoleKind kind, const Vec3& location, const CVec3& strength) {
             return Dipole{kind, location, strength};
           }),
           py::arg("kind"), py::arg("location"), py::arg("strength"))
      .def_readwrite("kind", &Dipole::kind)
      .def_readwrite("location", &Dipole::location)
      .def_readwrite("strength", &Dipole::strength);

  py::class_<Scene>(m, "Scene")
      .def(py::init<std::vector<Dipole>>(), py::arg("dipoles"))
      .def_property_readonly("dipoles", [](const Scene& s) { return std::vector<Dipole>(s.dipoles().begin(), s.dipoles().end()); })
      .def("__len__", &Scene::size)
      .def_property_readonly("magnetic_count", &Scene::magnetic_count)
      .def_property_readonly("electric_count", &Scene::electric_count);
  m.def("load_scene", [](const std::string& path) { return io::load_scene(path); }, py::arg("path"));

  py::class_<DirectionSet>(m, "DirectionSet")
      .def("__len__", &DirectionSet::size)
      .def_property_readonly("array", &directions_array)
      .def_property_readonly("provenance", [](const DirectionSet& ds) { return std::string(to_string(ds.provenance())); });
  m.def("fibonacci_directions", &fibonacci_directions, py::arg("count"));
  m.def("planar_directions", &planar_directions, py::arg("count"));
  m.def("explicit_directions", &directions_from_array, py::arg("directions"));

  py::class_<FrequencyGrid>(m, "FrequencyGrid")
      .def(py::init<double, std::size_t>(), py::arg("k_max"), py::arg("count"))
      .def_property_readonly("k_max", &FrequencyGrid::k_max)
      .def("__len__", &FrequencyGrid::size)
      .def_property_readonly("nodes", [](const FrequencyGrid& g) {
        std::vector<double> k(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) k[j] = g.node(j);
        return py::array_t<double>(static_cast<py::ssize_t>(k.size()), k.data());
      });
  m.def("default_node_count", &default_node_count, py::arg("k_max"), py::arg("r_max"));

  py::class_<MeasurementSet>(m, "MeasurementSet")
      .def_property_readonly("directions", &MeasurementSet::directions)
      .def_property_readonly("grid", &MeasurementSet::grid)
      .def_property_readonly("samples", &samples_array);
  m.def("simulate", &simulate_measurements, py::arg("scene"), py::arg("directions"), py::arg("grid"));
  m.def(
      "add_noise", [](const MeasurementSet& ms, double delta, std::uint64_t seed) { return add_noise(ms, {delta, seed}); },
      py::arg("measurements"), py::arg("delta"), py::arg("seed") = 0);
  m.def("load_measurements", [](const std::string& path) { return io::load_measurements(path); }, py::arg("path"));
  m.def(
      "save_measurements", [](const std::string& path, const MeasurementSet& ms) { io::save_measurements(path, ms); },
      py::arg("path"), py::arg("measurements"));

  m.def(
      "far_field",
      [](const Scene& s, const Vec3& direction, double k) { return far_field_scene(UnitVec3::normalized(direction), k, s); },
      py::arg("scene"), py::arg("direction"), py::arg("k"));

  py::class_<SamplingGrid>(m, "SamplingGrid")
      .def(py::init([](const Vec3& lower, const Vec3& upper, std::array<std::size_t, 3> counts) {
             SamplingGrid g{lower, upper, counts};
             g.validate();
             return g;
           }),
           py::arg("lower"), py::arg("upper"), py::arg("counts"))
      .def_static("parse", &io::parse_grid_spec, py::arg("spec"))
      .def_readonly("lower", &SamplingGrid::lower)
      .def_readonly("upper", &SamplingGrid::upper)
      .def_readonly("counts", &SamplingGrid::counts)
      .def_property_readonly("cell_diagonal", &SamplingGrid::cell_diagonal)
      .def("__len__", &SamplingGrid::size);

  py::class_<ImagingParams>(m, "ImagingParams")
      .def(py::init<>())
      .def_readwrite("k_max", &ImagingParams::k_max)
      .def_readwrite("epsilon", &ImagingParams::epsilon)
      .def_readwrite("rho", &ImagingParams::rho);

  py::class_<ReconstructionConfig>(m, "ReconstructionConfig")
      .def(py::init<>())
      .def_readwrite("imaging", &ReconstructionConfig::imaging)
      .def_readwrite("strength_k", &ReconstructionConfig::strength_k)
      .def_readwrite("threshold", &ReconstructionConfig::threshold)
      .def_readwrite("confirm_peaks", &ReconstructionConfig::confirm_peaks)
      .def_readwrite("support_tolerance", &ReconstructionConfig::support_tolerance);

  py::class_<IndicatorField>(m, "IndicatorField")
      .def_readonly("grid", &IndicatorField::grid)
      .def_readonly("rho", &IndicatorField::rho)
      .def_property_readonly("magnetic", [](const IndicatorField& f) { return grid_values(f.grid, f.values_mag); })
      .def_property_readonly("electric", [](const IndicatorField& f) { return grid_values(f.grid, f.values_elec); })
      .def_property_readonly("magnetic_votes", [](const IndicatorField& f) { return grid_values(f.grid, f.base_mag); })
      .def_property_readonly("electric_votes", [](const IndicatorField& f) { return grid_values(f.grid, f.base_elec); });
  m.def(
      "evaluate_field",
      [](const MeasurementSet& ms, const SamplingGrid& g, const ImagingParams& p) { return evaluate_field(ms, g, p); },
      py::arg("measurements"), py::arg("grid"), py::arg("params") = ImagingParams{});

  py::class_<RecoveredDipole>(m, "RecoveredDipole")
      .def_readonly("kind", &RecoveredDipole::kind)
      .def_readonly("location", &RecoveredDipole::location)
      .def_readonly("strength", &RecoveredDipole::strength)
      .def_property_readonly("direction_pair",
                             [](const RecoveredDipole& d) { return py::make_tuple(d.first_direction, d.second_direction); })
      .def_readonly("support", &RecoveredDipole::support);
  py::class_<RecoveryFailure>(m, "RecoveryFailure")
      .def_readonly("kind", &RecoveryFailure::kind)
      .def_readonly("location", &RecoveryFailure::location)
      .def_readonly("reason", &RecoveryFailure::reason);
  py::class_<RejectedCandidate>(m, "RejectedCandidate")
      .def_readonly("kind", &RejectedCandidate::kind)
      .def_readonly("location", &RejectedCandidate::location)
      .def_readonly("support", &RejectedCandidate::support);
  py::class_<ReconstructionReport>(m, "ReconstructionReport")
      .def_readonly("dipoles", &ReconstructionReport::dipoles)
      .def_readonly("failures", &ReconstructionReport::failures)
      .def_readonly("rejected", &ReconstructionReport::rejected);
  py::class_<ReconstructionResult>(m, "ReconstructionResult")
      .def_readonly("field", &ReconstructionResult::field)
      .def_readonly("report", &ReconstructionResult::report);
  m.def(
      "reconstruct",
      [](const MeasurementSet& ms, const SamplingGrid& g, const ReconstructionConfig& c) {
        py::gil_scoped_release release;
        return reconstruct(ms, g, c);
      },
      py::arg("measurements"), py::arg("grid"), py::arg("config") = ReconstructionConfig{});

  py::class_<DipoleMatch>(m, "DipoleMatch")
      .def_readonly("truth_index", &DipoleMatch::truth_index)
      .def_readonly("report_index", &DipoleMatch::report_index)
      .def_readonly("location_error", &DipoleMatch::location_error)
      .def_readonly("kind_correct", &DipoleMatch::kind_correct)
      .def_readonly("strength_error", &DipoleMatch::strength_error);
  py::class_<MatchResult>(m, "MatchResult")
      .def_readonly("matches", &MatchResult::matches)
      .def_readonly("missed", &MatchResult::missed)
      .def_readonly("spurious", &MatchResult::spurious);
  m.def("match_report", &match_report, py::arg("truth"), py::arg("report"), py::arg("radius"));
  m.def("relative_error", &relative_error, py::arg("truth"), py::arg("recovered"));
}
