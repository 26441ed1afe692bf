// emdipole: simulate multi-frequency far-field data of dipole arrays and reconstruct them.
//
//   emdipole simulate --scene s.json --directions fib:10 --k-max 200 --noise 0.1 --seed 42 -o meas.csv
//   emdipole reconstruct --measurements meas.csv --grid -1.5:1.5:31,-1.5:1.5:31,-1.5:1.5:31 -o report.json
//   emdipole evaluate --report report.json --truth s.json
//   emdipole field --measurements meas.csv --grid ... -o field.csv
//   emdipole check-directions --directions fib:10 --magnetic 3 --electric 3
//
// Every flag can also be given in a TOML/INI file passed with --config.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "emdipole/errors.hpp"
#include "emdipole/forward.hpp"
#include "emdipole/io.hpp"
#include "emdipole/noise.hpp"
#include "emdipole/oracle.hpp"
#include "emdipole/pipeline.hpp"

namespace {

using namespace emdipole;
using nlohmann::json;

const std::string kDefaultGrid = "-1.5:1.5:31,-1.5:1.5:31,-1.5:1.5:31";

struct SimulateOptions {
  std::string scene;
  std::string directions = "fib:10";
  double k_max = 200.0;
  std::size_t nodes = 0;
  std::string grid;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string output = "measurements.csv";
};

struct ImagingOptions {
  std::string measurements;
  std::string grid = kDefaultGrid;
  double k_loc = 100.0;
  double epsilon = 0.2;
  double rho = 4.0;
  double threshold = kDefaultPeakThreshold;
  double k_strength = kDefaultStrengthK;
  bool no_confirm = false;
  std::string output;
  std::string field_csv;
};

struct EvaluateOptions {
  std::string report;
  std::string truth;
  double radius = 0.0;
  std::string output;
};

struct CheckOptions {
  std::string directions = "fib:10";
  std::size_t magnetic = 0;
  std::size_t electric = 0;
  bool planar = false;
};

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

int run_simulate(const SimulateOptions& o) {
  const Scene scene = io::load_scene(o.scene);
  const DirectionSet ds = io::parse_direction_spec(o.directions);

  std::size_t nodes = o.nodes;
  if (nodes == 0) {
    const double r_max = o.grid.empty() ? std::max(1.0, 2.0 * scene.max_radius()) : io::parse_grid_spec(o.grid).diameter();
    nodes = default_node_count(o.k_max, r_max);
  }
  const FrequencyGrid grid(o.k_max, nodes);
  MeasurementSet ms = simulate_measurements(scene, ds, grid);
  ms = add_noise(ms, {o.noise, o.seed});

  io::save_measurements(o.output, ms, {{"noise", {{"delta", o.noise}, {"seed", o.seed}}}});
  std::cout << "wrote " << o.output << " (+ " << io::sidecar_path(o.output).string() << ")\n"
            << "  dipoles: " << scene.size() << " (" << scene.magnetic_count() << " magnetic, " << scene.electric_count()
            << " electric)\n"
            << "  L = " << ds.size() << " (" << to_string(ds.provenance()) << "), N = " << grid.size()
            << ", K = " << fmt(grid.k_max()) << ", dk = " << fmt(grid.step()) << '\n'
            << "  noise delta = " << fmt(o.noise) << ", seed = " << o.seed << '\n'
            << "  samples: " << ms.samples().size() << '\n';
  return 0;
}

ImagingParams imaging_params(const ImagingOptions& o) {
  ImagingParams p{o.k_loc, o.epsilon, o.rho};
  p.validate();
  return p;
}

int run_field(const ImagingOptions& o) {
  const MeasurementSet ms = io::load_measurements(o.measurements);
  const SamplingGrid grid = io::parse_grid_spec(o.grid);
  const IndicatorField field = evaluate_field(ms, grid, imaging_params(o));
  const std::string out = o.output.empty() ? "field.csv" : o.output;
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot write '" + out + "'");
  io::write_field_csv(os, field);
  std::cout << "wrote " << out << " (" << grid.size() << " nodes)\n";
  return 0;
}

int run_reconstruct(const ImagingOptions& o) {
  const MeasurementSet ms = io::load_measurements(o.measurements);
  const json sidecar = io::read_json_file(io::sidecar_path(o.measurements));
  const SamplingGrid grid = io::parse_grid_spec(o.grid);

  ReconstructionConfig config;
  config.imaging = imaging_params(o);
  config.strength_k = o.k_strength;
  config.threshold = o.threshold;
  config.confirm_peaks = !o.no_confirm;
  if (o.k_loc > ms.grid().k_max() * (1 + 1e-12) || o.k_strength > ms.grid().k_max() * (1 + 1e-12)) {
    throw std::invalid_argument("K_loc and K_strength must not exceed the simulated k_max (" + fmt(ms.grid().k_max()) + ")");
  }

  const auto result = reconstruct(ms, grid, config);

  io::ReportMetadata meta;
  meta.config = {{"measurements", o.measurements}, {"grid", io::grid_spec_string(grid)}, {"k_loc", o.k_loc},
                 {"epsilon", o.epsilon}, {"rho", o.rho}, {"threshold", o.threshold}, {"k_strength", o.k_strength}, {"confirm_peaks", !o.no_confirm},
                 {"cell_diagonal", grid.cell_diagonal()}};
  if (sidecar.contains("noise")) {
    meta.seed = sidecar["noise"].value("seed", std::uint64_t{0});
    meta.noise_delta = sidecar["noise"].value("delta", 0.0);
  }
  meta.config["seed"] = meta.seed;
  meta.config["noise_delta"] = meta.noise_delta;
  meta.config_hash = io::config_hash(meta.config);

  const std::string out = o.output.empty() ? "report.json" : o.output;
  {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write '" + out + "'");
    os << io::report_to_json(result.report, meta).dump(2) << '\n';
  }
  if (!o.field_csv.empty()) {
    std::ofstream os(o.field_csv);
    if (!os) throw std::runtime_error("cannot write '" + o.field_csv + "'");
    io::write_field_csv(os, result.field);
  }

  std::cout << "located " << result.report.dipoles.size() + result.report.failures.size() << " dipoles\n";
  for (const auto& d : result.report.dipoles) {
    std::printf("  %-8s (%7.3f, %7.3f, %7.3f)  q = (%.3f%+.3fi, %.3f%+.3fi, %.3f%+.3fi)  pair (%zu, %zu)\n",
                std::string(to_string(d.kind)).c_str(), d.location[0], d.location[1], d.location[2],
                d.strength[0].real(), d.strength[0].imag(), d.strength[1].real(), d.strength[1].imag(),
                d.strength[2].real(), d.strength[2].imag(), d.first_direction, d.second_direction);
  }
  for (const auto& f : result.report.failures) {
    std::printf("  %-8s (%7.3f, %7.3f, %7.3f)  strength not recovered: %s\n", std::string(to_string(f.kind)).c_str(),
                f.location[0], f.location[1], f.location[2], f.reason.c_str());
  }
  std::cout << "wrote " << out << '\n';
  return 0;
}

int run_evaluate(const EvaluateOptions& o) {
  const json report_json = io::read_json_file(o.report);
  const ReconstructionReport report = io::report_from_json(report_json);
  const Scene truth = io::load_scene(o.truth);

  double radius = o.radius;
  if (radius <= 0.0) {
    radius = report_json.contains("metadata") && report_json["metadata"].contains("config")
                 ? report_json["metadata"]["config"].value("cell_diagonal", 0.0)
                 : 0.0;
    if (radius <= 0.0) radius = 0.1 * std::sqrt(3.0);
  }
  const MatchResult m = match_report(truth, report, radius);

  std::ostringstream table;
  table << "truth,kind,report,location_error,kind_correct,strength_re\n";
  char line[256];
  std::printf("%-5s %-8s %-6s %-10s %-6s %s\n", "truth", "kind", "report", "loc_err", "type", "RE");
  double sum_re = 0.0, max_re = 0.0;
  for (const auto& match : m.matches) {
    const auto& t = truth.dipoles()[match.truth_index];
    std::printf("%-5zu %-8s %-6zu %-10.4g %-6s %.2f%%\n", match.truth_index, std::string(to_string(t.kind)).c_str(),
                match.report_index, match.location_error, match.kind_correct ? "ok" : "WRONG",
                100.0 * match.strength_error);
    std::snprintf(line, sizeof(line), "%zu,%s,%zu,%s,%d,%s\n", match.truth_index, std::string(to_string(t.kind)).c_str(),
                  match.report_index, io::format_double(match.location_error).c_str(), match.kind_correct ? 1 : 0,
                  io::format_double(match.strength_error).c_str());
    table << line;
    sum_re += match.strength_error;
    max_re = std::max(max_re, match.strength_error);
  }
  for (std::size_t i : m.missed) {
    std::printf("%-5zu %-8s missed\n", i, std::string(to_string(truth.dipoles()[i].kind)).c_str());
    table << i << ',' << to_string(truth.dipoles()[i].kind) << ",,,,missed\n";
  }
  for (std::size_t j : m.spurious) {
    const auto& d = report.dipoles[j];
    std::printf("spurious report dipole %zu (%s) at (%.3f, %.3f, %.3f)\n", j, std::string(to_string(d.kind)).c_str(),
                d.location[0], d.location[1], d.location[2]);
  }
  const std::size_t kind_ok = static_cast<std::size_t>(
      std::count_if(m.matches.begin(), m.matches.end(), [](const DipoleMatch& x) { return x.kind_correct; }));
  std::printf("summary: matched %zu/%zu, type correct %zu, missed %zu, spurious %zu, mean RE %.2f%%, max RE %.2f%%\n",
              m.matches.size(), truth.size(), kind_ok, m.missed.size(), m.spurious.size(),
              m.matches.empty() ? 0.0 : 100.0 * sum_re / static_cast<double>(m.matches.size()), 100.0 * max_re);

  if (!o.output.empty()) {
    std::ofstream os(o.output);
    if (!os) throw std::runtime_error("cannot write '" + o.output + "'");
    os << table.str();
  }
  return 0;
}

int run_check(const CheckOptions& o) {
  const DirectionSet ds = io::parse_direction_spec(o.directions);
  const DirectionCheck c = check_directions(ds, o.magnetic, o.electric);
  std::cout << "directions: " << c.direction_count << " (" << to_string(ds.provenance()) << ")\n"
            << "pairwise non-collinear: " << (c.pairwise_non_collinear ? "yes" : "no") << '\n'
            << "no three coplanar: " << (c.no_three_coplanar ? "yes" : "no") << '\n'
            << "in plane x3 = 0: " << (c.in_plane ? "yes" : "no") << '\n';
  if (o.planar) {
    std::cout << "planar bound L > max(2 M1, 2 M2): need L >= " << c.required_planar << " -> "
              << (c.meets_planar ? "satisfied" : "NOT satisfied") << '\n';
    if (!c.meets_planar) {
      std::cout << "warning: fewer directions than the planar uniqueness result requires\n";
    }
  } else {
    std::cout << "general bound L >= max(4 M1, 4 M2): need L >= " << c.required_general << " -> "
              << (c.meets_general ? "satisfied" : "NOT satisfied") << '\n';
    if (!c.meets_general) {
      std::cout << "warning: fewer directions (or a coplanar triple) than the uniqueness result requires; "
                   "reconstruction may still succeed\n";
    }
  }
  return 0;
}

void add_imaging_flags(CLI::App* cmd, ImagingOptions& o, bool with_strength) {
  cmd->add_option("--measurements,-m", o.measurements, "Measurement CSV (sidecar JSON alongside)")->required();
  cmd->add_option("--grid,-g", o.grid, "Sampling grid x0:x1:nx,y0:y1:ny,z0:z1:nz")->capture_default_str();
  cmd->add_option("--k-loc", o.k_loc, "Band limit K for the indicators")->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "Cut-off on |F|")->capture_default_str();
  cmd->add_option("--rho", o.rho, "Sharpening exponent")->capture_default_str();
  if (with_strength) {
    cmd->add_option("--threshold", o.threshold, "Peak threshold on the vote fraction")->capture_default_str();
    cmd->add_option("--k-strength", o.k_strength, "Band limit K for strength recovery")->capture_default_str();
    cmd->add_option("--field-csv", o.field_csv, "Also write the indicator field CSV");
    cmd->add_flag("--no-confirm", o.no_confirm, "Report every indicator peak, without the single-dipole support check");
  }
  cmd->add_option("--output,-o", o.output, "Output path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-frequency far-field simulation and dipole reconstruction"};
  app.set_config("--config", "", "TOML/INI file with flag values");
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Synthesize (noisy) far-field measurements of a scene");
  simulate->add_option("--scene,-s", sim.scene, "Scene JSON")->required();
  simulate->add_option("--directions,-d", sim.directions, "fib:L | plane:L | directions JSON")->capture_default_str();
  simulate->add_option("--k-max", sim.k_max, "Largest wavenumber")->capture_default_str();
  simulate->add_option("--nodes", sim.nodes, "Frequency node count (0: choose from --grid or the scene size)");
  simulate->add_option("--grid", sim.grid, "Sampling grid used to size the frequency step");
  simulate->add_option("--noise", sim.noise, "Relative noise level delta")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Noise seed")->capture_default_str();
  simulate->add_option("--output,-o", sim.output, "Measurement CSV")->capture_default_str();

  ImagingOptions rec;
  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Locate dipoles and recover their strengths");
  add_imaging_flags(reconstruct_cmd, rec, true);

  ImagingOptions fld;
  auto* field = app.add_subcommand("field", "Export the indicator field as CSV");
  add_imaging_flags(field, fld, false);

  EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "Compare a report with the true scene");
  evaluate->add_option("--report,-r", ev.report, "Report JSON")->required();
  evaluate->add_option("--truth,-t", ev.truth, "Scene JSON")->required();
  evaluate->add_option("--radius", ev.radius, "Matching radius (default: one grid cell diagonal)");
  evaluate->add_option("--output,-o", ev.output, "Error table CSV");

  CheckOptions chk;
  auto* check = app.add_subcommand("check-directions", "Check a direction set against the uniqueness hypotheses");
  check->add_option("--directions,-d", chk.directions, "fib:L | plane:L | directions JSON")->capture_default_str();
  check->add_option("--magnetic", chk.magnetic, "Number of magnetic dipoles M1");
  check->add_option("--electric", chk.electric, "Number of electric dipoles M2");
  check->add_flag("--planar", chk.planar, "Dipoles and directions lie in the plane x3 = 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; usage errors share the exit code of malformed input files.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*reconstruct_cmd) return run_reconstruct(rec);
    if (*field) return run_field(fld);
    if (*evaluate) return run_evaluate(ev);
    if (*check) return run_check(chk);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
