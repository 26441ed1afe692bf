#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

#include "emdipole/forward.hpp"
#include "emdipole/localization.hpp"
#include "emdipole/oracle.hpp"
#include "emdipole/scene.hpp"

namespace emdipole::io {

/// Shortest text for `v` that still round-trips (17 significant digits, general format).
std::string format_double(double v);

// Scene: {"dipoles": [{"kind": "magnetic"|"electric", "location": [x,y,z],
//                      "strength_re": [a,b,c], "strength_im": [d,e,f]}]}
Scene scene_from_json(const nlohmann::json& j);
nlohmann::json scene_to_json(const Scene& scene);
Scene load_scene(const std::filesystem::path& path);
void save_scene(const std::filesystem::path& path, const Scene& scene);

// Directions sidecar: {"provenance": ..., "directions": [[x,y,z], ...], "k_max": K, "count": N}
nlohmann::json directions_to_json(const DirectionSet& ds);
DirectionSet directions_from_json(const nlohmann::json& j);

/// `meas.csv` -> `meas.directions.json`
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// CSV `dir_index,sign,k,re1,im1,re2,im2,re3,im3`, one row per (direction, sign, frequency).
void write_measurement_csv(std::ostream& os, const MeasurementSet& ms);
MeasurementSet read_measurement_csv(std::istream& is, const DirectionSet& ds, const FrequencyGrid& grid);
/// Writes the CSV and its sidecar; `extra` keys are merged into the sidecar object.
void save_measurements(const std::filesystem::path& csv_path, const MeasurementSet& ms,
                       const nlohmann::json& extra = nlohmann::json::object());
MeasurementSet load_measurements(const std::filesystem::path& csv_path);

/// CSV `x,y,z,Imag_base,Imag_rho,Ielec_base,Ielec_rho`.
void write_field_csv(std::ostream& os, const IndicatorField& field);

struct ReportMetadata {
  std::string config_hash;
  std::uint64_t seed = 0;
  double noise_delta = 0.0;
  nlohmann::json config = nlohmann::json::object();
};

nlohmann::json report_to_json(const ReconstructionReport& report, const ReportMetadata& meta);
ReconstructionReport report_from_json(const nlohmann::json& j);

/// FNV-1a 64-bit of the compact JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

/// `x0:x1:nx,y0:y1:ny,z0:z1:nz`
SamplingGrid parse_grid_spec(std::string_view spec);
std::string grid_spec_string(const SamplingGrid& grid);

/// `fib:L`, `plane:L`, or a path to a JSON file holding either a list of [x,y,z] or a sidecar object.
DirectionSet parse_direction_spec(std::string_view spec);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace emdipole::io
