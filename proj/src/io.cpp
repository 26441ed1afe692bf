#include "emdipole/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "emdipole/errors.hpp"

namespace emdipole::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

Vec3 vec3_field(const json& obj, const std::string& key, const std::string& where) {
  const std::string field = where + "." + key;
  if (!obj.contains(key)) throw ParseError("missing field", field);
  const auto& a = obj.at(key);
  if (!a.is_array() || a.size() != 3) throw ParseError("expected an array of three numbers", field);
  Vec3 v;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!a[i].is_number()) throw ParseError("expected a number", field + "[" + std::to_string(i) + "]");
    v[static_cast<int>(i)] = a[i].get<double>();
  }
  return v;
}

json vec3_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

double parse_number(std::string_view text, const std::string& field, int line) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError("cannot parse number '" + std::string(text) + "'", field, line);
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

constexpr std::string_view kMeasurementHeader = "dir_index,sign,k,re1,im1,re2,im2,re3,im3";

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path.string() + "'", "");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in '") + path.string() + "': " + e.what(), "");
  }
}

Scene scene_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dipoles")) throw ParseError("scene must be an object with a dipoles array", "dipoles");
  const auto& arr = j.at("dipoles");
  if (!arr.is_array()) throw ParseError("expected an array", "dipoles");
  std::vector<Dipole> dipoles;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "dipoles[" + std::to_string(i) + "]";
    const auto& d = arr[i];
    if (!d.is_object()) throw ParseError("expected an object", where);
    if (!d.contains("kind") || !d.at("kind").is_string()) throw ParseError("missing or non-string field", where + ".kind");
    Dipole dip;
    try {
      dip.kind = dipole_kind_from_string(d.at("kind").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), where + ".kind");
    }
    dip.location = vec3_field(d, "location", where);
    const Vec3 re = vec3_field(d, "strength_re", where);
    const Vec3 im = d.contains("strength_im") ? vec3_field(d, "strength_im", where) : Vec3::Zero();
    for (int c = 0; c < 3; ++c) dip.strength[c] = Complex(re[c], im[c]);
    dipoles.push_back(dip);
  }
  try {
    return Scene(std::move(dipoles));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), "dipoles");
  }
}

json scene_to_json(const Scene& scene) {
  json arr = json::array();
  for (const auto& d : scene.dipoles()) {
    arr.push_back({{"kind", std::string(to_string(d.kind))},
                   {"location", vec3_json(d.location)},
                   {"strength_re", vec3_json(d.strength.real())},
                   {"strength_im", vec3_json(d.strength.imag())}});
  }
  return {{"dipoles", arr}};
}

Scene load_scene(const std::filesystem::path& path) { return scene_from_json(read_json_file(path)); }

void save_scene(const std::filesystem::path& path, const Scene& scene) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << scene_to_json(scene).dump(2) << '\n';
}

json directions_to_json(const DirectionSet& ds) {
  json arr = json::array();
  for (const auto& d : ds) arr.push_back(vec3_json(d.vec()));
  return {{"provenance", std::string(to_string(ds.provenance()))}, {"directions", arr}};
}

DirectionSet directions_from_json(const json& j) {
  const json* arr = &j;
  DirectionProvenance provenance = DirectionProvenance::explicit_list;
  if (j.is_object()) {
    if (!j.contains("directions")) throw ParseError("missing field", "directions");
    arr = &j.at("directions");
    if (j.contains("provenance")) {
      try {
        provenance = provenance_from_string(j.at("provenance").get<std::string>());
      } catch (const std::exception& e) {
        throw ParseError(e.what(), "provenance");
      }
    }
  }
  if (!arr->is_array()) throw ParseError("expected an array of directions", "directions");
  std::vector<UnitVec3> dirs;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string field = "directions[" + std::to_string(i) + "]";
    const auto& a = (*arr)[i];
    if (!a.is_array() || a.size() != 3) throw ParseError("expected [x, y, z]", field);
    try {
      dirs.emplace_back(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
    } catch (const std::exception& e) {
      throw ParseError(e.what(), field);
    }
  }
  try {
    return DirectionSet(std::move(dirs), provenance);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), "directions");
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".directions.json");
  return p;
}

void write_measurement_csv(std::ostream& os, const MeasurementSet& ms) {
  os << kMeasurementHeader << '\n';
  const auto& grid = ms.grid();
  for (std::size_t l = 0; l < ms.direction_count(); ++l) {
    for (Sign s : {Sign::plus, Sign::minus}) {
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto& e = ms.at(l, s, j);
        os << l << ',' << (s == Sign::plus ? '+' : '-') << ',' << format_double(grid.node(j));
        for (int c = 0; c < 3; ++c) os << ',' << format_double(e[c].real()) << ',' << format_double(e[c].imag());
        os << '\n';
      }
    }
  }
}

MeasurementSet read_measurement_csv(std::istream& is, const DirectionSet& ds, const FrequencyGrid& grid) {
  std::string line;
  int line_no = 1;
  if (!std::getline(is, line) || trim(line) != kMeasurementHeader) {
    throw ParseError("expected header '" + std::string(kMeasurementHeader) + "'", "header", 1);
  }
  MeasurementSet ms(ds, grid);
  std::vector<bool> seen(2 * ds.size() * grid.size(), false);
  static const char* const kColumns[] = {"dir_index", "sign", "k", "re1", "im1", "re2", "im2", "re3", "im3"};

  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cols = split(trim(line), ',');
    if (cols.size() != 9) throw ParseError("expected 9 columns, got " + std::to_string(cols.size()), "row", line_no);

    const double l_raw = parse_number(trim(cols[0]), kColumns[0], line_no);
    if (l_raw < 0 || l_raw != std::floor(l_raw) || l_raw >= static_cast<double>(ds.size())) {
      throw ParseError("direction index out of range", kColumns[0], line_no);
    }
    const auto l = static_cast<std::size_t>(l_raw);
    const auto sign_text = trim(cols[1]);
    Sign sign;
    if (sign_text == "+" || sign_text == "+1" || sign_text == "1") {
      sign = Sign::plus;
    } else if (sign_text == "-" || sign_text == "-1") {
      sign = Sign::minus;
    } else {
      throw ParseError("sign must be '+' or '-'", kColumns[1], line_no);
    }
    const double k = parse_number(trim(cols[2]), kColumns[2], line_no);
    std::size_t j = 0;
    try {
      j = grid.index_of(k);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), kColumns[2], line_no);
    }
    CVec3 e;
    for (int c = 0; c < 3; ++c) {
      const auto ci = static_cast<std::size_t>(3 + 2 * c);
      e[c] = Complex(parse_number(trim(cols[ci]), kColumns[ci], line_no),
                     parse_number(trim(cols[ci + 1]), kColumns[ci + 1], line_no));
    }
    if (!e.allFinite()) throw ParseError("non-finite sample", "row", line_no);
    const std::size_t at = ms.index(l, sign, j);
    if (seen[at]) throw ParseError("duplicate sample", "row", line_no);
    seen[at] = true;
    ms.at(l, sign, j) = e;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ParseError("measurement file is missing " + std::to_string(seen.size() - static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true))) + " samples", "row");
  }
  return ms;
}

void save_measurements(const std::filesystem::path& csv_path, const MeasurementSet& ms, const json& extra) {
  {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write '" + csv_path.string() + "'");
    write_measurement_csv(out, ms);
  }
  json meta = directions_to_json(ms.directions());
  meta["k_max"] = ms.grid().k_max();
  meta["count"] = ms.grid().size();
  for (const auto& [key, value] : extra.items()) meta[key] = value;
  std::ofstream side(sidecar_path(csv_path));
  if (!side) throw std::runtime_error("cannot write '" + sidecar_path(csv_path).string() + "'");
  side << meta.dump(2) << '\n';
}

MeasurementSet load_measurements(const std::filesystem::path& csv_path) {
  const json meta = read_json_file(sidecar_path(csv_path));
  const DirectionSet ds = directions_from_json(meta);
  if (!meta.contains("k_max") || !meta.at("k_max").is_number()) throw ParseError("missing field", "k_max");
  if (!meta.contains("count") || !meta.at("count").is_number_unsigned()) throw ParseError("missing field", "count");
  std::optional<FrequencyGrid> grid;
  try {
    grid.emplace(meta.at("k_max").get<double>(), meta.at("count").get<std::size_t>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), "count");
  }
  std::ifstream in(csv_path);
  if (!in) throw ParseError("cannot open file '" + csv_path.string() + "'", "");
  return read_measurement_csv(in, ds, *grid);
}

void write_field_csv(std::ostream& os, const IndicatorField& field) {
  os << "x,y,z,Imag_base,Imag_rho,Ielec_base,Ielec_rho\n";
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    const Vec3 z = field.grid.node(i);
    os << format_double(z[0]) << ',' << format_double(z[1]) << ',' << format_double(z[2]) << ','
       << format_double(field.base_mag[i]) << ',' << format_double(field.values_mag[i]) << ','
       << format_double(field.base_elec[i]) << ',' << format_double(field.values_elec[i]) << '\n';
  }
}

json report_to_json(const ReconstructionReport& report, const ReportMetadata& meta) {
  json dipoles = json::array();
  for (const auto& d : report.dipoles) {
    dipoles.push_back({{"kind", std::string(to_string(d.kind))},
                       {"location", vec3_json(d.location)},
                       {"strength_re", vec3_json(d.strength.real())},
                       {"strength_im", vec3_json(d.strength.imag())},
                       {"direction_pair", json::array({d.first_direction, d.second_direction})},
                       {"k_max", d.k_max},
                       {"support", d.support}});
  }
  json failures = json::array();
  for (const auto& f : report.failures) {
    failures.push_back(
        {{"kind", std::string(to_string(f.kind))}, {"location", vec3_json(f.location)}, {"reason", f.reason}});
  }
  json rejected = json::array();
  for (const auto& r : report.rejected) {
    rejected.push_back(
        {{"kind", std::string(to_string(r.kind))}, {"location", vec3_json(r.location)}, {"support", r.support}});
  }
  return {{"metadata",
           {{"config_hash", meta.config_hash}, {"seed", meta.seed}, {"noise_delta", meta.noise_delta}, {"config", meta.config}}},
          {"dipoles", dipoles},
          {"failures", failures},
          {"rejected", rejected}};
}

ReconstructionReport report_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dipoles") || !j.at("dipoles").is_array()) {
    throw ParseError("report must be an object with a dipoles array", "dipoles");
  }
  ReconstructionReport report;
  const auto& arr = j.at("dipoles");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "dipoles[" + std::to_string(i) + "]";
    const auto& d = arr[i];
    if (!d.is_object()) throw ParseError("expected an object", where);
    RecoveredDipole r;
    try {
      r.kind = dipole_kind_from_string(d.value("kind", std::string()));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), where + ".kind");
    }
    r.location = vec3_field(d, "location", where);
    const Vec3 re = vec3_field(d, "strength_re", where);
    const Vec3 im = vec3_field(d, "strength_im", where);
    for (int c = 0; c < 3; ++c) r.strength[c] = Complex(re[c], im[c]);
    if (d.contains("direction_pair")) {
      const auto& p = d.at("direction_pair");
      if (!p.is_array() || p.size() != 2) throw ParseError("expected two indices", where + ".direction_pair");
      r.first_direction = p[0].get<std::size_t>();
      r.second_direction = p[1].get<std::size_t>();
    }
    r.k_max = d.value("k_max", 0.0);
    r.support = d.value("support", 0.0);
    report.dipoles.push_back(r);
  }
  if (j.contains("failures") && j.at("failures").is_array()) {
    for (const auto& f : j.at("failures")) {
      RecoveryFailure rf;
      rf.kind = dipole_kind_from_string(f.value("kind", std::string("magnetic")));
      rf.location = vec3_field(f, "location", "failures");
      rf.reason = f.value("reason", std::string());
      report.failures.push_back(rf);
    }
  }
  if (j.contains("rejected") && j.at("rejected").is_array()) {
    for (const auto& r : j.at("rejected")) {
      RejectedCandidate rc;
      rc.kind = dipole_kind_from_string(r.value("kind", std::string("magnetic")));
      rc.location = vec3_field(r, "location", "rejected");
      rc.support = r.value("support", 0.0);
      report.rejected.push_back(rc);
    }
  }
  return report;
}

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SamplingGrid parse_grid_spec(std::string_view spec) {
  const auto axes = split(trim(spec), ',');
  if (axes.size() != 3) throw ParseError("grid spec needs three comma-separated axes x0:x1:n", "grid");
  SamplingGrid g;
  static const char* const kAxis[] = {"grid.x", "grid.y", "grid.z"};
  for (std::size_t a = 0; a < 3; ++a) {
    const auto parts = split(trim(axes[a]), ':');
    if (parts.size() != 3) throw ParseError("axis must be lo:hi:count", kAxis[a]);
    g.lower[static_cast<int>(a)] = parse_number(trim(parts[0]), kAxis[a], 0);
    g.upper[static_cast<int>(a)] = parse_number(trim(parts[1]), kAxis[a], 0);
    const double n = parse_number(trim(parts[2]), kAxis[a], 0);
    if (n < 1 || n != std::floor(n)) throw ParseError("axis count must be a positive integer", kAxis[a]);
    g.counts[a] = static_cast<std::size_t>(n);
    if (g.counts[a] == 1 && g.lower[static_cast<int>(a)] != g.upper[static_cast<int>(a)]) {
      throw ParseError("an axis with one node needs equal bounds", kAxis[a]);
    }
  }
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), "grid");
  }
  return g;
}

std::string grid_spec_string(const SamplingGrid& g) {
  std::ostringstream os;
  for (int a = 0; a < 3; ++a) {
    if (a) os << ',';
    os << format_double(g.lower[a]) << ':' << format_double(g.upper[a]) << ':' << g.counts[static_cast<std::size_t>(a)];
  }
  return os.str();
}

DirectionSet parse_direction_spec(std::string_view spec) {
  auto count_after = [&](std::size_t prefix) {
    const double n = parse_number(spec.substr(prefix), "directions", 0);
    if (n < 1 || n != std::floor(n)) throw ParseError("direction count must be a positive integer", "directions");
    return static_cast<int>(n);
  };
  if (spec.starts_with("fib:")) return fibonacci_directions(count_after(4));
  if (spec.starts_with("plane:")) return planar_directions(count_after(6));
  return directions_from_json(read_json_file(std::filesystem::path(std::string(spec))));
}

}  // namespace emdipole::io
