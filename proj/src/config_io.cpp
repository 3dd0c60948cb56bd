#include "twocontact/config_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"

namespace twocontact {

namespace {

using nlohmann::json;

enum class Unit { Length, Mass, Angle, Force, Torque, Acceleration, None };

std::vector<std::pair<std::string, double>> suffixes(Unit u) {
  switch (u) {
    case Unit::Length: return {{"_m", 1.0}, {"_cm", 1e-2}, {"_mm", 1e-3}};
    case Unit::Mass: return {{"_kg", 1.0}, {"_g", 1e-3}};
    case Unit::Angle: return {{"_rad", 1.0}, {"_deg", std::numbers::pi / 180}};
    case Unit::Force: return {{"_N", 1.0}};
    case Unit::Torque: return {{"_Nm", 1.0}};
    case Unit::Acceleration: return {{"_mps2", 1.0}};
    case Unit::None: return {{"", 1.0}};
  }
  return {};
}

std::size_t line_at(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

[[noreturn]] void fail_at(const std::string& source, std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::InvalidConfiguration,
              source + ":" + std::to_string(line) + ": " + msg);
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // The parser reports the byte after the offending token.
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    std::string what = e.what();
    const auto pos = what.find("error: ");
    fail_at(source, line_at(text, byte),
            "malformed JSON: " + (pos == std::string::npos ? what : what.substr(pos + 7)));
  }
}

// Reads unit-suffixed numbers from one JSON object and rejects leftovers.
class ObjectReader {
 public:
  ObjectReader(const json& obj, const std::string& text, const std::string& source,
               std::size_t offset, std::string context)
      : obj_(obj), text_(text), source_(source), offset_(offset), context_(std::move(context)) {
    if (!obj_.is_object()) fail_at(source_, line_at(text_, offset_), context_ + " must be a JSON object");
  }

  std::size_t line_of(const std::string& key) const { return line_at(text_, offset_of(key)); }

  std::size_t offset_of(const std::string& key) const {
    const auto p = text_.find('"' + key + '"', offset_);
    return p == std::string::npos ? offset_ : p;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    fail_at(source_, line_of(key), msg);
  }

  // The key carrying `base` with one of the unit suffixes, if present.
  std::optional<std::pair<std::string, double>> find(const std::string& base, Unit unit) {
    std::optional<std::pair<std::string, double>> hit;
    for (const auto& [suffix, factor] : suffixes(unit)) {
      const std::string key = base + suffix;
      if (!obj_.contains(key)) continue;
      if (hit) fail(key, "'" + key + "' duplicates '" + hit->first + "'");
      hit = std::make_pair(key, factor);
    }
    if (hit) used_.insert(hit->first);
    return hit;
  }

  std::optional<double> number(const std::string& base, Unit unit) {
    const auto hit = find(base, unit);
    if (!hit) return std::nullopt;
    const json& v = obj_.at(hit->first);
    if (!v.is_number()) fail(hit->first, "'" + hit->first + "' must be a number");
    const double x = v.get<double>() * hit->second;
    if (!std::isfinite(x)) fail(hit->first, "'" + hit->first + "' is not finite");
    return x;
  }

  double required(const std::string& base, Unit unit) {
    if (auto v = number(base, unit)) return *v;
    std::string keys;
    for (const auto& s : suffixes(unit)) keys += (keys.empty() ? "" : " or ") + base + s.first;
    fail_at(source_, line_at(text_, offset_), context_ + " is missing " + keys);
  }

  std::optional<std::vector<double>> array(const std::string& base, Unit unit) {
    const auto hit = find(base, unit);
    if (!hit) return std::nullopt;
    const json& v = obj_.at(hit->first);
    if (!v.is_array()) fail(hit->first, "'" + hit->first + "' must be an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) fail(hit->first, "'" + hit->first + "' must contain only numbers");
      out.push_back(e.get<double>() * hit->second);
    }
    return out;
  }

  std::optional<long> integer(const std::string& key) {
    if (!obj_.contains(key)) return std::nullopt;
    used_.insert(key);
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) fail(key, "'" + key + "' must be an integer");
    return v.get<long>();
  }

  const json* child(const std::string& key) {
    if (!obj_.contains(key)) return nullptr;
    used_.insert(key);
    return &obj_.at(key);
  }

  void allow_text(const std::string& key) {
    if (!obj_.contains(key)) return;
    used_.insert(key);
    if (!obj_.at(key).is_string()) fail(key, "'" + key + "' must be a string");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.count(it.key())) fail(it.key(), "unknown key '" + it.key() + "' in " + context_);
    }
  }

 private:
  const json& obj_;
  const std::string& text_;
  const std::string& source_;
  std::size_t offset_;
  std::string context_;
  std::set<std::string> used_;
};

void allow_comments(ObjectReader& r) {
  for (const char* k : {"name", "description", "comment"}) r.allow_text(k);
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Configuration parse_configuration(const std::string& text, const std::string& source) {
  const json doc = parse_json(text, source);
  ObjectReader r(doc, text, source, 0, "configuration");
  allow_comments(r);

  Configuration cfg;
  cfg.m = r.required("mass", Unit::Mass);
  cfg.rho = r.required("rho", Unit::Length);
  cfg.h = r.required("h", Unit::Length);
  cfg.l1 = r.required("l1", Unit::Length);
  cfg.l2 = r.required("l2", Unit::Length);
  cfg.phi1 = r.number("phi1", Unit::Angle).value_or(0.0);
  cfg.phi2 = r.number("phi2", Unit::Angle).value_or(0.0);
  cfg.mu1 = r.required("mu1", Unit::None);
  cfg.mu2 = r.required("mu2", Unit::None);

  const auto slope = r.find("slope", Unit::Angle);
  const bool explicit_load = r.has("f_ex_N") || r.has("alpha_rad") || r.has("alpha_deg") ||
                             r.has("tau_ex_Nm");
  if (slope && explicit_load) {
    r.fail(slope->first, "give either a slope or an explicit load (f_ex_N, alpha, tau_ex_Nm), not both");
  }
  if (slope) {
    const double alpha = r.required("slope", Unit::Angle);
    const double g = r.number("gravity", Unit::Acceleration).value_or(kStandardGravity);
    cfg.f_ex = cfg.m * g;
    cfg.alpha = alpha;
    cfg.tau_ex = 0;
  } else {
    if (r.has("gravity_mps2")) r.fail("gravity_mps2", "gravity_mps2 only applies together with a slope");
    cfg.f_ex = r.required("f_ex", Unit::Force);
    cfg.alpha = r.required("alpha", Unit::Angle);
    cfg.tau_ex = r.number("tau_ex", Unit::Torque).value_or(0.0);
  }
  r.finish();

  if (cfg.m <= 0) r.fail(r.find("mass", Unit::Mass)->first, "mass must be positive");
  if (cfg.rho <= 0) {
    r.fail(r.find("rho", Unit::Length)->first, "radius of gyration must be positive");
  }
  if (cfg.mu1 < 0) r.fail("mu1", "mu1 must be non-negative");
  if (cfg.mu2 < 0) r.fail("mu2", "mu2 must be non-negative");
  try {
    validate(cfg);
  } catch (const Error& e) {
    fail_at(source, 1, e.what());
  }
  return cfg;
}

Configuration load_configuration(const std::string& path) {
  return parse_configuration(read_text_file(path), path);
}

std::string configuration_to_json(const Configuration& cfg) {
  json j;
  j["mass_kg"] = cfg.m;
  j["rho_m"] = cfg.rho;
  j["h_m"] = cfg.h;
  j["l1_m"] = cfg.l1;
  j["l2_m"] = cfg.l2;
  j["phi1_rad"] = cfg.phi1;
  j["phi2_rad"] = cfg.phi2;
  j["mu1"] = cfg.mu1;
  j["mu2"] = cfg.mu2;
  j["f_ex_N"] = cfg.f_ex;
  j["alpha_rad"] = cfg.alpha;
  j["tau_ex_Nm"] = cfg.tau_ex;
  return j.dump(2) + "\n";
}

BipedFile parse_biped(const std::string& text, const std::string& source) {
  const json doc = parse_json(text, source);
  ObjectReader r(doc, text, source, 0, "biped description");
  allow_comments(r);

  BipedFile out;
  BipedSpec& s = out.spec;
  auto set = [&](double& field, const char* base, Unit u) {
    if (auto v = r.number(base, u)) field = *v;
  };
  set(s.beam_mass, "beam_mass", Unit::Mass);
  set(s.beam_length, "beam_length", Unit::Length);
  set(s.leg_mass, "leg_mass", Unit::Mass);
  set(s.cylinder_mass, "cylinder_mass", Unit::Mass);
  set(s.cylinder_radius, "cylinder_radius", Unit::Length);
  set(s.leg_spacing, "leg_spacing", Unit::Length);
  set(s.leg_length, "leg_length", Unit::Length);
  set(s.beam_offset, "beam_offset", Unit::Length);
  set(s.leg1_position, "leg1_position", Unit::Length);
  set(s.cylinder_offset, "cylinder_offset", Unit::Length);
  set(s.alpha, "slope", Unit::Angle);
  set(s.mu1, "mu1", Unit::None);
  set(s.mu2, "mu2", Unit::None);
  set(s.g, "gravity", Unit::Acceleration);
  if (auto cyl = r.array("cylinder_positions", Unit::Length)) {
    if (cyl->size() != 2) {
      r.fail(r.find("cylinder_positions", Unit::Length)->first,
             "cylinder_positions must hold exactly two values");
    }
    s.cylinder_positions = {(*cyl)[0], (*cyl)[1]};
  }

  if (const json* g = r.child("grid")) {
    ObjectReader gr(*g, text, source, r.offset_of("grid"), "grid");
    BipedGrid& grid = out.grid;
    if (auto v = gr.integer("holes")) {
      if (*v < 1) gr.fail("holes", "holes must be at least 1");
      grid.holes = static_cast<int>(*v);
    }
    if (auto v = gr.number("hole_spacing", Unit::Length)) grid.hole_spacing = *v;
    if (auto v = gr.number("centre_shift", Unit::Length)) grid.centre_shift = *v;
    if (auto v = gr.array("leg_lengths", Unit::Length)) {
      if (v->empty()) gr.fail("leg_lengths", "leg_lengths must not be empty");
      for (double x : *v) {
        if (!(x > 0)) gr.fail("leg_lengths", "leg lengths must be positive");
      }
      grid.leg_lengths = *v;
    }
    if (auto v = gr.integer("moving_cylinder")) {
      if (*v != 0 && *v != 1) gr.fail("moving_cylinder", "moving_cylinder must be 0 or 1");
      grid.moving_cylinder = static_cast<int>(*v);
    }
    gr.finish();
  }
  r.finish();

  try {
    biped_to_configuration(s);
  } catch (const Error& e) {
    fail_at(source, 1, e.what());
  }
  return out;
}

BipedFile load_biped(const std::string& path) {
  return parse_biped(read_text_file(path), path);
}

std::string biped_to_json(const BipedFile& file) {
  const BipedSpec& s = file.spec;
  json j;
  j["beam_mass_kg"] = s.beam_mass;
  j["beam_length_m"] = s.beam_length;
  j["leg_mass_kg"] = s.leg_mass;
  j["cylinder_mass_kg"] = s.cylinder_mass;
  j["cylinder_radius_m"] = s.cylinder_radius;
  j["leg_spacing_m"] = s.leg_spacing;
  j["leg_length_m"] = s.leg_length;
  j["beam_offset_m"] = s.beam_offset;
  j["leg1_position_m"] = s.leg1_position;
  j["cylinder_positions_m"] = {s.cylinder_positions[0], s.cylinder_positions[1]};
  j["cylinder_offset_m"] = s.cylinder_offset;
  j["slope_rad"] = s.alpha;
  j["mu1"] = s.mu1;
  j["mu2"] = s.mu2;
  j["gravity_mps2"] = s.g;
  j["grid"] = {{"holes", file.grid.holes},
               {"hole_spacing_m", file.grid.hole_spacing},
               {"centre_shift_m", file.grid.centre_shift},
               {"leg_lengths_m", file.grid.leg_lengths},
               {"moving_cylinder", file.grid.moving_cylinder}};
  return j.dump(2) + "\n";
}

}  // namespace twocontact
