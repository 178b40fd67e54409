#include "nanotrap/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "nanotrap/output.hpp"

namespace nanotrap {

namespace {

constexpr double kPi = std::numbers::pi;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct Cursor {
  int line;
  std::string key;
  std::string_view value;

  [[noreturn]] void fail(const std::string& why) const { throw ConfigParseError(why, line, key); }

  /// Parses a number given in units of 10^unit_exp; the unit shift is applied
  /// to the decimal exponent so that the conversion rounds only once.
  double number(int unit_exp = 0) const {
    std::string_view v = value;
    double factor = 1.0;
    if (v.size() >= 2 && lower(v.substr(v.size() - 2)) == "pi") {
      v = trim(v.substr(0, v.size() - 2));
      if (!v.empty() && v.back() == '*') v = trim(v.substr(0, v.size() - 1));
      factor = kPi;
      if (v.empty() || v == "+") return kPi;
      if (v == "-") return -kPi;
    }
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) fail("expected a number");
    if (unit_exp != 0) {
      std::string text(v);
      int exp = unit_exp;
      const std::size_t e = text.find_first_of("eE");
      if (e != std::string::npos) {
        exp += std::stoi(text.substr(e + 1));
        text.resize(e);
      }
      text += "e" + std::to_string(exp);
      ec = std::from_chars(text.data(), text.data() + text.size(), out).ec;
      if (ec != std::errc() || !std::isfinite(out)) fail("number out of range");
    }
    return out * factor;
  }

  bool is_auto() const { return lower(value) == "auto"; }

  bool boolean() const {
    const std::string v = lower(value);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail("expected true or false");
  }
};

ModeId parse_mode(const Cursor& c) {
  try {
    return ModeId::parse(c.value);
  } catch (const ConfigError& e) {
    c.fail(e.what());
  }
}

using Setter = std::function<void(RunConfig&, const Cursor&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"fiber.radius_nm", [](RunConfig& r, const Cursor& c) { r.fiber.radius = c.number(-9); }},
      {"fiber.n_core", [](RunConfig& r, const Cursor& c) { r.fiber.n_core = c.number(); }},
      {"fiber.n_clad", [](RunConfig& r, const Cursor& c) { r.fiber.n_clad = c.number(); }},
      {"light.wavelength_nm", [](RunConfig& r, const Cursor& c) { r.light.wavelength = c.number(-9); }},
      {"light.power_mw", [](RunConfig& r, const Cursor& c) { r.light.power = c.number(-3); }},
      {"pair.mode_a",
       [](RunConfig& r, const Cursor& c) {
         const double o = r.mode_a.orientation;
         r.mode_a = parse_mode(c);
         r.mode_a.orientation = o;
       }},
      {"pair.mode_b",
       [](RunConfig& r, const Cursor& c) {
         const double o = r.mode_b.orientation;
         r.mode_b = parse_mode(c);
         r.mode_b.orientation = o;
       }},
      {"pair.orientation_a", [](RunConfig& r, const Cursor& c) { r.mode_a.orientation = c.number(); }},
      {"pair.orientation_b", [](RunConfig& r, const Cursor& c) { r.mode_b.orientation = c.number(); }},
      {"pair.tau", [](RunConfig& r, const Cursor& c) { r.tau = c.number(); }},
      {"pair.delta", [](RunConfig& r, const Cursor& c) { r.delta = c.number(); }},
      {"pair.convention",
       [](RunConfig& r, const Cursor& c) {
         const std::string v = lower(c.value);
         if (v == "circular_sum") {
           r.convention = HybridConvention::circular_sum;
         } else if (v == "physical") {
           r.convention = HybridConvention::physical;
         } else {
           c.fail("expected circular_sum or physical");
         }
       }},
      {"atom.c3", [](RunConfig& r, const Cursor& c) { r.c3 = c.number(); }},
      {"seed.r_nm", [](RunConfig& r, const Cursor& c) { r.seed.center.r = c.number(-9); }},
      {"seed.phi", [](RunConfig& r, const Cursor& c) { r.seed.center.phi = c.number(); }},
      {"seed.z_nm",
       [](RunConfig& r, const Cursor& c) {
         r.seed.auto_z = c.is_auto();
         r.seed.center.z = r.seed.auto_z ? 0.0 : c.number(-9);
       }},
      {"seed.radial_halfwidth_nm", [](RunConfig& r, const Cursor& c) { r.seed.radial_halfwidth = c.number(-9); }},
      {"seed.azimuthal_halfwidth", [](RunConfig& r, const Cursor& c) { r.seed.azimuthal_halfwidth = c.number(); }},
      {"seed.axial_halfwidth_nm",
       [](RunConfig& r, const Cursor& c) { r.seed.axial_halfwidth = c.is_auto() ? 0.0 : c.number(-9); }},
      {"seed.partner_phi",
       [](RunConfig& r, const Cursor& c) {
         r.partner_phi.clear();
         if (lower(c.value) == "none") return;
         std::string_view rest = c.value;
         while (!trim(rest).empty()) {
           const std::size_t comma = rest.find(',');
           Cursor item = c;
           item.value = trim(rest.substr(0, comma));
           r.partner_phi.push_back(item.number());
           if (comma == std::string_view::npos) break;
           rest = rest.substr(comma + 1);
         }
       }},
      {"thermal.temperature_uk", [](RunConfig& r, const Cursor& c) { r.temperature = c.number(-6); }},
      {"analysis.fan_resolution_deg", [](RunConfig& r, const Cursor& c) { r.fan_resolution_deg = c.number(); }},
      {"grid.plane",
       [](RunConfig& r, const Cursor& c) {
         try {
           r.grid.plane = parse_plane(c.value);
         } catch (const ConfigError& e) {
           c.fail(e.what());
         }
       }},
      {"grid.kind",
       [](RunConfig& r, const Cursor& c) {
         const std::string v = lower(c.value);
         if (v == "potential") {
           r.grid.kind = GridKind::potential;
         } else if (v == "intensity") {
           r.grid.kind = GridKind::intensity;
         } else if (v == "field") {
           r.grid.kind = GridKind::field;
         } else {
           c.fail("expected potential, intensity or field");
         }
       }},
      {"grid.offset_nm",
       [](RunConfig& r, const Cursor& c) {
         r.grid.auto_offset = c.is_auto();
         r.grid.offset = r.grid.auto_offset ? 0.0 : c.number(-9);
       }},
      {"grid.u_min_nm", [](RunConfig& r, const Cursor& c) { r.grid.u_min = c.number(-9); }},
      {"grid.u_max_nm", [](RunConfig& r, const Cursor& c) { r.grid.u_max = c.number(-9); }},
      {"grid.v_range_nm",
       [](RunConfig& r, const Cursor& c) {
         r.grid.auto_axial = c.is_auto();
         if (r.grid.auto_axial) return;
         const std::size_t sep = c.value.find(':');
         if (sep == std::string_view::npos) c.fail("expected auto or min:max");
         Cursor lo = c;
         Cursor hi = c;
         lo.value = trim(c.value.substr(0, sep));
         hi.value = trim(c.value.substr(sep + 1));
         r.grid.v_min = lo.number(-9);
         r.grid.v_max = hi.number(-9);
       }},
      {"grid.resolution",
       [](RunConfig& r, const Cursor& c) {
         const std::string v = lower(c.value);
         const std::size_t x = v.find('x');
         auto count = [&](std::string_view s) {
           int n = 0;
           const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
           if (ec != std::errc() || ptr != s.data() + s.size()) c.fail("expected N or NxM");
           return n;
         };
         if (x == std::string::npos) {
           r.grid.resolution_u = r.grid.resolution_v = count(trim(v));
         } else {
           r.grid.resolution_u = count(trim(std::string_view(v).substr(0, x)));
           r.grid.resolution_v = count(trim(std::string_view(v).substr(x + 1)));
         }
       }},
  };
  return table;
}

RunConfig base_preset(const std::string& name, Plane plane) {
  RunConfig c;
  c.preset = name;
  c.grid.plane = plane;
  c.seed.auto_z = true;
  return c;
}

// Plain decimal text of v expressed in units of 10^unit_exp, built by moving
// the decimal point of the shortest round-trip digits.
std::string scaled(double v, int unit_exp) {
  if (v == 0.0 || !std::isfinite(v)) return format_number(v);
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  std::string sci(buf, res.ptr);
  const bool negative = sci.front() == '-';
  if (negative) sci.erase(0, 1);
  const std::size_t e = sci.find('e');
  const int exp = std::stoi(sci.substr(e + 1)) - unit_exp;
  std::string digits = sci.substr(0, e);
  digits.erase(std::remove(digits.begin(), digits.end(), '.'), digits.end());
  const int point = exp + 1;  // digits before the decimal point
  std::string out;
  if (point <= 0) {
    out = "0." + std::string(-point, '0') + digits;
  } else if (point >= static_cast<int>(digits.size())) {
    out = digits + std::string(point - digits.size(), '0');
  } else {
    out = digits.substr(0, point) + "." + digits.substr(point);
  }
  return negative ? "-" + out : out;
}

}  // namespace

ConfigParseError::ConfigParseError(const std::string& what, int line, std::string key)
    : ConfigError("line " + std::to_string(line) + (key.empty() ? "" : ", key '" + key + "'") + ": " + what),
      line_(line),
      key_(std::move(key)) {}

std::string plane_name(Plane p) {
  switch (p) {
    case Plane::z: return "z";
    case Plane::x: return "x";
    case Plane::y: return "y";
    case Plane::d: return "d";
  }
  return "z";
}

Plane parse_plane(std::string_view s) {
  const std::string v = lower(trim(s));
  if (v == "z") return Plane::z;
  if (v == "x") return Plane::x;
  if (v == "y") return Plane::y;
  if (v == "d" || v == "zd") return Plane::d;
  throw ConfigError("unknown plane '" + std::string(s) + "' (expected z, x, y or d)");
}

void RunConfig::validate() const {
  fiber.validate();
  light.validate();
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("pair.tau must lie in [0, 1]");
  for (const ModeId& m : {mode_a, mode_b}) {
    if (m.family == ModeFamily::TM) {
      throw ConfigError("unsupported trap: " + m.name() +
                        " has a purely radial evanescent field that no partner mode cancels, so it cannot form a trap");
    }
  }
  if (mode_a.same_mode(mode_b)) throw ConfigError("pair.mode_a and pair.mode_b must differ");
  if (!(c3 >= 0)) throw ConfigError("atom.c3 must be non-negative");
  if (!(seed.center.r > fiber.radius)) throw ConfigError("seed.r_nm must lie outside the fibre");
  if (!(seed.radial_halfwidth > 0) || !(seed.azimuthal_halfwidth > 0) || !(seed.axial_halfwidth >= 0)) {
    throw ConfigError("seed half-widths must be positive");
  }
  if (!(temperature > 0)) throw ConfigError("thermal.temperature_uk must be positive");
  if (!(fan_resolution_deg > 0 && fan_resolution_deg <= 30)) {
    throw ConfigError("analysis.fan_resolution_deg must lie in (0, 30]");
  }
  if (grid.resolution_u < 2 || grid.resolution_v < 2) throw ConfigError("grid.resolution must be >= 2 per axis");
  if (!(grid.u_max > grid.u_min)) throw ConfigError("grid.u_max_nm must exceed grid.u_min_nm");
  if (!grid.auto_axial && !(grid.v_max > grid.v_min)) throw ConfigError("grid.v_range_nm must be increasing");
}

std::vector<std::string> preset_names() { return {"he11-te01", "he11-he21", "te01-he21"}; }

RunConfig preset(std::string_view name) {
  const std::string n = lower(trim(name));
  RunConfig c;
  if (n == "he11-te01") {
    c = base_preset(n, Plane::z);
    c.mode_a = ModeId::parse("HE11");
    c.mode_b = ModeId::parse("TE01");
    c.tau = 0.72;
    c.light = {850.5e-9, 50e-3};
    c.seed.center = {534e-9, kPi / 2, 0.0};
  } else if (n == "he11-he21") {
    c = base_preset(n, Plane::z);
    c.mode_a = ModeId::parse("HE11");
    c.mode_b = ModeId::parse("HE21");
    c.tau = 0.84;
    c.light = {849.0e-9, 25e-3};
    c.seed.center = {552e-9, 0.0, 0.0};
  } else if (n == "te01-he21") {
    c = base_preset(n, Plane::d);
    c.mode_a = ModeId::parse("TE01");
    c.mode_b = ModeId::parse("HE21");
    c.tau = 0.68;
    c.light = {851.0e-9, 30e-3};
    c.seed.center = {584e-9, 3 * kPi / 4, 0.0};
    c.partner_phi = {-kPi / 4};
  } else {
    std::string known;
    for (const auto& p : preset_names()) known += (known.empty() ? "" : ", ") + p;
    throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
  }
  return c;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  int line_no = 0;
  bool any_key = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigParseError("expected 'key = value'", line_no, "");
    Cursor cur{line_no, lower(trim(line.substr(0, eq))), trim(line.substr(eq + 1))};
    if (cur.value.empty()) cur.fail("missing value");
    if (!seen.insert(cur.key).second) cur.fail("duplicate key");
    if (cur.key == "preset") {
      if (any_key) cur.fail("preset must be the first key");
      try {
        cfg = preset(cur.value);
      } catch (const ConfigError& e) {
        cur.fail(e.what());
      }
      any_key = true;
      continue;
    }
    any_key = true;
    const auto& table = setters();
    const auto it = table.find(cur.key);
    if (it == table.end()) cur.fail("unknown key");
    it->second(cfg, cur);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string write_config(const RunConfig& c) {
  std::ostringstream os;
  auto kv = [&](const std::string& k, const std::string& v) { os << k << " = " << v << '\n'; };
  auto num = [](double v) { return format_number(v); };
  os << "# nanotrap run configuration\n";
  if (!c.preset.empty()) kv("preset", c.preset);
  auto nm = [](double v) { return scaled(v, -9); };
  kv("fiber.radius_nm", nm(c.fiber.radius));
  kv("fiber.n_core", num(c.fiber.n_core));
  kv("fiber.n_clad", num(c.fiber.n_clad));
  kv("light.wavelength_nm", nm(c.light.wavelength));
  kv("light.power_mw", scaled(c.light.power, -3));
  kv("pair.mode_a", c.mode_a.name());
  kv("pair.mode_b", c.mode_b.name());
  kv("pair.orientation_a", num(c.mode_a.orientation));
  kv("pair.orientation_b", num(c.mode_b.orientation));
  kv("pair.tau", num(c.tau));
  kv("pair.delta", num(c.delta));
  kv("pair.convention", c.convention == HybridConvention::circular_sum ? "circular_sum" : "physical");
  kv("atom.c3", num(c.c3));
  kv("seed.r_nm", nm(c.seed.center.r));
  kv("seed.phi", num(c.seed.center.phi));
  kv("seed.z_nm", c.seed.auto_z ? "auto" : nm(c.seed.center.z));
  kv("seed.radial_halfwidth_nm", nm(c.seed.radial_halfwidth));
  kv("seed.azimuthal_halfwidth", num(c.seed.azimuthal_halfwidth));
  kv("seed.axial_halfwidth_nm", c.seed.axial_halfwidth == 0.0 ? "auto" : nm(c.seed.axial_halfwidth));
  std::string partners;
  for (double p : c.partner_phi) partners += (partners.empty() ? "" : ", ") + num(p);
  kv("seed.partner_phi", partners.empty() ? "none" : partners);
  kv("thermal.temperature_uk", scaled(c.temperature, -6));
  kv("analysis.fan_resolution_deg", num(c.fan_resolution_deg));
  kv("grid.plane", plane_name(c.grid.plane));
  kv("grid.kind", c.grid.kind == GridKind::potential ? "potential"
                  : c.grid.kind == GridKind::intensity ? "intensity"
                                                       : "field");
  kv("grid.offset_nm", c.grid.auto_offset ? "auto" : nm(c.grid.offset));
  kv("grid.u_min_nm", nm(c.grid.u_min));
  kv("grid.u_max_nm", nm(c.grid.u_max));
  kv("grid.v_range_nm", c.grid.auto_axial ? "auto" : nm(c.grid.v_min) + ":" + nm(c.grid.v_max));
  kv("grid.resolution", std::to_string(c.grid.resolution_u) + "x" + std::to_string(c.grid.resolution_v));
  return os.str();
}

ModePair build_pair(const RunConfig& c) {
  c.validate();
  ModePair pair = make_mode_pair(c.fiber, c.light, c.mode_a, c.mode_b, c.tau, c.delta, c.convention);
  return pair;
}

PotentialField build_field(const RunConfig& c) {
  AtomSpec atom = AtomSpec::cesium();
  atom.c3 = c.c3;
  return PotentialField(build_pair(c), atom);
}

TrapOptions build_trap_options(const RunConfig& c) {
  TrapOptions o;
  o.seed = c.seed;
  o.state.temperature = c.temperature;
  o.fan.resolution_deg = c.fan_resolution_deg;
  return o;
}

}  // namespace nanotrap
