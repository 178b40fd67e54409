#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nanotrap/trap_analysis.hpp"

namespace nanotrap {

enum class Plane { z, x, y, d };
enum class GridKind { potential, intensity, field };

/// Sampling plane. (u, v) are the in-plane coordinates:
///   z-plane: (x, y) at z = offset      x-plane: (y, z) at x = offset
///   y-plane: (x, z) at y = offset      d-plane: (d, z), d = (y - x)/sqrt(2),
///   offset along (x + y)/sqrt(2)
struct GridSpec {
  Plane plane = Plane::z;
  GridKind kind = GridKind::potential;
  bool auto_offset = true;  // plane through the trap seed
  double offset = 0.0;      // m
  double u_min = -1000e-9, u_max = 1000e-9;
  double v_min = -1000e-9, v_max = 1000e-9;
  bool auto_axial = true;  // for planes containing z: one beat length around the trap plane
  int resolution_u = 101;
  int resolution_v = 101;

  bool operator==(const GridSpec&) const = default;
};

struct RunConfig {
  std::string preset;  // informational; empty for hand-written configs
  FiberSpec fiber;
  LightSpec light;
  ModeId mode_a;
  ModeId mode_b;
  double tau = 0.5;
  double delta = 0.0;
  HybridConvention convention = HybridConvention::circular_sum;
  double c3 = AtomSpec::kDefaultC3;
  SeedRegion seed;
  double temperature = 100e-6;
  double fan_resolution_deg = 2.0;
  GridSpec grid;
  /// Azimuths of further minima at the seed radius (e.g. a mirror minimum).
  std::vector<double> partner_phi;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

class ConfigParseError : public ConfigError {
 public:
  ConfigParseError(const std::string& what, int line, std::string key);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

std::vector<std::string> preset_names();
RunConfig preset(std::string_view name);

/// Parses the flat `section.key = value` format. A `preset = name` line, if
/// present, must come first and provides defaults for the remaining keys.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string write_config(const RunConfig& config);

/// Builds the physical objects described by a config.
ModePair build_pair(const RunConfig& config);
PotentialField build_field(const RunConfig& config);
TrapOptions build_trap_options(const RunConfig& config);

std::string plane_name(Plane p);
Plane parse_plane(std::string_view s);

}  // namespace nanotrap
