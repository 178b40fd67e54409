#include "nanotrap/output.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "nanotrap/constants.hpp"

namespace nanotrap {

namespace {

const char* const kBranches[] = {"HE11", "TE01", "TM01", "HE21", "EH11", "HE31", "HE12"};

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path + "'");
  }
}

std::vector<DispersionRow> dispersion_sweep(const FiberSpec& fiber, double v_min, double v_max, int points,
                                            std::vector<std::string>* warnings) {
  fiber.validate();
  if (points < 2 || !(v_max > v_min) || !(v_min >= 0)) {
    throw ConfigError("dispersion sweep needs 0 <= v_min < v_max and at least 2 points");
  }
  const double na = std::sqrt(fiber.n_core * fiber.n_core - fiber.n_clad * fiber.n_clad);
  std::vector<DispersionRow> rows;
  for (int i = 0; i < points; ++i) {
    const double v = (v_min * (points - 1 - i) + v_max * i) / (points - 1);
    if (!(v > 0)) continue;
    const double wavelength = 2.0 * std::numbers::pi * fiber.radius * na / v;
    for (const char* name : kBranches) {
      const ModeId id = ModeId::parse(name);
      if (cutoff_v(fiber, id) >= v) continue;
      try {
        const ModeSolution sol = solve_mode(fiber, wavelength, id);
        rows.push_back({v, name, sol.effective_index()});
      } catch (const SolverError& e) {
        if (warnings) warnings->push_back("V = " + format_number(v) + ": " + e.what());
      }
    }
  }
  return rows;
}

std::string dispersion_csv(const std::vector<DispersionRow>& rows) {
  std::string out = "V,mode,beta_over_k0\n";
  for (const auto& r : rows) {
    out += format_number(r.v) + "," + r.mode + "," + format_number(r.beta_over_k0) + "\n";
  }
  return out;
}

GridSpec resolve_grid(const RunConfig& config, const PotentialField& field) {
  GridSpec g = config.grid;
  double trap_z = seed_axial_position(field, config.seed);
  double z0 = 0.0;
  try {
    z0 = beat_length(field.pair());
  } catch (const ConfigError&) {
    z0 = 0.0;
  }
  if (g.auto_offset) {
    g.offset = g.plane == Plane::z ? trap_z : 0.0;
    g.auto_offset = false;
  }
  if (g.auto_axial) {
    if (g.plane != Plane::z) {
      const double half = z0 > 0 ? 0.5 * z0 : 1e-6;
      g.v_min = trap_z - half;
      g.v_max = trap_z + half;
    }
    g.auto_axial = false;
  }
  return g;
}

std::vector<Vec3> grid_points(const GridSpec& g) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(g.resolution_u) * g.resolution_v);
  const double s = std::numbers::sqrt2 / 2.0;
  for (int j = 0; j < g.resolution_v; ++j) {
    const double v = (g.v_min * (g.resolution_v - 1 - j) + g.v_max * j) / (g.resolution_v - 1);
    for (int i = 0; i < g.resolution_u; ++i) {
      const double u = (g.u_min * (g.resolution_u - 1 - i) + g.u_max * i) / (g.resolution_u - 1);
      switch (g.plane) {
        case Plane::z: pts.push_back({u, v, g.offset}); break;
        case Plane::x: pts.push_back({g.offset, u, v}); break;
        case Plane::y: pts.push_back({u, g.offset, v}); break;
        case Plane::d: pts.push_back({s * (g.offset - u), s * (g.offset + u), v}); break;
      }
    }
  }
  return pts;
}

Grid compute_grid(const RunConfig& config, Execution exec) {
  const PotentialField field = build_field(config);
  Grid grid;
  grid.spec = resolve_grid(config, field);
  grid.points = grid_points(grid.spec);
  switch (grid.spec.kind) {
    case GridKind::potential: {
      grid.values = evaluate_grid(field, grid.points, GridQuantity::potential, exec);
      for (double& v : grid.values) v = constants::to_millikelvin(v);
      break;
    }
    case GridKind::intensity:
      grid.values = evaluate_grid(field, grid.points, GridQuantity::intensity, exec);
      break;
    case GridKind::field:
      grid.fields = evaluate_field_grid(field.pair(), grid.points, exec);
      break;
  }
  return grid;
}

std::string grid_csv(const Grid& grid) {
  std::string out = "x_nm,y_nm,z_nm,";
  switch (grid.spec.kind) {
    case GridKind::potential: out += "U_mK\n"; break;
    case GridKind::intensity: out += "intensity\n"; break;
    case GridKind::field: out += "Ex_re,Ex_im,Ey_re,Ey_im,Ez_re,Ez_im\n"; break;
  }
  for (std::size_t k = 0; k < grid.points.size(); ++k) {
    const Vec3& p = grid.points[k];
    out += format_number(p[0] * 1e9) + "," + format_number(p[1] * 1e9) + "," + format_number(p[2] * 1e9);
    if (grid.spec.kind == GridKind::field) {
      for (const Complex& c : grid.fields[k]) out += "," + format_number(c.real()) + "," + format_number(c.imag());
    } else {
      out += "," + format_number(grid.values[k]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace nanotrap
