// nanotrap: fibre modes, two-mode interference traps and their characterisation.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nanotrap/constants.hpp"
#include "nanotrap/output.hpp"
#include "nanotrap/report.hpp"

using namespace nanotrap;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kIo = 3, kNoTrap = 4 };

struct Common {
  std::string preset;
  std::string config;
  std::string out;
  double tau = -1.0;
};

RunConfig resolve(const Common& c) {
  RunConfig cfg;
  if (!c.config.empty()) {
    cfg = load_config(c.config);
  } else if (!c.preset.empty()) {
    cfg = preset(c.preset);
  } else {
    throw ConfigError("one of --preset or --config is required");
  }
  if (c.tau >= 0.0) cfg.tau = c.tau;
  cfg.validate();
  return cfg;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    std::fflush(stdout);
  } else {
    write_file_atomic(path, content);
  }
}

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
  auto* p = cmd->add_option("--preset", c.preset, "built-in configuration: he11-te01, he11-he21, te01-he21");
  auto* f = cmd->add_option("--config", c.config, "configuration file (key = value)");
  p->excludes(f);
  cmd->add_option("--out", c.out, "output file (default: stdout)");
  if (needs_config) cmd->add_option("--tau", c.tau, "override the power fraction in the first mode")->check(CLI::Range(0.0, 1.0));
}

std::string sweep_csv(const std::vector<SensitivityRow>& rows) {
  std::string out = "tau,trapped,depth_mK,r_nm,phi_rad,z_nm,relative_depth_change,shift_nm,note\n";
  for (const auto& r : rows) {
    const CylPoint c = to_cylindrical(r.minimum);
    std::string note = r.note;
    for (char& ch : note) {
      if (ch == ',' || ch == '"' || ch == '\n') ch = ' ';
    }
    out += format_number(r.tau) + "," + (r.trapped ? "1" : "0") + ",";
    if (r.trapped) {
      out += format_number(constants::to_millikelvin(r.depth)) + "," + format_number(c.r * 1e9) + "," +
             format_number(c.phi) + "," + format_number(c.z * 1e9) + "," + format_number(r.relative_depth_change) +
             "," + format_number(r.shift * 1e9);
    } else {
      out += "nan,nan,nan,nan,nan,nan";
    }
    out += "," + note + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nanofibre mode solver and two-mode atom trap analysis"};
  app.require_subcommand(1);

  Common disp_opts;
  double v_min = 0.6;
  double v_max = 5.0;
  int points = 226;
  auto* disp = app.add_subcommand("dispersion", "effective index of the lowest seven branches versus V");
  add_common(disp, disp_opts, false);
  disp->add_option("--vmin", v_min, "lowest V");
  disp->add_option("--vmax", v_max, "highest V");
  disp->add_option("--points", points, "number of V samples")->check(CLI::PositiveNumber);

  Common grid_opts;
  std::string plane;
  std::string resolution;
  std::string kind;
  auto* grid = app.add_subcommand("grid", "potential, intensity or field on a plane (CSV)");
  add_common(grid, grid_opts, true);
  grid->add_option("--plane", plane, "z, x, y or d");
  grid->add_option("--resolution", resolution, "N or NxM samples");
  grid->add_option("--kind", kind, "potential (mK), intensity (W/m^2) or field (V/m)");

  Common rep_opts;
  std::string format = "json";
  bool no_sensitivity = false;
  auto* report = app.add_subcommand("report", "locate and characterise the trap");
  add_common(report, rep_opts, true);
  report->add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));
  report->add_flag("--no-sensitivity", no_sensitivity, "skip the tau +/- sigma re-analysis");

  Common sweep_opts;
  int sweep_points = 3;
  double span = -1.0;
  auto* sweep = app.add_subcommand("sweep-tau", "trap depth and position versus tau (CSV)");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--points", sweep_points, "number of tau values (odd; 3 gives tau0 and tau0 +/- sigma)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--span", span, "half-width of the tau range (default: sigma)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*disp) {
      FiberSpec fiber;
      if (!disp_opts.config.empty() || !disp_opts.preset.empty()) fiber = resolve(disp_opts).fiber;
      std::vector<std::string> warnings;
      const auto rows = dispersion_sweep(fiber, v_min, v_max, points, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      emit(disp_opts.out, dispersion_csv(rows));
    } else if (*grid) {
      RunConfig cfg = resolve(grid_opts);
      if (!plane.empty()) cfg.grid.plane = parse_plane(plane);
      if (!kind.empty()) {
        if (kind == "potential") {
          cfg.grid.kind = GridKind::potential;
        } else if (kind == "intensity") {
          cfg.grid.kind = GridKind::intensity;
        } else if (kind == "field") {
          cfg.grid.kind = GridKind::field;
        } else {
          throw ConfigError("--kind must be potential, intensity or field");
        }
      }
      if (!resolution.empty()) {
        const auto x = resolution.find('x');
        try {
          cfg.grid.resolution_u = std::stoi(resolution.substr(0, x));
          cfg.grid.resolution_v = x == std::string::npos ? cfg.grid.resolution_u : std::stoi(resolution.substr(x + 1));
        } catch (const std::exception&) {
          throw ConfigError("--resolution must be N or NxM");
        }
      }
      cfg.validate();
      emit(grid_opts.out, grid_csv(compute_grid(cfg)));
    } else if (*report) {
      const RunConfig cfg = resolve(rep_opts);
      const FullReport r = run_report(cfg, !no_sensitivity);
      emit(rep_opts.out, format == "table" ? report_table(r) : report_json(r));
    } else if (*sweep) {
      const RunConfig cfg = resolve(sweep_opts);
      const PotentialField field = build_field(cfg);
      const TrapOptions options = build_trap_options(cfg);
      std::vector<SensitivityRow> rows;
      if (sweep_points == 3 && span < 0) {
        rows = tau_sensitivity(field, options);
      } else {
        const double half = span >= 0 ? span : tau_sigma(cfg.tau);
        std::vector<double> taus;
        for (int i = 0; i < sweep_points; ++i) {
          taus.push_back(sweep_points == 1 ? cfg.tau : cfg.tau - half + 2.0 * half * i / (sweep_points - 1));
        }
        const TrapReport nominal = analyze_trap(field, options);
        rows = tau_sweep(field, options, nominal, taus);
      }
      emit(sweep_opts.out, sweep_csv(rows));
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const NoTrapError& e) {
    std::cerr << "no trap: " << e.what() << "\n";
    return kNoTrap;
  } catch (const SaddleError& e) {
    std::cerr << "no trap: " << e.what() << "\n";
    return kNoTrap;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kUsage;
  } catch (const CutoffError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
