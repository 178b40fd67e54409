#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nanotrap/config.hpp"

namespace nanotrap {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form; "nan"/"inf" for non-finite values.
std::string format_number(double v);

/// Writes `content` to a temporary file beside `path` and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

struct DispersionRow {
  double v;
  std::string mode;
  double beta_over_k0;
};

/// beta/k0 for the seven lowest branches over [v_min, v_max] (fibre indices
/// from `fiber`, V varied through the wavelength). Unguided points are skipped.
std::vector<DispersionRow> dispersion_sweep(const FiberSpec& fiber, double v_min, double v_max, int points,
                                            std::vector<std::string>* warnings = nullptr);
std::string dispersion_csv(const std::vector<DispersionRow>& rows);

struct Grid {
  GridSpec spec;
  std::vector<Vec3> points;  // row-major: v outer, u inner
  std::vector<double> values;
  std::vector<CVec3> fields;  // GridKind::field only (Cartesian components)
};

/// Resolves automatic plane offset and axial range against a trap seed.
GridSpec resolve_grid(const RunConfig& config, const PotentialField& field);
std::vector<Vec3> grid_points(const GridSpec& spec);
Grid compute_grid(const RunConfig& config, Execution exec = Execution::parallel);
std::string grid_csv(const Grid& grid);

}  // namespace nanotrap
