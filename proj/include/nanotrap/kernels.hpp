#pragma once

#include <vector>

#include "nanotrap/potential.hpp"

namespace nanotrap {

enum class Execution { serial, parallel };

/// Threads used by Execution::parallel: NANOTRAP_THREADS if set and positive,
/// otherwise the OpenMP default.
int thread_count();

enum class GridQuantity { potential, intensity };

/// Evaluates the quantity at each point. Points with r <= a (inside the fibre)
/// get NaN.
std::vector<double> evaluate_grid(const PotentialField& field, const std::vector<Vec3>& points,
                                  GridQuantity quantity, Execution exec = Execution::parallel);

/// Total E field (Cartesian components) at each point; NaN inside the fibre.
std::vector<CVec3> evaluate_field_grid(const ModePair& pair, const std::vector<Vec3>& points,
                                       Execution exec = Execution::parallel);

struct RayOptions {
  double max_length = 3e-6;  // m
  double min_step = 1e-9;    // m
  double relative_step = 0.02;
  double surface_margin = 0.5e-9;
};

/// First potential maximum met when walking from `origin` along a direction.
struct RayBarrier {
  double height = 0;   // U_barrier (J)
  double length = 0;   // distance to the barrier (m)
  bool hit_surface = false;
  bool reached_end = false;
};

RayBarrier ray_barrier(const PotentialField& field, const Vec3& origin, const Vec3& direction,
                       const RayOptions& options);

std::vector<RayBarrier> scan_rays(const PotentialField& field, const Vec3& origin,
                                  const std::vector<Vec3>& directions, const RayOptions& options,
                                  Execution exec = Execution::parallel);

}  // namespace nanotrap
