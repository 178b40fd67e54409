#pragma once

#include <string>
#include <vector>

#include "nanotrap/config.hpp"

namespace nanotrap {

inline constexpr int kReportSchemaVersion = 1;

struct PartnerMinimum {
  double seed_phi = 0;
  bool found = false;
  Vec3 minimum{};
  double u_min = 0;
  std::string note;
};

struct FullReport {
  RunConfig config;
  ModeSolution mode_a;
  ModeSolution mode_b;
  TrapReport trap;
  double sigma = 0;
  std::vector<SensitivityRow> sensitivity;
  std::vector<PartnerMinimum> partners;
};

/// solve -> normalise -> minimum -> characterisation -> sensitivity.
FullReport run_report(const RunConfig& config, bool with_sensitivity = true);

/// JSON document (SI values plus nm/mK/kHz conveniences), versioned by schema_version.
std::string report_json(const FullReport& report);
/// Fixed-width summary for terminals.
std::string report_table(const FullReport& report);

}  // namespace nanotrap
