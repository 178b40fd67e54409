#pragma once

#include <map>
#include <mutex>
#include <string>

#include "nanotrap/config.hpp"
#include "nanotrap/trap_analysis.hpp"

namespace fixture {

/// Field of a built-in preset, built once per process.
inline const nanotrap::PotentialField& field(const std::string& preset) {
  static std::map<std::string, nanotrap::PotentialField> cache;
  static std::mutex mu;
  std::lock_guard lock(mu);
  auto it = cache.find(preset);
  if (it == cache.end()) it = cache.emplace(preset, nanotrap::build_field(nanotrap::preset(preset))).first;
  return it->second;
}

/// Minimum of a preset's seed region, located once per process.
inline const nanotrap::Vec3& minimum(const std::string& preset) {
  static std::map<std::string, nanotrap::Vec3> cache;
  static std::mutex mu;
  std::lock_guard lock(mu);
  auto it = cache.find(preset);
  if (it == cache.end()) {
    const auto opts = nanotrap::build_trap_options(nanotrap::preset(preset));
    it = cache.emplace(preset, nanotrap::find_minimum(field(preset), opts.seed)).first;
  }
  return it->second;
}

}  // namespace fixture
