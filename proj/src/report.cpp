#include "nanotrap/report.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "json.hpp"
#include "nanotrap/constants.hpp"
#include "nanotrap/output.hpp"

namespace nanotrap {

using json = nlohmann::ordered_json;
using constants::to_millikelvin;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

json vec(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }
json vec_scaled(const Vec3& v, double s) { return json::array({v[0] * s, v[1] * s, v[2] * s}); }

json mode_json(const ModeSolution& m) {
  return {{"mode", m.mode.name()},
          {"orientation_rad", m.mode.orientation},
          {"effective_index", m.effective_index()},
          {"beta_rad_per_m", m.beta},
          {"h_rad_per_m", m.h},
          {"q_rad_per_m", m.q},
          {"s", m.s},
          {"decay_length_m", m.decay_length},
          {"decay_length_nm", m.decay_length * 1e9},
          {"amplitude", m.amplitude}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

FullReport run_report(const RunConfig& config, bool with_sensitivity) {
  FullReport rep;
  rep.config = config;
  const PotentialField field = build_field(config);
  const TrapOptions options = build_trap_options(config);
  rep.mode_a = field.pair().a;
  rep.mode_b = field.pair().b;
  rep.trap = analyze_trap(field, options);
  rep.sigma = tau_sigma(config.tau);
  if (with_sensitivity) rep.sensitivity = tau_sensitivity(field, options, &rep.trap);
  for (double phi : config.partner_phi) {
    PartnerMinimum pm;
    pm.seed_phi = phi;
    SeedRegion seed = options.seed;
    seed.center.phi = phi;
    try {
      pm.minimum = find_minimum(field, seed);
      pm.u_min = field.total(pm.minimum);
      pm.found = true;
    } catch (const NoTrapError& e) {
      pm.note = e.what();
    }
    rep.partners.push_back(pm);
  }
  return rep;
}

std::string report_json(const FullReport& r) {
  const TrapReport& t = r.trap;
  const RunConfig& c = r.config;
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["preset"] = c.preset;
  j["config"] = {{"fiber", {{"radius_m", c.fiber.radius}, {"n_core", c.fiber.n_core}, {"n_clad", c.fiber.n_clad}}},
                 {"light", {{"wavelength_m", c.light.wavelength}, {"power_w", c.light.power}}},
                 {"pair",
                  {{"mode_a", c.mode_a.name()},
                   {"mode_b", c.mode_b.name()},
                   {"tau", c.tau},
                   {"delta_rad", c.delta},
                   {"convention", c.convention == HybridConvention::circular_sum ? "circular_sum" : "physical"}}},
                 {"atom", {{"c3_j_m3", c.c3}}},
                 {"temperature_k", c.temperature}};
  j["modes"] = json::array({mode_json(r.mode_a), mode_json(r.mode_b)});
  j["beat_length_m"] = t.beat_length;
  j["beat_length_um"] = t.beat_length * 1e6;

  const Vec3 m = t.minimum;
  j["minimum"] = {{"position_m", vec(m)},
                  {"r_m", t.minimum_cyl.r},
                  {"r_nm", t.minimum_cyl.r * 1e9},
                  {"phi_rad", t.minimum_cyl.phi},
                  {"phi_over_pi", t.minimum_cyl.phi / std::numbers::pi},
                  {"z_mod_beat_m", t.minimum_cyl.z},
                  {"z_mod_beat_nm", t.minimum_cyl.z * 1e9},
                  {"u_min_j", t.u_min},
                  {"u_min_mk", to_millikelvin(t.u_min)},
                  {"light_potential_j", t.light_at_min},
                  {"light_potential_mk", to_millikelvin(t.light_at_min)},
                  {"intensity_w_m2", t.intensity_at_min},
                  {"intensity_ratio", t.intensity_ratio_at_min},
                  {"nonzero_min_intensity", t.nonzero_min_intensity}};
  j["depth"] = {{"depth_j", t.barrier.depth},
                {"depth_mk", to_millikelvin(t.barrier.depth)},
                {"barrier_direction", vec(t.barrier.direction)},
                {"barrier_distance_nm", t.barrier.length * 1e9},
                {"radial_barrier_inner_mk", to_millikelvin(t.radial_barrier_inner)},
                {"radial_barrier_outer_mk", to_millikelvin(t.radial_barrier_outer)},
                {"inner_barrier_width_nm", t.inner_barrier_width * 1e9}};
  const Vec3& w = t.frequencies.omega;
  j["frequencies"] = {{"omega_rad_s", vec(w)},
                      {"f_khz", vec_scaled(w, 1e-3 / kTwoPi)},
                      {"axes", "r, phi, z"}};
  j["extents"] = {{"turning_point_nm", vec_scaled(t.extents.full, 1e9)},
                  {"inner_nm", vec_scaled(t.extents.inner, 1e9)},
                  {"outer_nm", vec_scaled(t.extents.outer, 1e9)},
                  {"harmonic_nm", vec_scaled(t.extents.harmonic, 1e9)}};
  j["scattering_rate_per_s"] = t.scattering;
  j["recoil_energy_j"] = t.recoil_energy;
  j["lifetime_s"] = finite_or_null(t.lifetime);
  j["lifetime_exceeds_cap"] = !std::isfinite(t.lifetime);
  json rows = json::array();
  for (const auto& s : r.sensitivity) {
    rows.push_back({{"tau", s.tau},
                    {"trapped", s.trapped},
                    {"depth_mk", to_millikelvin(s.depth)},
                    {"relative_depth_change", s.relative_depth_change},
                    {"minimum_m", vec(s.minimum)},
                    {"shift_nm", s.shift * 1e9},
                    {"note", s.note}});
  }
  j["tau_sensitivity"] = {{"sigma", r.sigma}, {"rows", rows}};
  json partners = json::array();
  for (const auto& p : r.partners) {
    const CylPoint cp = to_cylindrical(p.minimum);
    partners.push_back({{"seed_phi_rad", p.seed_phi},
                        {"found", p.found},
                        {"r_nm", cp.r * 1e9},
                        {"phi_rad", cp.phi},
                        {"u_min_mk", to_millikelvin(p.u_min)},
                        {"note", p.note}});
  }
  j["partner_minima"] = partners;
  return j.dump(2) + "\n";
}

std::string report_table(const FullReport& r) {
  const TrapReport& t = r.trap;
  const Vec3& w = t.frequencies.omega;
  std::string s;
  auto line = [&](const std::string& k, const std::string& v) {
    std::string key = k;
    key.resize(30, ' ');
    s += key + v + "\n";
  };
  line("modes", r.mode_a.mode.name() + " + " + r.mode_b.mode.name());
  line("tau / sigma", fmt("%.4f", t.tau) + " / " + fmt("%.4f", r.sigma));
  line("beat length (um)", fmt("%.4f", t.beat_length * 1e6));
  line("minimum r (nm)", fmt("%.2f", t.minimum_cyl.r * 1e9));
  line("minimum phi (rad / pi)", fmt("%.5f", t.minimum_cyl.phi / std::numbers::pi));
  line("minimum z mod beat (nm)", fmt("%.1f", t.minimum_cyl.z * 1e9));
  line("U_min (mK)", fmt("%.4f", to_millikelvin(t.u_min)));
  line("non-zero min intensity", t.nonzero_min_intensity ? "yes" : "no");
  line("depth (mK)", fmt("%.4f", to_millikelvin(t.barrier.depth)));
  line("barrier direction", fmt("(%.3f, ", t.barrier.direction[0]) + fmt("%.3f, ", t.barrier.direction[1]) +
                                fmt("%.3f)", t.barrier.direction[2]));
  line("radial barrier in/out (mK)",
       fmt("%.3f", to_millikelvin(t.radial_barrier_inner)) + " / " + fmt("%.3f", to_millikelvin(t.radial_barrier_outer)));
  line("inner barrier width (nm)", fmt("%.1f", t.inner_barrier_width * 1e9));
  line("f_r, f_phi, f_z (kHz)", fmt("%.1f, ", w[0] / kTwoPi * 1e-3) + fmt("%.1f, ", w[1] / kTwoPi * 1e-3) +
                                    fmt("%.1f", w[2] / kTwoPi * 1e-3));
  line("extents r, arc, z (nm)", fmt("%.1f, ", t.extents.full[0] * 1e9) + fmt("%.1f, ", t.extents.full[1] * 1e9) +
                                     fmt("%.1f", t.extents.full[2] * 1e9));
  line("scattering (1/s)", fmt("%.2f", t.scattering));
  line("lifetime (s)", std::isfinite(t.lifetime) ? fmt("%.1f", t.lifetime) : "exceeds cap");
  for (const auto& row : r.sensitivity) {
    line("tau = " + fmt("%.4f", row.tau),
         row.trapped ? fmt("depth %.4f mK", to_millikelvin(row.depth)) + fmt(" (%+.1f%%)", 100 * row.relative_depth_change)
                     : "no trap: " + row.note);
  }
  for (const auto& p : r.partners) {
    const CylPoint cp = to_cylindrical(p.minimum);
    line("partner seed phi " + fmt("%.4f", p.seed_phi),
         p.found ? fmt("r %.2f nm", cp.r * 1e9) + fmt(", phi/pi %.5f", cp.phi / std::numbers::pi) : p.note);
  }
  return s;
}

}  // namespace nanotrap
