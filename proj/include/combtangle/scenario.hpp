#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "combtangle/model.hpp"

namespace combtangle {

/// A PhysicalParams plus optional direct effective couplings. When G_p and
/// G_q are set they replace g_{p,q} |<a_k>| (figure-style operation).
struct Scenario {
  PhysicalParams params;
  std::optional<double> G_p;  // rad/s
  std::optional<double> G_q;  // rad/s

  static Scenario baseline();
};

/// Key-value text with sections. Every frequency is nu = omega / 2pi with the
/// unit in the key name; comments start with ';' or '#'.
///
///   [modes]        nu_k_GHz  nu_r_GHz  nu_0_GHz
///   [dissipation]  kappa_k_MHz  kappa_r_MHz  kappa_p_MHz  kappa_q_MHz
///   [coupling]     g_p_MHz  g_q_MHz  [G_p_MHz  G_q_MHz]
///   [drive]        amplitude_MHz  phase_rad
///   [bath]         temperature_K
///
/// Missing keys keep their baseline value; unknown sections or keys are
/// rejected with SpecError.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(render_scenario(s)) reproduces s.
std::string render_scenario(const Scenario& s);

/// "section.key" accessors in the file's units. Setting one of G_p, G_q when
/// neither is present sets the other to zero.
void set_scenario_value(Scenario& s, std::string_view dotted_key, double value);
double get_scenario_value(const Scenario& s, std::string_view dotted_key);
std::vector<std::string> scenario_keys();

/// 64-bit FNV-1a of the canonical rendering, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

}  // namespace combtangle
