#include "combtangle/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "combtangle/errors.hpp"

namespace combtangle {
namespace {

struct Field {
  const char* section;
  const char* key;
  std::function<double(const Scenario&)> get;
  std::function<void(Scenario&, double)> set;
  bool optional = false;
};

// Canonical order of the file format.
const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"modes", "nu_k_GHz",
       [](const Scenario& s) { return to_GHz(s.params.omega_k); },
       [](Scenario& s, double v) { s.params.omega_k = from_GHz(v); }},
      {"modes", "nu_r_GHz",
       [](const Scenario& s) { return to_GHz(s.params.omega_r); },
       [](Scenario& s, double v) { s.params.omega_r = from_GHz(v); }},
      {"modes", "nu_0_GHz",
       [](const Scenario& s) { return to_GHz(s.params.omega_0); },
       [](Scenario& s, double v) { s.params.omega_0 = from_GHz(v); }},
      {"dissipation", "kappa_k_MHz",
       [](const Scenario& s) { return to_MHz(s.params.kappa_k); },
       [](Scenario& s, double v) { s.params.kappa_k = from_MHz(v); }},
      {"dissipation", "kappa_r_MHz",
       [](const Scenario& s) { return to_MHz(s.params.kappa_r); },
       [](Scenario& s, double v) { s.params.kappa_r = from_MHz(v); }},
      {"dissipation", "kappa_p_MHz",
       [](const Scenario& s) { return to_MHz(s.params.kappa_p); },
       [](Scenario& s, double v) { s.params.kappa_p = from_MHz(v); }},
      {"dissipation", "kappa_q_MHz",
       [](const Scenario& s) { return to_MHz(s.params.kappa_q); },
       [](Scenario& s, double v) { s.params.kappa_q = from_MHz(v); }},
      {"coupling", "g_p_MHz",
       [](const Scenario& s) { return to_MHz(s.params.g_p); },
       [](Scenario& s, double v) { s.params.g_p = from_MHz(v); }},
      {"coupling", "g_q_MHz",
       [](const Scenario& s) { return to_MHz(s.params.g_q); },
       [](Scenario& s, double v) { s.params.g_q = from_MHz(v); }},
      {"coupling", "G_p_MHz",
       [](const Scenario& s) { return s.G_p ? to_MHz(*s.G_p) : NAN; },
       [](Scenario& s, double v) { s.G_p = from_MHz(v); }, true},
      {"coupling", "G_q_MHz",
       [](const Scenario& s) { return s.G_q ? to_MHz(*s.G_q) : NAN; },
       [](Scenario& s, double v) { s.G_q = from_MHz(v); }, true},
      {"drive", "amplitude_MHz",
       [](const Scenario& s) { return to_MHz(s.params.drive_amplitude); },
       [](Scenario& s, double v) { s.params.drive_amplitude = from_MHz(v); }},
      {"drive", "phase_rad",
       [](const Scenario& s) { return s.params.drive_phase; },
       [](Scenario& s, double v) { s.params.drive_phase = v; }},
      {"bath", "temperature_K",
       [](const Scenario& s) { return s.params.temperature; },
       [](Scenario& s, double v) { s.params.temperature = v; }},
  };
  return table;
}

const Field& find_field(std::string_view section, std::string_view key) {
  for (const auto& f : fields())
    if (section == f.section && key == f.key) return f;
  throw SpecError(fmt::format("unknown scenario key [{}] {}", section, key));
}

bool known_section(std::string_view section) {
  for (const auto& f : fields())
    if (section == f.section) return true;
  return false;
}

double parse_number(const std::string& text, std::string_view where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw SpecError(fmt::format("{}: '{}' is not a number", where, text));
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size() || !std::isfinite(v))
    throw SpecError(fmt::format("{}: '{}' is not a finite number", where, text));
  return v;
}

void check_couplings(const Scenario& s) {
  if (s.G_p.has_value() != s.G_q.has_value())
    throw SpecError("G_p_MHz and G_q_MHz must be given together");
  for (const auto& g : {s.G_p, s.G_q})
    if (g && (*g < 0.0 || !std::isfinite(*g)))
      throw SpecError("effective couplings must be nonnegative");
}

}  // namespace

Scenario Scenario::baseline() {
  Scenario s;
  s.params = PhysicalParams::baseline();
  return s;
}

Scenario parse_scenario(std::string_view text) {
  // ptree's INI reader only knows ';' comments.
  std::ostringstream cleaned;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t");
      if (first != std::string::npos && line[first] == '#') continue;
      cleaned << line << '\n';
    }
  }
  boost::property_tree::ptree tree;
  try {
    std::istringstream in(cleaned.str());
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw SpecError(fmt::format("scenario: {} (line {})", e.message(), e.line()));
  }

  Scenario s = Scenario::baseline();
  for (const auto& [section, body] : tree) {
    if (!known_section(section) || !body.data().empty())
      throw SpecError(fmt::format("scenario: unknown section or top-level key '{}'", section));
    for (const auto& [key, value] : body) {
      const Field& f = find_field(section, key);
      f.set(s, parse_number(value.data(), fmt::format("[{}] {}", section, key)));
    }
  }
  check_couplings(s);
  s.params.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open scenario file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string render_scenario(const Scenario& s) {
  std::string out;
  std::string_view current;
  for (const auto& f : fields()) {
    const double v = f.get(s);
    if (f.optional && std::isnan(v)) continue;
    if (current != f.section) {
      if (!current.empty()) out += '\n';
      out += fmt::format("[{}]\n", f.section);
      current = f.section;
    }
    // 17 significant digits round-trips every double.
    out += fmt::format("{} = {:.17g}\n", f.key, v);
  }
  return out;
}

void set_scenario_value(Scenario& s, std::string_view dotted_key, double value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string_view::npos)
    throw SpecError(fmt::format("scenario key '{}' must be section.key", dotted_key));
  if (!std::isfinite(value)) throw SpecError("scenario values must be finite");
  find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1)).set(s, value);
  if (s.G_p && !s.G_q) s.G_q = 0.0;
  if (s.G_q && !s.G_p) s.G_p = 0.0;
  check_couplings(s);
}

double get_scenario_value(const Scenario& s, std::string_view dotted_key) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string_view::npos)
    throw SpecError(fmt::format("scenario key '{}' must be section.key", dotted_key));
  return find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1)).get(s);
}

std::vector<std::string> scenario_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(fmt::format("{}.{}", f.section, f.key));
  return keys;
}

std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : render_scenario(s)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace combtangle
