#include "molqudit/molecule.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>

namespace molqudit {

void MoleculeSpec::validate() const {
  if (!(dipole_moment_debye > 0.0) || !(rotational_constant_invcm > 0.0) || !(mass_amu > 0.0))
    throw ConfigError(fmt::format("molecule '{}': dipole moment, rotational constant and mass "
                                  "must all be positive",
                                  name));
}

double MoleculeSpec::rotational_constant_rad_s() const {
  // cm^-1 -> Hz via c in cm/s, then to angular frequency.
  return 2.0 * constants::pi * constants::speed_of_light * 100.0 * rotational_constant_invcm;
}

void TrapSpec::validate() const {
  if (!(depth_kelvin > 0.0)) throw ConfigError("trap depth must be positive");
  if (!(min_separation_um > 0.0) || !(initial_separation_um > min_separation_um))
    throw ConfigError("trap separations must satisfy initial > minimum > 0");
}

namespace presets {

MoleculeSpec srf() { return {"SrF", 3.5, 0.25, 106.62}; }

// 87Rb133Cs: 86.909 + 132.905 u.
MoleculeSpec rbcs() { return {"RbCs", 1.225, 0.0163, 219.81}; }

MoleculeSpec by_name(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  if (const char* dir = std::getenv("MOLQUDIT_PRESET_DIR"); dir != nullptr && *dir != '\0') {
    for (const auto& candidate : {name, lower}) {
      const auto path = std::filesystem::path(dir) / (candidate + ".json");
      if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        MoleculeSpec spec = nlohmann::json::parse(in).get<MoleculeSpec>();
        spec.validate();
        return spec;
      }
    }
  }
  if (lower == "srf") return srf();
  if (lower == "rbcs" || lower == "87rb133cs") return rbcs();
  throw ConfigError(fmt::format("unknown molecule preset '{}'", name));
}

}  // namespace presets

double rot_energy(const MoleculeSpec& spec, int j) {
  if (j < 0) throw std::domain_error("J must be non-negative");
  return spec.rotational_constant_rad_s() * static_cast<double>(j) * static_cast<double>(j + 1);
}

double ddi_coefficient(const MoleculeSpec& spec) {
  const double d = spec.dipole_si();
  const double si = d * d / (4.0 * constants::pi * constants::vacuum_permittivity * constants::hbar);
  return si * 1e18;  // m^3 -> um^3
}

double ddi_strength(const MoleculeSpec& spec, double separation_um) {
  if (!(separation_um > 0.0)) throw std::domain_error("separation must be positive");
  return ddi_coefficient(spec) / (separation_um * separation_um * separation_um);
}

void to_json(nlohmann::json& j, const MoleculeSpec& spec) {
  j = nlohmann::json{{"name", spec.name},
                     {"dipole_moment_debye", spec.dipole_moment_debye},
                     {"rotational_constant_invcm", spec.rotational_constant_invcm},
                     {"mass_amu", spec.mass_amu}};
}

void from_json(const nlohmann::json& j, MoleculeSpec& spec) {
  try {
    spec.name = j.value("name", std::string("custom"));
    spec.dipole_moment_debye = j.at("dipole_moment_debye").get<double>();
    spec.rotational_constant_invcm = j.at("rotational_constant_invcm").get<double>();
    spec.mass_amu = j.at("mass_amu").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("malformed molecule spec: {}", e.what()));
  }
}

void to_json(nlohmann::json& j, const TrapSpec& trap) {
  j = nlohmann::json{{"depth_kelvin", trap.depth_kelvin},
                     {"initial_separation_um", trap.initial_separation_um},
                     {"min_separation_um", trap.min_separation_um}};
}

void from_json(const nlohmann::json& j, TrapSpec& trap) {
  try {
    trap.depth_kelvin = j.value("depth_kelvin", trap.depth_kelvin);
    trap.initial_separation_um = j.value("initial_separation_um", trap.initial_separation_um);
    trap.min_separation_um = j.value("min_separation_um", trap.min_separation_um);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("malformed trap spec: {}", e.what()));
  }
}

}  // namespace molqudit
