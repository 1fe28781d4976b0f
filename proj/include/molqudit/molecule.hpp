#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace molqudit {

namespace constants {
inline constexpr double speed_of_light = 2.99792458e8;     // m/s
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double boltzmann = 1.380649e-23;          // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;    // kg
inline constexpr double debye = 3.33564e-30;               // C m
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Species constants in the units they are usually quoted in.
struct MoleculeSpec {
  std::string name;
  double dipole_moment_debye = 0.0;
  double rotational_constant_invcm = 0.0;
  double mass_amu = 0.0;

  /// Throws ConfigError unless every numeric field is strictly positive.
  void validate() const;

  /// Dipole moment in C m.
  double dipole_si() const { return dipole_moment_debye * constants::debye; }
  /// Rotational constant as an angular frequency (rad/s).
  double rotational_constant_rad_s() const;
  double mass_kg() const { return mass_amu * constants::atomic_mass_unit; }
};

/// Optical-tweezer geometry: well depth plus the approach distances.
struct TrapSpec {
  double depth_kelvin = 10e-3;
  double initial_separation_um = 10.0;  // alpha + beta
  double min_separation_um = 0.3;       // beta - alpha

  void validate() const;
  double alpha_um() const { return 0.5 * (initial_separation_um - min_separation_um); }
  double beta_um() const { return 0.5 * (initial_separation_um + min_separation_um); }
};

namespace presets {
MoleculeSpec srf();
MoleculeSpec rbcs();
/// Named lookup ("SrF", "RbCs"; case-insensitive). When the MOLQUDIT_PRESET_DIR
/// environment variable is set, `<dir>/<name>.json` takes precedence.
MoleculeSpec by_name(const std::string& name);
}  // namespace presets

/// E_rot(J)/hbar in rad/s.
double rot_energy(const MoleculeSpec& spec, int j);

/// d^2 / (4 pi eps0 hbar R^3) in rad/s for R in micrometres.
double ddi_strength(const MoleculeSpec& spec, double separation_um);

/// d^2 / (4 pi eps0 hbar) in rad/s * um^3, the R-independent part of ddi_strength.
double ddi_coefficient(const MoleculeSpec& spec);

void to_json(nlohmann::json& j, const MoleculeSpec& spec);
void from_json(const nlohmann::json& j, MoleculeSpec& spec);
void to_json(nlohmann::json& j, const TrapSpec& trap);
void from_json(const nlohmann::json& j, TrapSpec& trap);

}  // namespace molqudit
