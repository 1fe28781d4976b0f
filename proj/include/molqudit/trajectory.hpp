#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "molqudit/molecule.hpp"

namespace molqudit {

/// Shape of the intermolecular separation R(t). Constant holds R = alpha + beta
/// for the whole window and is the reference for the identity fidelity.
enum class ProfileKind { Cosine, Triangular, Tanh, Constant };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

struct TrajectoryProfile {
  ProfileKind kind = ProfileKind::Cosine;
  double alpha_um = 0.0;
  double beta_um = 0.0;
  double tau_us = 0.0;

  /// beta > alpha > 0 and tau > 0 (Constant additionally allows alpha == 0).
  void validate() const;

  static TrajectoryProfile from_trap(ProfileKind kind, const TrapSpec& trap, double tau_us);
  TrajectoryProfile with_tau(double tau) const {
    TrajectoryProfile p = *this;
    p.tau_us = tau;
    return p;
  }
};

/// R(t) in micrometres for t in microseconds.
double separation(const TrajectoryProfile& profile, double t_us);

/// Times inside [0, tau] where R(t) has a kink or switches branch, including the
/// end points, ascending.
std::vector<double> breakpoints(const TrajectoryProfile& profile);

/// sqrt(m (alpha+beta)^2 / (2 U0)) in microseconds.
double confinement_timescale(const MoleculeSpec& spec, const TrapSpec& trap);

/// Integral of R(t)^-3 over [0, tau], in us / um^3. Closed form for Cosine,
/// Triangular and Constant; adaptive Gauss-Kronrod for Tanh.
double inverse_cube_integral(const TrajectoryProfile& profile);

void to_json(nlohmann::json& j, const TrajectoryProfile& profile);
void from_json(const nlohmann::json& j, TrajectoryProfile& profile);

}  // namespace molqudit
