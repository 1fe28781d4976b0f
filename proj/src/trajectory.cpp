#include "molqudit/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

namespace molqudit {

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Cosine: return "cosine";
    case ProfileKind::Triangular: return "triangular";
    case ProfileKind::Tanh: return "tanh";
    case ProfileKind::Constant: return "constant";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "cosine") return ProfileKind::Cosine;
  if (name == "triangular") return ProfileKind::Triangular;
  if (name == "tanh") return ProfileKind::Tanh;
  if (name == "constant") return ProfileKind::Constant;
  throw ConfigError(fmt::format("unknown profile kind '{}'", name));
}

void TrajectoryProfile::validate() const {
  const bool alpha_ok = kind == ProfileKind::Constant ? alpha_um >= 0.0 : alpha_um > 0.0;
  if (!alpha_ok || !(beta_um > alpha_um) || !(tau_us > 0.0))
    throw ConfigError(fmt::format("invalid {} profile (alpha={}, beta={}, tau={}): need "
                                  "beta > alpha > 0 and tau > 0",
                                  to_string(kind), alpha_um, beta_um, tau_us));
}

TrajectoryProfile TrajectoryProfile::from_trap(ProfileKind kind, const TrapSpec& trap,
                                               double tau_us) {
  return {kind, trap.alpha_um(), trap.beta_um(), tau_us};
}

double separation(const TrajectoryProfile& p, double t) {
  const double a = p.alpha_um;
  const double b = p.beta_um;
  const double tau = p.tau_us;
  switch (p.kind) {
    case ProfileKind::Cosine:
      if (t <= tau) return a * std::cos(2.0 * constants::pi * t / tau) + b;
      return a + b;
    case ProfileKind::Triangular:
      if (t <= 0.5 * tau) return -4.0 * a * t / tau + a + b;
      if (t <= tau) return 4.0 * a * t / tau - 3.0 * a + b;
      return a + b;
    case ProfileKind::Tanh:
      if (t <= 3.0 * tau / 7.0) return a * (1.0 - std::tanh(14.0 * t / tau - 3.0)) + b - a;
      if (t <= 6.0 * tau / 7.0) return a * (1.0 - std::tanh(-14.0 * t / tau + 9.0)) + b - a;
      return a * (1.0 - std::tanh(-3.0)) + b - a;
    case ProfileKind::Constant:
      return a + b;
  }
  return a + b;
}

std::vector<double> breakpoints(const TrajectoryProfile& p) {
  const double tau = p.tau_us;
  switch (p.kind) {
    case ProfileKind::Triangular: return {0.0, 0.5 * tau, tau};
    case ProfileKind::Tanh: return {0.0, 3.0 * tau / 7.0, 6.0 * tau / 7.0, tau};
    default: return {0.0, tau};
  }
}

double confinement_timescale(const MoleculeSpec& spec, const TrapSpec& trap) {
  const double distance_m = trap.initial_separation_um * 1e-6;
  const double depth_j = constants::boltzmann * trap.depth_kelvin;
  return std::sqrt(spec.mass_kg() * distance_m * distance_m / (2.0 * depth_j)) * 1e6;
}

double inverse_cube_integral(const TrajectoryProfile& p) {
  p.validate();
  const double a = p.alpha_um;
  const double b = p.beta_um;
  const double tau = p.tau_us;
  switch (p.kind) {
    case ProfileKind::Constant: {
      const double r = a + b;
      return tau / (r * r * r);
    }
    case ProfileKind::Cosine: {
      const double d = b * b - a * a;
      return tau * (2.0 * b * b + a * a) / (2.0 * d * d * std::sqrt(d));
    }
    case ProfileKind::Triangular: {
      // Two linear ramps between b+a and b-a, each lasting tau/2.
      const double near = b - a;
      const double far = b + a;
      return tau * b / (near * near * far * far);
    }
    case ProfileKind::Tanh: {
      using boost::math::quadrature::gauss_kronrod;
      auto f = [&](double t) {
        const double r = separation(p, t);
        return 1.0 / (r * r * r);
      };
      const auto knots = breakpoints(p);
      double total = 0.0;
      for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        total += gauss_kronrod<double, 61>::integrate(f, knots[i], knots[i + 1], 20, 1e-13);
      return total;
    }
  }
  return 0.0;
}

void to_json(nlohmann::json& j, const TrajectoryProfile& p) {
  j = nlohmann::json{{"kind", to_string(p.kind)},
                     {"alpha_um", p.alpha_um},
                     {"beta_um", p.beta_um},
                     {"tau_us", p.tau_us}};
}

void from_json(const nlohmann::json& j, TrajectoryProfile& p) {
  try {
    p.kind = profile_kind_from_string(j.at("kind").get<std::string>());
    p.alpha_um = j.at("alpha_um").get<double>();
    p.beta_um = j.at("beta_um").get<double>();
    p.tau_us = j.at("tau_us").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("malformed trajectory profile: {}", e.what()));
  }
  p.validate();
}

}  // namespace molqudit
