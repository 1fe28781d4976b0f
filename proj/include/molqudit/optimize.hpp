#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "molqudit/dynamics.hpp"

namespace molqudit {

struct OptimizationProblem {
  MoleculeSpec spec;
  TrapSpec trap;
  ProfileKind kind = ProfileKind::Cosine;
  std::pair<double, double> tau_bounds{0.0, 0.0};  // us
  double constraint_factor = 5.0;                  // minimum tau / t0
  PropagateOptions propagate{};
  double relative_width = 1e-3;
  std::size_t max_evaluations = 200;

  /// Throws ConfigError for non-positive or inverted bounds, or when the
  /// confinement constraint leaves nothing of the interval.
  void validate() const;
  /// The bounds after raising the lower end to constraint_factor * t0.
  std::pair<double, double> effective_bounds() const;
};

struct OptimizationReport {
  double best_tau = 0.0;
  double best_fidelity = 0.0;
  PhaseBranch phase_branch = PhaseBranch::PlusI;
  std::size_t evaluations = 0;
  std::vector<std::pair<double, double>> history;  // (tau, fidelity) in evaluation order
  std::pair<double, double> final_bracket{0.0, 0.0};
  double seed_tau = 0.0;  // 0 when no analytic seed was found
  double t0_us = 0.0;
};

class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, OptimizationReport partial)
      : std::runtime_error(what), report_(std::move(partial)) {}
  const OptimizationReport& report() const noexcept { return report_; }

 private:
  OptimizationReport report_;
};

/// tau at which secular_pulse_area reaches pi/2, restricted to the effective
/// bounds. Throws OptimizationError when the solution lies outside them.
double seed_tau_from_pulse_area(const OptimizationProblem& problem);

/// Golden-section maximisation of F_iSWAP over tau, bracketed around the
/// analytic seed (or a coarse grid when there is none).
OptimizationReport optimize_tau(const OptimizationProblem& problem);

nlohmann::ordered_json to_json(const OptimizationReport& report);
void write_history_csv(const OptimizationReport& report, std::ostream& out);

}  // namespace molqudit
