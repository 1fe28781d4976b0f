#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "molqudit/ddi.hpp"
#include "molqudit/molecule.hpp"
#include "molqudit/trajectory.hpp"

namespace molqudit {

/// Sign of the phase acquired on the flip-flop pair by the entangler.
enum class PhaseBranch { PlusI, MinusI };

std::string to_string(PhaseBranch branch);
PhaseBranch phase_branch_from_string(const std::string& name);
PhaseBranch opposite(PhaseBranch branch);

enum class SolverMode { Secular, Full };

std::string to_string(SolverMode mode);
SolverMode solver_mode_from_string(const std::string& name);

/// The five single-molecule levels hosting a qudit, in operator order.
struct ComputationalSet {
  std::vector<RotState> states{{0, 0}, {1, 0}, {3, -3}, {3, 0}, {3, 3}};

  std::size_t size() const { return states.size(); }
  /// Position of `s` in `states`, or size() when absent.
  std::size_t index_of(const RotState& s) const;
  /// Pair labels in operator order (first molecule slowest).
  std::vector<PairState> pair_basis() const;
};

struct PropagateOptions {
  SolverMode mode = SolverMode::Secular;
  int j_max = 4;
  /// 0 picks tau/2000, further capped in Full mode by the fastest phase.
  double initial_step_us = 0.0;
  /// Step-doubling error bound per step (max-norm over all amplitudes).
  double step_tolerance = 1e-12;
  /// 0 picks 1e-8 (Secular) or 1e-6 (Full).
  double unitarity_tolerance = 0.0;
  std::size_t max_steps = 50'000'000;
  /// Relative tolerance used to decide that two pair energies are degenerate.
  double degeneracy_tolerance = 1e-9;
  ComputationalSet computational_set{};
};

/// Raised when the integrator cannot finish or the result fails its unitarity
/// check. `diagnostics` carries the partial state of the run.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, nlohmann::json diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const nlohmann::json& diagnostics() const noexcept { return diagnostics_; }

 private:
  nlohmann::json diagnostics_;
};

struct EvolutionResult {
  std::vector<PairState> basis;  // labels of operator rows/columns
  Eigen::MatrixXcd op;           // interaction-picture operator on the computational pairs
  double unitarity_defect = 0.0;
  double leakage = 0.0;  // largest population lost from the computational pairs by a column
  double f_iswap = 0.0;
  double f_iswap_plus = 0.0;
  double f_iswap_minus = 0.0;
  double f_id = 0.0;
  PhaseBranch phase_branch = PhaseBranch::PlusI;

  SolverMode mode = SolverMode::Secular;
  int j_max = 0;
  std::size_t propagated_dimension = 0;  // size of the reachable subspace actually integrated
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  double duration_us = 0.0;
};

/// Ideal entangler: +-i exchange of (0,0;1,0) and (1,0;0,0), identity elsewhere.
Eigen::MatrixXcd target_gate(PhaseBranch branch, const ComputationalSet& set = {});

/// |Tr(u_phys u_target^dagger)| / dim.
double fidelity(const Eigen::MatrixXcd& u_phys, const Eigen::MatrixXcd& u_target);

/// Rotation angle of the resonant exchange on the flip-flop pair in the
/// secular limit, (2/3) d^2/(4 pi eps0 hbar) times the integral of R^-3.
double secular_pulse_area(const MoleculeSpec& spec, const TrajectoryProfile& profile);

EvolutionResult propagate(const MoleculeSpec& spec, const TrajectoryProfile& profile,
                          const PropagateOptions& options = {});

/// Final amplitudes over the computational pairs for one initial superposition
/// (length set.size()^2, operator order); no unitarity check.
Eigen::VectorXcd propagate_state(const MoleculeSpec& spec, const TrajectoryProfile& profile,
                                 const Eigen::VectorXcd& initial, const PropagateOptions& options = {});

/// Operator as row-major [re, im] pairs with labels and the fidelity summary.
nlohmann::ordered_json to_json(const EvolutionResult& result);

}  // namespace molqudit
