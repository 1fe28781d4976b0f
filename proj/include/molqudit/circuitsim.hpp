#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "molqudit/gates.hpp"

namespace molqudit {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Amplitudes of a register of five-level qudits; qudit 0 is the most
/// significant digit of the basis index.
struct RegisterState {
  int num_qudits = 1;
  Eigen::VectorXcd amplitudes;

  /// |0,0> on every qudit.
  static RegisterState ground(int num_qudits);
  /// Product of the given physical levels.
  static RegisterState product(const std::vector<RotState>& levels);

  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
};

/// Basis index of a product of physical levels.
std::size_t basis_index(const std::vector<RotState>& levels);

/// In-place application; `branch` selects the physical entangler.
void apply_inplace(RegisterState& state, const GateOp& op, PhaseBranch branch = PhaseBranch::PlusI);
RegisterState apply(const RegisterState& state, const GateOp& op, PhaseBranch branch = PhaseBranch::PlusI);
RegisterState run(const RegisterState& state, const QuditCircuit& circuit,
                  PhaseBranch branch = PhaseBranch::PlusI);

inline constexpr std::size_t kDefaultUnitaryGuard = 625;

/// Product of the circuit's op unitaries over the 5^n physical space.
Eigen::MatrixXcd circuit_unitary(const QuditCircuit& circuit, PhaseBranch branch = PhaseBranch::PlusI,
                                 std::size_t max_dimension = kDefaultUnitaryGuard);

/// Labels "J,M;J,M;..." of the 5^n basis, matching circuit_unitary rows.
std::vector<std::string> basis_labels(int num_qudits);

/// Marginal level populations of one qudit, in physical_levels() order.
Eigen::VectorXd measure_populations(const RegisterState& state, int qudit);

/// Expected action of a gate: `matrix` maps the product basis built from
/// `inputs` (one level list per qudit) into the one built from `outputs`.
struct LogicalReference {
  std::vector<std::vector<RotState>> inputs;
  std::vector<std::vector<RotState>> outputs;
  Eigen::MatrixXcd matrix;
};

struct VerificationReport {
  bool passed = false;
  double fidelity = 0.0;   // |Tr(R^dagger A)| / columns
  double max_error = 0.0;  // after global phase alignment
  double leakage = 0.0;    // largest column weight outside the output levels
  std::size_t columns = 0;
};

/// Compares the circuit against `reference` over all logical basis inputs.
VerificationReport verify(const QuditCircuit& circuit, const LogicalReference& reference,
                          PhaseBranch branch = PhaseBranch::PlusI, double tolerance = 1e-10);

}  // namespace molqudit
