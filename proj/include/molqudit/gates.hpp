#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "molqudit/dynamics.hpp"
#include "molqudit/encodings.hpp"

namespace molqudit {

class SynthesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Axis { X, Y };

/// exp(-i sigma_axis angle / 2) on the span of levels a and b of one qudit.
struct Rotation {
  Axis axis = Axis::X;
  int qudit = 0;
  RotState a;
  RotState b;
  double angle = 0.0;
};

/// The native two-qudit entangler raised to `power` (1..3 are distinct).
struct Entangler {
  int a = 0;
  int b = 1;
  int power = 1;
};

using GateOp = std::variant<Rotation, Entangler>;

struct QuditCircuit {
  int num_qudits = 1;
  int dimension = 2;  // logical encoding dimension, informational
  std::vector<GateOp> ops;

  QuditCircuit() = default;
  QuditCircuit(int n, int d) : num_qudits(n), dimension(d) {}

  QuditCircuit& rx(int qudit, RotState a, RotState b, double angle);
  QuditCircuit& ry(int qudit, RotState a, RotState b, double angle);
  QuditCircuit& entangle(int a, int b, int power = 1);
  QuditCircuit& append(const QuditCircuit& other);

  /// Throws SynthesisError on out-of-range indices, repeated levels, levels
  /// outside the physical set or a non-positive entangler power.
  void validate() const;

  /// Reverse order, negated angles, entangler powers mapped to 4 - p.
  QuditCircuit inverse() const;

  /// Entangler applications, counting an op of power p as p.
  int entangler_count() const;
  /// Layers of entanglers after as-soon-as-possible scheduling (power p
  /// occupies p layers). Single-qudit rotations are free.
  int entangler_depth() const;
};

/// exp(-i sigma^{ab}_axis angle/2) as a matrix over `levels`.
Eigen::MatrixXcd rotation_matrix(Axis axis, const RotState& a, const RotState& b, double angle,
                                 const std::vector<RotState>& levels = physical_levels());

/// Physical branch of the entangler the sequence will run on. Sequences are
/// written for PlusI; for MinusI the synthesisers patch odd entangler powers.
struct SynthOptions {
  PhaseBranch physical_branch = PhaseBranch::PlusI;
};

/// Pauli Z on qubit `slot` of `qudit` via 2 pi rotations through a helper level.
QuditCircuit synth_z(const Encoding& enc, int qudit, int slot = 0);
/// The helper level synth_z rotates through for this encoding.
RotState z_helper_level(const Encoding& enc);

/// Plain entangler between two qubit-encoded qudits.
QuditCircuit synth_iswap(const Encoding& enc, int a, int b, const SynthOptions& opts = {});
QuditCircuit synth_cnot_via_iswaps(const Encoding& enc, int control, int target,
                                   const SynthOptions& opts = {});

/// Level cycle 0 -> 1 -> anc -> 0 and its inverse.
QuditCircuit synth_p(const Encoding& enc, int qudit);
QuditCircuit synth_p_dagger(const Encoding& enc, int qudit);
/// Exchange of |1 1> and |0 anc> with phase i; the ancilla sits on `b`.
QuditCircuit synth_iswap_0anc(const Encoding& enc, int a, int b, const SynthOptions& opts = {});
QuditCircuit synth_w(const Encoding& enc, int a, int b, const SynthOptions& opts = {});
/// Exact inverse of synth_w on the whole two-qutrit space (three entanglers).
QuditCircuit synth_w_dagger(const Encoding& enc, int a, int b, const SynthOptions& opts = {});

enum class Coupling { Linear, BinaryTree };
std::string to_string(Coupling c);
Coupling coupling_from_string(const std::string& name);

/// Largest register synth_cnz accepts for a layout.
int cnz_capacity(Coupling layout);

/// Controlled phase on all qubits of `qudits` (qutrit-anc encoding). Uses
/// 2N - 2 entanglers. Accumulating qudits park intermediate results in the
/// spare levels (3,-3) and (3,3), which bounds N (see cnz_capacity).
QuditCircuit synth_cnz(const Encoding& enc, const std::vector<int>& qudits, Coupling layout);
/// Multi-controlled X on the last qudit of `qudits`.
QuditCircuit synth_toffoli(const Encoding& enc, const std::vector<int>& qudits, Coupling layout);

/// Two-qubit unitary on the two qubits held by one ququart/ququint, as
/// two-level rotations. Basis order 00, 01, 10, 11.
QuditCircuit synth_intra_qudit_gate(const Encoding& enc, int qudit, const Eigen::Matrix4cd& gate);
QuditCircuit synth_intra_iswap(const Encoding& enc, int qudit);

/// CNOT from qubit `control_slot` of qudit a to qubit `target_slot` of qudit b.
QuditCircuit synth_inter_qudit_cnot(const Encoding& enc, int a, int control_slot, int b,
                                    int target_slot);
/// Controlled-controlled-controlled Z on the four qubits of two ququints.
QuditCircuit synth_c3z_ququint(const Encoding& enc, int a, int b);

/// One op per line: `RX|RY <qudit> <J,M> <J,M> <angle>` or `U <a> <b> <power>`.
/// `header` entries are written first as `# key=value` lines.
std::string to_text(const QuditCircuit& circuit, const std::map<std::string, std::string>& header = {});

struct ParsedSequence {
  QuditCircuit circuit;
  std::map<std::string, std::string> header;
};
/// Inverse of to_text. Blank lines and other comments are skipped.
ParsedSequence parse_text(const std::string& text);

}  // namespace molqudit
