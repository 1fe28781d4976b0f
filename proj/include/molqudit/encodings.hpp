#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "molqudit/angular.hpp"

namespace molqudit {

class EncodingError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The five physical levels every simulated qudit carries, in index order.
const std::vector<RotState>& physical_levels();
/// Index of `s` in physical_levels(); throws EncodingError when absent.
std::size_t physical_index(const RotState& s);

enum class EncodingKind { Qubit, QutritAnc, Ququart, Ququint };

/// Logical labels of one qudit mapped onto rotational levels.
///
/// Qubit labels read most significant first ("10" is qubit 0 in |1>, qubit 1
/// in |0>). The ancilla label is "anc".
class Encoding {
 public:
  static Encoding of(EncodingKind kind);
  static Encoding of_dimension(int d);
  /// "qubit", "qutrit-anc", "ququart", "ququint".
  static Encoding by_name(const std::string& name);

  EncodingKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int dimension() const { return static_cast<int>(labels_.size()); }
  /// 1 for d = 2, 3 and 2 for d = 4, 5.
  int qubits_per_qudit() const { return qubits_; }
  bool has_ancilla() const { return ancilla_.has_value(); }
  /// Throws EncodingError when the encoding has no ancilla.
  RotState ancilla() const;

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<RotState>& states() const { return states_; }
  /// Levels of the qubit labels only, in binary order.
  std::vector<RotState> qubit_states() const;

  RotState logical_to_physical(const std::string& label) const;
  std::string physical_to_logical(const RotState& s) const;

  /// Amplitudes over the qubit labels (length 2^qubits_per_qudit) placed on
  /// the five physical levels.
  Eigen::VectorXcd embed_qubit_state(const Eigen::VectorXcd& amplitudes) const;

 private:
  Encoding(EncodingKind kind, std::string name, std::vector<std::string> labels,
           std::vector<RotState> states, int qubits, std::optional<RotState> ancilla);

  EncodingKind kind_;
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<RotState> states_;
  int qubits_;
  std::optional<RotState> ancilla_;
};

}  // namespace molqudit
