#include "molqudit/encodings.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace molqudit {

const std::vector<RotState>& physical_levels() {
  static const std::vector<RotState> levels{{0, 0}, {1, 0}, {3, -3}, {3, 0}, {3, 3}};
  return levels;
}

std::size_t physical_index(const RotState& s) {
  const auto& lv = physical_levels();
  const auto it = std::find(lv.begin(), lv.end(), s);
  if (it == lv.end()) throw EncodingError(fmt::format("level ({}) is not a qudit level", s.label()));
  return static_cast<std::size_t>(it - lv.begin());
}

Encoding::Encoding(EncodingKind kind, std::string name, std::vector<std::string> labels,
                   std::vector<RotState> states, int qubits, std::optional<RotState> ancilla)
    : kind_(kind),
      name_(std::move(name)),
      labels_(std::move(labels)),
      states_(std::move(states)),
      qubits_(qubits),
      ancilla_(ancilla) {}

Encoding Encoding::of(EncodingKind kind) {
  switch (kind) {
    case EncodingKind::Qubit:
      return Encoding(kind, "qubit", {"0", "1"}, {{0, 0}, {1, 0}}, 1, std::nullopt);
    case EncodingKind::QutritAnc:
      return Encoding(kind, "qutrit-anc", {"0", "1", "anc"}, {{0, 0}, {1, 0}, {3, 0}}, 1,
                      RotState{3, 0});
    case EncodingKind::Ququart:
      return Encoding(kind, "ququart", {"00", "01", "10", "11"}, {{0, 0}, {1, 0}, {3, -3}, {3, 3}}, 2,
                      std::nullopt);
    case EncodingKind::Ququint:
      return Encoding(kind, "ququint", {"00", "01", "10", "11", "anc"},
                      {{0, 0}, {1, 0}, {3, -3}, {3, 3}, {3, 0}}, 2, RotState{3, 0});
  }
  throw EncodingError("unknown encoding kind");
}

Encoding Encoding::of_dimension(int d) {
  switch (d) {
    case 2: return of(EncodingKind::Qubit);
    case 3: return of(EncodingKind::QutritAnc);
    case 4: return of(EncodingKind::Ququart);
    case 5: return of(EncodingKind::Ququint);
    default: throw EncodingError(fmt::format("no encoding of dimension {}", d));
  }
}

Encoding Encoding::by_name(const std::string& name) {
  for (auto kind : {EncodingKind::Qubit, EncodingKind::QutritAnc, EncodingKind::Ququart,
                    EncodingKind::Ququint}) {
    Encoding e = of(kind);
    if (e.name() == name) return e;
  }
  throw EncodingError(fmt::format("unknown encoding '{}'", name));
}

RotState Encoding::ancilla() const {
  if (!ancilla_) throw EncodingError(fmt::format("encoding '{}' has no ancilla level", name_));
  return *ancilla_;
}

std::vector<RotState> Encoding::qubit_states() const {
  return {states_.begin(), states_.begin() + (1 << qubits_)};
}

RotState Encoding::logical_to_physical(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw EncodingError(fmt::format("label '{}' is not part of encoding '{}'", label, name_));
  return states_[static_cast<std::size_t>(it - labels_.begin())];
}

std::string Encoding::physical_to_logical(const RotState& s) const {
  const auto it = std::find(states_.begin(), states_.end(), s);
  if (it == states_.end())
    throw EncodingError(fmt::format("level ({}) is not used by encoding '{}'", s.label(), name_));
  return labels_[static_cast<std::size_t>(it - states_.begin())];
}

Eigen::VectorXcd Encoding::embed_qubit_state(const Eigen::VectorXcd& amplitudes) const {
  const auto n = static_cast<Eigen::Index>(1) << qubits_;
  if (amplitudes.size() != n)
    throw EncodingError(fmt::format("encoding '{}' expects {} amplitudes, got {}", name_, n,
                                    amplitudes.size()));
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(physical_levels().size()));
  for (Eigen::Index i = 0; i < n; ++i)
    out(static_cast<Eigen::Index>(physical_index(states_[static_cast<std::size_t>(i)]))) = amplitudes(i);
  return out;
}

}  // namespace molqudit
