#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "molqudit/angular.hpp"

namespace molqudit {

/// Product state |J1 M1> (x) |J2 M2> of a molecule pair.
struct PairState {
  RotState first;
  RotState second;

  constexpr auto operator<=>(const PairState&) const = default;
  std::string label() const;
};

/// Nonzero entry of the interaction matrix in coordinate form.
struct DdiEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// Dimensionless dipole-dipole geometry factors over a truncated pair basis.
///
/// Multiplying by ddi_strength(spec, R) gives the matrix element in rad/s.
/// Entries are stored row-major and sorted; the matrix is immutable once built.
class DdiMatrix {
 public:
  DdiMatrix(int j_max, std::vector<PairState> basis, std::vector<DdiEntry> entries);

  int j_max() const noexcept { return j_max_; }
  std::size_t dimension() const noexcept { return basis_.size(); }
  const std::vector<PairState>& basis() const noexcept { return basis_; }
  const std::vector<DdiEntry>& entries() const noexcept { return entries_; }

  std::optional<std::size_t> index_of(const PairState& state) const;
  /// Entry lookup; 0 for structural zeros.
  double at(std::size_t row, std::size_t col) const;

  /// Writes "q_first,q_second,qp_first,qp_second,factor" rows for every nonzero.
  void write_csv(std::ostream& out) const;

 private:
  int j_max_;
  std::vector<PairState> basis_;
  std::vector<DdiEntry> entries_;
};

/// dJ1 = +-1, dJ2 = +-1, (dM1, dM2) in {(0,0), (+1,-1), (-1,+1)}.
bool selection_allowed(const PairState& q, const PairState& q_prime);

/// <q| V |q'> divided by d^2 / (4 pi eps0 R^3).
double geometry_factor(const PairState& q, const PairState& q_prime);

/// All pair states built from enumerate_basis(j_max), lexicographic order.
std::vector<PairState> enumerate_pair_basis(int j_max);

DdiMatrix build_ddi_matrix(int j_max);

}  // namespace molqudit
