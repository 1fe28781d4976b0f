#include "molqudit/ddi.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

namespace molqudit {

std::string PairState::label() const {
  return fmt::format("{};{}", first.label(), second.label());
}

DdiMatrix::DdiMatrix(int j_max, std::vector<PairState> basis, std::vector<DdiEntry> entries)
    : j_max_(j_max), basis_(std::move(basis)), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const DdiEntry& a, const DdiEntry& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
}

std::optional<std::size_t> DdiMatrix::index_of(const PairState& state) const {
  auto it = std::lower_bound(basis_.begin(), basis_.end(), state);
  if (it == basis_.end() || *it != state) return std::nullopt;
  return static_cast<std::size_t>(it - basis_.begin());
}

double DdiMatrix::at(std::size_t row, std::size_t col) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{row, col},
                             [](const DdiEntry& e, const std::pair<std::size_t, std::size_t>& k) {
                               return std::tie(e.row, e.col) < std::tie(k.first, k.second);
                             });
  if (it == entries_.end() || it->row != row || it->col != col) return 0.0;
  return it->value;
}

void DdiMatrix::write_csv(std::ostream& out) const {
  out << "q_first,q_second,qp_first,qp_second,factor\n";
  for (const auto& e : entries_) {
    const auto& q = basis_[e.row];
    const auto& qp = basis_[e.col];
    out << fmt::format("\"{}\",\"{}\",\"{}\",\"{}\",{:.17g}\n", q.first.label(), q.second.label(),
                       qp.first.label(), qp.second.label(), e.value);
  }
}

bool selection_allowed(const PairState& q, const PairState& q_prime) {
  const int dj1 = q_prime.first.j - q.first.j;
  const int dj2 = q_prime.second.j - q.second.j;
  if (std::abs(dj1) != 1 || std::abs(dj2) != 1) return false;
  const int dm1 = q_prime.first.m - q.first.m;
  const int dm2 = q_prime.second.m - q.second.m;
  return (dm1 == 0 && dm2 == 0) || (dm1 == 1 && dm2 == -1) || (dm1 == -1 && dm2 == 1);
}

namespace {

double geometry_factor_ordered(const PairState& q, const PairState& q_prime) {
  const auto [j1, m1] = q.first;
  const auto [j2, m2] = q.second;
  const auto [j1p, m1p] = q_prime.first;
  const auto [j2p, m2p] = q_prime.second;

  const double norm = std::sqrt(static_cast<double>((2 * j1 + 1) * (2 * j2 + 1)) /
                                static_cast<double>((2 * j1p + 1) * (2 * j2p + 1)));
  const double reduced =
      clebsch_gordan(1, 0, j1, 0, j1p, 0) * clebsch_gordan(1, 0, j2, 0, j2p, 0);
  if (reduced == 0.0) return 0.0;

  auto cg = [](int k, int j, int m, int jp, int mp) {
    if (std::abs(m + k) > jp || m + k != mp) return 0.0;
    return clebsch_gordan(1, k, j, m, jp, mp);
  };
  double angular = 0.0;
  for (int k = -1; k <= 1; ++k) angular += cg(k, j1, m1, j1p, m1p) * cg(-k, j2, m2, j2p, m2p);
  angular += cg(0, j1, m1, j1p, m1p) * cg(0, j2, m2, j2p, m2p);
  return norm * reduced * angular;
}

}  // namespace

double geometry_factor(const PairState& q, const PairState& q_prime) {
  if (!selection_allowed(q, q_prime)) return 0.0;
  // V is Hermitian with real entries; evaluating in a canonical order makes the
  // returned value bitwise symmetric.
  return q <= q_prime ? geometry_factor_ordered(q, q_prime) : geometry_factor_ordered(q_prime, q);
}

std::vector<PairState> enumerate_pair_basis(int j_max) {
  const auto single = enumerate_basis(j_max);
  std::vector<PairState> out;
  out.reserve(single.size() * single.size());
  for (const auto& a : single)
    for (const auto& b : single) out.push_back({a, b});
  return out;
}

DdiMatrix build_ddi_matrix(int j_max) {
  if (j_max < 1) throw std::domain_error("build_ddi_matrix needs j_max >= 1");
  auto basis = enumerate_pair_basis(j_max);
  std::vector<DdiEntry> entries;
  for (std::size_t r = 0; r < basis.size(); ++r) {
    for (std::size_t c = 0; c < basis.size(); ++c) {
      if (!selection_allowed(basis[r], basis[c])) continue;
      const double v = geometry_factor(basis[r], basis[c]);
      if (v != 0.0) entries.push_back({r, c, v});
    }
  }
  return DdiMatrix(j_max, std::move(basis), std::move(entries));
}

}  // namespace molqudit
