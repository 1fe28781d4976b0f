#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "molqudit/ddi.hpp"

using namespace molqudit;

namespace {
PairState ps(int j1, int m1, int j2, int m2) { return {{j1, m1}, {j2, m2}}; }
}  // namespace

TEST_CASE("selection rules") {
  CHECK(selection_allowed(ps(0, 0, 1, 0), ps(1, 0, 0, 0)));
  CHECK_FALSE(selection_allowed(ps(0, 0, 1, 0), ps(2, 0, 0, 0)));
  CHECK(selection_allowed(ps(1, -1, 1, 1), ps(2, 0, 0, 0)));
  // dM = (+1, +1) breaks M1 + M2 conservation.
  CHECK_FALSE(selection_allowed(ps(1, 1, 1, -1), ps(2, 2, 0, 0)));
  CHECK_FALSE(selection_allowed(ps(1, 0, 1, 0), ps(0, 0, 2, 1)));
}

TEST_CASE("flip-flop geometry factor") {
  // <1 0; 0 0|1 0> = 1 and <1 0; 1 0|0 0> = -1/sqrt(3) give (1)(-1/sqrt3)(-2/sqrt3).
  CHECK(geometry_factor(ps(0, 0, 1, 0), ps(1, 0, 0, 0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(geometry_factor(ps(1, 0, 0, 0), ps(0, 0, 1, 0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(geometry_factor(ps(0, 0, 1, 0), ps(2, 0, 0, 0)) == 0.0);
}

TEST_CASE("J_max = 1 matrix") {
  const auto m = build_ddi_matrix(1);
  REQUIRE(m.dimension() == 16);
  CHECK_FALSE(m.entries().empty());
  for (const auto& e : m.entries()) {
    const auto& q = m.basis()[e.row];
    const auto& qp = m.basis()[e.col];
    CHECK(std::abs(q.first.j - qp.first.j) == 1);
    CHECK(std::abs(q.second.j - qp.second.j) == 1);
    CHECK(e.row != e.col);
    CHECK(q.first.m + q.second.m == qp.first.m + qp.second.m);
  }
}

TEST_CASE("J_max = 1 block structure") {
  const auto m = build_ddi_matrix(1);
  int flip_flop = 0, pair_creation = 0;
  for (const auto& e : m.entries()) {
    const auto& q = m.basis()[e.row];
    const int jsum = q.first.j + q.second.j;
    if (jsum == 1) ++flip_flop;
    else ++pair_creation;
  }
  // (0,1)<->(1,0): M-conserving pairs 3; (0,0)<->(1,1): 3 pairs, both directions stored.
  CHECK(flip_flop == 6);
  CHECK(pair_creation == 6);
  CHECK(m.at(*m.index_of(ps(0, 0, 0, 0)), *m.index_of(ps(1, 0, 1, 0))) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("symmetry over J_max = 4") {
  const auto m = build_ddi_matrix(4);
  CHECK(m.dimension() == 625);
  double asym = 0.0;
  for (const auto& e : m.entries()) asym = std::max(asym, std::abs(e.value - m.at(e.col, e.row)));
  CHECK(asym == 0.0);
  for (std::size_t i = 0; i < m.dimension(); ++i) CHECK(m.at(i, i) == 0.0);
}

TEST_CASE("sampled pairs: zero whenever the rules forbid it") {
  const auto basis = enumerate_pair_basis(5);
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  int forbidden = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto& q = basis[pick(rng)];
    const auto& qp = basis[pick(rng)];
    const double g = geometry_factor(q, qp);
    if (!selection_allowed(q, qp)) {
      ++forbidden;
      CHECK(g == 0.0);
    }
    if (g != 0.0) CHECK(q.first.m + q.second.m == qp.first.m + qp.second.m);
  }
  CHECK(forbidden > 900);
}

TEST_CASE("csv dump") {
  std::ostringstream ss;
  build_ddi_matrix(1).write_csv(ss);
  const std::string s = ss.str();
  CHECK(s.rfind("q_first,q_second,qp_first,qp_second,factor\n", 0) == 0);
  CHECK(s.find("\"0,0\",\"1,0\",\"1,0\",\"0,0\",0.66666666666666") != std::string::npos);
  CHECK(build_ddi_matrix(1).index_of(ps(1, -1, 0, 0)).value() == 4);
}
