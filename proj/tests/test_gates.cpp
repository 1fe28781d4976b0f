#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "molqudit/catalog.hpp"

using namespace molqudit;
using cd = std::complex<double>;

namespace {

const RotState kG{0, 0}, kE{1, 0}, kA{3, 0}, kM{3, -3}, kP{3, 3};

Eigen::Index ix(std::initializer_list<RotState> levels) {
  return static_cast<Eigen::Index>(basis_index(std::vector<RotState>(levels)));
}

VerificationReport check(const std::string& gate, const std::string& enc, int n = 0,
                         PhaseBranch branch = PhaseBranch::PlusI, Coupling layout = Coupling::BinaryTree) {
  GateRequest r;
  r.gate = gate;
  r.encoding = enc;
  r.qudits = n;
  r.layout = layout;
  r.physical_branch = branch;
  const auto g = compile_gate(r);
  return verify(g.circuit, g.reference, branch, 1e-10);
}

Eigen::MatrixXcd random_unitary(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = cd(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ();
}

}  // namespace

TEST_CASE("two-level rotations") {
  const auto id = rotation_matrix(Axis::X, kG, kE, 0.0);
  CHECK((id - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);

  const auto full_turn = rotation_matrix(Axis::X, kE, kA, 2 * M_PI);
  CHECK(std::abs(full_turn(1, 1) + 1.0) < 1e-15);
  CHECK(std::abs(full_turn(3, 3) + 1.0) < 1e-15);
  CHECK(full_turn(0, 0) == cd(1.0));
  CHECK(std::abs(full_turn(1, 3)) < 1e-15);

  const auto flip = rotation_matrix(Axis::Y, kG, kE, M_PI);
  CHECK(std::abs(flip(1, 0) - 1.0) < 1e-15);
  CHECK(std::abs(flip(0, 1) + 1.0) < 1e-15);
  CHECK(std::abs(flip(0, 0)) < 1e-15);

  const auto qutrit = rotation_matrix(Axis::Y, kG, kA, M_PI, {kG, kE, kA});
  CHECK(qutrit.rows() == 3);
  CHECK(std::abs(qutrit(2, 0) - 1.0) < 1e-15);
  CHECK_THROWS_AS(rotation_matrix(Axis::X, kG, kG, 1.0), SynthesisError);
}

TEST_CASE("single-qubit Z through a helper level") {
  const auto q = Encoding::by_name("qubit");
  const auto z = synth_z(q, 0);
  REQUIRE(z.ops.size() == 1);
  const auto& rot = std::get<Rotation>(z.ops[0]);
  CHECK(rot.a == kE);
  CHECK(rot.b == kA);
  CHECK(rot.angle == doctest::Approx(2 * M_PI));
  const auto u = circuit_unitary(z);
  CHECK(std::abs(u(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(u(1, 1) + 1.0) < 1e-12);
  QuditCircuit zz(1, 2);
  zz.append(z).append(z);
  const auto u2 = circuit_unitary(zz);
  CHECK(std::abs(u2(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(u2(1, 1) - 1.0) < 1e-12);
  for (const char* enc : {"qubit", "qutrit-anc", "ququart", "ququint"}) CHECK(check("z", enc).passed);
  GateRequest r{"z", "ququart", 1};
  r.slot = 1;
  const auto g = compile_gate(r);
  CHECK(verify(g.circuit, g.reference).passed);
}

TEST_CASE("CNOT from two entanglers") {
  const auto q = Encoding::by_name("qubit");
  const auto c = synth_cnot_via_iswaps(q, 0, 1);
  CHECK(c.entangler_count() == 2);
  RegisterState s = RegisterState::product({kE, kG});
  s = run(s, c, PhaseBranch::PlusI);
  CHECK(std::abs(std::abs(s.amplitudes(ix({kE, kE}))) - 1.0) < 1e-12);
  RegisterState z = run(RegisterState::ground(2), c, PhaseBranch::PlusI);
  CHECK(std::abs(std::abs(z.amplitudes(0)) - 1.0) < 1e-12);
  const auto rep = check("cnot", "qubit");
  CHECK(rep.passed);
  CHECK(rep.fidelity >= 1.0 - 1e-10);
  CHECK(check("iswap", "qubit").passed);
  CHECK(check("cnot", "qutrit-anc").passed);
}

TEST_CASE("cyclic shift and anchored exchange") {
  const auto t = Encoding::by_name("qutrit-anc");
  const auto p = circuit_unitary(synth_p(t, 0));
  const Eigen::Index g = 0, e = 1, a = 3;
  CHECK(std::abs(p(e, g) - 1.0) < 1e-12);
  CHECK(std::abs(p(a, e) - 1.0) < 1e-12);
  CHECK(std::abs(p(g, a) - 1.0) < 1e-12);
  const Eigen::MatrixXcd p3 = p * p * p;
  for (auto i : {g, e, a})
    for (auto j : {g, e, a}) CHECK(std::abs(p3(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
  CHECK(check("p", "qutrit-anc").passed);
  CHECK(check("p", "ququint").passed);

  const auto x = synth_iswap_0anc(t, 0, 1);
  const auto u = circuit_unitary(x);
  CHECK(std::abs(u(ix({kG, kA}), ix({kE, kE})) - cd(0, 1)) < 1e-12);
  CHECK(std::abs(u(ix({kE, kE}), ix({kG, kA})) - cd(0, 1)) < 1e-12);
  CHECK(std::abs(u(ix({kG, kG}), ix({kG, kG})) - 1.0) < 1e-12);
  CHECK(check("iswap-0anc", "qutrit-anc").passed);
  CHECK_THROWS_AS(synth_p(Encoding::by_name("qubit"), 0), SynthesisError);
}

TEST_CASE("W truth table and inverse") {
  const auto t = Encoding::by_name("qutrit-anc");
  Eigen::MatrixXcd w = circuit_unitary(synth_w(t, 0, 1));
  w /= w(ix({kE, kG}), ix({kG, kG}));  // global phase
  CHECK(std::abs(w(ix({kE, kG}), ix({kG, kG})) - 1.0) < 1e-12);
  CHECK(std::abs(w(ix({kG, kA}), ix({kG, kE})) - cd(0, 1)) < 1e-12);
  CHECK(std::abs(w(ix({kG, kG}), ix({kE, kG})) - 1.0) < 1e-12);
  CHECK(std::abs(w(ix({kG, kE}), ix({kE, kE})) - 1.0) < 1e-12);
  CHECK(check("w", "qutrit-anc").passed);

  QuditCircuit round(2, 3);
  round.append(synth_w(t, 0, 1)).append(synth_w_dagger(t, 0, 1));
  const auto u = circuit_unitary(round);
  double worst = 0.0;
  for (const auto& a : {kG, kE, kA})
    for (const auto& b : {kG, kE, kA})
      for (const auto& c : {kG, kE, kA})
        for (const auto& d : {kG, kE, kA})
          worst = std::max(worst, std::abs(u(ix({a, b}), ix({c, d})) - ((a == c && b == d) ? 1.0 : 0.0)));
  CHECK(worst <= 1e-10);
}

TEST_CASE("multi-controlled Z") {
  const auto t = Encoding::by_name("qutrit-anc");
  for (int n = 2; n <= 4; ++n) {
    for (auto layout : {Coupling::Linear, Coupling::BinaryTree}) {
      std::vector<int> q(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = i;
      const auto c = synth_cnz(t, q, layout);
      CHECK(c.entangler_count() == 2 * n - 2);
      CHECK(check("cnz", "qutrit-anc", n, PhaseBranch::PlusI, layout).passed);
    }
  }
  const auto linear = synth_cnz(t, {0, 1, 2, 3}, Coupling::Linear);
  const auto tree = synth_cnz(t, {0, 1, 2, 3}, Coupling::BinaryTree);
  CHECK(tree.entangler_depth() < linear.entangler_depth());
  CHECK(check("cnz", "qutrit-anc", 6).passed);
  CHECK(synth_cnz(t, {0, 1, 2, 3, 4, 5}, Coupling::BinaryTree).entangler_count() == 10);
  CHECK_THROWS_AS(synth_cnz(t, {0}, Coupling::Linear), SynthesisError);
  CHECK_THROWS_AS(synth_cnz(t, {0, 1, 2, 3, 4}, Coupling::Linear), SynthesisError);
  CHECK(check("toffoli", "qutrit-anc", 3).passed);
  CHECK(check("toffoli", "qutrit-anc", 4).passed);
}

TEST_CASE("intra-qudit gates") {
  const auto four = Encoding::by_name("ququart");
  const auto sw = synth_intra_iswap(four, 0);
  REQUIRE(sw.ops.size() == 1);
  const auto& r = std::get<Rotation>(sw.ops[0]);
  CHECK(r.axis == Axis::X);
  CHECK(r.a == kE);
  CHECK(r.b == kM);
  CHECK(check("intra-iswap", "ququart").passed);
  CHECK(check("intra-iswap", "ququint").passed);

  // Half the angle gives the square root of the exchange.
  QuditCircuit root(1, 4);
  root.rx(0, kE, kM, -M_PI / 2);
  const auto u = circuit_unitary(root);
  CHECK(std::abs(u(1, 1) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(u(2, 1) - cd(0, 1.0 / std::sqrt(2.0))) < 1e-15);

  CHECK(synth_intra_qudit_gate(four, 0, Eigen::Matrix4cd::Identity()).ops.empty());

  std::mt19937 rng(9);
  const Eigen::Index lv[] = {0, 1, 2, 4};  // 00, 01, 10, 11
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Matrix4cd target = random_unitary(rng, 4);
    const auto c = synth_intra_qudit_gate(four, 0, target);
    const auto full = circuit_unitary(c);
    Eigen::Matrix4cd block;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) block(i, j) = full(lv[i], lv[j]);
    // Two-level rotations have unit determinant, so agreement is up to a global phase.
    const cd phase = target(0, 0) / block(0, 0);
    CHECK(std::abs(std::abs(phase) - 1.0) <= 1e-10);
    CHECK((block * phase - target).cwiseAbs().maxCoeff() <= 1e-10);
  }
  Eigen::Matrix4cd bad = Eigen::Matrix4cd::Identity();
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(synth_intra_qudit_gate(four, 0, bad), SynthesisError);
}

TEST_CASE("inter-qudit CNOT and the native controlled exchange") {
  QuditCircuit u(2, 4);
  u.entangle(0, 1);
  const auto m = circuit_unitary(u);
  // Under the ququart map 00 -> (0,0) and 01 -> (1,0).
  CHECK(std::abs(m(ix({kE, kG}), ix({kG, kE})) - cd(0, 1)) < 1e-15);
  for (const auto& x : {kM, kP})
    for (const auto& y : {kG, kE, kM, kP}) CHECK(std::abs(m(ix({x, y}), ix({x, y})) - 1.0) < 1e-15);

  for (const char* enc : {"ququart", "ququint"})
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        GateRequest r{"inter-cnot", enc, 2};
        r.slot = a;
        r.target_slot = b;
        const auto g = compile_gate(r);
        CHECK(verify(g.circuit, g.reference).passed);
      }
}

TEST_CASE("C3Z on two ququints") {
  const auto five = Encoding::by_name("ququint");
  const auto c = synth_c3z_ququint(five, 0, 1);
  CHECK(c.entangler_count() == 2);
  int powered = 0;
  for (const auto& op : c.ops)
    if (const auto* e = std::get_if<Entangler>(&op)) powered += e->power == 2;
  CHECK(powered == 1);
  const auto rep = check("c3z-ququint", "ququint");
  CHECK(rep.passed);
  CHECK(rep.columns == 16);
}

TEST_CASE("phase branch repair") {
  for (const char* g : {"cnot", "iswap", "w", "iswap-0anc", "cnz", "c3z-ququint"}) {
    const std::string enc = std::string(g) == "cnot" || std::string(g) == "iswap" ? "qubit"
                            : std::string(g) == "c3z-ququint"                       ? "ququint"
                                                                                    : "qutrit-anc";
    CHECK(check(g, enc, 0, PhaseBranch::MinusI).passed);
  }
  GateRequest r{"cnot", "qubit", 2};
  const auto naive = compile_gate(r);
  CHECK_FALSE(verify(naive.circuit, naive.reference, PhaseBranch::MinusI).passed);
}

TEST_CASE("text format") {
  GateRequest r{"cnz", "qutrit-anc", 4};
  const auto g = compile_gate(r);
  const std::string text = to_text(g.circuit, r.header());
  const auto back = parse_text(text);
  CHECK(back.header.at("gate") == "cnz");
  CHECK(back.header.at("layout") == "tree");
  REQUIRE(back.circuit.ops.size() == g.circuit.ops.size());
  CHECK(to_text(back.circuit, back.header) == text);
  int entanglers = 0;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) entanglers += line.rfind("U ", 0) == 0;
  CHECK(entanglers == 6);

  CHECK_THROWS_AS(parse_text("RZ 0 0,0 1,0 1.0\n"), SynthesisError);
  CHECK_THROWS_AS(parse_text("RX 0 0,0 2,0 1.0\n"), std::domain_error);
  CHECK_THROWS_AS(parse_text("U 0 0 1\n"), SynthesisError);
  CHECK(parse_text("").circuit.ops.empty());
}

TEST_CASE("tampered sequences fail") {
  GateRequest r{"cnot", "qubit", 2};
  auto g = compile_gate(r);
  for (auto& op : g.circuit.ops)
    if (auto* rot = std::get_if<Rotation>(&op)) {
      rot->angle += 0.1;
      break;
    }
  const auto rep = verify(g.circuit, g.reference);
  CHECK_FALSE(rep.passed);
  CHECK(rep.fidelity < 1.0);
}

TEST_CASE("circuit bookkeeping") {
  QuditCircuit c(3, 3);
  c.entangle(0, 1).entangle(1, 2, 2).rx(0, kG, kE, 0.3);
  CHECK(c.entangler_count() == 3);
  CHECK(c.entangler_depth() == 3);
  const auto inv = c.inverse();
  CHECK(std::get<Rotation>(inv.ops[0]).angle == -0.3);
  CHECK(std::get<Entangler>(inv.ops[1]).power == 2);
  CHECK(std::get<Entangler>(inv.ops[2]).power == 3);
  QuditCircuit bad(2, 2);
  bad.entangle(0, 2);
  CHECK_THROWS_AS(bad.validate(), SynthesisError);
  CHECK(coupling_from_string("linear") == Coupling::Linear);
  CHECK_THROWS_AS(coupling_from_string("ring"), std::exception);
}
