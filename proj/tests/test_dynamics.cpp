#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "molqudit/dynamics.hpp"

using namespace molqudit;
using cd = std::complex<double>;

namespace {
TrajectoryProfile trap_profile(ProfileKind k, double tau) { return TrajectoryProfile::from_trap(k, TrapSpec{}, tau); }
}  // namespace

TEST_CASE("target gate structure") {
  for (auto branch : {PhaseBranch::PlusI, PhaseBranch::MinusI}) {
    const auto u = target_gate(branch);
    REQUIRE(u.rows() == 25);
    int diag_ones = 0, off = 0;
    for (int r = 0; r < 25; ++r)
      for (int c = 0; c < 25; ++c) {
        if (r == c && u(r, c) == cd(1.0)) ++diag_ones;
        if (r != c && std::abs(u(r, c)) == 1.0) ++off;
      }
    CHECK(diag_ones == 23);
    CHECK(off == 2);
    // (0,0;1,0) is index 1, (1,0;0,0) is index 5.
    const cd i = branch == PhaseBranch::PlusI ? cd(0, 1) : cd(0, -1);
    CHECK(u(5, 1) == i);
    CHECK(u(1, 5) == i);
    const Eigen::MatrixXcd sq = u * u;
    CHECK(sq(1, 1) == cd(-1.0));
    CHECK(sq(5, 5) == cd(-1.0));
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(25, 25)).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(to_string(opposite(PhaseBranch::PlusI)) == "minus-i");
  CHECK(phase_branch_from_string("+i") == PhaseBranch::PlusI);
}

TEST_CASE("fidelity") {
  const auto u = target_gate(PhaseBranch::PlusI);
  CHECK(fidelity(u, u) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fidelity(std::polar(1.0, 0.7) * u, u) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fidelity(Eigen::MatrixXcd::Identity(25, 25), u) == doctest::Approx(23.0 / 25.0).epsilon(1e-15));
  // The two branches are 21/25 apart.
  CHECK(fidelity(target_gate(PhaseBranch::MinusI), u) == doctest::Approx(21.0 / 25.0).epsilon(1e-15));
}

TEST_CASE("pulse area") {
  const auto srf = presets::srf();
  const auto c = trap_profile(ProfileKind::Cosine, 82.59);
  CHECK(secular_pulse_area(srf, c) == doctest::Approx(M_PI / 2).epsilon(0.02));
  CHECK(secular_pulse_area(srf, c.with_tau(165.18)) == doctest::Approx(2.0 * secular_pulse_area(srf, c)).epsilon(1e-13));
  auto mute = srf;
  mute.dipole_moment_debye = 0.0;
  CHECK(secular_pulse_area(mute, c) == 0.0);
}

TEST_CASE("negligible interaction leaves the identity") {
  TrajectoryProfile far{ProfileKind::Cosine, 0.01, 1000.0, 10.0};
  const auto r = propagate(presets::srf(), far);
  CHECK(r.f_id >= 1.0 - 1e-6);
  CHECK(r.unitarity_defect <= 1e-8);
}

TEST_CASE("SrF cosine at the reference duration") {
  const auto r = propagate(presets::srf(), trap_profile(ProfileKind::Cosine, 82.59));
  CHECK(r.f_iswap >= 0.99);
  CHECK(r.unitarity_defect <= 1e-8);
  CHECK(r.leakage <= 1e-8);
  // Only one branch can be close to 1 near theta = pi/2.
  CHECK(std::min(r.f_iswap_plus, r.f_iswap_minus) < 0.99);
  CHECK(r.phase_branch == PhaseBranch::MinusI);
  CHECK(r.propagated_dimension == 25);

  const auto j = to_json(r);
  CHECK(j.at("operator").size() == 25);
  CHECK(j.at("basis").at(1) == "0,0;1,0");
  CHECK(j.at("phase_branch") == "minus-i");
}

TEST_CASE("constant separation gives the identity") {
  const auto r = propagate(presets::srf(), trap_profile(ProfileKind::Constant, 82.59));
  CHECK(r.f_id >= 0.999);
}

TEST_CASE("superposition propagation matches the assembled operator") {
  const auto srf = presets::srf();
  const auto p = trap_profile(ProfileKind::Tanh, 60.72);
  const auto r = propagate(srf, p);
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  Eigen::VectorXcd psi(25);
  for (int i = 0; i < 25; ++i) psi(i) = cd(g(rng), g(rng));
  psi.normalize();
  const Eigen::VectorXcd out = propagate_state(srf, p, psi);
  CHECK((out - r.op * psi).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(propagate_state(srf, p, Eigen::VectorXcd::Zero(4)), std::invalid_argument);
}

TEST_CASE("truncation convergence") {
  const auto srf = presets::srf();
  const auto p = trap_profile(ProfileKind::Cosine, 82.59);
  PropagateOptions o4, o5;
  o5.j_max = 5;
  CHECK(std::abs(propagate(srf, p, o4).f_iswap - propagate(srf, p, o5).f_iswap) < 1e-4);
}

TEST_CASE("integration failures carry diagnostics") {
  PropagateOptions o;
  o.max_steps = 3;
  try {
    propagate(presets::srf(), trap_profile(ProfileKind::Cosine, 82.59), o);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.diagnostics().contains("time_us"));
    CHECK(e.diagnostics().at("accepted_steps").get<int>() >= 3);
  }
  PropagateOptions tiny;
  tiny.step_tolerance = 1e-30;
  CHECK_THROWS_AS(propagate(presets::srf(), trap_profile(ProfileKind::Cosine, 82.59), tiny), IntegrationError);
  PropagateOptions small;
  small.j_max = 0;
  CHECK_THROWS_AS(propagate(presets::srf(), trap_profile(ProfileKind::Cosine, 82.59), small), ConfigError);
}

TEST_CASE("full mode on a small problem") {
  // Dipole x10 with tau / 100 keeps the pulse area; J_max = 2 keeps it cheap.
  auto strong = presets::srf();
  strong.dipole_moment_debye *= 10.0;
  const auto p = trap_profile(ProfileKind::Cosine, 0.8259);
  PropagateOptions sec, full;
  sec.j_max = full.j_max = 2;
  full.mode = SolverMode::Full;
  full.step_tolerance = 1e-9;
  const auto a = propagate(strong, p, sec);
  const auto b = propagate(strong, p, full);
  CHECK(b.unitarity_defect <= 1e-6);
  CHECK((a.op - b.op).cwiseAbs().maxCoeff() <= 1e-2);
  CHECK(b.propagated_dimension > a.propagated_dimension);
}
