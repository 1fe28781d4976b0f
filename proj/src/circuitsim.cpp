#include "molqudit/circuitsim.hpp"

#include <cmath>
#include <complex>

#include <fmt/format.h>

namespace molqudit {

using cd = std::complex<double>;

namespace {

constexpr std::size_t kLevels = 5;

std::size_t stride_of(int num_qudits, int qudit) {
  std::size_t s = 1;
  for (int i = qudit + 1; i < num_qudits; ++i) s *= kLevels;
  return s;
}

std::size_t digit(std::size_t index, std::size_t stride) { return (index / stride) % kLevels; }

std::size_t register_dimension(int num_qudits) {
  std::size_t d = 1;
  for (int i = 0; i < num_qudits; ++i) d *= kLevels;
  return d;
}

void check_qudit(const RegisterState& s, int q) {
  if (q < 0 || q >= s.num_qudits)
    throw SimulationError(fmt::format("qudit {} outside register of {}", q, s.num_qudits));
}

}  // namespace

RegisterState RegisterState::ground(int num_qudits) {
  if (num_qudits < 1) throw SimulationError("register needs at least one qudit");
  RegisterState s;
  s.num_qudits = num_qudits;
  s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(register_dimension(num_qudits)));
  s.amplitudes(0) = 1.0;
  return s;
}

std::size_t basis_index(const std::vector<RotState>& levels) {
  std::size_t idx = 0;
  for (const auto& l : levels) idx = idx * kLevels + physical_index(l);
  return idx;
}

RegisterState RegisterState::product(const std::vector<RotState>& levels) {
  RegisterState s = ground(static_cast<int>(levels.size()));
  s.amplitudes(0) = 0.0;
  s.amplitudes(static_cast<Eigen::Index>(basis_index(levels))) = 1.0;
  return s;
}

void apply_inplace(RegisterState& state, const GateOp& op, PhaseBranch branch) {
  auto& v = state.amplitudes;
  const auto dim = static_cast<std::size_t>(v.size());
  if (const auto* r = std::get_if<Rotation>(&op)) {
    check_qudit(state, r->qudit);
    if (r->a == r->b) throw SimulationError("rotation needs two distinct levels");
    const std::size_t ia = physical_index(r->a);
    const std::size_t ib = physical_index(r->b);
    const std::size_t stride = stride_of(state.num_qudits, r->qudit);
    const double c = std::cos(0.5 * r->angle);
    const double s = std::sin(0.5 * r->angle);
    const cd off_ab = r->axis == Axis::X ? cd(0.0, -s) : cd(-s, 0.0);
    const cd off_ba = r->axis == Axis::X ? cd(0.0, -s) : cd(s, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      if (digit(i, stride) != ia) continue;
      const std::size_t j = i + ib * stride - ia * stride;
      const cd x = v(static_cast<Eigen::Index>(i));
      const cd y = v(static_cast<Eigen::Index>(j));
      v(static_cast<Eigen::Index>(i)) = c * x + off_ab * y;
      v(static_cast<Eigen::Index>(j)) = off_ba * x + c * y;
    }
    return;
  }

  const auto& e = std::get<Entangler>(op);
  check_qudit(state, e.a);
  check_qudit(state, e.b);
  if (e.a == e.b) throw SimulationError("entangler needs two distinct qudits");
  const int p = ((e.power % 4) + 4) % 4;
  if (p == 0) return;
  const cd i_branch = branch == PhaseBranch::PlusI ? cd(0, 1) : cd(0, -1);
  const cd exch = p == 1 ? i_branch : std::conj(i_branch);  // U^3 = U^dagger
  const std::size_t sa = stride_of(state.num_qudits, e.a);
  const std::size_t sb = stride_of(state.num_qudits, e.b);
  const std::size_t g = physical_index({0, 0});
  const std::size_t x = physical_index({1, 0});
  for (std::size_t i = 0; i < dim; ++i) {
    // i holds (0,0) on a and (1,0) on b; j is its flip-flop partner.
    if (digit(i, sa) != g || digit(i, sb) != x) continue;
    const std::size_t j = i + x * sa - g * sa + g * sb - x * sb;
    const cd vi = v(static_cast<Eigen::Index>(i));
    const cd vj = v(static_cast<Eigen::Index>(j));
    if (p == 2) {
      v(static_cast<Eigen::Index>(i)) = -vi;
      v(static_cast<Eigen::Index>(j)) = -vj;
    } else {
      v(static_cast<Eigen::Index>(i)) = exch * vj;
      v(static_cast<Eigen::Index>(j)) = exch * vi;
    }
  }
}

RegisterState apply(const RegisterState& state, const GateOp& op, PhaseBranch branch) {
  RegisterState out = state;
  apply_inplace(out, op, branch);
  return out;
}

RegisterState run(const RegisterState& state, const QuditCircuit& circuit, PhaseBranch branch) {
  if (circuit.num_qudits != state.num_qudits)
    throw SimulationError(fmt::format("circuit has {} qudits, state has {}", circuit.num_qudits,
                                      state.num_qudits));
  RegisterState out = state;
  for (const auto& op : circuit.ops) apply_inplace(out, op, branch);
  return out;
}

Eigen::MatrixXcd circuit_unitary(const QuditCircuit& circuit, PhaseBranch branch,
                                 std::size_t max_dimension) {
  if (circuit.num_qudits < 1) throw SimulationError("circuit needs at least one qudit");
  const std::size_t dim = register_dimension(circuit.num_qudits);
  if (dim > max_dimension)
    throw SimulationError(fmt::format("unitary of dimension {} exceeds the guard of {}", dim, max_dimension));
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd u(n, n);
  RegisterState col;
  col.num_qudits = circuit.num_qudits;
  for (Eigen::Index c = 0; c < n; ++c) {
    col.amplitudes = Eigen::VectorXcd::Unit(n, c);
    for (const auto& op : circuit.ops) apply_inplace(col, op, branch);
    u.col(c) = col.amplitudes;
  }
  return u;
}

std::vector<std::string> basis_labels(int num_qudits) {
  std::vector<std::string> out{""};
  for (int q = 0; q < num_qudits; ++q) {
    std::vector<std::string> next;
    for (const auto& prefix : out)
      for (const auto& l : physical_levels()) next.push_back(prefix.empty() ? l.label() : prefix + ";" + l.label());
    out = std::move(next);
  }
  return out;
}

Eigen::VectorXd measure_populations(const RegisterState& state, int qudit) {
  check_qudit(state, qudit);
  const std::size_t stride = stride_of(state.num_qudits, qudit);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kLevels));
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i)
    p(static_cast<Eigen::Index>(digit(static_cast<std::size_t>(i), stride))) += std::norm(state.amplitudes(i));
  return p;
}

namespace {

std::vector<std::size_t> product_indices(const std::vector<std::vector<RotState>>& levels) {
  std::vector<std::size_t> out{0};
  for (const auto& per_qudit : levels) {
    std::vector<std::size_t> next;
    for (auto base : out)
      for (const auto& l : per_qudit) next.push_back(base * kLevels + physical_index(l));
    out = std::move(next);
  }
  return out;
}

}  // namespace

VerificationReport verify(const QuditCircuit& circuit, const LogicalReference& ref, PhaseBranch branch,
                          double tolerance) {
  if (ref.inputs.size() != ref.outputs.size())
    throw SimulationError("reference input and output registers differ in size");
  const int n = static_cast<int>(ref.inputs.size());
  if (circuit.num_qudits > n)
    throw SimulationError(fmt::format("sequence uses {} qudits, reference has {}", circuit.num_qudits, n));
  QuditCircuit sized = circuit;
  sized.num_qudits = n;
  sized.validate();

  const auto in_idx = product_indices(ref.inputs);
  const auto out_idx = product_indices(ref.outputs);
  if (ref.matrix.rows() != static_cast<Eigen::Index>(out_idx.size()) ||
      ref.matrix.cols() != static_cast<Eigen::Index>(in_idx.size()))
    throw SimulationError("reference matrix does not match its level lists");

  // Only the logical input columns are propagated.
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(out_idx.size()), static_cast<Eigen::Index>(in_idx.size()));
  const auto dim = static_cast<Eigen::Index>(register_dimension(n));
  RegisterState col;
  col.num_qudits = n;
  for (std::size_t c = 0; c < in_idx.size(); ++c) {
    col.amplitudes = Eigen::VectorXcd::Unit(dim, static_cast<Eigen::Index>(in_idx[c]));
    for (const auto& op : sized.ops) apply_inplace(col, op, branch);
    for (std::size_t r = 0; r < out_idx.size(); ++r)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          col.amplitudes(static_cast<Eigen::Index>(out_idx[r]));
  }

  VerificationReport rep;
  rep.columns = in_idx.size();
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    rep.leakage = std::max(rep.leakage, 1.0 - a.col(c).squaredNorm());

  // Align the global phase on the first clearly nonzero reference entry.
  cd phase = 1.0;
  bool found = false;
  for (Eigen::Index c = 0; c < ref.matrix.cols() && !found; ++c) {
    for (Eigen::Index r = 0; r < ref.matrix.rows() && !found; ++r) {
      if (std::abs(ref.matrix(r, c)) > 1e-6 && std::abs(a(r, c)) > 1e-12) {
        phase = ref.matrix(r, c) / a(r, c);
        phase /= std::abs(phase);
        found = true;
      }
    }
  }
  rep.max_error = (a * phase - ref.matrix).cwiseAbs().maxCoeff();
  rep.fidelity = std::abs((ref.matrix.adjoint() * a).trace()) / static_cast<double>(rep.columns);
  rep.passed = rep.max_error <= tolerance && rep.leakage <= 1e-9;
  return rep;
}

}  // namespace molqudit
