#include "molqudit/gates.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <fmt/format.h>

namespace molqudit {

using cd = std::complex<double>;

namespace {

constexpr double kPi = constants::pi;

// Physical levels by role.
constexpr RotState kG{0, 0};
constexpr RotState kE{1, 0};
constexpr RotState kLow{3, -3};
constexpr RotState kMid{3, 0};
constexpr RotState kHigh{3, 3};

void require(bool ok, const std::string& what) {
  if (!ok) throw SynthesisError(what);
}

void require_kind(const Encoding& enc, std::initializer_list<EncodingKind> kinds, const char* gate) {
  require(std::find(kinds.begin(), kinds.end(), enc.kind()) != kinds.end(),
          fmt::format("{} is not available for the '{}' encoding", gate, enc.name()));
}

void require_distinct(int a, int b) {
  require(a >= 0 && b >= 0 && a != b, fmt::format("need two distinct qudits, got {} and {}", a, b));
}

int width(std::initializer_list<int> qudits) { return std::max(qudits) + 1; }

/// Entangler written for the +i branch, patched for the physical branch.
void add_qubit_entangler(QuditCircuit& c, const Encoding& enc, int a, int b, const SynthOptions& opts) {
  if (opts.physical_branch == PhaseBranch::MinusI) {
    // Z(x)Z U_- equals U_+ on the qubit levels.
    c.append(synth_z(enc, a));
    c.append(synth_z(enc, b));
  }
  c.entangle(a, b, 1);
}

int odd_power(const SynthOptions& opts) { return opts.physical_branch == PhaseBranch::MinusI ? 3 : 1; }

}  // namespace

QuditCircuit& QuditCircuit::rx(int qudit, RotState a, RotState b, double angle) {
  ops.emplace_back(Rotation{Axis::X, qudit, a, b, angle});
  return *this;
}

QuditCircuit& QuditCircuit::ry(int qudit, RotState a, RotState b, double angle) {
  ops.emplace_back(Rotation{Axis::Y, qudit, a, b, angle});
  return *this;
}

QuditCircuit& QuditCircuit::entangle(int a, int b, int power) {
  ops.emplace_back(Entangler{a, b, power});
  return *this;
}

QuditCircuit& QuditCircuit::append(const QuditCircuit& other) {
  num_qudits = std::max(num_qudits, other.num_qudits);
  ops.insert(ops.end(), other.ops.begin(), other.ops.end());
  return *this;
}

void QuditCircuit::validate() const {
  require(num_qudits >= 1, "circuit needs at least one qudit");
  for (const auto& op : ops) {
    if (const auto* r = std::get_if<Rotation>(&op)) {
      require(r->qudit >= 0 && r->qudit < num_qudits,
              fmt::format("rotation on qudit {} outside register of {}", r->qudit, num_qudits));
      require(r->a != r->b, "rotation needs two distinct levels");
      physical_index(r->a);
      physical_index(r->b);
      require(std::isfinite(r->angle), "rotation angle must be finite");
    } else {
      const auto& e = std::get<Entangler>(op);
      require(e.a >= 0 && e.a < num_qudits && e.b >= 0 && e.b < num_qudits && e.a != e.b,
              fmt::format("entangler on qudits {},{} invalid for register of {}", e.a, e.b, num_qudits));
      require(e.power >= 1, "entangler power must be positive");
    }
  }
}

QuditCircuit QuditCircuit::inverse() const {
  QuditCircuit out(num_qudits, dimension);
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    if (const auto* r = std::get_if<Rotation>(&*it)) {
      Rotation inv = *r;
      inv.angle = -r->angle;
      out.ops.emplace_back(inv);
    } else {
      Entangler e = std::get<Entangler>(*it);
      const int p = ((e.power % 4) + 4) % 4;
      if (p == 0) continue;
      e.power = 4 - p;
      out.ops.emplace_back(e);
    }
  }
  return out;
}

int QuditCircuit::entangler_count() const {
  int n = 0;
  for (const auto& op : ops)
    if (const auto* e = std::get_if<Entangler>(&op)) n += e->power;
  return n;
}

int QuditCircuit::entangler_depth() const {
  std::vector<int> ready(static_cast<std::size_t>(num_qudits), 0);
  int depth = 0;
  for (const auto& op : ops) {
    if (const auto* e = std::get_if<Entangler>(&op)) {
      auto& ra = ready.at(static_cast<std::size_t>(e->a));
      auto& rb = ready.at(static_cast<std::size_t>(e->b));
      const int end = std::max(ra, rb) + e->power;
      ra = rb = end;
      depth = std::max(depth, end);
    }
  }
  return depth;
}

Eigen::MatrixXcd rotation_matrix(Axis axis, const RotState& a, const RotState& b, double angle,
                                 const std::vector<RotState>& levels) {
  if (a == b) throw SynthesisError("rotation needs two distinct levels");
  const auto ia = std::find(levels.begin(), levels.end(), a) - levels.begin();
  const auto ib = std::find(levels.begin(), levels.end(), b) - levels.begin();
  const auto n = static_cast<Eigen::Index>(levels.size());
  if (ia >= n || ib >= n) throw SynthesisError("rotation level outside the level list");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  m(ia, ia) = c;
  m(ib, ib) = c;
  if (axis == Axis::X) {
    m(ia, ib) = cd(0.0, -s);
    m(ib, ia) = cd(0.0, -s);
  } else {
    m(ia, ib) = -s;
    m(ib, ia) = s;
  }
  return m;
}

RotState z_helper_level(const Encoding& enc) {
  switch (enc.kind()) {
    case EncodingKind::Qubit: return kMid;
    case EncodingKind::QutritAnc: return kLow;
    case EncodingKind::Ququart: return kMid;
    case EncodingKind::Ququint: return enc.ancilla();
  }
  return kMid;
}

QuditCircuit synth_z(const Encoding& enc, int qudit, int slot) {
  require(qudit >= 0, "negative qudit index");
  require(slot >= 0 && slot < enc.qubits_per_qudit(),
          fmt::format("qubit slot {} invalid for '{}'", slot, enc.name()));
  QuditCircuit c(qudit + 1, enc.dimension());
  const auto levels = enc.qubit_states();
  const int bits = enc.qubits_per_qudit();
  const RotState helper = z_helper_level(enc);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const bool set = (i >> (bits - 1 - slot)) & 1U;
    if (set) c.rx(qudit, levels[i], helper, 2.0 * kPi);
  }
  return c;
}

QuditCircuit synth_iswap(const Encoding& enc, int a, int b, const SynthOptions& opts) {
  require_kind(enc, {EncodingKind::Qubit, EncodingKind::QutritAnc}, "iswap");
  require_distinct(a, b);
  QuditCircuit c(width({a, b}), enc.dimension());
  add_qubit_entangler(c, enc, a, b, opts);
  return c;
}

QuditCircuit synth_cnot_via_iswaps(const Encoding& enc, int control, int target,
                                   const SynthOptions& opts) {
  require_kind(enc, {EncodingKind::Qubit, EncodingKind::QutritAnc}, "cnot");
  require_distinct(control, target);
  QuditCircuit c(width({control, target}), enc.dimension());
  c.rx(control, kG, kE, kPi / 2).ry(target, kG, kE, kPi / 2);
  add_qubit_entangler(c, enc, control, target, opts);
  c.rx(target, kG, kE, kPi / 2);
  add_qubit_entangler(c, enc, control, target, opts);
  c.ry(control, kG, kE, -kPi / 2).rx(control, kG, kE, kPi / 2);
  c.ry(target, kG, kE, -kPi / 2).rx(target, kG, kE, -kPi / 2);
  return c;
}

QuditCircuit synth_p(const Encoding& enc, int qudit) {
  require_kind(enc, {EncodingKind::QutritAnc, EncodingKind::Ququint}, "P");
  require(qudit >= 0, "negative qudit index");
  QuditCircuit c(qudit + 1, enc.dimension());
  c.ry(qudit, kG, kE, kPi).ry(qudit, kG, enc.ancilla(), -kPi);
  return c;
}

QuditCircuit synth_p_dagger(const Encoding& enc, int qudit) { return synth_p(enc, qudit).inverse(); }

QuditCircuit synth_iswap_0anc(const Encoding& enc, int a, int b, const SynthOptions& opts) {
  require_kind(enc, {EncodingKind::QutritAnc, EncodingKind::Ququint}, "iswap-0anc");
  require_distinct(a, b);
  QuditCircuit c(width({a, b}), enc.dimension());
  c.append(synth_p_dagger(enc, b));
  c.entangle(a, b, odd_power(opts));
  c.append(synth_p(enc, b));
  return c;
}

QuditCircuit synth_w(const Encoding& enc, int a, int b, const SynthOptions& opts) {
  require_kind(enc, {EncodingKind::QutritAnc, EncodingKind::Ququint}, "W");
  require_distinct(a, b);
  QuditCircuit c(width({a, b}), enc.dimension());
  c.rx(a, kG, kE, kPi);
  c.append(synth_iswap_0anc(enc, a, b, opts));
  return c;
}

QuditCircuit synth_w_dagger(const Encoding& enc, int a, int b, const SynthOptions& opts) {
  return synth_w(enc, a, b, opts).inverse();
}

std::string to_string(Coupling c) { return c == Coupling::Linear ? "linear" : "tree"; }

Coupling coupling_from_string(const std::string& name) {
  if (name == "linear") return Coupling::Linear;
  if (name == "tree" || name == "binary-tree") return Coupling::BinaryTree;
  throw ConfigError(fmt::format("unknown layout '{}'", name));
}

int cnz_capacity(Coupling layout) { return layout == Coupling::Linear ? 4 : 6; }

namespace {

// W followed by moving the accumulator's ancilla population to a spare level.
void absorb(QuditCircuit& c, const Encoding& enc, int x, int acc, RotState spare) {
  c.append(synth_w(enc, x, acc));
  c.ry(acc, kMid, spare, kPi);
}

// Inverse of absorb. U after a 2 pi kick on (1,0) through the freed spare
// level acts as U^dagger on every state that reaches it here.
void release(QuditCircuit& c, const Encoding& enc, int x, int acc, RotState spare) {
  c.ry(acc, kMid, spare, -kPi);
  c.append(synth_p_dagger(enc, acc));
  c.rx(acc, kE, spare, 2.0 * kPi);
  c.entangle(x, acc, 1);
  c.append(synth_p(enc, acc));
  c.rx(x, kG, kE, -kPi);
}

// -1 on |1 1>; b must never hold the ancilla.
void controlled_z(QuditCircuit& c, const Encoding& enc, int a, int b) {
  c.append(synth_p_dagger(enc, b));
  c.entangle(a, b, 1);
  c.entangle(a, b, 1);
  c.append(synth_p(enc, b));
}

}  // namespace

QuditCircuit synth_cnz(const Encoding& enc, const std::vector<int>& qudits, Coupling layout) {
  require_kind(enc, {EncodingKind::QutritAnc}, "C^{n-1}Z");
  const int n = static_cast<int>(qudits.size());
  require(n >= 2, "C^{n-1}Z needs at least two qudits");
  require(n <= cnz_capacity(layout),
          fmt::format("{} layout handles at most {} qudits, got {}", to_string(layout),
                      cnz_capacity(layout), n));
  std::vector<int> sorted = qudits;
  std::sort(sorted.begin(), sorted.end());
  require(sorted.front() >= 0 && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "C^{n-1}Z qudit indices must be distinct and non-negative");

  QuditCircuit c(sorted.back() + 1, enc.dimension());
  const RotState spares[2] = {kLow, kHigh};

  struct Step {
    int x;
    int acc;
    RotState spare;
  };
  std::vector<Step> steps;
  const int acc1 = qudits[static_cast<std::size_t>(n - 1)];
  const int partner = qudits[static_cast<std::size_t>(n - 2)];
  if (layout == Coupling::Linear) {
    for (int i = 0; i + 2 < n; ++i) steps.push_back({qudits[static_cast<std::size_t>(i)], acc1, spares[i]});
  } else {
    // Two accumulators fill in alternation so their W's run side by side.
    int used[2] = {0, 0};
    for (int i = 0; i + 2 < n; ++i) {
      const int which = i % 2;
      const int acc = which == 0 ? acc1 : partner;
      steps.push_back({qudits[static_cast<std::size_t>(i)], acc, spares[used[which]++]});
    }
  }

  for (const auto& s : steps) absorb(c, enc, s.x, s.acc, s.spare);
  controlled_z(c, enc, acc1, partner);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) release(c, enc, it->x, it->acc, it->spare);
  return c;
}

QuditCircuit synth_toffoli(const Encoding& enc, const std::vector<int>& qudits, Coupling layout) {
  require(!qudits.empty(), "Toffoli needs qudits");
  const int t = qudits.back();
  QuditCircuit h(t + 1, enc.dimension());
  // R_x(pi) R_y(pi/2) is a Hadamard up to a phase of -i.
  h.ry(t, kG, kE, kPi / 2).rx(t, kG, kE, kPi);
  QuditCircuit c = h;
  c.append(synth_cnz(enc, qudits, layout));
  c.append(h);
  return c;
}

namespace {

// u = R_x(a) R_y(b) R_x(c) for u in SU(2) on the ordered pair (p, q).
void emit_su2(QuditCircuit& c, int qudit, const RotState& p, const RotState& q, const Eigen::Matrix2cd& u) {
  const double r = std::sqrt(0.5);
  Eigen::Matrix2cd t;
  t << r, -r, r, r;  // R_y(pi/2); conjugation by it turns x rotations into z rotations
  const Eigen::Matrix2cd m = t.adjoint() * u * t;
  const double beta = 2.0 * std::atan2(std::abs(m(1, 0)), std::abs(m(0, 0)));
  const double sum = 2.0 * std::arg(m(1, 1));
  const double diff = std::abs(m(1, 0)) > 1e-14 ? 2.0 * std::arg(m(1, 0)) : 0.0;
  const double alpha = 0.5 * (sum + diff);
  const double gamma = 0.5 * (sum - diff);
  auto nonzero = [](double x) { return std::abs(x) > 1e-13; };
  if (nonzero(gamma)) c.rx(qudit, p, q, gamma);
  if (nonzero(beta)) c.ry(qudit, p, q, beta);
  if (nonzero(alpha)) c.rx(qudit, p, q, alpha);
}

void emit_rz(QuditCircuit& c, int qudit, const RotState& p, const RotState& q, double angle) {
  if (std::abs(angle) <= 1e-13) return;
  c.rx(qudit, p, q, -kPi / 2).ry(qudit, p, q, angle).rx(qudit, p, q, kPi / 2);
}

}  // namespace

QuditCircuit synth_intra_qudit_gate(const Encoding& enc, int qudit, const Eigen::Matrix4cd& gate) {
  require_kind(enc, {EncodingKind::Ququart, EncodingKind::Ququint}, "intra-qudit gate");
  require(qudit >= 0, "negative qudit index");
  require((gate.adjoint() * gate - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-10,
          "intra-qudit gate must be unitary");
  const auto levels = enc.qubit_states();

  // Givens sweep: G_k ... G_1 V = D with every G_i in SU(2) on adjacent rows.
  Eigen::Matrix4cd v = gate;
  struct Givens {
    int row;
    Eigen::Matrix2cd g;
  };
  std::vector<Givens> sweep;
  for (int col = 0; col < 3; ++col) {
    for (int row = 3; row > col; --row) {
      const cd x = v(row - 1, col);
      const cd y = v(row, col);
      if (std::abs(y) < 1e-15) continue;
      const double r = std::hypot(std::abs(x), std::abs(y));
      Eigen::Matrix2cd g;
      g << std::conj(x) / r, std::conj(y) / r, -y / r, x / r;
      const Eigen::Matrix<cd, 2, 4> rows = v.middleRows<2>(row - 1);
      v.middleRows<2>(row - 1) = g * rows;
      sweep.push_back({row - 1, g});
    }
  }

  QuditCircuit c(qudit + 1, enc.dimension());
  // D first: relative phases through a chain of z rotations.
  double phi[4];
  double mean = 0.0;
  for (int k = 0; k < 4; ++k) {
    phi[k] = std::arg(v(k, k));
    mean += 0.25 * phi[k];
  }
  double p[4];
  for (int k = 0; k < 4; ++k) p[k] = phi[k] - mean;
  const double t0 = -2.0 * p[0];
  const double t1 = t0 - 2.0 * p[1];
  const double t2 = 2.0 * p[3];
  emit_rz(c, qudit, levels[0], levels[1], t0);
  emit_rz(c, qudit, levels[1], levels[2], t1);
  emit_rz(c, qudit, levels[2], levels[3], t2);

  for (auto it = sweep.rbegin(); it != sweep.rend(); ++it) {
    const auto i = static_cast<std::size_t>(it->row);
    emit_su2(c, qudit, levels[i], levels[i + 1], it->g.adjoint());
  }
  return c;
}

QuditCircuit synth_intra_iswap(const Encoding& enc, int qudit) {
  require_kind(enc, {EncodingKind::Ququart, EncodingKind::Ququint}, "intra-qudit iSWAP");
  require(qudit >= 0, "negative qudit index");
  const auto levels = enc.qubit_states();
  QuditCircuit c(qudit + 1, enc.dimension());
  c.rx(qudit, levels[1], levels[2], -kPi);
  return c;
}

namespace {

// Signed transpositions that bring each wanted level onto the given position.
QuditCircuit arrange(const Encoding& enc, int qudit,
                     const std::vector<std::pair<RotState, RotState>>& content_at) {
  auto levels = enc.qubit_states();
  std::vector<RotState> holder = levels;  // holder[i]: logical level sitting on levels[i]
  QuditCircuit c(qudit + 1, enc.dimension());
  for (const auto& [content, position] : content_at) {
    const auto pos = static_cast<std::size_t>(std::find(levels.begin(), levels.end(), position) - levels.begin());
    if (holder[pos] == content) continue;
    const auto from = static_cast<std::size_t>(std::find(holder.begin(), holder.end(), content) - holder.begin());
    c.ry(qudit, levels[pos], levels[from], kPi);
    std::swap(holder[pos], holder[from]);
  }
  return c;
}

std::pair<RotState, RotState> set_levels(const Encoding& enc, int slot) {
  const auto lv = enc.qubit_states();
  return slot == 0 ? std::pair{lv[2], lv[3]} : std::pair{lv[1], lv[3]};
}

Eigen::Matrix4cd slot_hadamard(int slot) {
  const double r = std::sqrt(0.5);
  Eigen::Matrix2cd h;
  h << r, r, r, -r;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix4cd out;
  const Eigen::Matrix2cd& hi = slot == 0 ? h : id;
  const Eigen::Matrix2cd& lo = slot == 0 ? id : h;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = hi(i, j) * lo;
  return out;
}

}  // namespace

QuditCircuit synth_inter_qudit_cnot(const Encoding& enc, int a, int control_slot, int b,
                                    int target_slot) {
  require_kind(enc, {EncodingKind::Ququart, EncodingKind::Ququint}, "inter-qudit CNOT");
  require_distinct(a, b);
  require(control_slot >= 0 && control_slot < 2 && target_slot >= 0 && target_slot < 2,
          "qubit slots must be 0 or 1");

  const auto [alpha, beta] = set_levels(enc, control_slot);
  const auto [gamma, delta] = set_levels(enc, target_slot);
  const QuditCircuit pa = arrange(enc, a, {{alpha, kE}, {beta, kG}});
  const QuditCircuit pb1 = arrange(enc, b, {{gamma, kG}, {delta, kE}});
  const QuditCircuit pb2 = arrange(enc, b, {{gamma, kE}, {delta, kG}});
  const QuditCircuit h = synth_intra_qudit_gate(enc, b, slot_hadamard(target_slot));

  // U^2 flips the sign of |(1,0),(0,0)> and |(0,0),(1,0)>; the two passes cover
  // the four combinations of the control's and target's set levels.
  QuditCircuit c(width({a, b}), enc.dimension());
  c.append(h);
  c.append(pa).append(pb1).entangle(a, b, 2).append(pb1.inverse());
  c.append(pb2).entangle(a, b, 2).append(pb2.inverse()).append(pa.inverse());
  c.append(h);
  return c;
}

QuditCircuit synth_c3z_ququint(const Encoding& enc, int a, int b) {
  require_kind(enc, {EncodingKind::Ququint}, "C3Z");
  require_distinct(a, b);
  const auto lv = enc.qubit_states();  // 00, 01, 10, 11
  const RotState anc = enc.ancilla();
  QuditCircuit pre(width({a, b}), enc.dimension());
  pre.ry(a, lv[1], anc, -kPi).ry(a, lv[0], lv[3], -kPi);
  pre.ry(b, lv[1], anc, -kPi).ry(b, lv[1], lv[3], -kPi);
  QuditCircuit c = pre;
  c.entangle(a, b, 2);
  c.append(pre.inverse());
  return c;
}

std::string to_text(const QuditCircuit& circuit, const std::map<std::string, std::string>& header) {
  std::string out;
  for (const auto& [k, v] : header) out += fmt::format("# {}={}\n", k, v);
  for (const auto& op : circuit.ops) {
    if (const auto* r = std::get_if<Rotation>(&op)) {
      out += fmt::format("{} {} {} {} {:.17g}\n", r->axis == Axis::X ? "RX" : "RY", r->qudit,
                         r->a.label(), r->b.label(), r->angle);
    } else {
      const auto& e = std::get<Entangler>(op);
      out += fmt::format("U {} {} {}\n", e.a, e.b, e.power);
    }
  }
  return out;
}

namespace {

RotState parse_level(const std::string& token, int line_no) {
  const auto comma = token.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    std::size_t used = 0;
    const int j = std::stoi(token.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("J");
    const std::string rest = token.substr(comma + 1);
    const int m = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("M");
    return {j, m};
  } catch (const std::exception&) {
    throw SynthesisError(fmt::format("line {}: bad level '{}', expected J,M", line_no, token));
  }
}

}  // namespace

ParsedSequence parse_text(const std::string& text) {
  ParsedSequence out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int max_index = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream fields(line.substr(first + 1));
      std::string field;
      while (fields >> field) {
        const auto eq = field.find('=');
        if (eq != std::string::npos) out.header[field.substr(0, eq)] = field.substr(eq + 1);
      }
      continue;
    }
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    if (kind == "RX" || kind == "RY") {
      int q = 0;
      std::string a;
      std::string b;
      std::string angle;
      if (!(fields >> q >> a >> b >> angle))
        throw SynthesisError(fmt::format("line {}: expected '{} <qudit> <J,M> <J,M> <angle>'", line_no, kind));
      double theta = 0.0;
      try {
        std::size_t used = 0;
        theta = std::stod(angle, &used);
        if (used != angle.size()) throw std::invalid_argument("angle");
      } catch (const std::exception&) {
        throw SynthesisError(fmt::format("line {}: bad angle '{}'", line_no, angle));
      }
      out.circuit.ops.emplace_back(
          Rotation{kind == "RX" ? Axis::X : Axis::Y, q, parse_level(a, line_no), parse_level(b, line_no), theta});
      max_index = std::max(max_index, q);
    } else if (kind == "U") {
      int a = 0;
      int b = 0;
      int p = 0;
      if (!(fields >> a >> b >> p))
        throw SynthesisError(fmt::format("line {}: expected 'U <a> <b> <power>'", line_no));
      out.circuit.ops.emplace_back(Entangler{a, b, p});
      max_index = std::max({max_index, a, b});
    } else {
      throw SynthesisError(fmt::format("line {}: unknown op '{}'", line_no, kind));
    }
    std::string extra;
    if (fields >> extra) throw SynthesisError(fmt::format("line {}: trailing token '{}'", line_no, extra));
  }
  int n = max_index + 1;
  if (auto it = out.header.find("qudits"); it != out.header.end()) {
    try {
      n = std::max(n, std::stoi(it->second));
    } catch (const std::exception&) {
      throw SynthesisError(fmt::format("bad qudits header '{}'", it->second));
    }
  }
  out.circuit.num_qudits = std::max(n, 1);
  if (auto it = out.header.find("encoding"); it != out.header.end())
    out.circuit.dimension = Encoding::by_name(it->second).dimension();
  out.circuit.validate();
  return out;
}

}  // namespace molqudit
