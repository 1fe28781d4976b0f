#include "molqudit/catalog.hpp"

#include <algorithm>
#include <complex>
#include <functional>
#include <numeric>

#include <fmt/format.h>

namespace molqudit {

using cd = std::complex<double>;

namespace {

constexpr RotState kG{0, 0};
constexpr RotState kE{1, 0};
constexpr RotState kAnc{3, 0};

const cd kI{0.0, 1.0};

Eigen::MatrixXcd permutation_matrix(std::size_t n, const std::function<std::pair<std::size_t, cd>(std::size_t)>& f) {
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t c = 0; c < n; ++c) {
    const auto [r, amp] = f(c);
    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = amp;
  }
  return m;
}

LogicalReference on_qubits(const Encoding& enc, int n, Eigen::MatrixXcd m) {
  LogicalReference ref;
  ref.inputs.assign(static_cast<std::size_t>(n), enc.qubit_states());
  ref.outputs = ref.inputs;
  ref.matrix = std::move(m);
  return ref;
}

void require_kinds(const Encoding& enc, std::initializer_list<EncodingKind> kinds, const std::string& gate) {
  if (std::find(kinds.begin(), kinds.end(), enc.kind()) == kinds.end())
    throw SynthesisError(fmt::format("gate '{}' is not available for the '{}' encoding", gate, enc.name()));
}

void require_qudits(int n, int expected, const std::string& gate) {
  if (n != expected) throw SynthesisError(fmt::format("gate '{}' acts on {} qudits, got {}", gate, expected, n));
}

std::vector<int> range(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

std::map<std::string, std::string> GateRequest::header() const {
  std::map<std::string, std::string> h{{"gate", gate},
                                       {"encoding", encoding},
                                       {"qudits", std::to_string(qudits > 0 ? qudits : natural_qudits(*this))},
                                       {"branch", to_string(physical_branch)}};
  if (gate == "cnz" || gate == "toffoli") h["layout"] = to_string(layout);
  if (gate == "z" || gate == "inter-cnot") h["slot"] = std::to_string(slot);
  if (gate == "inter-cnot") h["target_slot"] = std::to_string(target_slot);
  return h;
}

const std::vector<std::string>& gate_names() {
  static const std::vector<std::string> names{"identity", "z",       "iswap",       "cnot",
                                              "p",        "iswap-0anc", "w",        "cnz",
                                              "toffoli",  "intra-iswap", "inter-cnot", "c3z-ququint"};
  return names;
}

int natural_qudits(const GateRequest& r) {
  if (r.gate == "identity" || r.gate == "z" || r.gate == "p" || r.gate == "intra-iswap") return 1;
  if (r.gate == "cnz" || r.gate == "toffoli") return 3;
  if (std::find(gate_names().begin(), gate_names().end(), r.gate) == gate_names().end())
    throw ConfigError(fmt::format("unknown gate '{}'", r.gate));
  return 2;
}

LogicalReference reference_for(const GateRequest& r) {
  const Encoding enc = Encoding::by_name(r.encoding);
  const int n = r.qudits > 0 ? r.qudits : natural_qudits(r);
  const int k = enc.qubits_per_qudit();
  const std::size_t dim = std::size_t{1} << (k * n);
  const std::string& g = r.gate;

  if (g == "identity") return on_qubits(enc, n, Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));

  if (g == "z") {
    require_qudits(n, 1, g);
    return on_qubits(enc, 1, permutation_matrix(dim, [&](std::size_t c) {
                       const bool set = (c >> (k - 1 - r.slot)) & 1U;
                       return std::pair{c, cd(set ? -1.0 : 1.0)};
                     }));
  }
  if (g == "iswap" || g == "cnot") {
    require_kinds(enc, {EncodingKind::Qubit, EncodingKind::QutritAnc}, g);
    require_qudits(n, 2, g);
    if (g == "iswap")
      return on_qubits(enc, 2, permutation_matrix(4, [](std::size_t c) {
                         if (c == 1 || c == 2) return std::pair{3 - c, kI};
                         return std::pair{c, cd(1.0)};
                       }));
    return on_qubits(enc, 2, permutation_matrix(4, [](std::size_t c) {
                       return std::pair{(c & 2U) ? (c ^ 1U) : c, cd(1.0)};
                     }));
  }
  if (g == "p" || g == "iswap-0anc" || g == "w") {
    require_kinds(enc, {EncodingKind::QutritAnc, EncodingKind::Ququint}, g);
    const std::vector<RotState> three{kG, kE, kAnc};
    LogicalReference ref;
    if (g == "p") {
      require_qudits(n, 1, g);
      ref.inputs = ref.outputs = {three};
      ref.matrix = permutation_matrix(3, [](std::size_t c) { return std::pair{(c + 1) % 3, cd(1.0)}; });
      return ref;
    }
    require_qudits(n, 2, g);
    ref.outputs = {three, three};
    if (g == "iswap-0anc") {
      ref.inputs = ref.outputs;
      // index = 3 * a + b with 0, 1, anc -> 0, 1, 2
      ref.matrix = permutation_matrix(9, [](std::size_t c) {
        if (c == 4) return std::pair<std::size_t, cd>{2, kI};
        if (c == 2) return std::pair<std::size_t, cd>{4, kI};
        return std::pair<std::size_t, cd>{c, 1.0};
      });
      return ref;
    }
    ref.inputs = {{kG, kE}, {kG, kE}};
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(9, 4);
    m(3, 0) = 1.0;  // |00> -> |10>
    m(2, 1) = kI;   // |01> -> i|0 anc>
    m(0, 2) = 1.0;  // |10> -> |00>
    m(1, 3) = 1.0;  // |11> -> |01>
    ref.matrix = m;
    return ref;
  }
  if (g == "cnz" || g == "toffoli") {
    require_kinds(enc, {EncodingKind::QutritAnc}, g);
    if (n < 2) throw SynthesisError(fmt::format("gate '{}' needs at least two qudits", g));
    const std::size_t all = dim - 1;
    if (g == "cnz")
      return on_qubits(enc, n, permutation_matrix(dim, [&](std::size_t c) {
                         return std::pair{c, cd(c == all ? -1.0 : 1.0)};
                       }));
    return on_qubits(enc, n, permutation_matrix(dim, [&](std::size_t c) {
                       return std::pair{(c | 1U) == all ? (c ^ 1U) : c, cd(1.0)};
                     }));
  }
  if (g == "intra-iswap") {
    require_kinds(enc, {EncodingKind::Ququart, EncodingKind::Ququint}, g);
    require_qudits(n, 1, g);
    return on_qubits(enc, 1, permutation_matrix(4, [](std::size_t c) {
                       if (c == 1 || c == 2) return std::pair{3 - c, kI};
                       return std::pair{c, cd(1.0)};
                     }));
  }
  if (g == "inter-cnot") {
    require_kinds(enc, {EncodingKind::Ququart, EncodingKind::Ququint}, g);
    require_qudits(n, 2, g);
    if (r.slot < 0 || r.slot > 1 || r.target_slot < 0 || r.target_slot > 1)
      throw SynthesisError("qubit slots must be 0 or 1");
    // Bits, most significant first: qudit 0 slot 0, qudit 0 slot 1, qudit 1 slot 0, qudit 1 slot 1.
    const std::size_t cbit = std::size_t{1} << (3 - r.slot);
    const std::size_t tbit = std::size_t{1} << (1 - r.target_slot);
    return on_qubits(enc, 2, permutation_matrix(16, [&](std::size_t c) {
                       return std::pair{(c & cbit) ? (c ^ tbit) : c, cd(1.0)};
                     }));
  }
  if (g == "c3z-ququint") {
    require_kinds(enc, {EncodingKind::Ququint}, g);
    require_qudits(n, 2, g);
    return on_qubits(enc, 2, permutation_matrix(16, [](std::size_t c) {
                       return std::pair{c, cd(c == 15 ? -1.0 : 1.0)};
                     }));
  }
  throw ConfigError(fmt::format("unknown gate '{}'", g));
}

CompiledGate compile_gate(const GateRequest& r) {
  const Encoding enc = Encoding::by_name(r.encoding);
  const int n = r.qudits > 0 ? r.qudits : natural_qudits(r);
  const SynthOptions opts{r.physical_branch};
  CompiledGate out;
  out.reference = reference_for(r);
  const std::string& g = r.gate;
  QuditCircuit c(n, enc.dimension());
  if (g == "identity") {
  } else if (g == "z") {
    c.append(synth_z(enc, 0, r.slot));
  } else if (g == "iswap") {
    c.append(synth_iswap(enc, 0, 1, opts));
  } else if (g == "cnot") {
    c.append(synth_cnot_via_iswaps(enc, 0, 1, opts));
  } else if (g == "p") {
    c.append(synth_p(enc, 0));
  } else if (g == "iswap-0anc") {
    c.append(synth_iswap_0anc(enc, 0, 1, opts));
  } else if (g == "w") {
    c.append(synth_w(enc, 0, 1, opts));
  } else if (g == "cnz") {
    c.append(synth_cnz(enc, range(n), r.layout));
  } else if (g == "toffoli") {
    c.append(synth_toffoli(enc, range(n), r.layout));
  } else if (g == "intra-iswap") {
    c.append(synth_intra_iswap(enc, 0));
  } else if (g == "inter-cnot") {
    c.append(synth_inter_qudit_cnot(enc, 0, r.slot, 1, r.target_slot));
  } else if (g == "c3z-ququint") {
    c.append(synth_c3z_ququint(enc, 0, 1));
  } else {
    throw ConfigError(fmt::format("unknown gate '{}'", g));
  }
  c.num_qudits = n;
  c.validate();
  out.circuit = std::move(c);
  return out;
}

GateRequest request_from_header(const std::map<std::string, std::string>& header, const std::string& gate) {
  GateRequest r;
  auto get = [&](const char* key) -> const std::string* {
    const auto it = header.find(key);
    return it == header.end() ? nullptr : &it->second;
  };
  auto to_int = [](const std::string& s, const char* key) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("header field {}='{}' is not an integer", key, s));
    }
  };
  if (const auto* v = get("gate")) r.gate = *v;
  if (!gate.empty()) r.gate = gate;
  if (const auto* v = get("encoding")) r.encoding = *v;
  if (const auto* v = get("qudits")) r.qudits = to_int(*v, "qudits");
  if (const auto* v = get("layout")) r.layout = coupling_from_string(*v);
  if (const auto* v = get("slot")) r.slot = to_int(*v, "slot");
  if (const auto* v = get("target_slot")) r.target_slot = to_int(*v, "target_slot");
  if (const auto* v = get("branch")) r.physical_branch = phase_branch_from_string(*v);
  return r;
}

}  // namespace molqudit
