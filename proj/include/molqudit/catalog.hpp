#pragma once

#include <map>
#include <string>
#include <vector>

#include "molqudit/circuitsim.hpp"

namespace molqudit {

/// A named gate request as the CLI and sequence headers describe it.
struct GateRequest {
  std::string gate = "identity";
  std::string encoding = "qubit";
  int qudits = 0;  // 0 picks the gate's natural register size
  Coupling layout = Coupling::BinaryTree;
  int slot = 0;         // z target slot, inter-cnot control slot
  int target_slot = 1;  // inter-cnot target slot
  PhaseBranch physical_branch = PhaseBranch::PlusI;

  /// Header fields that let parse_text + request_from_header rebuild this.
  std::map<std::string, std::string> header() const;
};

struct CompiledGate {
  QuditCircuit circuit;
  LogicalReference reference;
};

/// identity, z, iswap, cnot, p, iswap-0anc, w, cnz, toffoli, intra-iswap,
/// inter-cnot, c3z-ququint.
const std::vector<std::string>& gate_names();

/// Register size used when GateRequest::qudits is 0.
int natural_qudits(const GateRequest& request);

/// Throws SynthesisError / EncodingError / ConfigError for unsupported requests.
CompiledGate compile_gate(const GateRequest& request);
LogicalReference reference_for(const GateRequest& request);

/// Fills a request from `# key=value` header fields; `gate` overrides the header.
GateRequest request_from_header(const std::map<std::string, std::string>& header,
                                const std::string& gate = "");

}  // namespace molqudit
