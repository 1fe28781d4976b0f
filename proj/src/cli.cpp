#include "molqudit/cli.hpp"

#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "molqudit/catalog.hpp"
#include "molqudit/io.hpp"
#include "molqudit/optimize.hpp"

namespace molqudit::cli {

namespace {

struct RunConfig {
  MoleculeSpec molecule = presets::srf();
  TrapSpec trap;
  ProfileKind kind = ProfileKind::Cosine;
  std::optional<double> tau_us;
  std::optional<double> alpha_um;
  std::optional<double> beta_um;
  PropagateOptions solver;
  double tau_min_us = 0.0;
  double tau_max_us = 0.0;
  double constraint_factor = 5.0;
  double coherence_time_us = 0.0;
  std::string output;
  std::string history;

  TrajectoryProfile profile() const {
    if (!tau_us) throw ConfigError("no tau given: set profile.tau_us or --tau");
    TrajectoryProfile p = TrajectoryProfile::from_trap(kind, trap, *tau_us);
    if (alpha_um) p.alpha_um = *alpha_um;
    if (beta_um) p.beta_um = *beta_um;
    p.validate();
    return p;
  }
};

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; }) ==
        allowed.end())
      throw ConfigError(fmt::format("unknown key '{}' in {}", it.key(), where));
  }
}

MoleculeSpec molecule_from(const nlohmann::json& j) {
  if (j.is_string()) return presets::by_name(j.get<std::string>());
  if (!j.is_object()) throw ConfigError("molecule must be a preset name or an object");
  MoleculeSpec spec = j.get<MoleculeSpec>();
  spec.validate();
  return spec;
}

void apply_profile_json(const nlohmann::json& j, RunConfig& cfg) {
  if (!j.is_object()) throw ConfigError("profile must be an object");
  check_keys(j, {"kind", "tau_us", "alpha_um", "beta_um"}, "profile");
  try {
    if (j.contains("kind")) cfg.kind = profile_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("tau_us")) cfg.tau_us = j.at("tau_us").get<double>();
    if (j.contains("alpha_um")) cfg.alpha_um = j.at("alpha_um").get<double>();
    if (j.contains("beta_um")) cfg.beta_um = j.at("beta_um").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("malformed profile: {}", e.what()));
  }
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("config '{}' is not valid JSON: {}", path, e.what()));
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(j,
             {"molecule", "trap", "profile", "solver", "optimize", "output", "history",
              "coherence_time_us"},
             "config");
  try {
    if (j.contains("molecule")) cfg.molecule = molecule_from(j["molecule"]);
    if (j.contains("trap")) {
      check_keys(j["trap"], {"depth_kelvin", "initial_separation_um", "min_separation_um"}, "trap");
      cfg.trap = j["trap"].get<TrapSpec>();
    }
    if (j.contains("profile")) apply_profile_json(j["profile"], cfg);
    if (j.contains("solver")) {
      const auto& s = j["solver"];
      check_keys(s, {"mode", "j_max", "step_tolerance", "initial_step_us", "unitarity_tolerance"}, "solver");
      if (s.contains("mode")) cfg.solver.mode = solver_mode_from_string(s["mode"].get<std::string>());
      if (s.contains("j_max")) cfg.solver.j_max = s["j_max"].get<int>();
      if (s.contains("step_tolerance")) cfg.solver.step_tolerance = s["step_tolerance"].get<double>();
      if (s.contains("initial_step_us")) cfg.solver.initial_step_us = s["initial_step_us"].get<double>();
      if (s.contains("unitarity_tolerance"))
        cfg.solver.unitarity_tolerance = s["unitarity_tolerance"].get<double>();
    }
    if (j.contains("optimize")) {
      const auto& o = j["optimize"];
      check_keys(o, {"tau_min_us", "tau_max_us", "constraint_factor"}, "optimize");
      cfg.tau_min_us = o.value("tau_min_us", cfg.tau_min_us);
      cfg.tau_max_us = o.value("tau_max_us", cfg.tau_max_us);
      cfg.constraint_factor = o.value("constraint_factor", cfg.constraint_factor);
    }
    cfg.output = j.value("output", cfg.output);
    cfg.history = j.value("history", cfg.history);
    cfg.coherence_time_us = j.value("coherence_time_us", cfg.coherence_time_us);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("malformed config '{}': {}", path, e.what()));
  }
  cfg.trap.validate();
  return cfg;
}

/// Flags shared by the physics subcommands; unset ones leave the config alone.
struct PhysicsFlags {
  std::string config;
  std::optional<std::string> molecule;
  std::optional<std::string> molecule_file;
  std::optional<std::string> kind;
  std::optional<std::string> profile_file;
  std::optional<double> tau;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> depth_kelvin;
  std::optional<double> initial_separation;
  std::optional<double> min_separation;
  std::optional<std::string> mode;
  std::optional<int> j_max;
  std::optional<double> step_tolerance;
  std::optional<std::string> output;

  void attach(CLI::App* app, bool with_profile) {
    app->add_option("-c,--config", config, "JSON run configuration");
    app->add_option("-m,--molecule", molecule, "Preset name (SrF, RbCs)");
    app->add_option("--molecule-file", molecule_file, "JSON molecule spec");
    app->add_option("--depth-kelvin", depth_kelvin, "Trap depth in K");
    app->add_option("--initial-separation", initial_separation, "alpha + beta in um");
    app->add_option("--min-separation", min_separation, "beta - alpha in um");
    app->add_option("-o,--output", output, "Output file");
    if (with_profile) {
      app->add_option("-k,--kind", kind, "cosine | triangular | tanh | constant");
      app->add_option("--profile-file", profile_file, "JSON profile {kind, alpha_um, beta_um, tau_us}");
      app->add_option("--tau", tau, "Gate duration in us");
      app->add_option("--alpha", alpha, "alpha in um");
      app->add_option("--beta", beta, "beta in um");
      app->add_option("--mode", mode, "secular | full");
      app->add_option("--j-max", j_max, "Rotational truncation");
      app->add_option("--step-tolerance", step_tolerance, "Integrator error bound per step");
    }
  }

  RunConfig resolve() const {
    RunConfig cfg = load_config(config);
    if (molecule_file) cfg.molecule = molecule_from(nlohmann::json::parse(read_file(*molecule_file)));
    if (molecule) cfg.molecule = presets::by_name(*molecule);
    if (depth_kelvin) cfg.trap.depth_kelvin = *depth_kelvin;
    if (initial_separation) cfg.trap.initial_separation_um = *initial_separation;
    if (min_separation) cfg.trap.min_separation_um = *min_separation;
    cfg.trap.validate();
    if (profile_file) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(read_file(*profile_file));
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(fmt::format("profile file '{}' is not valid JSON: {}", *profile_file, e.what()));
      }
      apply_profile_json(j, cfg);
    }
    if (kind) cfg.kind = profile_kind_from_string(*kind);
    if (tau) cfg.tau_us = *tau;
    if (alpha) cfg.alpha_um = *alpha;
    if (beta) cfg.beta_um = *beta;
    if (mode) cfg.solver.mode = solver_mode_from_string(*mode);
    if (j_max) cfg.solver.j_max = *j_max;
    if (step_tolerance) cfg.solver.step_tolerance = *step_tolerance;
    if (output) cfg.output = *output;
    return cfg;
  }
};

nlohmann::ordered_json molecule_json(const MoleculeSpec& m) {
  return nlohmann::ordered_json{{"name", m.name},
                                {"dipole_moment_debye", m.dipole_moment_debye},
                                {"rotational_constant_invcm", m.rotational_constant_invcm},
                                {"mass_amu", m.mass_amu}};
}

nlohmann::ordered_json profile_json(const TrajectoryProfile& p) {
  return nlohmann::ordered_json{{"kind", to_string(p.kind)},
                                {"alpha_um", p.alpha_um},
                                {"beta_um", p.beta_um},
                                {"tau_us", p.tau_us}};
}

int cmd_spectrum(const PhysicsFlags& flags, int j_max, const std::string& ddi_csv, std::ostream& out) {
  const RunConfig cfg = flags.resolve();
  cfg.molecule.validate();
  if (j_max < 0) throw ConfigError("j_max must be non-negative");
  std::string csv = "J,energy_invcm,energy_rad_s\n";
  for (int j = 0; j <= j_max; ++j)
    csv += fmt::format("{},{:.17g},{:.17g}\n", j,
                       cfg.molecule.rotational_constant_invcm * j * (j + 1), rot_energy(cfg.molecule, j));
  out << csv;
  if (!cfg.output.empty()) write_file(cfg.output, csv);
  if (!ddi_csv.empty()) {
    std::ostringstream ss;
    build_ddi_matrix(std::max(j_max, 1)).write_csv(ss);
    write_file(ddi_csv, ss.str());
  }
  return kExitOk;
}

int cmd_evolve(const PhysicsFlags& flags, std::optional<double> coherence, std::ostream& out) {
  RunConfig cfg = flags.resolve();
  cfg.molecule.validate();
  if (coherence) cfg.coherence_time_us = *coherence;
  const TrajectoryProfile profile = cfg.profile();
  const EvolutionResult r = propagate(cfg.molecule, profile, cfg.solver);

  out << fmt::format("F_iSWAP = {:.12f} (phase branch {})\n", r.f_iswap, to_string(r.phase_branch));
  out << fmt::format("F_id = {:.12f}\n", r.f_id);
  out << fmt::format("unitarity defect = {:.3e}\n", r.unitarity_defect);
  out << fmt::format("gate duration = {:.6g} us\n", r.duration_us);
  if (cfg.coherence_time_us > 0.0)
    out << fmt::format("coherence bound = {:.6g} us ({})\n", cfg.coherence_time_us,
                       r.duration_us < cfg.coherence_time_us ? "within" : "exceeded");

  if (!cfg.output.empty()) {
    nlohmann::ordered_json doc;
    doc["molecule"] = molecule_json(cfg.molecule);
    doc["profile"] = profile_json(profile);
    doc["secular_pulse_area"] = secular_pulse_area(cfg.molecule, profile);
    if (cfg.coherence_time_us > 0.0) doc["coherence_time_us"] = cfg.coherence_time_us;
    doc["result"] = to_json(r);
    write_file(cfg.output, dump_json(doc));
  }
  return kExitOk;
}

int cmd_optimize(const PhysicsFlags& flags, std::optional<double> tau_min, std::optional<double> tau_max,
                 std::optional<double> constraint, std::optional<std::string> history, std::ostream& out,
                 std::ostream& err) {
  RunConfig cfg = flags.resolve();
  if (tau_min) cfg.tau_min_us = *tau_min;
  if (tau_max) cfg.tau_max_us = *tau_max;
  if (constraint) cfg.constraint_factor = *constraint;
  if (history) cfg.history = *history;

  OptimizationProblem problem;
  problem.spec = cfg.molecule;
  problem.trap = cfg.trap;
  problem.kind = cfg.kind;
  problem.tau_bounds = {cfg.tau_min_us, cfg.tau_max_us};
  problem.constraint_factor = cfg.constraint_factor;
  problem.propagate = cfg.solver;
  problem.validate();
  if (problem.kind == ProfileKind::Constant) throw ConfigError("the constant profile has nothing to optimise");

  OptimizationReport report;
  std::string failure;
  try {
    report = optimize_tau(problem);
    if (report.seed_tau == 0.0) failure = "no pi/2 pulse-area solution inside the tau bounds";
  } catch (const OptimizationError& e) {
    report = e.report();
    failure = e.what();
  }

  nlohmann::ordered_json doc;
  doc["status"] = failure.empty() ? "ok" : "failed";
  if (!failure.empty()) doc["reason"] = failure;
  doc["molecule"] = molecule_json(cfg.molecule);
  doc["kind"] = to_string(cfg.kind);
  const auto [lo, hi] = problem.effective_bounds();
  doc["tau_bounds_us"] = nlohmann::ordered_json::array({lo, hi});
  doc["report"] = to_json(report);
  if (!cfg.output.empty()) write_file(cfg.output, dump_json(doc));
  if (!cfg.history.empty()) {
    std::ostringstream ss;
    write_history_csv(report, ss);
    write_file(cfg.history, ss.str());
  }

  out << fmt::format("best tau = {:.6f} us, F_iSWAP = {:.12f} (phase branch {}), {} evaluations\n",
                     report.best_tau, report.best_fidelity, to_string(report.phase_branch), report.evaluations);
  if (!failure.empty()) {
    err << "optimize failed: " << failure << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

struct GateFlags {
  std::optional<std::string> encoding;
  std::string gate;
  int n = 0;
  std::string layout = "tree";
  int slot = 0;
  int target_slot = 1;
  std::string branch = "plus-i";
  std::string output = "-";
};

std::string default_encoding(const std::string& gate) {
  if (gate == "cnz" || gate == "toffoli" || gate == "p" || gate == "iswap-0anc" || gate == "w") return "qutrit-anc";
  if (gate == "intra-iswap" || gate == "inter-cnot") return "ququart";
  if (gate == "c3z-ququint") return "ququint";
  return "qubit";
}

int cmd_compile(const GateFlags& f, std::ostream& out, std::ostream& err) {
  GateRequest r;
  r.gate = f.gate;
  r.encoding = f.encoding.value_or(default_encoding(f.gate));
  r.qudits = f.n;
  r.layout = coupling_from_string(f.layout);
  r.slot = f.slot;
  r.target_slot = f.target_slot;
  r.physical_branch = phase_branch_from_string(f.branch);
  Encoding::by_name(r.encoding);
  natural_qudits(r);
  const CompiledGate g = compile_gate(r);
  const std::string text = to_text(g.circuit, r.header());
  if (f.output == "-") {
    out << text;
  } else {
    write_file(f.output, text);
    err << fmt::format("wrote {} ops ({} entanglers, entangler depth {}) to {}\n", g.circuit.ops.size(),
                       g.circuit.entangler_count(), g.circuit.entangler_depth(), f.output);
  }
  return kExitOk;
}

struct VerifyFlags {
  std::string file;
  std::optional<std::string> gate;
  std::optional<std::string> encoding;
  std::optional<int> qudits;
  std::optional<std::string> layout;
  std::optional<std::string> branch;
  double tolerance = 1e-10;
  std::string output;
};

int cmd_verify(const VerifyFlags& f, std::ostream& out) {
  const ParsedSequence seq = parse_text(read_file(f.file));
  GateRequest r = request_from_header(seq.header, f.gate.value_or(""));
  if (f.encoding) r.encoding = *f.encoding;
  if (f.qudits) r.qudits = *f.qudits;
  if (f.layout) r.layout = coupling_from_string(*f.layout);
  if (f.branch) r.physical_branch = phase_branch_from_string(*f.branch);
  if (r.qudits == 0) r.qudits = std::max(natural_qudits(r), seq.circuit.num_qudits);
  const LogicalReference ref = reference_for(r);
  if (seq.circuit.num_qudits > static_cast<int>(ref.inputs.size()))
    throw ConfigError(fmt::format("sequence touches {} qudits but gate '{}' has {}", seq.circuit.num_qudits,
                                  r.gate, ref.inputs.size()));
  const VerificationReport rep = verify(seq.circuit, ref, r.physical_branch, f.tolerance);

  out << fmt::format("{} gate={} encoding={} fidelity={:.15f} max_error={:.3e} leakage={:.3e}\n",
                     rep.passed ? "PASS" : "FAIL", r.gate, r.encoding, rep.fidelity, rep.max_error, rep.leakage);
  if (!f.output.empty()) {
    nlohmann::ordered_json doc;
    doc["gate"] = r.gate;
    doc["encoding"] = r.encoding;
    doc["qudits"] = ref.inputs.size();
    doc["branch"] = to_string(r.physical_branch);
    doc["passed"] = rep.passed;
    doc["fidelity"] = rep.fidelity;
    doc["max_error"] = rep.max_error;
    doc["leakage"] = rep.leakage;
    doc["entanglers"] = seq.circuit.entangler_count();
    write_file(f.output, dump_json(doc));
  }
  return rep.passed ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Molecular qudit gate simulation and compilation", "molqudit"};
  app.require_subcommand(1);

  PhysicsFlags spectrum_flags;
  int spectrum_jmax = 4;
  std::string ddi_csv;
  auto* spectrum = app.add_subcommand("spectrum", "Rotational energies E(J) for J <= J_max");
  spectrum_flags.attach(spectrum, false);
  spectrum->add_option("--j-max", spectrum_jmax, "Highest J");
  spectrum->add_option("--ddi-csv", ddi_csv, "Also dump the nonzero interaction geometry factors");

  PhysicsFlags evolve_flags;
  std::optional<double> coherence;
  auto* evolve = app.add_subcommand("evolve", "Propagate a molecule pair along one trajectory");
  evolve_flags.attach(evolve, true);
  evolve->add_option("--coherence-time-us", coherence, "Report the gate time against this bound");

  PhysicsFlags optimize_flags;
  std::optional<double> tau_min;
  std::optional<double> tau_max;
  std::optional<double> constraint;
  std::optional<std::string> history;
  auto* optimize = app.add_subcommand("optimize", "Search tau maximising F_iSWAP");
  optimize_flags.attach(optimize, true);
  optimize->add_option("--tau-min", tau_min, "Lower tau bound in us");
  optimize->add_option("--tau-max", tau_max, "Upper tau bound in us");
  optimize->add_option("--constraint-factor", constraint, "Minimum tau / t0");
  optimize->add_option("--history", history, "CSV file for the evaluation history");

  GateFlags gate_flags;
  auto* compile = app.add_subcommand("compile", "Emit a native gate sequence");
  compile->add_option("-e,--encoding", gate_flags.encoding, "qubit | qutrit-anc | ququart | ququint (default depends on gate)");
  compile->add_option("-g,--gate", gate_flags.gate, "Gate name")->required();
  compile->add_option("-n,--n", gate_flags.n, "Number of qudits (cnz, toffoli)");
  compile->add_option("--layout", gate_flags.layout, "linear | tree");
  compile->add_option("--slot", gate_flags.slot, "Qubit slot (z target, inter-cnot control)");
  compile->add_option("--target-slot", gate_flags.target_slot, "Target qubit slot for inter-cnot");
  compile->add_option("--branch", gate_flags.branch, "Physical entangler phase branch (plus-i | minus-i)");
  compile->add_option("-o,--output", gate_flags.output, "Sequence file ('-' for stdout)");

  VerifyFlags verify_flags;
  auto* verify_cmd = app.add_subcommand("verify", "Check a sequence file against a named gate");
  verify_cmd->add_option("file", verify_flags.file, "Sequence file")->required();
  verify_cmd->add_option("-g,--gate", verify_flags.gate, "Expected gate (default: file header)");
  verify_cmd->add_option("-e,--encoding", verify_flags.encoding, "Encoding (default: file header)");
  verify_cmd->add_option("-n,--qudits", verify_flags.qudits, "Register size");
  verify_cmd->add_option("--layout", verify_flags.layout, "linear | tree");
  verify_cmd->add_option("--branch", verify_flags.branch, "Physical entangler phase branch");
  verify_cmd->add_option("--tolerance", verify_flags.tolerance, "Max entry error after phase alignment");
  verify_cmd->add_option("-o,--output", verify_flags.output, "JSON report");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(spectrum_flags, spectrum_jmax, ddi_csv, out);
    if (evolve->parsed()) return cmd_evolve(evolve_flags, coherence, out);
    if (optimize->parsed())
      return cmd_optimize(optimize_flags, tau_min, tau_max, constraint, history, out, err);
    if (compile->parsed()) return cmd_compile(gate_flags, out, err);
    if (verify_cmd->parsed()) return cmd_verify(verify_flags, out);
  } catch (const IntegrationError& e) {
    err << "integration failed: " << e.what() << "\n" << e.diagnostics().dump() << "\n";
    return kExitFailure;
  } catch (const OptimizationError& e) {
    err << "optimize failed: " << e.what() << "\n";
    return kExitFailure;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {  // ConfigError
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {  // encodings, synthesis, angular
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace molqudit::cli
