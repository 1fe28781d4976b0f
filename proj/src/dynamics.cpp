#include "molqudit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>

#include <fmt/format.h>

namespace molqudit {

using cd = std::complex<double>;

std::string to_string(PhaseBranch branch) {
  return branch == PhaseBranch::PlusI ? "plus-i" : "minus-i";
}

PhaseBranch phase_branch_from_string(const std::string& name) {
  if (name == "plus-i" || name == "+i" || name == "plus") return PhaseBranch::PlusI;
  if (name == "minus-i" || name == "-i" || name == "minus") return PhaseBranch::MinusI;
  throw ConfigError(fmt::format("unknown phase branch '{}'", name));
}

PhaseBranch opposite(PhaseBranch branch) {
  return branch == PhaseBranch::PlusI ? PhaseBranch::MinusI : PhaseBranch::PlusI;
}

std::string to_string(SolverMode mode) { return mode == SolverMode::Secular ? "secular" : "full"; }

SolverMode solver_mode_from_string(const std::string& name) {
  if (name == "secular") return SolverMode::Secular;
  if (name == "full") return SolverMode::Full;
  throw ConfigError(fmt::format("unknown solver mode '{}'", name));
}

std::size_t ComputationalSet::index_of(const RotState& s) const {
  return static_cast<std::size_t>(std::find(states.begin(), states.end(), s) - states.begin());
}

std::vector<PairState> ComputationalSet::pair_basis() const {
  std::vector<PairState> out;
  for (const auto& a : states)
    for (const auto& b : states) out.push_back({a, b});
  return out;
}

Eigen::MatrixXcd target_gate(PhaseBranch branch, const ComputationalSet& set) {
  const auto n = static_cast<Eigen::Index>(set.size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n * n, n * n);
  const auto g = static_cast<Eigen::Index>(set.index_of({0, 0}));
  const auto e = static_cast<Eigen::Index>(set.index_of({1, 0}));
  if (g >= n || e >= n) throw std::domain_error("computational set lacks (0,0) or (1,0)");
  const cd phase = branch == PhaseBranch::PlusI ? cd(0, 1) : cd(0, -1);
  const Eigen::Index ge = g * n + e;
  const Eigen::Index eg = e * n + g;
  u(ge, ge) = 0.0;
  u(eg, eg) = 0.0;
  u(eg, ge) = phase;
  u(ge, eg) = phase;
  return u;
}

double fidelity(const Eigen::MatrixXcd& u_phys, const Eigen::MatrixXcd& u_target) {
  if (u_phys.rows() != u_target.rows() || u_phys.cols() != u_target.cols())
    throw std::invalid_argument("fidelity: shape mismatch");
  const cd tr = (u_phys * u_target.adjoint()).trace();
  // Roundoff can push a unitary match a few ulps past 1.
  return std::min(1.0, std::abs(tr) / static_cast<double>(u_phys.rows()));
}

double secular_pulse_area(const MoleculeSpec& spec, const TrajectoryProfile& profile) {
  // ddi_coefficient is per second; the integral is in us/um^3.
  return (2.0 / 3.0) * ddi_coefficient(spec) * 1e-6 * inverse_cube_integral(profile);
}

namespace {

struct Coupling {
  std::size_t row;
  std::size_t col;
  double g;
  bool resonant;
};

/// Interaction-picture right-hand side on an n x k block of amplitudes.
class System {
 public:
  System(std::vector<Coupling> couplings, std::vector<double> energies, std::size_t k,
         const MoleculeSpec& spec, const TrajectoryProfile& profile, bool full)
      : couplings_(std::move(couplings)),
        energies_(std::move(energies)),
        k_(k),
        coef_(ddi_coefficient(spec) * 1e-6),
        profile_(profile),
        full_(full),
        phases_(energies_.size()) {}

  std::size_t size() const { return energies_.size() * k_; }

  void eval(double t, const std::vector<cd>& y, std::vector<cd>& dy) {
    const double r = separation(profile_, t);
    const double s = coef_ / (r * r * r);
    if (full_)
      for (std::size_t q = 0; q < energies_.size(); ++q) phases_[q] = std::polar(1.0, energies_[q] * t);
    std::fill(dy.begin(), dy.end(), cd(0.0));
    for (const auto& c : couplings_) {
      cd w(0.0, -s * c.g);
      if (full_ && !c.resonant) w *= phases_[c.row] * std::conj(phases_[c.col]);
      const cd* src = y.data() + c.col * k_;
      cd* dst = dy.data() + c.row * k_;
      for (std::size_t j = 0; j < k_; ++j) dst[j] += w * src[j];
    }
  }

 private:
  std::vector<Coupling> couplings_;
  std::vector<double> energies_;
  std::size_t k_;
  double coef_;
  TrajectoryProfile profile_;
  bool full_;
  std::vector<cd> phases_;
};

struct Rk4 {
  explicit Rk4(std::size_t n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}

  /// One classical step; `first` is f(t, y) when already known.
  void step(System& sys, double t, double h, const std::vector<cd>& y, const std::vector<cd>& first,
            std::vector<cd>& out) {
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * first[i];
    sys.eval(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    sys.eval(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    sys.eval(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = y[i] + h / 6.0 * (first[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  std::vector<cd> k1, k2, k3, k4, tmp;
};

struct Integration {
  std::vector<PairState> comp_pairs;
  std::vector<std::size_t> comp_full;     // index into the full basis
  std::vector<std::size_t> comp_present;  // index into comp_pairs
  std::vector<std::size_t> local;         // full basis -> integrated subspace
  std::size_t members = 0;
  Eigen::MatrixXcd cols;  // integrated subspace x initial columns
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

/// `initial` holds columns over the computational pairs; nullptr means one unit
/// column per pair present in the truncation.
Integration integrate(const MoleculeSpec& spec, const TrajectoryProfile& profile,
                      const PropagateOptions& options, const Eigen::MatrixXcd* initial) {
  profile.validate();
  if (options.j_max < 1) throw ConfigError("j_max must be at least 1");
  const bool full = options.mode == SolverMode::Full;

  const DdiMatrix ddi = build_ddi_matrix(options.j_max);
  const auto& basis = ddi.basis();

  std::vector<double> energy(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    energy[i] = (rot_energy(spec, basis[i].first.j) + rot_energy(spec, basis[i].second.j)) * 1e-6;
  const double e_scale = *std::max_element(energy.begin(), energy.end());

  auto resonant = [&](std::size_t r, std::size_t c) {
    return std::abs(energy[r] - energy[c]) <= options.degeneracy_tolerance * e_scale;
  };

  // Computational pairs present in this truncation, in operator order.
  Integration out;
  out.comp_pairs = options.computational_set.pair_basis();
  const auto& comp_pairs = out.comp_pairs;
  auto& comp_full = out.comp_full;
  auto& comp_present = out.comp_present;
  for (std::size_t i = 0; i < comp_pairs.size(); ++i) {
    if (auto idx = ddi.index_of(comp_pairs[i])) {
      comp_full.push_back(*idx);
      comp_present.push_back(i);
    }
  }
  if (comp_full.empty()) throw ConfigError("no computational pair state fits inside j_max");

  // Restrict to the subspace reachable from the initial columns.
  std::vector<std::vector<std::size_t>> adjacency(basis.size());
  for (const auto& e : ddi.entries())
    if (!full ? resonant(e.row, e.col) : true) adjacency[e.row].push_back(e.col);
  auto& local = out.local;
  local.assign(basis.size(), basis.size());
  std::vector<std::size_t> members;
  std::deque<std::size_t> queue(comp_full.begin(), comp_full.end());
  for (auto i : comp_full) local[i] = 0;
  while (!queue.empty()) {
    const auto i = queue.front();
    queue.pop_front();
    members.push_back(i);
    for (auto j : adjacency[i]) {
      if (local[j] == basis.size()) {
        local[j] = 0;
        queue.push_back(j);
      }
    }
  }
  std::sort(members.begin(), members.end());
  for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = i;

  std::vector<Coupling> couplings;
  double max_omega = 0.0;
  for (const auto& e : ddi.entries()) {
    if (local[e.row] >= members.size() || local[e.col] >= members.size()) continue;
    const bool res = resonant(e.row, e.col);
    if (!full && !res) continue;
    couplings.push_back({local[e.row], local[e.col], e.value, res});
    if (!res) max_omega = std::max(max_omega, std::abs(energy[e.row] - energy[e.col]));
  }
  std::vector<double> local_energy(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) local_energy[i] = energy[members[i]];

  const std::size_t k = initial ? static_cast<std::size_t>(initial->cols()) : comp_full.size();
  System sys(std::move(couplings), std::move(local_energy), k, spec, profile, full);
  const std::size_t n = sys.size();

  std::vector<cd> y(n, cd(0.0));
  if (initial) {
    for (std::size_t r = 0; r < comp_full.size(); ++r)
      for (std::size_t c = 0; c < k; ++c)
        y[local[comp_full[r]] * k + c] = (*initial)(static_cast<Eigen::Index>(comp_present[r]), static_cast<Eigen::Index>(c));
  } else {
    for (std::size_t c = 0; c < k; ++c) y[local[comp_full[c]] * k + c] = 1.0;
  }

  double h = options.initial_step_us > 0.0 ? options.initial_step_us : profile.tau_us / 2000.0;
  if (full && max_omega > 0.0) h = std::min(h, 0.05 / max_omega);
  const double h_min = profile.tau_us * 1e-15;

  Rk4 rk(n);
  std::vector<cd> f0(n), full_step(n), half(n), f_half(n), two_half(n);

  auto fail = [&](const std::string& why, double t) {
    nlohmann::json diag{{"time_us", t},
                        {"step_us", h},
                        {"accepted_steps", out.accepted_steps},
                        {"rejected_steps", out.rejected_steps}};
    throw IntegrationError(why, diag);
  };

  const auto knots = breakpoints(profile);
  for (std::size_t seg = 0; seg + 1 < knots.size(); ++seg) {
    double t = knots[seg];
    const double t_end = knots[seg + 1];
    while (t < t_end) {
      const bool last = t + h >= t_end;
      const double step = last ? t_end - t : h;
      sys.eval(t, y, f0);
      rk.step(sys, t, step, y, f0, full_step);
      rk.step(sys, t, 0.5 * step, y, f0, half);
      sys.eval(t + 0.5 * step, half, f_half);
      rk.step(sys, t + 0.5 * step, 0.5 * step, half, f_half, two_half);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(two_half[i] - full_step[i]));
      err /= 15.0;
      const double factor =
          err == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(options.step_tolerance / err, 0.2), 0.2, 4.0);
      if (err <= options.step_tolerance) {
        y.swap(two_half);
        t = last ? t_end : t + step;
        ++out.accepted_steps;
        if (out.accepted_steps > options.max_steps) fail("step budget exhausted", t);
        if (!last || factor < 1.0) h = step * factor;
      } else {
        ++out.rejected_steps;
        h = step * factor;
        if (h < h_min) fail("step size underflow", t);
      }
    }
  }

  Eigen::MatrixXcd cols(static_cast<Eigen::Index>(members.size()), static_cast<Eigen::Index>(k));
  for (std::size_t r = 0; r < members.size(); ++r)
    for (std::size_t c = 0; c < k; ++c)
      cols(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = y[r * k + c];

  out.members = members.size();
  out.cols = std::move(cols);
  return out;
}

}  // namespace

EvolutionResult propagate(const MoleculeSpec& spec, const TrajectoryProfile& profile,
                          const PropagateOptions& options) {
  const bool full = options.mode == SolverMode::Full;
  const double unitarity_tol =
      options.unitarity_tolerance > 0.0 ? options.unitarity_tolerance : (full ? 1e-6 : 1e-8);
  const Integration run = integrate(spec, profile, options, nullptr);
  const auto& comp_pairs = run.comp_pairs;
  const auto& comp_full = run.comp_full;
  const auto& comp_present = run.comp_present;
  const auto& local = run.local;
  const auto& cols = run.cols;
  const std::size_t k = comp_full.size();

  EvolutionResult result;
  result.accepted_steps = run.accepted_steps;
  result.rejected_steps = run.rejected_steps;
  const auto dim = static_cast<Eigen::Index>(comp_pairs.size());
  result.basis = comp_pairs;
  result.op = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<double> kept(k, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    const auto lr = static_cast<Eigen::Index>(local[comp_full[r]]);
    for (std::size_t c = 0; c < k; ++c) {
      const cd v = cols(lr, static_cast<Eigen::Index>(c));
      result.op(static_cast<Eigen::Index>(comp_present[r]),
                static_cast<Eigen::Index>(comp_present[c])) = v;
      kept[c] += std::norm(v);
    }
  }
  const Eigen::MatrixXcd gram = cols.adjoint() * cols - Eigen::MatrixXcd::Identity(cols.cols(), cols.cols());
  result.unitarity_defect = gram.cwiseAbs().maxCoeff();
  for (double p : kept) result.leakage = std::max(result.leakage, 1.0 - p);

  result.f_iswap_plus = fidelity(result.op, target_gate(PhaseBranch::PlusI, options.computational_set));
  result.f_iswap_minus =
      fidelity(result.op, target_gate(PhaseBranch::MinusI, options.computational_set));
  result.phase_branch =
      result.f_iswap_plus >= result.f_iswap_minus ? PhaseBranch::PlusI : PhaseBranch::MinusI;
  result.f_iswap = std::max(result.f_iswap_plus, result.f_iswap_minus);
  result.f_id = fidelity(result.op, Eigen::MatrixXcd::Identity(dim, dim));
  result.mode = options.mode;
  result.j_max = options.j_max;
  result.propagated_dimension = run.members;
  result.duration_us = profile.tau_us;

  if (!(result.unitarity_defect <= unitarity_tol))
    throw IntegrationError(fmt::format("unitarity defect {:.3e} exceeds tolerance {:.1e}",
                                       result.unitarity_defect, unitarity_tol),
                           nlohmann::json{{"time_us", profile.tau_us},
                                          {"unitarity_defect", result.unitarity_defect},
                                          {"accepted_steps", result.accepted_steps},
                                          {"rejected_steps", result.rejected_steps}});
  return result;
}

Eigen::VectorXcd propagate_state(const MoleculeSpec& spec, const TrajectoryProfile& profile,
                                 const Eigen::VectorXcd& initial, const PropagateOptions& options) {
  const auto dim = static_cast<Eigen::Index>(options.computational_set.size() * options.computational_set.size());
  if (initial.size() != dim)
    throw std::invalid_argument(fmt::format("initial state has {} amplitudes, expected {}", initial.size(), dim));
  const Eigen::MatrixXcd column = initial;
  const Integration run = integrate(spec, profile, options, &column);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  for (std::size_t r = 0; r < run.comp_full.size(); ++r)
    out(static_cast<Eigen::Index>(run.comp_present[r])) =
        run.cols(static_cast<Eigen::Index>(run.local[run.comp_full[r]]), 0);
  return out;
}

nlohmann::ordered_json to_json(const EvolutionResult& r) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(r.mode);
  j["j_max"] = r.j_max;
  j["duration_us"] = r.duration_us;
  j["f_iswap"] = r.f_iswap;
  j["f_iswap_plus_i"] = r.f_iswap_plus;
  j["f_iswap_minus_i"] = r.f_iswap_minus;
  j["phase_branch"] = to_string(r.phase_branch);
  j["f_id"] = r.f_id;
  j["unitarity_defect"] = r.unitarity_defect;
  j["leakage"] = r.leakage;
  j["propagated_dimension"] = r.propagated_dimension;
  j["accepted_steps"] = r.accepted_steps;
  j["rejected_steps"] = r.rejected_steps;
  auto labels = nlohmann::ordered_json::array();
  for (const auto& p : r.basis) labels.push_back(p.label());
  j["basis"] = labels;
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < r.op.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < r.op.cols(); ++c)
      row.push_back(nlohmann::ordered_json::array({r.op(i, c).real(), r.op(i, c).imag()}));
    rows.push_back(row);
  }
  j["operator"] = rows;
  return j;
}

}  // namespace molqudit
