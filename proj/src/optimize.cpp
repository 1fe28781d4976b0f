#include "molqudit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace molqudit {

namespace {
constexpr double kUnboundedTau = 1e7;  // us; used when no upper bound is given
constexpr double kInvPhi = 0.61803398874989484820;
}  // namespace

void OptimizationProblem::validate() const {
  spec.validate();
  trap.validate();
  if (!(constraint_factor >= 0.0)) throw ConfigError("constraint_factor must be non-negative");
  const auto [lo, hi] = tau_bounds;
  if (lo < 0.0 || hi < 0.0) throw ConfigError("tau bounds must be non-negative");
  if (hi > 0.0 && lo > hi) throw ConfigError("tau lower bound exceeds upper bound");
  const auto [elo, ehi] = effective_bounds();
  if (elo > ehi)
    throw ConfigError(fmt::format("tau bounds [{}, {}] lie below the confinement limit {} us", lo, hi,
                                  elo));
}

std::pair<double, double> OptimizationProblem::effective_bounds() const {
  const double floor = constraint_factor * confinement_timescale(spec, trap);
  const double hi = tau_bounds.second > 0.0 ? tau_bounds.second : kUnboundedTau;
  return {std::max(tau_bounds.first, floor), hi};
}

double seed_tau_from_pulse_area(const OptimizationProblem& problem) {
  problem.validate();
  const auto [lo, hi] = problem.effective_bounds();
  const double target = constants::pi / 2.0;
  auto theta = [&](double tau) {
    return secular_pulse_area(problem.spec, TrajectoryProfile::from_trap(problem.kind, problem.trap, tau));
  };

  double tau = 0.0;
  if (problem.kind == ProfileKind::Tanh) {
    double a = lo > 0.0 ? lo : hi * 1e-9;
    double b = hi;
    if (theta(a) > target || theta(b) < target)
      throw OptimizationError(
          fmt::format("no pi/2 pulse area inside [{}, {}] us", lo, hi), OptimizationReport{});
    for (int it = 0; it < 200 && b - a > 1e-12 * b; ++it) {
      const double mid = 0.5 * (a + b);
      (theta(mid) < target ? a : b) = mid;
    }
    tau = 0.5 * (a + b);
  } else {
    // The pulse area is proportional to tau for a fixed shape.
    tau = target / theta(1.0);
  }
  if (tau < lo || tau > hi)
    throw OptimizationError(fmt::format("pi/2 pulse area needs tau = {:.6g} us, outside [{}, {}]", tau,
                                        lo, hi),
                            OptimizationReport{});
  return tau;
}

OptimizationReport optimize_tau(const OptimizationProblem& problem) {
  problem.validate();
  const auto [lo, hi] = problem.effective_bounds();

  OptimizationReport report;
  report.t0_us = confinement_timescale(problem.spec, problem.trap);
  std::vector<PhaseBranch> branches;

  auto f = [&](double tau) {
    double value = 0.0;
    PhaseBranch branch = PhaseBranch::PlusI;
    try {
      const auto r = propagate(problem.spec, TrajectoryProfile::from_trap(problem.kind, problem.trap, tau),
                               problem.propagate);
      value = r.f_iswap;
      branch = r.phase_branch;
    } catch (const IntegrationError&) {
      value = 0.0;
    }
    report.history.emplace_back(tau, value);
    branches.push_back(branch);
    return value;
  };
  auto budget_left = [&] { return report.history.size() < problem.max_evaluations; };

  double a = lo;
  double b = hi;
  if (lo == hi) {
    f(lo);
  } else {
    double seed = 0.0;
    try {
      seed = seed_tau_from_pulse_area(problem);
    } catch (const OptimizationError&) {
      seed = 0.0;
    }
    report.seed_tau = seed;

    if (seed > 0.0) {
      a = std::max(lo, seed * 0.95);
      b = std::min(hi, seed * 1.05);
      double fa = f(a);
      double fm = f(seed);
      double fb = f(b);
      // Widen until the middle point dominates both ends or a bound is hit.
      while (budget_left() && (fa > fm || fb > fm)) {
        if (fa > fm && a > lo) {
          b = seed;
          fb = fm;
          seed = a;
          fm = fa;
          a = std::max(lo, seed - 1.618 * (b - seed));
          fa = f(a);
        } else if (fb > fm && b < hi) {
          a = seed;
          fa = fm;
          seed = b;
          fm = fb;
          b = std::min(hi, seed + 1.618 * (seed - a));
          fb = f(b);
        } else {
          break;
        }
      }
    } else {
      // Coarse logarithmic scan, then bracket the best grid point.
      const int n = 25;
      const double base = lo > 0.0 ? lo : hi * 1e-6;
      std::vector<double> grid(n);
      for (int i = 0; i < n; ++i) grid[i] = base * std::pow(hi / base, static_cast<double>(i) / (n - 1));
      std::size_t best = 0;
      double fbest = -1.0;
      for (int i = 0; i < n && budget_left(); ++i) {
        const double v = f(grid[i]);
        if (v > fbest) {
          fbest = v;
          best = static_cast<std::size_t>(i);
        }
      }
      a = grid[best == 0 ? 0 : best - 1];
      b = grid[std::min<std::size_t>(best + 1, n - 1)];
    }

    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = budget_left() ? f(c) : 0.0;
    double fd = budget_left() ? f(d) : 0.0;
    while (budget_left() && (b - a) > problem.relative_width * 0.5 * (a + b)) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = f(d);
      }
    }
  }

  report.final_bracket = {a, b};
  report.evaluations = report.history.size();
  std::size_t best = 0;
  for (std::size_t i = 1; i < report.history.size(); ++i)
    if (report.history[i].second > report.history[best].second) best = i;
  report.best_tau = report.history[best].first;
  report.best_fidelity = report.history[best].second;
  report.phase_branch = branches[best];

  if (report.best_fidelity < 0.5)
    throw OptimizationError(
        fmt::format("no evaluation reached fidelity 0.5 (best {:.4f} at tau = {:.6g} us)",
                    report.best_fidelity, report.best_tau),
        report);
  return report;
}

nlohmann::ordered_json to_json(const OptimizationReport& r) {
  nlohmann::ordered_json j;
  j["best_tau_us"] = r.best_tau;
  j["best_fidelity"] = r.best_fidelity;
  j["phase_branch"] = to_string(r.phase_branch);
  j["evaluations"] = r.evaluations;
  j["seed_tau_us"] = r.seed_tau;
  j["t0_us"] = r.t0_us;
  j["final_bracket_us"] = nlohmann::ordered_json::array({r.final_bracket.first, r.final_bracket.second});
  auto hist = nlohmann::ordered_json::array();
  for (const auto& [tau, fid] : r.history)
    hist.push_back(nlohmann::ordered_json{{"tau_us", tau}, {"fidelity", fid}});
  j["history"] = hist;
  return j;
}

void write_history_csv(const OptimizationReport& r, std::ostream& out) {
  out << "evaluation,tau_us,fidelity\n";
  for (std::size_t i = 0; i < r.history.size(); ++i)
    out << fmt::format("{},{:.17g},{:.17g}\n", i, r.history[i].first, r.history[i].second);
}

}  // namespace molqudit
