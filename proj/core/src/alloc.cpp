#include "enrel/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "enrel/errors.hpp"
#include "model_ext.hpp"

namespace enrel {

Allocation allocation_from_eps(const EnergyFailureModel& model, std::vector<double> eps) {
  Allocation a;
  a.energy.reserve(eps.size());
  for (double e : eps) {
    a.energy.push_back(model.psi(e));
    a.total_energy += a.energy.back();
  }
  a.eps = std::move(eps);
  return a;
}

Allocation allocation_from_energy(const EnergyFailureModel& model, std::vector<double> energy) {
  Allocation a;
  a.eps.reserve(energy.size());
  for (double e : energy) {
    if (!(e >= 0.0)) throw DomainError("gate energy must be non-negative");
    a.eps.push_back(model.chi(e));
    a.total_energy += e;
  }
  a.energy = std::move(energy);
  return a;
}

bool KKTReport::certified(double eta) const {
  const double limit = 10.0 * eta;
  return max_child_sum_residual <= limit && max_path_residual <= limit &&
         (!budget_residual || *budget_residual <= limit);
}

namespace {

void check_dimensions(const GateTree& tree, const Allocation& alloc) {
  if (alloc.eps.size() != tree.size()) {
    throw PreconditionError("allocation has " + std::to_string(alloc.eps.size()) +
                            " gates, circuit has " + std::to_string(tree.size()));
  }
}

double child_sum_residual(const GateTree& tree, const EnergyFailureModel& model,
                          const Allocation& alloc) {
  double worst = 0.0;
  for (GateId g = 0; g < tree.size(); ++g) {
    const auto children = tree.gate_children(g);
    if (children.empty()) continue;
    const double own = model.psi_prime(alloc.eps[g]);
    double sum = 0.0;
    for (GateId c : children) sum += model.psi_prime(alloc.eps[c]);
    const double diff = std::abs(own - sum);
    worst = std::max(worst, own != 0.0 ? diff / std::abs(own) : diff);
  }
  return worst;
}

// Sum of eps from the root down to every gate.
std::vector<double> cumulative_sums(const GateTree& tree, std::span<const double> eps) {
  std::vector<double> cum(tree.size());
  for (GateId g = tree.size(); g-- > 0;) {
    const auto p = tree.parent(g);
    cum[g] = eps[g] + (p ? cum[*p] : 0.0);
  }
  return cum;
}

}  // namespace

KKTReport certify_kkt(const GateTree& tree, const EnergyFailureModel& model,
                      const Allocation& alloc, PathBudget budget) {
  check_dimensions(tree, alloc);
  KKTReport r;
  r.max_child_sum_residual = child_sum_residual(tree, model, alloc);
  const auto cum = cumulative_sums(tree, alloc.eps);
  for (GateId g = 0; g < tree.size(); ++g) {
    if (!tree.is_leaf_gate(g)) continue;
    r.max_path_residual =
        std::max(r.max_path_residual, std::abs(cum[g] - budget.gamma) / budget.gamma);
  }
  return r;
}

KKTReport certify_kkt(const GateTree& tree, const EnergyFailureModel& model,
                      const Allocation& alloc, EnergyBudget budget) {
  check_dimensions(tree, alloc);
  KKTReport r;
  r.max_child_sum_residual = child_sum_residual(tree, model, alloc);
  const auto cum = cumulative_sums(tree, alloc.eps);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (GateId g = 0; g < tree.size(); ++g) {
    if (!tree.is_leaf_gate(g)) continue;
    lo = std::min(lo, cum[g]);
    hi = std::max(hi, cum[g]);
  }
  r.max_path_residual = hi > 0.0 ? (hi - lo) / hi : 0.0;
  double total = 0.0;
  for (double e : alloc.eps) total += model.psi(e);
  r.budget_residual = std::abs(total - budget.energy) / budget.energy;
  return r;
}

namespace {

// Dual state: one price per leaf gate, stored at the leaf's gate id. The
// price of any gate is the sum of the leaf prices below it, which makes the
// child-sum condition hold exactly for eps_g = eps_at_price(P_g).
struct DualPoint {
  std::vector<double> nu;
  std::vector<double> price;
  std::vector<double> eps;
  std::vector<double> residual;  // path sum - gamma, at leaf gates
  double dual = 0.0;
  double max_residual = 0.0;
};

class PriceSolver {
 public:
  PriceSolver(const GateTree& tree, const EnergyFailureModel& model, double gamma,
              SolverStats& stats)
      : tree_(tree), model_(model), gamma_(gamma), stats_(stats) {
    for (GateId g = 0; g < tree.size(); ++g) {
      if (tree.is_leaf_gate(g)) leaves_.push_back(g);
    }
  }

  const std::vector<GateId>& leaves() const { return leaves_; }

  void evaluate(DualPoint& p) const {
    const std::size_t n = tree_.size();
    p.price.assign(n, 0.0);
    p.eps.assign(n, 0.0);
    p.residual.assign(n, 0.0);
    for (GateId g = 0; g < n; ++g) {
      const auto children = tree_.gate_children(g);
      if (children.empty()) {
        p.price[g] = p.nu[g];
      } else {
        for (GateId c : children) p.price[g] += p.price[c];
      }
      p.eps[g] = model_.eps_at_price(p.price[g]);
    }
    const auto cum = cumulative_sums(tree_, p.eps);
    p.dual = 0.0;
    p.max_residual = 0.0;
    for (GateId g = 0; g < n; ++g) {
      p.dual += detail::psi_ext(model_, p.eps[g]) + p.eps[g] * p.price[g];
    }
    for (GateId l : leaves_) {
      p.residual[l] = cum[l] - gamma_;
      p.dual -= gamma_ * p.nu[l];
      p.max_residual = std::max(p.max_residual, std::abs(p.residual[l]));
    }
    stats_.node_evaluations += n;
  }

  // Solves M x = r with M = sum_g w_g 1_{L(g)} 1_{L(g)}^T, w_g = 1/psi''(eps_g).
  // Bottom-up, X_g = A_g - B_g C_g expresses the leaf-sum of x below g in
  // terms of C_g, the sum of w_h X_h over strict ancestors h.
  std::vector<double> newton_direction(const DualPoint& p) const {
    const std::size_t n = tree_.size();
    std::vector<double> w(n), A(n), B(n), C(n, 0.0), X(n, 0.0);
    for (GateId g = 0; g < n; ++g) {
      w[g] = 1.0 / detail::psi_second_ext(model_, p.eps[g]);
      const auto children = tree_.gate_children(g);
      if (children.empty()) {
        A[g] = p.residual[g] / w[g];
        B[g] = 1.0 / w[g];
      } else {
        double sa = 0.0, sb = 0.0;
        for (GateId c : children) {
          sa += A[c];
          sb += B[c];
        }
        const double denom = 1.0 + w[g] * sb;
        A[g] = sa / denom;
        B[g] = sb / denom;
      }
    }
    for (GateId g = n; g-- > 0;) {
      X[g] = A[g] - B[g] * C[g];
      for (GateId c : tree_.gate_children(g)) C[c] = C[g] + w[g] * X[g];
    }
    stats_.node_evaluations += 2 * n;
    std::vector<double> dx(n, 0.0);
    for (GateId l : leaves_) dx[l] = X[l];
    return dx;
  }

 private:
  const GateTree& tree_;
  const EnergyFailureModel& model_;
  double gamma_;
  SolverStats& stats_;
  std::vector<GateId> leaves_;
};

// Exact when the child-sum condition reads eps_g^-q = sum eps_c^-q: each
// subtree splits its path budget sigma as eps_root = r sigma with r depending
// only on the shape.
std::vector<double> homogeneous_split(const GateTree& tree, double q, double gamma) {
  const std::size_t n = tree.size();
  std::vector<double> ratio(n, 1.0), eps(n), budget(n);
  for (GateId g = 0; g < n; ++g) {
    const auto children = tree.gate_children(g);
    if (children.empty()) continue;
    double s = 0.0;
    for (GateId c : children) s += std::pow(ratio[c], -q);
    const double rho = std::pow(s, -1.0 / q);
    ratio[g] = rho / (1.0 + rho);
  }
  budget[tree.root()] = gamma;
  for (GateId g = n; g-- > 0;) {
    eps[g] = ratio[g] * budget[g];
    for (GateId c : tree.gate_children(g)) budget[c] = budget[g] - eps[g];
  }
  return eps;
}

double homogeneity_exponent(const EnergyFailureModel& model) {
  return model.family() == Family::Polynomial ? 1.0 / model.beta() + 1.0 : 1.0;
}

Allocation finish_allocation(const EnergyFailureModel& model, std::vector<double> eps) {
  const double a = model.eps0();
  for (double& e : eps) {
    if (e > a) {
      if (e > a * (1.0 + 1e-12)) {
        throw DomainError("allocation leaves the range (0, eps0]");
      }
      e = a;
    }
  }
  return allocation_from_eps(model, std::move(eps));
}

void validate_inputs(const EnergyFailureModel& model, double gamma, const SolverOptions& opt) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("path budget gamma must be positive and finite, got " +
                      std::to_string(gamma));
  }
  if (gamma > model.eps0()) {
    throw DomainError("reliability requirement too loose: gamma = " + std::to_string(gamma) +
                      " exceeds eps0 = " + std::to_string(model.eps0()) +
                      ", so eps_g <= eps0 would bind; use eth() and a tighter delta");
  }
  if (!(opt.eta > 0.0 && opt.eta <= 1e-2)) {
    throw DomainError("eta must lie in (0, 1e-2], got " + std::to_string(opt.eta));
  }
}

}  // namespace

MinEnergyResult min_energy_alloc(const GateTree& tree, const EnergyFailureModel& model,
                                 double gamma, const SolverOptions& options) {
  validate_inputs(model, gamma, options);
  MinEnergyResult result;
  SolverStats& stats = result.stats;

  if (tree.size() == 1) {
    result.allocation = allocation_from_eps(model, {gamma});
    result.kkt = certify_kkt(tree, model, result.allocation, PathBudget{gamma});
    return result;
  }

  PriceSolver solver(tree, model, gamma, stats);
  DualPoint cur;
  cur.nu.assign(tree.size(), 0.0);
  {
    std::vector<double> start;
    if (options.homogeneous_start) {
      start = homogeneous_split(tree, homogeneity_exponent(model), gamma);
    } else {
      const double uniform = gamma / static_cast<double>(tree.depth() + 1);
      start.assign(tree.size(), uniform);
    }
    for (GateId l : solver.leaves()) cur.nu[l] = -model.psi_prime(start[l]);
  }
  solver.evaluate(cur);
  DualPoint best = cur;

  // Converge well past eta so the certificate has headroom.
  const double tol = std::max(options.eta * 1e-3, 64.0 * std::numeric_limits<double>::epsilon()) *
                     gamma;
  std::size_t stalled = 0;
  while (cur.max_residual > tol) {
    if (stats.newton_iterations >= options.max_iterations || stalled >= 3) break;
    ++stats.newton_iterations;
    const auto dx = solver.newton_direction(cur);

    double slope = 0.0;
    double t = 1.0;
    for (GateId l : solver.leaves()) {
      slope += cur.residual[l] * dx[l];
      if (dx[l] < 0.0) t = std::min(t, -0.99 * cur.nu[l] / dx[l]);
    }

    DualPoint trial;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      ++stats.line_search_trials;
      trial.nu = cur.nu;
      for (GateId l : solver.leaves()) trial.nu[l] += t * dx[l];
      solver.evaluate(trial);
      const double gain = trial.dual - cur.dual;
      const double noise = 1e-13 * (std::abs(cur.dual) + 1.0);
      if (gain >= 1e-4 * t * slope && gain > -noise) {
        accepted = true;
        break;
      }
      // Near the optimum the dual is flat to rounding; fall back to residuals.
      if (std::abs(gain) <= noise && trial.max_residual < cur.max_residual) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      ++stalled;
      continue;
    }
    stalled = trial.max_residual < cur.max_residual ? 0 : stalled + 1;
    cur = std::move(trial);
    if (cur.max_residual < best.max_residual) best = cur;
  }

  if (best.max_residual > options.eta * gamma) {
    Allocation partial;
    try {
      partial = finish_allocation(model, best.eps);
    } catch (const DomainError&) {
      partial.eps = best.eps;
    }
    throw ConvergenceError("min_energy_alloc did not converge: path residual " +
                               std::to_string(best.max_residual / gamma) + " after " +
                               std::to_string(stats.newton_iterations) + " iterations",
                           std::move(partial));
  }

  result.allocation = finish_allocation(model, std::move(best.eps));
  result.kkt = certify_kkt(tree, model, result.allocation, PathBudget{gamma});
  return result;
}

MinEnergyResult min_energy_alloc(const GateTree& tree, const EnergyFailureModel& model,
                                 const ReliabilityTarget& target, const SolverOptions& options) {
  return min_energy_alloc(tree, model, target.gamma, options);
}

double eth(const GateTree& tree, const EnergyFailureModel& model) {
  return min_energy_alloc(tree, model, model.eps0()).allocation.total_energy;
}

MaxReliabilityResult max_reliability_alloc(const GateTree& tree, const EnergyFailureModel& model,
                                           double budget, double theta,
                                           const SolverOptions& options) {
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw DomainError("energy budget must be positive and finite, got " + std::to_string(budget));
  }
  if (!(theta > 0.0 && theta <= 1e-2)) {
    throw DomainError("theta must lie in (0, 1e-2], got " + std::to_string(theta));
  }

  MaxReliabilityResult out;
  auto finish = [&](MinEnergyResult r, double y) {
    out.allocation = std::move(r.allocation);
    out.y_min = y;
    out.delta_min = gamma_inverse(y);
    out.kkt = certify_kkt(tree, model, out.allocation, EnergyBudget{budget});
    return out;
  };
  auto within = [&](double energy) { return std::abs(energy - budget) <= theta * budget; };

  const double a = model.eps0();
  MinEnergyResult at_hi = min_energy_alloc(tree, model, a, options);
  ++out.outer_iterations;
  const double e_th = at_hi.allocation.total_energy;
  if (within(e_th)) return finish(std::move(at_hi), a);
  if (budget < e_th) {
    throw DomainError("energy budget " + std::to_string(budget) + " is below E_th = " +
                      std::to_string(e_th) + "; see eth()");
  }

  // Total energy decreases in gamma; bracket the budget from below.
  double hi = a, lo = a;
  for (;;) {
    lo *= 0.5;
    if (lo < 1e-300) {
      throw DomainError("energy budget " + std::to_string(budget) +
                        " needs failure probabilities below double precision range");
    }
    MinEnergyResult r = min_energy_alloc(tree, model, lo, options);
    ++out.outer_iterations;
    if (within(r.allocation.total_energy)) return finish(std::move(r), lo);
    if (r.allocation.total_energy > budget) break;
    hi = lo;
  }

  for (std::size_t it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    MinEnergyResult r = min_energy_alloc(tree, model, mid, options);
    ++out.outer_iterations;
    const double e = r.allocation.total_energy;
    if (within(e) || mid == lo || mid == hi) {
      if (!within(e)) {
        throw ConvergenceError("max_reliability_alloc: bracket collapsed before reaching theta",
                               std::move(r.allocation));
      }
      return finish(std::move(r), mid);
    }
    if (e > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  MinEnergyResult r = min_energy_alloc(tree, model, std::sqrt(lo * hi), options);
  throw ConvergenceError("max_reliability_alloc did not reach theta within 200 bisection steps",
                         std::move(r.allocation));
}

}  // namespace enrel
