#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "enrel/bounds.hpp"
#include "enrel/circuit.hpp"
#include "enrel/efmodel.hpp"

namespace enrel {

/// Per-gate failure probabilities eps_g, energies e_g = psi(eps_g) and their
/// sum. Indexed by gate id.
struct Allocation {
  std::vector<double> eps;
  std::vector<double> energy;
  double total_energy = 0.0;
};

/// Builds an allocation from failure probabilities (energies through psi).
Allocation allocation_from_eps(const EnergyFailureModel& model, std::vector<double> eps);
/// Builds an allocation from energies (failure probabilities through chi).
Allocation allocation_from_energy(const EnergyFailureModel& model, std::vector<double> energy);

/// Optimality residuals of an allocation:
///   child_sum  max over gates with gate children of
///              |psi'(eps_g) - sum_l psi'(eps_{g_l})| / |psi'(eps_g)|
///   path_sum   max over maximal paths of |sum eps - gamma| / gamma
///   budget     |sum psi(eps) - E| / E   (energy-budget mode only)
struct KKTReport {
  double max_child_sum_residual = 0.0;
  double max_path_residual = 0.0;
  std::optional<double> budget_residual;

  /// All residuals within 10 * eta.
  bool certified(double eta) const;
};

struct PathBudget {
  double gamma;
};
struct EnergyBudget {
  double energy;
};

KKTReport certify_kkt(const GateTree& tree, const EnergyFailureModel& model,
                      const Allocation& alloc, PathBudget budget);
/// In energy-budget mode the common path sum is not known in advance; the
/// path residual is the spread (max - min) / max of the path sums.
KKTReport certify_kkt(const GateTree& tree, const EnergyFailureModel& model,
                      const Allocation& alloc, EnergyBudget budget);

struct SolverStats {
  std::size_t newton_iterations = 0;
  std::size_t line_search_trials = 0;
  /// Gate visits across all residual evaluations and linear solves.
  std::size_t node_evaluations = 0;
};

struct SolverOptions {
  double eta = 1e-8;
  std::size_t max_iterations = 200;
  /// Start from the exact solution for power-law child-sum conditions
  /// (exact for the exponential and polynomial families). When false the
  /// solver starts from a uniform split and relies on Newton alone.
  bool homogeneous_start = true;
};

/// Thrown when an iterative solve does not reach its tolerance. Carries the
/// best iterate found.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Allocation best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const Allocation& best() const { return best_; }

 private:
  Allocation best_;
};

struct MinEnergyResult {
  Allocation allocation;
  KKTReport kkt;
  SolverStats stats;
};

/// Minimum total energy subject to sum_{g in P} eps_g <= gamma on every
/// maximal path. The optimum is characterised by the child-sum condition
/// psi'(eps_g) = sum over gate children of psi'(eps_child) and equal path
/// sums gamma; the solver works on the per-leaf multipliers (prices) and
/// applies Newton's method with an O(|V_g|) tree solve per step.
///
/// Requires 0 < gamma <= eps0 (looser requirements make the box constraint
/// eps_g <= eps0 active) and eta in (0, 1e-2].
MinEnergyResult min_energy_alloc(const GateTree& tree, const EnergyFailureModel& model,
                                 double gamma, const SolverOptions& options = {});
MinEnergyResult min_energy_alloc(const GateTree& tree, const EnergyFailureModel& model,
                                 const ReliabilityTarget& target,
                                 const SolverOptions& options = {});

/// Energy above which eps_g <= eps0 never binds: the minimum energy for
/// gamma = eps0.
double eth(const GateTree& tree, const EnergyFailureModel& model);

struct MaxReliabilityResult {
  Allocation allocation;
  /// Smallest achievable common path sum for the budget.
  double y_min = 0.0;
  GammaInverse delta_min;
  KKTReport kkt;
  std::size_t outer_iterations = 0;
};

/// Smallest path sum reachable with total energy `budget`, found by bisection
/// on gamma around min_energy_alloc until |sum psi - budget| <= theta budget.
/// Throws DomainError when budget < eth(tree, model).
MaxReliabilityResult max_reliability_alloc(const GateTree& tree, const EnergyFailureModel& model,
                                           double budget, double theta = 1e-6,
                                           const SolverOptions& options = {});

enum class AllocMode { MinEnergy, MaxReliability };

/// Level-wise optimum for the full k-ary tree of depth d.
struct SymmetricSolution {
  /// eps at distance i from the root, i = 0..d.
  std::vector<double> level_eps;
  /// Common path sum.
  double gamma = 0.0;
  double total_energy = 0.0;
  /// eps(i) / eps(i+1).
  double level_ratio = 0.0;
  /// Polynomial family only: the ratio k^(beta/(1-beta)) that the printed
  /// child-sum exponent 1/beta - 1 would give (nullopt at beta = 1).
  std::optional<double> printed_ratio;
};

/// Closed forms for the exponential and polynomial families. `value` is
/// gamma in MinEnergy mode and the energy budget in MaxReliability mode.
/// Throws DomainError when a level falls outside (0, eps0].
SymmetricSolution closed_form_symmetric(std::size_t k, std::size_t d,
                                        const EnergyFailureModel& model, double value,
                                        AllocMode mode);

/// Expands a level-wise solution onto gen_balanced(k, d, ...).
Allocation expand_symmetric(const GateTree& balanced, const EnergyFailureModel& model,
                            const SymmetricSolution& solution);

/// Independent reference solver for small trees (|V_g| <= 12): cyclic
/// coordinate descent with exact one-dimensional minimisation on the
/// cumulative root-to-gate sums, which turns every path constraint into a
/// simple bound. Meant for tests.
Allocation oracle_min_energy(const GateTree& tree, const EnergyFailureModel& model, double gamma);

}  // namespace enrel
