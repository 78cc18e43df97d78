#pragma once

#include <string>
#include <vector>

#include "enrel/alloc.hpp"
#include "enrel/efmodel.hpp"

namespace enrel {

enum class AllocationKind { Heuristic, Uniform };
std::string_view to_string(AllocationKind kind);
AllocationKind parse_allocation_kind(std::string_view name);

/// Budgets are given in units of cE; the energy is grid value / c.
struct SweepConfig {
  std::vector<double> grid;
  EnergyFailureModel model = EnergyFailureModel::exponential(0.5, 1.0);
  /// Shapes without the gate kind, e.g. "balanced:2:1" or "line:3".
  std::vector<std::string> structures{"balanced:2:1", "line:3"};
  std::vector<std::string> gate_kinds{"AND", "OR", "XOR"};
  std::vector<AllocationKind> allocations{AllocationKind::Heuristic, AllocationKind::Uniform};
  double theta = 1e-6;
  double eta = 1e-8;
};

struct SweepRow {
  double budget_ce = 0.0;
  double budget = 0.0;
  std::string structure;
  std::string gate_kind;
  AllocationKind allocation = AllocationKind::Heuristic;
  /// "ok", or "below_eth" when the heuristic allocation does not exist.
  std::string status;
  double worst_delta = 0.0;
  double cond_error_entropy = 0.0;
  /// h(delta) for delta = gamma^-1(largest path sum of eps).
  double entropy_limit = 0.0;
  double total_energy = 0.0;
  std::vector<double> gate_energies;
};

/// Allocation of `budget` on `tree`: Heuristic is max_reliability_alloc,
/// Uniform gives every gate budget / |V_g|. Throws DomainError for a
/// heuristic budget below E_th.
Allocation allocate_budget(const GateTree& tree, const EnergyFailureModel& model, double budget,
                           AllocationKind kind, double theta = 1e-6, double eta = 1e-8);

/// Rows ordered by grid point, then structure, gate kind and allocation in
/// configuration order.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Parses "start:stop:steps" into `steps` evenly spaced points.
std::vector<double> parse_grid(std::string_view text);

}  // namespace enrel
