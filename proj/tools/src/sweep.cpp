#include "enrel/sweep.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "enrel/bounds.hpp"
#include "enrel/errors.hpp"
#include "enrel/evaluate.hpp"
#include "enrel/info.hpp"

namespace enrel {

std::string_view to_string(AllocationKind kind) {
  return kind == AllocationKind::Heuristic ? "heuristic" : "uniform";
}

AllocationKind parse_allocation_kind(std::string_view name) {
  if (name == "heuristic") return AllocationKind::Heuristic;
  if (name == "uniform") return AllocationKind::Uniform;
  throw std::invalid_argument("allocation kind must be heuristic or uniform, got '" +
                              std::string(name) + "'");
}

Allocation allocate_budget(const GateTree& tree, const EnergyFailureModel& model, double budget,
                           AllocationKind kind, double theta, double eta) {
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw DomainError("energy budget must be positive and finite");
  }
  if (kind == AllocationKind::Heuristic) {
    return max_reliability_alloc(tree, model, budget, theta, {.eta = eta}).allocation;
  }
  return allocation_from_energy(model,
                                std::vector<double>(tree.size(), budget / static_cast<double>(tree.size())));
}

std::vector<double> parse_grid(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3) throw std::invalid_argument("grid must be start:stop:steps");
  auto number = [&](std::string_view f, const char* name) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("grid ") + name + " is not a number: '" +
                                  std::string(f) + "'");
    }
    return v;
  };
  const double lo = number(parts[0], "start");
  const double hi = number(parts[1], "stop");
  const double steps = number(parts[2], "steps");
  if (steps < 1 || steps != std::floor(steps)) {
    throw std::invalid_argument("grid is empty: steps must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(steps);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return grid;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  if (config.grid.empty()) throw std::invalid_argument("budget grid is empty");
  std::vector<SweepRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double ce : config.grid) {
    const double budget = ce / config.model.c();
    for (const auto& structure : config.structures) {
      for (const auto& kind : config.gate_kinds) {
        const GateTree tree = generate_from_spec(structure + ":" + kind);
        const auto paths = maximal_paths(tree);
        for (AllocationKind alloc_kind : config.allocations) {
          SweepRow row;
          row.budget_ce = ce;
          row.budget = budget;
          row.structure = structure;
          row.gate_kind = kind;
          row.allocation = alloc_kind;
          if (alloc_kind == AllocationKind::Heuristic && budget < eth(tree, config.model)) {
            row.status = "below_eth";
            row.worst_delta = row.cond_error_entropy = row.entropy_limit = row.total_energy = nan;
            rows.push_back(std::move(row));
            continue;
          }
          const Allocation a =
              allocate_budget(tree, config.model, budget, alloc_kind, config.theta, config.eta);
          const EvalReport report = eval_report(tree, a.eps);
          double longest = 0.0;
          for (const auto& p : paths) {
            double s = 0.0;
            for (GateId g : p) s += a.eps[g];
            longest = std::max(longest, s);
          }
          row.status = "ok";
          row.worst_delta = report.worst_delta;
          row.cond_error_entropy = report.cond_error_entropy;
          row.entropy_limit = binary_entropy(gamma_inverse(longest).delta);
          row.total_energy = a.total_energy;
          row.gate_energies = a.energy;
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

}  // namespace enrel
