#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "enrel/alloc.hpp"
#include "enrel/errors.hpp"

namespace enrel {

Allocation oracle_min_energy(const GateTree& tree, const EnergyFailureModel& model, double gamma) {
  constexpr std::size_t kMaxGates = 12;
  if (tree.size() > kMaxGates) {
    throw PreconditionError("oracle_min_energy handles at most 12 gates, got " +
                            std::to_string(tree.size()));
  }
  if (!(gamma > 0.0 && gamma <= model.eps0())) {
    throw DomainError("oracle needs 0 < gamma <= eps0");
  }

  // t[g]: sum of eps from the root down to g. Constraints become
  // t[parent] < t[g] and t[leaf] <= gamma; leaves sit at gamma at the optimum.
  const std::size_t n = tree.size();
  const double depth = static_cast<double>(tree.depth());
  std::vector<double> t(n);
  for (GateId g = 0; g < n; ++g) {
    t[g] = tree.is_leaf_gate(g) ? gamma
                                : gamma * static_cast<double>(tree.level(g) + 1) / (depth + 1.0);
  }
  auto above = [&](GateId g) {
    const auto p = tree.parent(g);
    return p ? t[*p] : 0.0;
  };
  auto objective = [&] {
    double f = 0.0;
    for (GateId g = 0; g < n; ++g) f += model.psi(t[g] - above(g));
    return f;
  };

  double f = objective();
  for (std::size_t sweep = 0; sweep < 200'000; ++sweep) {
    double moved = 0.0;
    for (GateId g = n; g-- > 0;) {
      const auto children = tree.gate_children(g);
      if (children.empty()) continue;
      const double lo0 = above(g);
      double hi0 = std::numeric_limits<double>::infinity();
      for (GateId c : children) hi0 = std::min(hi0, t[c]);
      // d/dt [psi(t - lo0) + sum psi(t_c - t)] is increasing from -inf to +inf.
      auto slope = [&](double x) {
        double s = model.psi_prime(x - lo0);
        for (GateId c : children) s -= model.psi_prime(t[c] - x);
        return s;
      };
      double lo = lo0, hi = hi0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (slope(mid) < 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double next = 0.5 * (lo + hi);
      moved = std::max(moved, std::abs(next - t[g]));
      t[g] = next;
    }
    const double f_next = objective();
    const bool stagnant = std::abs(f - f_next) <= 1e-14 * std::abs(f_next);
    f = f_next;
    if (stagnant && moved <= 1e-14 * gamma) break;
  }

  std::vector<double> eps(n);
  for (GateId g = 0; g < n; ++g) eps[g] = t[g] - above(g);
  return allocation_from_eps(model, std::move(eps));
}

}  // namespace enrel
