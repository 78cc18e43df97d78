#include "enrel/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "enrel/errors.hpp"
#include "enrel/info.hpp"

namespace enrel {

ReliabilityTarget make_target(double delta) {
  if (!(delta >= 0.0 && delta < 0.5)) {
    throw DomainError("delta must lie in [0, 0.5), got " + std::to_string(delta));
  }
  ReliabilityTarget t;
  t.delta = delta;
  t.h_delta = binary_entropy(delta);
  t.gamma = -0.25 * std::log1p(-t.h_delta);
  return t;
}

GammaInverse gamma_inverse(double y) {
  if (!(y >= 0.0)) throw DomainError("gamma value must be non-negative, got " + std::to_string(y));
  if (y == 0.0) return {0.0, false};
  const double h_target = -std::expm1(-4.0 * y);
  if (!(h_target < 1.0)) return {0.5 - 1e-12, true};

  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (binary_entropy(mid) < h_target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), false};
}

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::GraphSpecific: return "graph_specific";
    case BoundKind::Theorem1: return "theorem1";
    case BoundKind::Corollary1ClosedForm: return "corollary1";
  }
  return "?";
}

std::string_view to_string(BoundFlag flag) {
  switch (flag) {
    case BoundFlag::Finite: return "finite";
    case BoundFlag::Vacuous: return "vacuous";
    case BoundFlag::Infinite: return "infinite";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// gates * psi(arg) with the zero/infinity conventions shared by all bounds.
void fill_uniform_bound(BoundReport& r, const EnergyFailureModel& model, double arg) {
  if (arg <= 0.0) {
    r.flag = BoundFlag::Infinite;
    r.energy = kInf;
  } else if (arg >= model.eps0()) {
    r.flag = BoundFlag::Vacuous;
    r.energy = 0.0;
  } else {
    r.flag = BoundFlag::Finite;
    r.energy = r.gate_count * model.psi(arg);
  }
}

void require_k_less_than_n(std::size_t n, std::size_t k) {
  if (k < 2 || k >= n) {
    throw PreconditionError("the function-agnostic bound needs 2 <= k < n, got n = " +
                            std::to_string(n) + ", k = " + std::to_string(k));
  }
}

}  // namespace

BoundReport bound_graph_specific(const GateTree& tree, const EnergyFailureModel& model,
                                 const ReliabilityTarget& target) {
  const std::size_t longest = max_input_path_length(tree);
  if (longest == 0) throw PreconditionError("circuit has no inputs");
  BoundReport r;
  r.kind = BoundKind::GraphSpecific;
  r.n = tree.n_inputs();
  r.k = tree.k_max();
  r.path_length = static_cast<double>(longest);
  r.gate_count = static_cast<double>(tree.size());
  r.target = target;
  fill_uniform_bound(r, model, target.gamma / r.path_length);
  return r;
}

BoundReport bound_theorem1(std::size_t n, std::size_t k, const EnergyFailureModel& model,
                           const ReliabilityTarget& target) {
  require_k_less_than_n(n, k);
  BoundReport r;
  r.kind = BoundKind::Theorem1;
  r.n = n;
  r.k = k;
  r.path_length = std::log(static_cast<double>(n)) / std::log(static_cast<double>(k));
  r.gate_count = static_cast<double>(n) / static_cast<double>(k);
  r.target = target;
  fill_uniform_bound(r, model, target.gamma / r.path_length);
  return r;
}

BoundReport bound_corollary1(std::size_t n, std::size_t k, const EnergyFailureModel& model,
                             const ReliabilityTarget& target) {
  require_k_less_than_n(n, k);
  BoundReport r;
  r.kind = BoundKind::Corollary1ClosedForm;
  r.n = n;
  r.k = k;
  const double ln_n = std::log(static_cast<double>(n));
  const double ln_k = std::log(static_cast<double>(k));
  r.path_length = ln_n / ln_k;
  r.gate_count = static_cast<double>(n) / static_cast<double>(k);
  r.target = target;

  // ln(1/(1 - h(delta))) = 4 gamma.
  const double log_term = 4.0 * target.gamma;
  if (log_term <= 0.0) {
    r.flag = BoundFlag::Infinite;
    r.energy = kInf;
    return r;
  }
  const double eps0 = model.eps0();
  if (model.family() == Family::Polynomial) {
    const double base = 4.0 * eps0 * ln_n / (ln_k * log_term);
    r.flag = BoundFlag::Finite;
    r.energy = r.gate_count * std::pow(base, 1.0 / model.beta());
    return r;
  }
  const double beta = model.beta();
  const double inner = std::log(4.0 * eps0 * ln_n / ln_k) - std::log(log_term);
  if (inner <= 0.0) {
    r.flag = BoundFlag::Vacuous;
    r.energy = 0.0;
    return r;
  }
  r.flag = BoundFlag::Finite;
  r.energy = r.gate_count / std::pow(model.c(), 1.0 / beta) * std::pow(inner, 1.0 / beta);
  return r;
}

std::vector<ScalingRow> scaling_table(const EnergyFailureModel& model, std::size_t k,
                                      double delta, std::span<const std::size_t> n_list) {
  const ReliabilityTarget target = make_target(delta);
  std::vector<ScalingRow> rows;
  rows.reserve(n_list.size());
  for (std::size_t n : n_list) rows.push_back({n, bound_theorem1(n, k, model, target)});
  return rows;
}

}  // namespace enrel
