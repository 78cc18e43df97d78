#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "enrel/circuit.hpp"
#include "enrel/efmodel.hpp"

namespace enrel {

/// Reliability requirement delta with its binary entropy h(delta) (bits) and
/// path budget gamma(delta) = (1/4) ln(1 / (1 - h(delta))) (nats).
struct ReliabilityTarget {
  double delta = 0.0;
  double h_delta = 0.0;
  double gamma = 0.0;
};

/// Throws DomainError unless 0 <= delta < 1/2.
ReliabilityTarget make_target(double delta);

struct GammaInverse {
  double delta = 0.0;
  /// Set when 1 - exp(-4y) rounds to 1; delta is then 1/2 - 1e-12.
  bool saturated = false;
};

/// delta in [0, 1/2) with gamma(delta) = y, by bisection on the increasing
/// branch of h. Throws DomainError for negative or NaN y.
GammaInverse gamma_inverse(double y);

enum class BoundKind { GraphSpecific, Theorem1, Corollary1ClosedForm };
std::string_view to_string(BoundKind kind);

enum class BoundFlag {
  Finite,
  /// The per-gate failure budget exceeds eps0, so the constraint is vacuous
  /// and the bound is 0.
  Vacuous,
  /// delta = 0 (perfect reliability): the bound is +infinity.
  Infinite,
};
std::string_view to_string(BoundFlag flag);

/// Lower bound on total energy at a uniform operating point.
struct BoundReport {
  BoundKind kind = BoundKind::Theorem1;
  BoundFlag flag = BoundFlag::Finite;
  double energy = 0.0;
  std::size_t n = 0;
  std::size_t k = 0;
  /// max_i |P_i| for the graph-specific bound; ln n / ln k otherwise.
  double path_length = 0.0;
  /// |V_g| for the graph-specific bound; n / k otherwise.
  double gate_count = 0.0;
  ReliabilityTarget target;

  double per_input() const { return energy / static_cast<double>(n); }
};

/// |V_g| psi(gamma(delta) / max_i |P_i|) for the given formula.
BoundReport bound_graph_specific(const GateTree& tree, const EnergyFailureModel& model,
                                 const ReliabilityTarget& target);

/// (n/k) psi(gamma(delta) ln k / ln n): minimum over every n-input function
/// and every formula of gates with at most k inputs. Requires 2 <= k < n.
BoundReport bound_theorem1(std::size_t n, std::size_t k, const EnergyFailureModel& model,
                           const ReliabilityTarget& target);

/// Closed forms for the stretched-exponential (exponential = beta 1) and
/// polynomial families as usually printed. The polynomial form omits the
/// "-1" of psi and so exceeds bound_theorem1 by exactly n/k.
BoundReport bound_corollary1(std::size_t n, std::size_t k, const EnergyFailureModel& model,
                             const ReliabilityTarget& target);

struct ScalingRow {
  std::size_t n = 0;
  BoundReport bound;
};

std::vector<ScalingRow> scaling_table(const EnergyFailureModel& model, std::size_t k,
                                      double delta, std::span<const std::size_t> n_list);

}  // namespace enrel
