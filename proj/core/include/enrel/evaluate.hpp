#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "enrel/circuit.hpp"
#include "enrel/info.hpp"

namespace enrel {

/// Input patterns are packed integers: bit i holds input x_i.
using Pattern = std::uint64_t;

/// Noiseless output F(x).
bool eval_function(const GateTree& tree, Pattern x);

/// Probability that the noisy circuit outputs 1 on input x, each gate g
/// flipping its output independently with probability eps[g].
double output_one_probability(const GateTree& tree, std::span<const double> eps, Pattern x);

/// Exact P(y != F(x)). Requires eps[g] in [0, 1) and n_inputs <= 63.
double eval_exact(const GateTree& tree, std::span<const double> eps, Pattern x);

/// Same quantity by summing over all 2^|V_g| flip patterns (|V_g| <= 20).
double eval_bruteforce(const GateTree& tree, std::span<const double> eps, Pattern x);

struct EvalReport {
  /// Indexed by pattern.
  std::vector<double> per_input_error;
  double worst_delta = 0.0;
  /// H(E | X_1..X_n) in bits, inputs uniform.
  double cond_error_entropy = 0.0;
  /// (1 - prod(1 - 2 eps_g)) / 2 when every gate is XOR.
  std::optional<double> parity_closed_form;
};

/// Sweeps all 2^n patterns (n <= 20).
EvalReport eval_report(const GateTree& tree, std::span<const double> eps);

struct InfoAudit {
  std::size_t input = 0;
  bool sensitive = false;
  /// Lexicographically first configuration of the other inputs under which
  /// F depends on x_i; bit i is zero.
  Pattern configuration = 0;
  /// Error probability averaged over x_i with the configuration fixed.
  double error_probability = 0.0;
  double mutual_information = 0.0;
  double fano_lhs = 0.0;
  /// min(1, sum over occurrences of input i of prod_{g on path} (1 - 2 eps_g)^2).
  double sdpi_rhs = 0.0;
  bool fano_holds = false;
  bool sdpi_holds = false;
};

/// I(X; Y) with X = x_i uniform and the other inputs fixed to the first
/// sensitizing configuration. When F does not depend on x_i the row has
/// sensitive = false and no information quantities.
InfoAudit info_audit(const GateTree& tree, std::span<const double> eps, std::size_t input,
                     double slack = 1e-10);

struct SdpiCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// I(Z; U xor N) against (1 - 2 eps)^2 I(Z; U), N ~ Bernoulli(eps).
/// Throws DomainError for an invalid joint or eps outside [0, 1/2].
SdpiCheck sdpi_check(const Joint2x2& joint, double eps);

}  // namespace enrel
