#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "enrel/alloc.hpp"
#include "enrel/circuit.hpp"
#include "enrel/efmodel.hpp"

namespace enrel::testing {

using Rng = std::mt19937_64;

struct RandomTreeOptions {
  std::size_t min_gates = 1;
  std::size_t max_gates = 64;
  std::size_t max_arity = 3;
  /// Let a primary input feed several gates.
  bool fan_out = false;
  /// Draw gate kinds from AND, OR, XOR, NAND, NOR (otherwise all AND).
  bool mixed_kinds = true;
};

GateTree random_tree(Rng& rng, const RandomTreeOptions& options = {});

/// Uniform in [lo, hi).
double uniform(Rng& rng, double lo, double hi);

/// Minimum-energy allocation under the child-sum condition
/// eps_g^p = sum eps_c^p with p = 1/beta - 1 (the exponent as printed for the
/// polynomial family). Undefined for beta = 1.
Allocation printed_polynomial_alloc(const GateTree& tree, const EnergyFailureModel& model,
                                    double gamma);

/// Unordered rooted tree: children of every internal node, node 0 is the
/// root. Internal nodes have between 2 and k children.
struct Shape {
  std::vector<std::vector<std::size_t>> children;

  std::size_t leaves() const;
  std::size_t internal_nodes() const;
  /// Edges on the longest root-to-leaf path.
  std::size_t depth() const;
};

/// Every unordered rooted tree with `leaves` leaves and internal arity in
/// [2, k], each exactly once.
std::vector<Shape> enumerate_shapes(std::size_t leaves, std::size_t k);

/// The balanced k-ary tree on `leaves` leaves: repeated merging of the
/// oldest nodes, first merging 2 + (leaves - 2) mod (k - 1) of them so every
/// later merge takes exactly k.
Shape balanced_shape(std::size_t leaves, std::size_t k);

}  // namespace enrel::testing
