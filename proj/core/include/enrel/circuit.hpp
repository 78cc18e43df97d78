#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace enrel {

using GateId = std::size_t;

/// Boolean operation of a gate. Named kinds work for any arity; truth tables
/// are indexed by the child bits with the first child as the most
/// significant bit, so "0001" is a two-input AND.
class GateKind {
 public:
  enum class Op { Nand, Nor, And, Or, Xor, Table };

  GateKind() = default;
  explicit GateKind(Op op);
  static GateKind nand() { return GateKind(Op::Nand); }
  static GateKind nor() { return GateKind(Op::Nor); }
  static GateKind and_() { return GateKind(Op::And); }
  static GateKind or_() { return GateKind(Op::Or); }
  static GateKind xor_() { return GateKind(Op::Xor); }
  /// `bits` is a string of '0'/'1' whose length must be a power of two.
  static GateKind table(std::string_view bits);

  Op op() const { return op_; }
  /// Arity fixed by a truth table; nullopt for named kinds.
  std::optional<std::size_t> table_arity() const;
  const std::vector<std::uint8_t>& table_bits() const { return table_; }

  /// Output for child values packed as an integer (first child = MSB).
  bool eval(std::uint64_t packed, std::size_t arity) const;

  /// "AND", "XOR", ... or the truth-table string.
  std::string name() const;

  friend bool operator==(const GateKind&, const GateKind&) = default;

 private:
  Op op_ = Op::And;
  std::vector<std::uint8_t> table_;
};

/// Parses "NAND", "NOR", "AND", "OR", "XOR" (case-sensitive).
GateKind parse_gate_kind(std::string_view name);

struct GateRef {
  GateId id;
  friend bool operator==(const GateRef&, const GateRef&) = default;
};
struct InputRef {
  std::size_t index;
  friend bool operator==(const InputRef&, const InputRef&) = default;
};
struct ConstRef {
  bool value;
  friend bool operator==(const ConstRef&, const ConstRef&) = default;
};
using ChildRef = std::variant<GateRef, InputRef, ConstRef>;

struct GateNode {
  GateId id = 0;
  GateKind kind;
  std::vector<ChildRef> children;
};

class CircuitError : public std::runtime_error {
 public:
  enum class Code {
    Malformed,
    DuplicateId,
    DanglingReference,
    ZeroArity,
    ArityExceedsKMax,
    TruthTableLength,
    DuplicateParent,
    Cycle,
    RootHasParent,
    Unreachable,
    InputOutOfRange,
    MissingInput,
  };

  CircuitError(Code code, std::optional<std::size_t> gate, const std::string& message);

  Code code() const { return code_; }
  /// Offending gate id as written in the input, when there is one.
  std::optional<std::size_t> gate() const { return gate_; }

 private:
  Code code_;
  std::optional<std::size_t> gate_;
};

std::string_view to_string(CircuitError::Code code);

/// A formula: gates connected as a rooted tree, inputs and constants at the
/// leaves. Gate ids are dense and topologically ordered (children before
/// parents), so the root is always the last gate.
class GateTree {
 public:
  /// Validates `nodes` and renumbers them in post-order from `root` (children
  /// left to right). Ids in `nodes` may be arbitrary non-negative integers.
  /// Throws CircuitError.
  static GateTree build(std::vector<GateNode> nodes, std::size_t root,
                        std::optional<std::size_t> n_inputs = std::nullopt,
                        std::optional<std::size_t> k_max = std::nullopt);

  std::size_t size() const { return gates_.size(); }
  std::span<const GateNode> gates() const { return gates_; }
  const GateNode& gate(GateId id) const { return gates_.at(id); }
  GateId root() const { return gates_.size() - 1; }

  std::size_t n_inputs() const { return n_inputs_; }
  /// Largest number of children (gates, inputs and constants) of any gate.
  std::size_t k_max() const { return k_max_; }
  /// Levels below the root: a single gate has depth 0.
  std::size_t depth() const { return depth_; }

  std::optional<GateId> parent(GateId id) const;
  std::span<const GateId> gate_children(GateId id) const { return gate_children_.at(id); }
  bool is_leaf_gate(GateId id) const { return gate_children_.at(id).empty(); }
  /// Distance from the root (root = 0).
  std::size_t level(GateId id) const { return level_.at(id); }
  /// Gates that read input `i` directly, in increasing id order.
  std::span<const GateId> input_sinks(std::size_t i) const { return input_sinks_.at(i); }

 private:
  GateTree() = default;

  std::vector<GateNode> gates_;
  std::vector<std::optional<GateId>> parent_;
  std::vector<std::vector<GateId>> gate_children_;
  std::vector<std::size_t> level_;
  std::vector<std::vector<GateId>> input_sinks_;
  std::size_t n_inputs_ = 0;
  std::size_t k_max_ = 0;
  std::size_t depth_ = 0;
};

/// Parses the JSON circuit format:
/// {"k_max": 2, "n_inputs": 4, "root": 2,
///  "gates": [{"id": 0, "kind": "AND", "children": [{"input": 0}, {"gate": 1}, {"const": 0}]}]}
/// `kind` is a gate name or {"table": "0110"}. Throws CircuitError.
GateTree parse_circuit(std::string_view text);

/// Serializes in the same format (ids as renumbered).
std::string to_json(const GateTree& tree);

/// Full k-ary tree of depth d. Leaf gates get ids 0..k^d-1 left to right,
/// then each level above, root last; inputs are numbered left to right.
GateTree gen_balanced(std::size_t k, std::size_t d, const GateKind& kind);

/// Chain of m two-input gates: gate 0 reads inputs 0 and 1, gate i reads
/// gate i-1 and input i+1. The root is gate m-1.
GateTree gen_line(std::size_t m, const GateKind& kind);

/// Parses `balanced:K:D:KIND` or `line:M:KIND`.
GateTree generate_from_spec(std::string_view spec);

/// Gate ids from `leaf` (inclusive) up to the root.
std::vector<GateId> path_to_root(const GateTree& tree, GateId leaf);

/// One path per leaf gate, ordered by leaf id, each listed leaf to root.
std::vector<std::vector<GateId>> maximal_paths(const GateTree& tree);

/// Path from the gate receiving input i up to the root. When input i fans
/// out to several gates, the longest such path is returned (ties broken by
/// the smaller gate id). Throws std::out_of_range for an unknown input.
std::vector<GateId> input_path(const GateTree& tree, std::size_t i);

/// max_i |P_i| over all inputs.
std::size_t max_input_path_length(const GateTree& tree);

}  // namespace enrel
