#include "enrel/circuit.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <unordered_map>
#include <utility>

#include "enrel/errors.hpp"

namespace enrel {

// ---------------------------------------------------------------------------
// GateKind

GateKind::GateKind(Op op) : op_(op) {
  if (op == Op::Table) throw std::invalid_argument("use GateKind::table for truth tables");
}

GateKind GateKind::table(std::string_view bits) {
  if (bits.empty() || !std::has_single_bit(bits.size())) {
    throw std::invalid_argument("truth table length must be a power of two, got " +
                                std::to_string(bits.size()));
  }
  GateKind kind;
  kind.op_ = Op::Table;
  kind.table_.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1') {
      throw std::invalid_argument("truth table must contain only '0' and '1'");
    }
    kind.table_.push_back(ch == '1');
  }
  return kind;
}

std::optional<std::size_t> GateKind::table_arity() const {
  if (op_ != Op::Table) return std::nullopt;
  return static_cast<std::size_t>(std::countr_zero(table_.size()));
}

bool GateKind::eval(std::uint64_t packed, std::size_t arity) const {
  const std::uint64_t mask = arity >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << arity) - 1;
  const std::uint64_t bits = packed & mask;
  switch (op_) {
    case Op::And: return bits == mask;
    case Op::Nand: return bits != mask;
    case Op::Or: return bits != 0;
    case Op::Nor: return bits == 0;
    case Op::Xor: return (std::popcount(bits) & 1) != 0;
    case Op::Table: return table_.at(bits) != 0;
  }
  return false;
}

std::string GateKind::name() const {
  switch (op_) {
    case Op::Nand: return "NAND";
    case Op::Nor: return "NOR";
    case Op::And: return "AND";
    case Op::Or: return "OR";
    case Op::Xor: return "XOR";
    case Op::Table: {
      std::string s;
      for (auto b : table_) s.push_back(b ? '1' : '0');
      return s;
    }
  }
  return {};
}

GateKind parse_gate_kind(std::string_view name) {
  if (name == "NAND") return GateKind::nand();
  if (name == "NOR") return GateKind::nor();
  if (name == "AND") return GateKind::and_();
  if (name == "OR") return GateKind::or_();
  if (name == "XOR") return GateKind::xor_();
  throw std::invalid_argument("unknown gate kind '" + std::string(name) +
                              "' (expected NAND, NOR, AND, OR or XOR)");
}

// ---------------------------------------------------------------------------
// CircuitError

CircuitError::CircuitError(Code code, std::optional<std::size_t> gate,
                           const std::string& message)
    : std::runtime_error(std::string(to_string(code)) +
                         (gate ? " (gate " + std::to_string(*gate) + ")" : std::string()) +
                         ": " + message),
      code_(code),
      gate_(gate) {}

std::string_view to_string(CircuitError::Code code) {
  using C = CircuitError::Code;
  switch (code) {
    case C::Malformed: return "malformed circuit";
    case C::DuplicateId: return "duplicate gate id";
    case C::DanglingReference: return "dangling reference";
    case C::ZeroArity: return "gate without children";
    case C::ArityExceedsKMax: return "arity exceeds k_max";
    case C::TruthTableLength: return "truth table length mismatch";
    case C::DuplicateParent: return "gate has more than one parent";
    case C::Cycle: return "cycle";
    case C::RootHasParent: return "root has a parent";
    case C::Unreachable: return "gate not reachable from root";
    case C::InputOutOfRange: return "input index out of range";
    case C::MissingInput: return "input never used";
  }
  return "circuit error";
}

// ---------------------------------------------------------------------------
// GateTree

namespace {

using Code = CircuitError::Code;

// Post-order over gate children, left to right, without recursion.
std::vector<std::size_t> post_order(const std::vector<std::vector<std::size_t>>& kids,
                                    std::size_t root) {
  std::vector<std::size_t> order;
  order.reserve(kids.size());
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < kids[node].size()) {
      const std::size_t child = kids[node][next++];
      stack.emplace_back(child, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  return order;
}

}  // namespace

GateTree GateTree::build(std::vector<GateNode> nodes, std::size_t root,
                         std::optional<std::size_t> n_inputs,
                         std::optional<std::size_t> k_max) {
  const std::size_t n = nodes.size();
  if (n == 0) throw CircuitError(Code::Malformed, std::nullopt, "circuit has no gates");

  std::unordered_map<std::size_t, std::size_t> index_of;
  index_of.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_of.emplace(nodes[i].id, i).second) {
      throw CircuitError(Code::DuplicateId, nodes[i].id, "id listed more than once");
    }
  }
  const auto root_it = index_of.find(root);
  if (root_it == index_of.end()) {
    throw CircuitError(Code::DanglingReference, root, "root refers to an unknown gate");
  }
  const std::size_t root_index = root_it->second;

  // Local structure checks and gate-child adjacency in node-index space.
  std::vector<std::vector<std::size_t>> kids(n);
  std::vector<std::optional<std::size_t>> parent(n);
  std::size_t max_input = 0;
  bool any_input = false;
  for (std::size_t i = 0; i < n; ++i) {
    const GateNode& node = nodes[i];
    const std::size_t arity = node.children.size();
    if (arity == 0) throw CircuitError(Code::ZeroArity, node.id, "arity must be at least 1");
    if (auto ta = node.kind.table_arity(); ta && *ta != arity) {
      throw CircuitError(Code::TruthTableLength, node.id,
                         "truth table has " + std::to_string(node.kind.table_bits().size()) +
                             " entries but the gate has " + std::to_string(arity) +
                             " children");
    }
    if (k_max && arity > *k_max) {
      throw CircuitError(Code::ArityExceedsKMax, node.id,
                         "arity " + std::to_string(arity) + " > k_max " +
                             std::to_string(*k_max));
    }
    for (const ChildRef& child : node.children) {
      if (const auto* g = std::get_if<GateRef>(&child)) {
        const auto it = index_of.find(g->id);
        if (it == index_of.end()) {
          throw CircuitError(Code::DanglingReference, node.id,
                             "child refers to unknown gate " + std::to_string(g->id));
        }
        const std::size_t c = it->second;
        if (parent[c]) {
          throw CircuitError(Code::DuplicateParent, g->id,
                             "referenced by gates " + std::to_string(nodes[*parent[c]].id) +
                                 " and " + std::to_string(node.id));
        }
        parent[c] = i;
        kids[i].push_back(c);
      } else if (const auto* in = std::get_if<InputRef>(&child)) {
        if (n_inputs && in->index >= *n_inputs) {
          throw CircuitError(Code::InputOutOfRange, node.id,
                             "input " + std::to_string(in->index) + " >= n_inputs " +
                                 std::to_string(*n_inputs));
        }
        max_input = std::max(max_input, in->index);
        any_input = true;
      }
    }
  }

  // Each gate has at most one parent, so following parent links either ends
  // at a parentless gate or loops.
  {
    enum : std::uint8_t { kUnseen, kActive, kDone };
    std::vector<std::uint8_t> state(n, kUnseen);
    std::vector<std::size_t> chain;
    for (std::size_t start = 0; start < n; ++start) {
      chain.clear();
      std::optional<std::size_t> cur = start;
      while (cur && state[*cur] == kUnseen) {
        state[*cur] = kActive;
        chain.push_back(*cur);
        cur = parent[*cur];
      }
      if (cur && state[*cur] == kActive) {
        throw CircuitError(Code::Cycle, nodes[*cur].id, "gate is its own ancestor");
      }
      for (auto c : chain) state[c] = kDone;
    }
  }
  if (parent[root_index]) {
    throw CircuitError(Code::RootHasParent, root,
                       "root is a child of gate " + std::to_string(nodes[*parent[root_index]].id));
  }

  std::vector<std::size_t> order = post_order(kids, root_index);
  if (order.size() != n) {
    std::vector<bool> seen(n, false);
    for (auto i : order) seen[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!seen[i]) throw CircuitError(Code::Unreachable, nodes[i].id, "not below the root");
    }
  }

  // Keep the caller's ids when they are already dense and topological.
  bool keep = root == n - 1;
  for (std::size_t i = 0; keep && i < n; ++i) {
    if (nodes[i].id >= n) keep = false;
    for (auto c : kids[i]) {
      if (nodes[c].id >= nodes[i].id) keep = false;
    }
  }
  if (keep) {
    order.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) order[nodes[i].id] = i;
  }

  std::vector<GateId> new_id(n);
  for (std::size_t pos = 0; pos < n; ++pos) new_id[order[pos]] = pos;

  GateTree tree;
  tree.n_inputs_ = n_inputs ? *n_inputs : (any_input ? max_input + 1 : 0);
  tree.gates_.resize(n);
  tree.parent_.resize(n);
  tree.gate_children_.resize(n);
  tree.level_.assign(n, 0);
  tree.input_sinks_.assign(tree.n_inputs_, {});
  for (std::size_t pos = 0; pos < n; ++pos) {
    GateNode node = std::move(nodes[order[pos]]);
    node.id = pos;
    for (ChildRef& child : node.children) {
      if (auto* g = std::get_if<GateRef>(&child)) {
        g->id = new_id[index_of.at(g->id)];
        tree.gate_children_[pos].push_back(g->id);
        tree.parent_[g->id] = pos;
      } else if (const auto* in = std::get_if<InputRef>(&child)) {
        auto& sinks = tree.input_sinks_[in->index];
        if (sinks.empty() || sinks.back() != pos) sinks.push_back(pos);
      }
    }
    tree.k_max_ = std::max(tree.k_max_, node.children.size());
    tree.gates_[pos] = std::move(node);
  }
  for (std::size_t i = 0; i < tree.n_inputs_; ++i) {
    if (tree.input_sinks_[i].empty()) {
      throw CircuitError(Code::MissingInput, std::nullopt,
                         "input " + std::to_string(i) + " is not read by any gate");
    }
  }
  // Parents have larger ids, so one reverse sweep fixes every level.
  for (std::size_t pos = n; pos-- > 0;) {
    if (tree.parent_[pos]) tree.level_[pos] = tree.level_[*tree.parent_[pos]] + 1;
    tree.depth_ = std::max(tree.depth_, tree.level_[pos]);
  }
  return tree;
}

std::optional<GateId> GateTree::parent(GateId id) const { return parent_.at(id); }

// ---------------------------------------------------------------------------
// Generators

GateTree gen_balanced(std::size_t k, std::size_t d, const GateKind& kind) {
  if (k == 0) throw DomainError("gen_balanced: arity k must be at least 1");
  if (auto ta = kind.table_arity(); ta && *ta != k) {
    throw DomainError("gen_balanced: truth table arity does not match k");
  }
  // k^(d+1) is the input count; refuse anything above 2^20.
  constexpr std::size_t kMaxInputs = std::size_t{1} << 20;
  std::vector<std::size_t> level_width{1};
  std::size_t inputs = k;
  for (std::size_t level = 1; level <= d; ++level) {
    if (inputs > kMaxInputs / k) {
      throw DomainError("gen_balanced: k^(d+1) exceeds 2^20 inputs");
    }
    level_width.push_back(level_width.back() * k);
    inputs *= k;
  }
  if (inputs > kMaxInputs) throw DomainError("gen_balanced: k^(d+1) exceeds 2^20 inputs");

  // first_id[l] is the id of the leftmost gate on level l (root level 0).
  std::vector<std::size_t> first_id(d + 1);
  std::size_t next = 0;
  for (std::size_t l = d + 1; l-- > 0;) {
    first_id[l] = next;
    next += level_width[l];
  }
  std::vector<GateNode> nodes(next);
  for (std::size_t l = 0; l <= d; ++l) {
    for (std::size_t p = 0; p < level_width[l]; ++p) {
      GateNode& node = nodes[first_id[l] + p];
      node.id = first_id[l] + p;
      node.kind = kind;
      for (std::size_t j = 0; j < k; ++j) {
        if (l == d) {
          node.children.emplace_back(InputRef{p * k + j});
        } else {
          node.children.emplace_back(GateRef{first_id[l + 1] + p * k + j});
        }
      }
    }
  }
  return GateTree::build(std::move(nodes), first_id[0], inputs);
}

GateTree gen_line(std::size_t m, const GateKind& kind) {
  if (m == 0) throw DomainError("gen_line: gate count must be at least 1");
  if (auto ta = kind.table_arity(); ta && *ta != 2) {
    throw DomainError("gen_line: gates have two children");
  }
  std::vector<GateNode> nodes(m);
  for (std::size_t i = 0; i < m; ++i) {
    nodes[i].id = i;
    nodes[i].kind = kind;
    if (i == 0) {
      nodes[i].children = {InputRef{0}, InputRef{1}};
    } else {
      nodes[i].children = {GateRef{i - 1}, InputRef{i + 1}};
    }
  }
  return GateTree::build(std::move(nodes), m - 1, m + 1);
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::size_t parse_count(std::string_view field, std::string_view spec, const char* name) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw std::invalid_argument("circuit spec '" + std::string(spec) + "': field " + name +
                                " is not a non-negative integer");
  }
  return v;
}

}  // namespace

GateTree generate_from_spec(std::string_view spec) {
  const auto fields = split(spec, ':');
  if (fields[0] == "balanced" && fields.size() == 4) {
    return gen_balanced(parse_count(fields[1], spec, "k"), parse_count(fields[2], spec, "d"),
                        parse_gate_kind(fields[3]));
  }
  if (fields[0] == "line" && fields.size() == 3) {
    return gen_line(parse_count(fields[1], spec, "m"), parse_gate_kind(fields[2]));
  }
  throw std::invalid_argument("circuit spec '" + std::string(spec) +
                              "': expected balanced:K:D:KIND or line:M:KIND");
}

// ---------------------------------------------------------------------------
// Paths

std::vector<GateId> path_to_root(const GateTree& tree, GateId leaf) {
  std::vector<GateId> path{leaf};
  for (auto p = tree.parent(leaf); p; p = tree.parent(*p)) path.push_back(*p);
  return path;
}

std::vector<std::vector<GateId>> maximal_paths(const GateTree& tree) {
  std::vector<std::vector<GateId>> paths;
  for (GateId g = 0; g < tree.size(); ++g) {
    if (tree.is_leaf_gate(g)) paths.push_back(path_to_root(tree, g));
  }
  return paths;
}

std::vector<GateId> input_path(const GateTree& tree, std::size_t i) {
  if (i >= tree.n_inputs()) {
    throw std::out_of_range("input " + std::to_string(i) + " out of range (n_inputs = " +
                            std::to_string(tree.n_inputs()) + ")");
  }
  GateId best = tree.input_sinks(i).front();
  for (GateId g : tree.input_sinks(i)) {
    if (tree.level(g) > tree.level(best)) best = g;
  }
  return path_to_root(tree, best);
}

std::size_t max_input_path_length(const GateTree& tree) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < tree.n_inputs(); ++i) {
    for (GateId g : tree.input_sinks(i)) best = std::max(best, tree.level(g) + 1);
  }
  return best;
}

}  // namespace enrel
