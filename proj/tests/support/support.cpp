#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

namespace enrel::testing {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

GateKind random_kind(Rng& rng, bool mixed) {
  if (!mixed) return GateKind::and_();
  static const GateKind kinds[] = {GateKind::and_(), GateKind::or_(), GateKind::xor_(),
                                   GateKind::nand(), GateKind::nor()};
  return kinds[pick(rng, 0, 4)];
}

}  // namespace

GateTree random_tree(Rng& rng, const RandomTreeOptions& options) {
  const std::size_t n = pick(rng, options.min_gates, options.max_gates);
  const std::size_t k = options.max_arity;

  std::vector<std::vector<std::size_t>> gate_kids(n);
  std::vector<std::size_t> open{0};
  for (std::size_t g = 1; g < n; ++g) {
    const std::size_t slot = pick(rng, 0, open.size() - 1);
    const std::size_t parent = open[slot];
    gate_kids[parent].push_back(g);
    if (gate_kids[parent].size() == k) open.erase(open.begin() + static_cast<std::ptrdiff_t>(slot));
    open.push_back(g);
  }

  std::vector<GateNode> nodes(n);
  std::size_t input_slots = 0;
  std::vector<std::size_t> arity(n);
  for (std::size_t g = 0; g < n; ++g) {
    const std::size_t c = gate_kids[g].size();
    arity[g] = pick(rng, std::max<std::size_t>(1, c), std::max(c, k));
    input_slots += arity[g] - c;
  }
  std::vector<std::size_t> inputs(input_slots);
  for (std::size_t i = 0; i < input_slots; ++i) inputs[i] = i;
  if (options.fan_out) {
    const std::size_t pool = std::max<std::size_t>(1, (input_slots + 1) / 2);
    std::map<std::size_t, std::size_t> dense;
    for (auto& v : inputs) {
      const std::size_t raw = pick(rng, 0, pool - 1);
      v = dense.try_emplace(raw, dense.size()).first->second;
    }
  }

  std::size_t next_input = 0;
  for (std::size_t g = 0; g < n; ++g) {
    GateNode& node = nodes[g];
    node.id = g;
    node.kind = random_kind(rng, options.mixed_kinds);
    for (std::size_t c : gate_kids[g]) node.children.push_back(GateRef{c});
    while (node.children.size() < arity[g]) node.children.push_back(InputRef{inputs[next_input++]});
    std::shuffle(node.children.begin(), node.children.end(), rng);
  }
  return GateTree::build(std::move(nodes), 0);
}

Allocation printed_polynomial_alloc(const GateTree& tree, const EnergyFailureModel& model,
                                    double gamma) {
  if (model.family() != Family::Polynomial || model.beta() == 1.0) {
    throw std::invalid_argument("printed variant needs a polynomial model with beta != 1");
  }
  // eps_g^-q = sum eps_c^-q with q = 1 - 1/beta; each subtree keeps a fixed
  // share of its path budget at its root.
  const double q = 1.0 - 1.0 / model.beta();
  const std::size_t n = tree.size();
  std::vector<double> share(n, 1.0), eps(n), budget(n);
  for (GateId g = 0; g < n; ++g) {
    const auto kids = tree.gate_children(g);
    if (kids.empty()) continue;
    double s = 0.0;
    for (GateId c : kids) s += std::pow(share[c], -q);
    const double rho = std::pow(s, -1.0 / q);
    share[g] = rho / (1.0 + rho);
  }
  budget[tree.root()] = gamma;
  for (GateId g = n; g-- > 0;) {
    eps[g] = share[g] * budget[g];
    for (GateId c : tree.gate_children(g)) budget[c] = budget[g] - eps[g];
  }
  return allocation_from_eps(model, std::move(eps));
}

std::size_t Shape::leaves() const {
  return static_cast<std::size_t>(
      std::count_if(children.begin(), children.end(), [](const auto& c) { return c.empty(); }));
}

std::size_t Shape::internal_nodes() const { return children.size() - leaves(); }

std::size_t Shape::depth() const {
  std::function<std::size_t(std::size_t)> walk = [&](std::size_t v) -> std::size_t {
    std::size_t d = 0;
    for (std::size_t c : children[v]) d = std::max(d, 1 + walk(c));
    return d;
  };
  return walk(0);
}

namespace {

// Catalog of canonical trees; a tree is the sorted list of its subtrees' ids.
struct Catalog {
  std::vector<std::vector<std::size_t>> kids;
  std::vector<std::size_t> leaf_count;
  std::vector<std::vector<std::size_t>> by_leaves;

  void build(std::size_t max_leaves, std::size_t k) {
    by_leaves.assign(max_leaves + 1, {});
    kids.push_back({});
    leaf_count.push_back(1);
    by_leaves[1].push_back(0);
    for (std::size_t L = 2; L <= max_leaves; ++L) {
      std::vector<std::size_t> chosen;
      extend(L, k, chosen, 0, 0);
    }
  }

  // Appends subtree ids in nondecreasing order until the leaf total is L.
  void extend(std::size_t L, std::size_t k, std::vector<std::size_t>& chosen, std::size_t min_id,
              std::size_t sum) {
    if (sum == L && chosen.size() >= 2) {
      const std::size_t id = kids.size();
      kids.push_back(chosen);
      leaf_count.push_back(L);
      by_leaves[L].push_back(id);
      return;
    }
    if (chosen.size() == k || sum >= L) return;
    const std::size_t existing = kids.size();
    for (std::size_t id = min_id; id < existing; ++id) {
      if (leaf_count[id] >= L || sum + leaf_count[id] > L) continue;
      chosen.push_back(id);
      extend(L, k, chosen, id, sum + leaf_count[id]);
      chosen.pop_back();
    }
  }

  Shape expand(std::size_t id) const {
    Shape s;
    std::function<std::size_t(std::size_t)> add = [&](std::size_t t) -> std::size_t {
      const std::size_t v = s.children.size();
      s.children.emplace_back();
      for (std::size_t c : kids[t]) {
        const std::size_t child = add(c);
        s.children[v].push_back(child);
      }
      return v;
    };
    add(id);
    return s;
  }
};

}  // namespace

std::vector<Shape> enumerate_shapes(std::size_t leaves, std::size_t k) {
  if (leaves == 0 || k < 2) throw std::invalid_argument("need leaves >= 1 and k >= 2");
  Catalog cat;
  cat.build(leaves, k);
  std::vector<Shape> out;
  for (std::size_t id : cat.by_leaves[leaves]) out.push_back(cat.expand(id));
  return out;
}

Shape balanced_shape(std::size_t leaves, std::size_t k) {
  if (leaves == 0 || k < 2) throw std::invalid_argument("need leaves >= 1 and k >= 2");
  // Build bottom-up with temporary ids, then relabel so the root is node 0.
  std::vector<std::vector<std::size_t>> kids(leaves);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < leaves; ++i) queue.push_back(i);
  std::size_t take = leaves >= 2 ? 2 + (leaves - 2) % (k - 1) : 0;
  while (queue.size() > 1) {
    std::vector<std::size_t> group(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(take));
    queue.erase(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(take));
    kids.push_back(group);
    queue.push_back(kids.size() - 1);
    take = k;
  }
  Shape s;
  std::function<std::size_t(std::size_t)> add = [&](std::size_t t) -> std::size_t {
    const std::size_t v = s.children.size();
    s.children.emplace_back();
    for (std::size_t c : kids[t]) {
      const std::size_t child = add(c);
      s.children[v].push_back(child);
    }
    return v;
  };
  add(queue.front());
  return s;
}

}  // namespace enrel::testing
