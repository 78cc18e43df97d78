#include "enrel/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "enrel/errors.hpp"

namespace enrel {
namespace {

void check_pattern(const GateTree& tree, Pattern x) {
  const std::size_t n = tree.n_inputs();
  if (n > 63) throw PreconditionError("patterns support at most 63 inputs");
  if (x >> n) {
    throw PreconditionError("pattern " + std::to_string(x) + " is wider than " +
                            std::to_string(n) + " inputs");
  }
}

void check_eps(const GateTree& tree, std::span<const double> eps) {
  if (eps.size() != tree.size()) {
    throw PreconditionError("expected " + std::to_string(tree.size()) + " failure probabilities, got " +
                            std::to_string(eps.size()));
  }
  for (double e : eps) {
    if (!(e >= 0.0 && e < 1.0)) throw DomainError("gate failure probability must lie in [0, 1)");
  }
}

// P(gate output = 1) before noise, children independent with P(1) = p[j].
double clean_one_probability(const GateKind& kind, std::span<const double> p) {
  const std::size_t m = p.size();
  switch (kind.op()) {
    case GateKind::Op::And:
    case GateKind::Op::Nand: {
      double all = 1.0;
      for (double q : p) all *= q;
      return kind.op() == GateKind::Op::And ? all : 1.0 - all;
    }
    case GateKind::Op::Or:
    case GateKind::Op::Nor: {
      double none = 1.0;
      for (double q : p) none *= 1.0 - q;
      return kind.op() == GateKind::Op::Or ? 1.0 - none : none;
    }
    case GateKind::Op::Xor: {
      double bias = 1.0;
      for (double q : p) bias *= 1.0 - 2.0 * q;
      return 0.5 * (1.0 - bias);
    }
    case GateKind::Op::Table: {
      double total = 0.0;
      for (std::uint64_t packed = 0; packed < (std::uint64_t{1} << m); ++packed) {
        if (!kind.eval(packed, m)) continue;
        double w = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
          const bool bit = (packed >> (m - 1 - j)) & 1U;
          w *= bit ? p[j] : 1.0 - p[j];
        }
        total += w;
      }
      return total;
    }
  }
  return 0.0;
}

double wire_probability(const ChildRef& child, std::span<const double> gate_p, Pattern x) {
  if (const auto* g = std::get_if<GateRef>(&child)) return gate_p[g->id];
  if (const auto* in = std::get_if<InputRef>(&child)) return ((x >> in->index) & 1U) ? 1.0 : 0.0;
  return std::get<ConstRef>(child).value ? 1.0 : 0.0;
}

}  // namespace

double output_one_probability(const GateTree& tree, std::span<const double> eps, Pattern x) {
  check_eps(tree, eps);
  check_pattern(tree, x);
  std::vector<double> p(tree.size());
  std::vector<double> child_p;
  for (const GateNode& node : tree.gates()) {
    child_p.clear();
    for (const ChildRef& c : node.children) child_p.push_back(wire_probability(c, p, x));
    const double clean = clean_one_probability(node.kind, child_p);
    const double e = eps[node.id];
    p[node.id] = clean * (1.0 - e) + (1.0 - clean) * e;
  }
  return p[tree.root()];
}

bool eval_function(const GateTree& tree, Pattern x) {
  const std::vector<double> zero(tree.size(), 0.0);
  return output_one_probability(tree, zero, x) > 0.5;
}

double eval_exact(const GateTree& tree, std::span<const double> eps, Pattern x) {
  const double q = output_one_probability(tree, eps, x);
  return eval_function(tree, x) ? 1.0 - q : q;
}

EvalReport eval_report(const GateTree& tree, std::span<const double> eps) {
  const std::size_t n = tree.n_inputs();
  if (n > 20) throw PreconditionError("eval_report sweeps 2^n patterns and needs n <= 20");
  EvalReport r;
  const Pattern count = Pattern{1} << n;
  r.per_input_error.resize(count);
  double entropy = 0.0;
  for (Pattern x = 0; x < count; ++x) {
    const double pe = eval_exact(tree, eps, x);
    r.per_input_error[x] = pe;
    r.worst_delta = std::max(r.worst_delta, pe);
    entropy += binary_entropy(pe);
  }
  r.cond_error_entropy = entropy / static_cast<double>(count);
  const bool all_xor = std::all_of(tree.gates().begin(), tree.gates().end(), [](const GateNode& g) {
    return g.kind.op() == GateKind::Op::Xor;
  });
  if (all_xor) {
    double bias = 1.0;
    for (double e : eps) bias *= 1.0 - 2.0 * e;
    r.parity_closed_form = 0.5 * (1.0 - bias);
  }
  return r;
}

InfoAudit info_audit(const GateTree& tree, std::span<const double> eps, std::size_t input,
                     double slack) {
  const std::size_t n = tree.n_inputs();
  if (input >= n) throw PreconditionError("input index out of range");
  if (n > 20) throw PreconditionError("info_audit searches 2^(n-1) configurations and needs n <= 20");
  check_eps(tree, eps);

  InfoAudit a;
  a.input = input;
  const Pattern bit = Pattern{1} << input;
  for (Pattern x = 0; x < (Pattern{1} << n); ++x) {
    if (x & bit) continue;
    if (eval_function(tree, x) != eval_function(tree, x | bit)) {
      a.sensitive = true;
      a.configuration = x;
      break;
    }
  }
  if (!a.sensitive) return a;

  const double q0 = output_one_probability(tree, eps, a.configuration);
  const double q1 = output_one_probability(tree, eps, a.configuration | bit);
  a.error_probability =
      0.5 * (eval_exact(tree, eps, a.configuration) + eval_exact(tree, eps, a.configuration | bit));
  a.mutual_information = uniform_input_mutual_information(q0, q1);
  a.fano_lhs = 1.0 - binary_entropy(a.error_probability);

  double rhs = 0.0;
  for (GateId sink : tree.input_sinks(input)) {
    double product = 1.0;
    for (GateId g : path_to_root(tree, sink)) product *= (1.0 - 2.0 * eps[g]) * (1.0 - 2.0 * eps[g]);
    rhs += product;
  }
  a.sdpi_rhs = std::min(1.0, rhs);
  a.fano_holds = a.fano_lhs <= a.mutual_information + slack;
  a.sdpi_holds = a.mutual_information <= a.sdpi_rhs + slack;
  return a;
}

SdpiCheck sdpi_check(const Joint2x2& joint, double eps) {
  if (!(eps >= 0.0 && eps <= 0.5)) throw DomainError("eps must lie in [0, 1/2]");
  double mass = 0.0;
  for (const auto& row : joint) {
    for (double v : row) {
      if (!(v >= 0.0)) throw DomainError("joint distribution has a negative entry");
      mass += v;
    }
  }
  if (std::abs(mass - 1.0) > 1e-9) throw DomainError("joint distribution does not sum to 1");

  Joint2x2 noisy{};
  for (int z = 0; z < 2; ++z) {
    noisy[z][0] = joint[z][0] * (1.0 - eps) + joint[z][1] * eps;
    noisy[z][1] = joint[z][1] * (1.0 - eps) + joint[z][0] * eps;
  }
  SdpiCheck r;
  r.lhs = mutual_information(noisy);
  r.rhs = (1.0 - 2.0 * eps) * (1.0 - 2.0 * eps) * mutual_information(joint);
  r.pass = r.lhs <= r.rhs + 1e-12;
  return r;
}

}  // namespace enrel
