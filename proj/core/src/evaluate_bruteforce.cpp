#include <string>

#include "enrel/errors.hpp"
#include "enrel/evaluate.hpp"

namespace enrel {

double eval_bruteforce(const GateTree& tree, std::span<const double> eps, Pattern x) {
  const std::size_t n = tree.size();
  if (n > 20) throw PreconditionError("eval_bruteforce enumerates 2^|V_g| flips and needs |V_g| <= 20");
  if (eps.size() != n) throw PreconditionError("eps size does not match the circuit");
  const bool truth = eval_function(tree, x);

  std::vector<bool> out(n);
  double error = 0.0;
  for (std::uint64_t flips = 0; flips < (std::uint64_t{1} << n); ++flips) {
    double weight = 1.0;
    for (GateId g = 0; g < n; ++g) weight *= ((flips >> g) & 1U) ? eps[g] : 1.0 - eps[g];
    if (weight == 0.0) continue;
    for (const GateNode& node : tree.gates()) {
      const std::size_t m = node.children.size();
      std::uint64_t packed = 0;
      for (const ChildRef& c : node.children) {
        bool v;
        if (const auto* g = std::get_if<GateRef>(&c)) {
          v = out[g->id];
        } else if (const auto* in = std::get_if<InputRef>(&c)) {
          v = (x >> in->index) & 1U;
        } else {
          v = std::get<ConstRef>(c).value;
        }
        packed = (packed << 1) | (v ? 1U : 0U);
      }
      out[node.id] = node.kind.eval(packed, m) != (((flips >> node.id) & 1U) != 0);
    }
    if (out[tree.root()] != truth) error += weight;
  }
  return error;
}

}  // namespace enrel
