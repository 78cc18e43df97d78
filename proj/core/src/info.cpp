#include "enrel/info.hpp"

#include <cmath>

namespace enrel {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double mutual_information(const Joint2x2& joint) {
  const double pa[2] = {joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]};
  const double pb[2] = {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double p = joint[a][b];
      if (p <= 0.0) continue;
      total += p * std::log2(p / (pa[a] * pb[b]));
    }
  }
  // Rounding can leave a tiny negative value for independent variables.
  return total < 0.0 ? 0.0 : total;
}

double uniform_input_mutual_information(double q0, double q1) {
  const double mi =
      binary_entropy(0.5 * (q0 + q1)) - 0.5 * (binary_entropy(q0) + binary_entropy(q1));
  return mi < 0.0 ? 0.0 : mi;
}

}  // namespace enrel
