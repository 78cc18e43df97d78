#pragma once

#include <array>

namespace enrel {

/// h(p) = -p log2 p - (1-p) log2 (1-p), with h(0) = h(1) = 0.
double binary_entropy(double p);

/// 2x2 joint distribution P(A = a, B = b), stored as p[a][b].
using Joint2x2 = std::array<std::array<double, 2>, 2>;

/// I(A;B) in bits. Zero-probability cells contribute nothing.
double mutual_information(const Joint2x2& joint);

/// I(X;Y) in bits for uniform binary X and P(Y = 1 | X = x) = q[x].
double uniform_input_mutual_information(double q0, double q1);

}  // namespace enrel
