#pragma once

#include <span>
#include <vector>

namespace levy {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]. Rules are computed once per n
/// and cached; the returned reference stays valid for the program lifetime.
const QuadratureRule& gauss_legendre(int n);

/// Gauss-Legendre rule mapped onto [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Composite Simpson weights for n (even) uniform intervals of width h.
std::vector<double> simpson_weights(int intervals, double h);

/// Composite trapezoid weights for n uniform intervals of width h.
std::vector<double> trapezoid_weights(int intervals, double h);

}  // namespace levy
