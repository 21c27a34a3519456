#pragma once

#include <string>
#include <vector>

namespace wetting {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// k-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int k, double a, double b);

/// Composite trapezoid rule on k equal panels of [a, b] (k + 1 nodes).
QuadratureRule trapezoid(int k, double a, double b);

/// Trapezoid weights for an arbitrary sorted node list.
QuadratureRule trapezoid_on(const std::vector<double>& nodes);

enum class QuadratureKind { gauss, trapezoid };

struct QuadratureSpec {
  QuadratureKind kind = QuadratureKind::gauss;
  int points = 32;

  QuadratureRule rule(double a, double b) const;
  std::string name() const;
};

}  // namespace wetting
