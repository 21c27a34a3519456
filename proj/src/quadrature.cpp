#include "wetting/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wetting {

QuadratureRule gauss_legendre(int k, double a, double b) {
  if (k < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureRule r;
  r.nodes.resize(static_cast<std::size_t>(k));
  r.weights.resize(static_cast<std::size_t>(k));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (k + 1) / 2; ++i) {
    // Newton on P_k from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = k * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= k; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = k * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(k - 1 - i);
    r.nodes[lo] = mid - half * x;
    r.nodes[hi] = mid + half * x;
    r.weights[lo] = r.weights[hi] = half * w;
  }
  return r;
}

QuadratureRule trapezoid(int k, double a, double b) {
  if (k < 1) throw std::invalid_argument("trapezoid: need at least one panel");
  std::vector<double> nodes(static_cast<std::size_t>(k + 1));
  for (int i = 0; i <= k; ++i) nodes[static_cast<std::size_t>(i)] = a + (b - a) * i / k;
  return trapezoid_on(nodes);
}

QuadratureRule trapezoid_on(const std::vector<double>& nodes) {
  if (nodes.size() < 2) throw std::invalid_argument("trapezoid: insufficient nodes (need at least 2)");
  QuadratureRule r;
  r.nodes = nodes;
  r.weights.assign(nodes.size(), 0.0);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double w = nodes[i + 1] - nodes[i];
    if (w < 0.0) throw std::invalid_argument("trapezoid: nodes must be sorted");
    r.weights[i] += 0.5 * w;
    r.weights[i + 1] += 0.5 * w;
  }
  return r;
}

QuadratureRule QuadratureSpec::rule(double a, double b) const {
  return kind == QuadratureKind::gauss ? gauss_legendre(points, a, b) : trapezoid(points, a, b);
}

std::string QuadratureSpec::name() const {
  return (kind == QuadratureKind::gauss ? "gauss(" : "trapezoid(") + std::to_string(points) + ")";
}

}  // namespace wetting
