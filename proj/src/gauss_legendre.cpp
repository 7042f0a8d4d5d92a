#include "lsint/gauss_legendre.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lsint {

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1)
    throw std::invalid_argument("gauss_legendre: n must be positive");

  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  // Roots are symmetric; solve for the upper half.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
    rule.nodes[n / 2] = 0.0;
  return rule;
}

double composite_gauss_legendre(const std::function<double(double)>& f, double a,
                                double b, int order, int subintervals) {
  const GaussLegendreRule rule = gauss_legendre(order);
  const double width = (b - a) / subintervals;
  double total = 0.0;
  for (int s = 0; s < subintervals; ++s) {
    const double lo = a + s * width;
    const double mid = lo + 0.5 * width;
    double panel = 0.0;
    for (int q = 0; q < order; ++q)
      panel += rule.weights[q] * f(mid + 0.5 * width * rule.nodes[q]);
    total += 0.5 * width * panel;
  }
  return total;
}

} // namespace lsint
