#pragma once

#include <functional>
#include <vector>

namespace lsint {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Computes the n-point rule by Newton iteration on the three-term recurrence.
GaussLegendreRule gauss_legendre(int n);

/// Composite rule: `subintervals` equal panels on [a, b], each with `order` nodes.
double composite_gauss_legendre(const std::function<double(double)>& f, double a,
                                double b, int order, int subintervals);

} // namespace lsint
