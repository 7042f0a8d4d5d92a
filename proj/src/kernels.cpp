#include "lsint/kernels.hpp"

#include "lsint/errors.hpp"
#include "lsint/gauss_legendre.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lsint {

namespace {

constexpr double kExponentFloor = -700.0;
constexpr double kConditionLimit = 1e14;
constexpr double kMassTolerance = 1e-10;
constexpr double kMomentTolerance = 1e-8;

double horner(const std::vector<double>& coeffs, double r) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * r + *it;
  return acc;
}

double weighted_moment(WeightFamily family, double rho, int p) {
  return composite_gauss_legendre(
      [&](double r) { return weight_eval(family, r, rho) * std::pow(r, p); }, rho,
      1.0, detail::kMomentOrder, detail::kMomentPanels);
}

// Dense LU with partial pivoting. `a` is row-major n x n and is overwritten.
std::vector<double> lu_solve(std::vector<double> a, std::vector<double> b, int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i)
    perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row)
      if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col]))
        pivot = row;
    if (a[pivot * n + col] == 0.0)
      throw SingularMomentSystem("moment matrix has a zero pivot",
                                 std::numeric_limits<double>::infinity());
    if (pivot != col) {
      for (int k = 0; k < n; ++k)
        std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(b[col], b[pivot]);
    }
    for (int row = col + 1; row < n; ++row) {
      const double factor = a[row * n + col] / a[col * n + col];
      a[row * n + col] = 0.0;
      for (int k = col + 1; k < n; ++k)
        a[row * n + k] -= factor * a[col * n + k];
      b[row] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (int row = n - 1; row >= 0; --row) {
    double acc = b[row];
    for (int k = row + 1; k < n; ++k)
      acc -= a[row * n + k] * x[k];
    x[row] = acc / a[row * n + row];
  }
  return x;
}

double inf_norm(const std::vector<double>& a, int n) {
  double best = 0.0;
  for (int row = 0; row < n; ++row) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
      sum += std::abs(a[row * n + k]);
    best = std::max(best, sum);
  }
  return best;
}

} // namespace

std::string_view to_string(WeightFamily family) {
  switch (family) {
  case WeightFamily::Bump:
    return "bump";
  case WeightFamily::ShiftedBump:
    return "shifted";
  }
  return "unknown";
}

WeightFamily parse_weight_family(std::string_view name) {
  if (name == "bump")
    return WeightFamily::Bump;
  if (name == "shifted" || name == "shifted-bump")
    return WeightFamily::ShiftedBump;
  throw std::invalid_argument(fmt::format("unknown kernel family '{}'", name));
}

double weight_eval(WeightFamily family, double r, double rho) {
  const double lo = (family == WeightFamily::Bump) ? 0.0 : rho;
  if (!(r > lo) || !(r < 1.0))
    return 0.0;
  const double centred = 2.0 * r - 1.0 - lo;
  const double half_width = 1.0 - lo;
  const double denom = centred * centred - half_width * half_width;
  if (denom >= 0.0)
    return 0.0;
  const double exponent = 2.0 / denom;
  if (exponent <= kExponentFloor)
    return 0.0;
  return std::exp(exponent);
}

double Kernel::operator()(double r) const { return kernel_eval(*this, r); }

Kernel build_kernel(WeightFamily family, int m, double rho) {
  if (m < 1)
    throw std::invalid_argument("build_kernel: need at least one vanishing moment");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::invalid_argument("build_kernel: support_lo must lie in [0, 1)");
  if (family == WeightFamily::Bump && rho != 0.0)
    throw std::invalid_argument("build_kernel: the bump family has support_lo = 0");

  const int n = m + 1;
  std::vector<double> moments(2 * m + 1);
  for (int p = 0; p <= 2 * m; ++p)
    moments[p] = weighted_moment(family, rho, p);

  std::vector<double> gram(n * n);
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col)
      gram[row * n + col] = moments[row + col];

  std::vector<double> rhs(n, 0.0);
  rhs[0] = 1.0;

  // Condition estimate from the explicit inverse; the system is tiny.
  std::vector<double> inverse(n * n);
  for (int col = 0; col < n; ++col) {
    std::vector<double> unit(n, 0.0);
    unit[col] = 1.0;
    const auto column = lu_solve(gram, unit, n);
    for (int row = 0; row < n; ++row)
      inverse[row * n + col] = column[row];
  }
  const double condition = inf_norm(gram, n) * inf_norm(inverse, n);
  if (!std::isfinite(condition) || condition > kConditionLimit)
    throw SingularMomentSystem(
        fmt::format("moment system for m={} is numerically singular (cond ~ {:.3e})",
                    m, condition),
        condition);

  Kernel kernel;
  kernel.family = family;
  kernel.support_lo = rho;
  kernel.vanishing_moments = m;
  kernel.coeffs = lu_solve(gram, rhs, n);

  double residual = 0.0;
  for (int row = 0; row < n; ++row) {
    double acc = -rhs[row];
    for (int col = 0; col < n; ++col)
      acc += gram[row * n + col] * kernel.coeffs[col];
    residual = std::max(residual, std::abs(acc));
  }
  kernel.residual = residual;
  kernel.condition = condition;

  for (int p = 0; p <= m; ++p) {
    const double deviation = std::abs(kernel_moment(kernel, p) - (p == 0 ? 1.0 : 0.0));
    if (deviation > (p == 0 ? kMassTolerance : kMomentTolerance))
      throw SingularMomentSystem(
          fmt::format("moment system for m={}, rho={} loses accuracy: moment {} is off by {:.3e} "
                      "(cond ~ {:.3e})",
                      m, rho, p, deviation, condition),
          condition);
  }
  return kernel;
}

double kernel_eval(const Kernel& kernel, double r) {
  if (r < kernel.support_lo || r > kernel.support_hi)
    return 0.0;
  const double w = weight_eval(kernel.family, r, kernel.support_lo);
  if (w == 0.0)
    return 0.0;
  return w * horner(kernel.coeffs, r);
}

double kernel_moment(const Kernel& kernel, int p) {
  if (p < 0)
    throw std::invalid_argument("kernel_moment: p must be non-negative");
  return composite_gauss_legendre(
      [&](double r) { return kernel_eval(kernel, r) * std::pow(r, p); },
      kernel.support_lo, kernel.support_hi, detail::kMomentOrder, detail::kMomentPanels);
}

double eval_scaled(const Kernel& kernel, double eta, double eps) {
  return kernel_eval(kernel, eta / eps) / eps;
}

std::string kernel_label(const Kernel& kernel) {
  if (kernel.family == WeightFamily::Bump)
    return fmt::format("bump-m{}", kernel.vanishing_moments);
  return fmt::format("shifted-m{}-rho{}", kernel.vanishing_moments, kernel.support_lo);
}

} // namespace lsint
