#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lsint {

// Smooth weights of the one-sided averaging kernels. Both vanish to all
// orders at the ends of their support.
//
//   Bump        w(r) = exp(2 / ((2r - 1)^2 - 1))                  on (0, 1)
//   ShiftedBump w(r) = exp(2 / ((2r - 1 - rho)^2 - (1 - rho)^2))  on (rho, 1)
//
// ShiftedBump is the Bump weight recentred on (rho, 1); at rho = 0 the two
// coincide.
enum class WeightFamily { Bump, ShiftedBump };

std::string_view to_string(WeightFamily family);
WeightFamily parse_weight_family(std::string_view name);

double weight_eval(WeightFamily family, double r, double rho = 0.0);

/// delta(r) = w(r) * (c_0 + c_1 r + ... + c_m r^m) on [rho, 1], zero elsewhere,
/// normalised to unit mass with m vanishing moments.
struct Kernel {
  WeightFamily family = WeightFamily::Bump;
  double support_lo = 0.0;
  double support_hi = 1.0;
  std::vector<double> coeffs;
  int vanishing_moments = 1;
  int amplitude_exponent = 1;

  // Diagnostics of the moment solve.
  double residual = 0.0;
  double condition = 0.0;

  double operator()(double r) const;
};

/// Solves the (m+1)x(m+1) weighted moment system for a degree-m polynomial.
/// Throws SingularMomentSystem when the condition estimate exceeds 1e14.
Kernel build_kernel(WeightFamily family, int m, double rho = 0.0);

double kernel_eval(const Kernel& kernel, double r);

/// Integral of delta(r) r^p over the support, using the construction rule.
double kernel_moment(const Kernel& kernel, int p);

/// eps^-1 * delta(eta / eps).
double eval_scaled(const Kernel& kernel, double eta, double eps);

/// Human-readable id, e.g. "bump-m2" or "shifted-m1-rho0.1".
std::string kernel_label(const Kernel& kernel);

namespace detail {
/// Composite Gauss-Legendre layout used for all moment integrals.
inline constexpr int kMomentOrder = 64;
inline constexpr int kMomentPanels = 8;
} // namespace detail

} // namespace lsint
