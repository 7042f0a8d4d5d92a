#pragma once

#include "lsint/geometry.hpp"
#include "lsint/grid.hpp"
#include "lsint/kernels.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lsint {

/// Width of the averaging band as a function of the grid:
///   Constant   eps = a
///   PowerOfH   eps = a * h^b
///   PowerOfN   eps = a * N^b
struct EpsilonPolicy {
  enum class Form { Constant, PowerOfH, PowerOfN };

  Form form = Form::Constant;
  double coefficient = 0.1;
  double exponent = 0.0;

  double evaluate(const GridSpec& grid) const;
  std::string to_string() const;

  /// Grammar: `a*h^b | a*N^b | a`. The `a*` prefix may be omitted and b may be
  /// written as a ratio p/q, e.g. "3.4*N^-2/3". Throws std::invalid_argument.
  static EpsilonPolicy parse(std::string_view text);
  static EpsilonPolicy constant(double eps) { return {Form::Constant, eps, 0.0}; }
  static EpsilonPolicy power_of_h(double a, double b) { return {Form::PowerOfH, a, b}; }
  static EpsilonPolicy power_of_n(double a, double b) { return {Form::PowerOfN, a, b}; }
};

struct QuadratureJob {
  ImplicitField field;
  Integrand integrand;
  Kernel kernel;
  EpsilonPolicy policy;
  GridSpec grid;
  /// Positive or Negative; selects the sign of the kernel argument.
  BandSide side = BandSide::Positive;
  /// Integrate over the shift-level set by substituting phi - shift.
  double shift = 0.0;
  int workers = 1;
};

struct QuadratureResult {
  double value = 0.0;
  double eps = 0.0;
  double h = 0.0;
  std::size_t band_count = 0;
  /// eps < 2h.
  bool under_resolved = false;
};

/// S_N = sum over band nodes of f(x) eps^-1 delta(+-(phi(x) - shift)/eps) |grad phi(x)| h^dim.
/// Throws EmptyBand, SingularOnBand (rho = 0 and a singular point of f in the band)
/// and UndefinedGradient (non-finite |grad phi| or f on the band).
QuadratureResult integrate(const QuadratureJob& job);

/// integrate() restricted to three-dimensional jobs.
QuadratureResult integrate_3d_surface(const QuadratureJob& job);

/// integrate() restricted to kernels supported away from zero (rho > 0).
QuadratureResult integrate_singular(const QuadratureJob& job);

/// Probe used to sample I(eta), the integral over the eta-level set.
struct FamilyProbe {
  Kernel kernel;
  /// Probe width in units of h.
  double eps_over_h = 32.0;
  /// When positive, the probe width is relative_width * |eta| instead; suits
  /// level set functions whose gradient degenerates on the zero set.
  double relative_width = 0.0;
  /// Both averages the Positive and Negative one-sided sums.
  BandSide side = BandSide::Both;
  int workers = 1;
};

/// Default probe: bump kernel with two vanishing moments.
FamilyProbe default_family_probe();

double family_integral(const ImplicitField& field, const Integrand& integrand,
                       const GridSpec& grid, const FamilyProbe& probe, double eta);

struct FamilyIntegralSamples {
  std::vector<double> etas;
  std::vector<double> values;
};

FamilyIntegralSamples sample_family(const ImplicitField& field, const Integrand& integrand,
                                    const GridSpec& grid, const FamilyProbe& probe,
                                    const std::vector<double>& etas);

enum class FitModel { Polynomial, PowerLaw };

/// Polynomial: I(eta) = A_0 + A_1 eta + ... + A_deg eta^deg.
/// PowerLaw:   I(eta) = A_0 + A_1 sgn(eta) |eta|^exponent.
struct FitRecord {
  FitModel model = FitModel::Polynomial;
  int degree = 1;
  std::vector<double> coefficients;
  double exponent = 1.0;
  double max_residual = 0.0;
};

/// Least-squares fit. Needs at least degree + 2 samples (4 for PowerLaw).
/// Throws IllConditionedFit when the design matrix is numerically rank deficient.
FitRecord fit_family(const FamilyIntegralSamples& samples, FitModel model, int degree = 1);

/// log2(e_coarse / e_fine); NaN unless both errors are positive.
double observed_order(double e_coarse, double e_fine);

} // namespace lsint
