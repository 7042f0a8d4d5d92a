#include "lsint/quadrature.hpp"

#include "lsint/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lsint {

namespace {

constexpr double kFitConditionLimit = 1e12;

double parse_number(std::string_view text, std::string_view whole) {
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value))
    throw std::invalid_argument(fmt::format("bad number '{}' in epsilon policy '{}'", text, whole));
  return value;
}

double parse_exponent(std::string_view text, std::string_view whole) {
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')')
    text = text.substr(1, text.size() - 2);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return parse_number(text, whole);
  const double p = parse_number(text.substr(0, slash), whole);
  const double q = parse_number(text.substr(slash + 1), whole);
  if (q == 0.0)
    throw std::invalid_argument(fmt::format("zero denominator in epsilon policy '{}'", whole));
  return p / q;
}

} // namespace

double EpsilonPolicy::evaluate(const GridSpec& grid) const {
  double eps = coefficient;
  switch (form) {
  case Form::Constant:
    break;
  case Form::PowerOfH:
    eps = coefficient * std::pow(grid.spacing(), exponent);
    break;
  case Form::PowerOfN:
    eps = coefficient * std::pow(static_cast<double>(grid.n_cells), exponent);
    break;
  }
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument(fmt::format("epsilon policy '{}' gives eps = {}", to_string(), eps));
  return eps;
}

std::string EpsilonPolicy::to_string() const {
  switch (form) {
  case Form::Constant:
    return fmt::format("{}", coefficient);
  case Form::PowerOfH:
    return fmt::format("{}*h^{}", coefficient, exponent);
  case Form::PowerOfN:
    return fmt::format("{}*N^{}", coefficient, exponent);
  }
  return "?";
}

EpsilonPolicy EpsilonPolicy::parse(std::string_view text) {
  std::string compact;
  for (char c : text)
    if (c != ' ' && c != '\t')
      compact.push_back(c);
  const std::string_view s = compact;
  if (s.empty())
    throw std::invalid_argument("empty epsilon policy");

  const auto caret = s.find('^');
  if (caret == std::string_view::npos)
    return constant(parse_number(s, text));

  if (caret == 0)
    throw std::invalid_argument(fmt::format("bad epsilon policy '{}'", text));
  const char var = s[caret - 1];
  Form form;
  if (var == 'h')
    form = Form::PowerOfH;
  else if (var == 'N')
    form = Form::PowerOfN;
  else
    throw std::invalid_argument(
        fmt::format("epsilon policy '{}' must use h or N as the base", text));

  double a = 1.0;
  const std::string_view head = s.substr(0, caret - 1);
  if (!head.empty()) {
    if (head.back() != '*')
      throw std::invalid_argument(fmt::format("bad epsilon policy '{}'", text));
    a = parse_number(head.substr(0, head.size() - 1), text);
  }
  const double b = parse_exponent(s.substr(caret + 1), text);
  if (!(a > 0.0))
    throw std::invalid_argument(fmt::format("epsilon policy '{}' needs a positive coefficient", text));
  return {form, a, b};
}

QuadratureResult integrate(const QuadratureJob& job) {
  validate(job.grid);
  if (job.field.dim != job.grid.dim)
    throw std::invalid_argument(fmt::format("field is {}D but the grid is {}D", job.field.dim,
                                            job.grid.dim));
  if (job.side == BandSide::Both)
    throw std::invalid_argument("integrate: side must be positive or negative");
  if (!job.integrand.f || !job.field.phi || !job.field.grad_norm)
    throw std::invalid_argument("integrate: incomplete job");

  QuadratureResult result;
  result.eps = job.policy.evaluate(job.grid);
  result.h = job.grid.spacing();
  result.under_resolved = result.eps < 2.0 * result.h;

  const double eps = result.eps;
  const double rho = job.kernel.support_lo;
  const bool positive = job.side == BandSide::Positive;
  const BandMask mask = positive ? BandMask{rho * eps, eps, false, true}
                                 : BandMask{-eps, -rho * eps, true, false};
  const ImplicitField field = shifted(job.field, job.shift);

  if (rho == 0.0) {
    for (const Point& p : job.integrand.singular_points) {
      const double v = field.phi(p);
      if (v >= mask.lo && v <= mask.hi)
        throw SingularOnBand(fmt::format(
            "integrand is singular at ({}, {}) inside the band; use a kernel with rho > 0", p[0],
            p[1]));
    }
  }

  const double volume = job.grid.cell_volume();
  const double sign = positive ? 1.0 : -1.0;
  const Kernel& kernel = job.kernel;
  const ScalarFn& f = job.integrand.f;
  const std::optional<double> grad_const = job.field.constant_grad_norm;
  const ScalarFn& grad = job.field.grad_norm;
  std::atomic<bool> non_finite{false};

  const BandTerm term = [&](const BandNode& node) {
    const double g = grad_const ? *grad_const : grad(node.x);
    const double weight = kernel(sign * node.value / eps);
    if (weight == 0.0)
      return 0.0;
    const double t = f(node.x) * weight * g;
    if (!std::isfinite(t)) {
      non_finite.store(true, std::memory_order_relaxed);
      return 0.0;
    }
    return t;
  };

  const BandReduction red = band_reduce(job.grid, field, mask, term, job.workers);
  if (non_finite.load())
    throw UndefinedGradient("integrand or |grad phi| is not finite on the band");
  if (red.count == 0)
    throw EmptyBand(fmt::format("no grid node has level value in the band (eps = {}, N = {})",
                                eps, job.grid.n_cells));
  result.value = red.sum * volume / eps;
  result.band_count = red.count;
  return result;
}

QuadratureResult integrate_3d_surface(const QuadratureJob& job) {
  if (job.grid.dim != 3)
    throw std::invalid_argument("integrate_3d_surface: grid must be 3D");
  return integrate(job);
}

QuadratureResult integrate_singular(const QuadratureJob& job) {
  if (!(job.kernel.support_lo > 0.0))
    throw std::invalid_argument("integrate_singular: kernel support must start at rho > 0");
  return integrate(job);
}

FamilyProbe default_family_probe() {
  FamilyProbe probe;
  probe.kernel = build_kernel(WeightFamily::Bump, 2);
  return probe;
}

double family_integral(const ImplicitField& field, const Integrand& integrand,
                       const GridSpec& grid, const FamilyProbe& probe, double eta) {
  QuadratureJob job;
  job.field = field;
  job.integrand = integrand;
  job.kernel = probe.kernel;
  double eps = probe.eps_over_h * grid.spacing();
  if (probe.relative_width > 0.0) {
    if (eta == 0.0)
      throw std::invalid_argument("family_integral: a relative probe width needs eta != 0");
    eps = probe.relative_width * std::abs(eta);
  }
  job.policy = EpsilonPolicy::constant(eps);
  job.grid = grid;
  job.shift = eta;
  job.workers = probe.workers;
  if (probe.side != BandSide::Both) {
    job.side = probe.side;
    return integrate(job).value;
  }
  job.side = BandSide::Positive;
  const double plus = integrate(job).value;
  job.side = BandSide::Negative;
  const double minus = integrate(job).value;
  return 0.5 * (plus + minus);
}

FamilyIntegralSamples sample_family(const ImplicitField& field, const Integrand& integrand,
                                    const GridSpec& grid, const FamilyProbe& probe,
                                    const std::vector<double>& etas) {
  FamilyIntegralSamples samples;
  samples.etas = etas;
  samples.values.reserve(etas.size());
  for (double eta : etas)
    samples.values.push_back(family_integral(field, integrand, grid, probe, eta));
  return samples;
}

namespace {

struct LinearFit {
  Eigen::VectorXd coeffs;
  double sse = 0.0;
  double max_residual = 0.0;
  double condition = 0.0;
};

LinearFit least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  LinearFit fit;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  fit.condition = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1)
                                        : std::numeric_limits<double>::infinity();
  fit.coeffs = a.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd r = a * fit.coeffs - y;
  fit.sse = r.squaredNorm();
  fit.max_residual = r.cwiseAbs().maxCoeff();
  return fit;
}

Eigen::MatrixXd power_basis(const std::vector<double>& etas, double gamma) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(etas.size()), 2);
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const double e = etas[i];
    a(i, 0) = 1.0;
    a(i, 1) = std::copysign(std::pow(std::abs(e), gamma), e);
  }
  return a;
}

} // namespace

FitRecord fit_family(const FamilyIntegralSamples& samples, FitModel model, int degree) {
  const std::size_t n = samples.etas.size();
  if (samples.values.size() != n)
    throw std::invalid_argument("fit_family: etas and values differ in length");
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    y(i) = samples.values[i];

  FitRecord record;
  record.model = model;
  if (model == FitModel::Polynomial) {
    if (degree < 0)
      throw std::invalid_argument("fit_family: degree must be non-negative");
    if (n < static_cast<std::size_t>(degree) + 2)
      throw std::invalid_argument(
          fmt::format("fit_family: degree {} needs at least {} samples", degree, degree + 2));
    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), degree + 1);
    for (std::size_t i = 0; i < n; ++i) {
      double p = 1.0;
      for (int j = 0; j <= degree; ++j, p *= samples.etas[i])
        a(i, j) = p;
    }
    const LinearFit fit = least_squares(a, y);
    if (fit.condition > kFitConditionLimit)
      throw IllConditionedFit(
          fmt::format("polynomial fit is ill-conditioned (condition {:.3e})", fit.condition));
    record.degree = degree;
    record.coefficients.assign(fit.coeffs.data(), fit.coeffs.data() + fit.coeffs.size());
    record.exponent = degree;
    record.max_residual = fit.max_residual;
    return record;
  }

  if (n < 4)
    throw std::invalid_argument("fit_family: power-law fit needs at least 4 samples");
  if (std::any_of(samples.etas.begin(), samples.etas.end(), [](double e) { return e == 0.0; }))
    throw std::invalid_argument("fit_family: power-law samples must exclude eta = 0");

  // Variable projection: the amplitudes are linear for a fixed exponent.
  const auto sse = [&](double log_gamma) {
    return least_squares(power_basis(samples.etas, std::exp(log_gamma)), y).sse;
  };
  const double lo = std::log(0.02);
  const double hi = std::log(5.0);
  constexpr int kScan = 200;
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double v = sse(lo + (hi - lo) * i / kScan);
    if (v < best_sse) {
      best_sse = v;
      best = i;
    }
  }
  const double step = (hi - lo) / kScan;
  const double a = lo + step * std::max(best - 1, 0);
  const double b = lo + step * std::min(best + 1, kScan);
  const auto [log_gamma, value] = boost::math::tools::brent_find_minima(sse, a, b, 52);
  (void)value;
  const double gamma = std::exp(log_gamma);
  const LinearFit fit = least_squares(power_basis(samples.etas, gamma), y);
  if (fit.condition > kFitConditionLimit)
    throw IllConditionedFit(
        fmt::format("power-law fit is ill-conditioned (condition {:.3e})", fit.condition));
  record.degree = 1;
  record.coefficients.assign(fit.coeffs.data(), fit.coeffs.data() + fit.coeffs.size());
  record.exponent = gamma;
  record.max_residual = fit.max_residual;
  return record;
}

double observed_order(double e_coarse, double e_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0))
    return std::numeric_limits<double>::quiet_NaN();
  return std::log2(e_coarse / e_fine);
}

} // namespace lsint
