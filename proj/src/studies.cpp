#include "lsint/studies.hpp"

#include "lsint/errors.hpp"
#include "lsint/reference.hpp"

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lsint {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SeriesDefinition bump_series(std::string name, ShapeDescriptor shape, int moments,
                             EpsilonPolicy policy, BandSide side = BandSide::Positive,
                             double shift = 0.0) {
  SeriesDefinition s;
  s.name = std::move(name);
  s.shape = shape;
  s.family = WeightFamily::Bump;
  s.moments = moments;
  s.policy = policy;
  s.side = side;
  s.shift = shift;
  return s;
}

std::vector<StudyDefinition> build_registry() {
  std::vector<StudyDefinition> registry;
  const std::vector<int> doubling{100, 200, 400, 800, 1600, 3200};

  {
    StudyDefinition d;
    d.id = StudyId::Table1;
    d.title = "Circle length from a quadratic level set, eps = 2 h^(1/2)";
    d.ladder = doubling;
    const ShapeDescriptor shape{ShapeKind::CircleQuadratic, 0.501};
    auto s1 = bump_series("delta-inf-1", shape, 1, EpsilonPolicy::power_of_h(2.0, 0.5));
    s1.published_errors = {2.19034e-02, 1.22417e-02, 6.72509e-03,
                           3.61084e-03, 1.90462e-03, 9.90744e-04};
    auto s2 = bump_series("delta-inf-2", shape, 2, EpsilonPolicy::power_of_h(2.0, 0.5));
    s2.published_errors = {2.99384e-03, 1.53839e-03, 6.34199e-04,
                           2.55519e-04, 9.96251e-05, 3.78689e-05};
    d.series = {s1, s2};
    registry.push_back(d);
  }
  {
    StudyDefinition d;
    d.id = StudyId::LipschitzCircle;
    d.title = "Lipschitz integrand on a circle, signed distance, eps = 2/sqrt(N)";
    d.ladder = doubling;
    auto s = bump_series("delta-inf-2", {ShapeKind::CircleSDF, 0.501}, 2,
                         EpsilonPolicy::power_of_n(2.0, -0.5));
    s.integrand = IntegrandKind::ThetaSawtooth;
    d.series = {s};
    d.exponential_fit = true;
    d.published_alpha = 0.997;
    registry.push_back(d);
  }
  {
    StudyDefinition d;
    d.id = StudyId::Table2;
    d.title = "Length of the four-cusp curve, outer band, eps = 0.05";
    d.ladder = doubling;
    auto s = bump_series("delta-inf-1", {ShapeKind::CuspStarSDF, 0.75}, 1,
                         EpsilonPolicy::constant(0.05));
    s.published_errors = {7.04018e-3, 6.63514e-4, 4.43853e-5,
                          4.45564e-7, 5.84085e-9, 3.74043e-12};
    d.series = {s};
    d.exponential_fit = true;
    d.published_alpha = 0.9954;
    registry.push_back(d);
  }
  {
    StudyDefinition d;
    d.id = StudyId::Table3;
    d.title = "Length of the inner offset of the four-cusp curve (corners), eps = 3.4 N^(-2/3)";
    d.ladder = doubling;
    auto s = bump_series("delta-inf-2", {ShapeKind::CuspStarSDF, 0.75}, 2,
                         EpsilonPolicy::power_of_n(3.4, -2.0 / 3.0), BandSide::Negative, -0.05);
    s.published_errors = {1.64925e-02, 8.63529e-03, 2.98334e-03,
                          1.08381e-03, 3.34617e-04, 9.79520e-05};
    d.series = {s};
    registry.push_back(d);
  }
  {
    StudyDefinition d;
    d.id = StudyId::Table4;
    d.title = "Surface area of the l1 ball in 3D, eps = 0.1";
    d.ladder = {100, 200, 400};
    d.opt_in_ladder = {800};
    auto s = bump_series("delta-inf-2", {ShapeKind::L1Ball3D, 0.65}, 2,
                         EpsilonPolicy::constant(0.1));
    s.published_errors = {5.87232e-1, 2.63126e-2, 8.19894e-4, 5.23091e-6};
    d.series = {s};
    d.exponential_fit = true;
    d.published_alpha = 0.9875;
    registry.push_back(d);
  }
  {
    StudyDefinition d;
    d.id = StudyId::Table5;
    d.title = "Singular integrand 1/sqrt|x - (0,1)| on the unit diamond, shifted kernel";
    d.half_width = 2;
    d.ladder = {200, 400, 800, 1600, 3200};
    d.requires_a0 = true;
    SeriesDefinition s1;
    s1.name = "phi1";
    s1.shape = {ShapeKind::L1Ball2D, 1.0};
    s1.integrand = IntegrandKind::InverseSqrtAt;
    s1.integrand_center = {0.0, 1.0, 0.0};
    s1.family = WeightFamily::ShiftedBump;
    s1.moments = 1;
    s1.rho = 0.1;
    s1.policy = EpsilonPolicy::power_of_n(1.0, -0.475);
    s1.a0_power = 1;
    s1.published_errors = {1.01552e-02, 8.84065e-03, 7.63649e-03, 6.55206e-03, 5.59749e-03};
    SeriesDefinition s2 = s1;
    s2.name = "phi2";
    s2.shape = {ShapeKind::SquaredL1, 1.0};
    s2.policy = EpsilonPolicy::power_of_n(1.0, -0.95);
    s2.a0_power = 2;
    s2.published_errors = {1.77161e-02, 9.47018e-03, 4.62084e-03, 1.51821e-03, 4.30993e-04};
    d.series = {s1, s2};
    registry.push_back(d);
  }
  return registry;
}

struct StudyEntry {
  StudyId id;
  std::string_view name;
};
constexpr StudyEntry kStudyNames[] = {
    {StudyId::Table1, "table1"}, {StudyId::LipschitzCircle, "lipschitz"},
    {StudyId::Table2, "table2"}, {StudyId::Table3, "table3"},
    {StudyId::Table4, "table4"}, {StudyId::Table5, "table5"},
};

} // namespace

std::string_view study_name(StudyId id) {
  for (const auto& e : kStudyNames)
    if (e.id == id)
      return e.name;
  return "unknown";
}

StudyId parse_study_name(std::string_view name) {
  for (const auto& e : kStudyNames)
    if (e.name == name)
      return e.id;
  throw std::invalid_argument(fmt::format("unknown study '{}'", name));
}

std::vector<StudyId> all_studies() {
  std::vector<StudyId> out;
  for (const auto& e : kStudyNames)
    out.push_back(e.id);
  return out;
}

const StudyDefinition& study_definition(StudyId id) {
  static const std::vector<StudyDefinition> registry = build_registry();
  for (const auto& d : registry)
    if (d.id == id)
      return d;
  throw std::invalid_argument("study_definition: unknown study");
}

ReportRow run_series_point(const StudyDefinition& study, const SeriesDefinition& series, int n,
                           std::optional<double> a0, int workers) {
  GridSpec grid;
  grid.dim = shape_dim(series.shape.kind);
  grid.n_cells = n;
  grid.half_width = study.half_width;
  validate(grid);

  EpsilonPolicy policy = series.policy;
  if (series.a0_power > 0) {
    if (!a0)
      throw std::invalid_argument(fmt::format("study {} needs a0", study_name(study.id)));
    policy.coefficient *= std::pow(*a0, series.a0_power);
  }

  QuadratureJob job;
  job.field = make_field(series.shape);
  job.integrand = make_integrand(series.integrand, series.integrand_center);
  job.kernel = build_kernel(series.family, series.moments, series.rho);
  job.policy = policy;
  job.grid = grid;
  job.side = series.side;
  job.shift = series.shift;
  job.workers = workers;

  const auto reference = reference_value(series.shape, series.integrand, series.shift);
  if (!reference)
    throw std::invalid_argument(fmt::format("no reference value for series {}", series.name));

  const QuadratureResult result = integrate(job);
  ReportRow row;
  row.n = n;
  row.h = result.h;
  row.eps = result.eps;
  row.value = result.value;
  row.reference = *reference;
  row.rel_error = std::abs(result.value - *reference) / std::abs(*reference);
  row.observed_order = kNaN;
  row.band_count = result.band_count;
  row.under_resolved = result.under_resolved;
  return row;
}

ConvergenceReport run_study(StudyId id, const StudyOverrides& overrides) {
  const StudyDefinition& def = study_definition(id);
  if (def.requires_a0 && !overrides.a0)
    throw std::invalid_argument(fmt::format(
        "study {} needs a0; calibrate it against the N = 200 row first", study_name(id)));

  std::vector<int> ladder = overrides.ladder ? *overrides.ladder : def.ladder;
  if (overrides.include_opt_in && !overrides.ladder)
    ladder.insert(ladder.end(), def.opt_in_ladder.begin(), def.opt_in_ladder.end());
  if (overrides.max_n)
    std::erase_if(ladder, [&](int n) { return n > *overrides.max_n; });
  if (ladder.empty())
    throw std::invalid_argument("study ladder is empty");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] <= ladder[i - 1])
      throw std::invalid_argument("study ladder must be strictly increasing");

  const int dim = shape_dim(def.series.front().shape.kind);
  for (int n : ladder) {
    if (!overrides.include_opt_in &&
        std::find(def.opt_in_ladder.begin(), def.opt_in_ladder.end(), n) !=
            def.opt_in_ladder.end())
      throw ResourceCap(fmt::format("N = {} for study {} is opt-in", n, study_name(id)));
    validate(GridSpec{dim, n, def.half_width, 0.0});
  }

  ConvergenceReport report;
  report.id = id;
  report.title = def.title;
  for (const SeriesDefinition& series : def.series) {
    SeriesReport sr;
    sr.name = series.name;
    sr.kernel = kernel_label(build_kernel(series.family, series.moments, series.rho));
    EpsilonPolicy policy = series.policy;
    if (series.a0_power > 0)
      policy.coefficient *= std::pow(*overrides.a0, series.a0_power);
    sr.policy = policy.to_string();

    std::vector<double> errors;
    for (int n : ladder) {
      const auto start = std::chrono::steady_clock::now();
      ReportRow row = run_series_point(def, series, n, overrides.a0, overrides.workers);
      if (overrides.timing)
        row.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      errors.push_back(row.rel_error);
      sr.rows.push_back(row);
    }
    const auto orders = observed_orders(errors, ladder);
    for (std::size_t i = 0; i < orders.size(); ++i)
      sr.rows[i + 1].observed_order = orders[i];

    for (int n : ladder) {
      auto pos = std::find(def.ladder.begin(), def.ladder.end(), n);
      std::size_t index = static_cast<std::size_t>(pos - def.ladder.begin());
      if (pos == def.ladder.end()) {
        auto opt = std::find(def.opt_in_ladder.begin(), def.opt_in_ladder.end(), n);
        index = opt == def.opt_in_ladder.end()
                    ? series.published_errors.size()
                    : def.ladder.size() + static_cast<std::size_t>(opt - def.opt_in_ladder.begin());
      }
      sr.published_errors.push_back(index < series.published_errors.size()
                                        ? series.published_errors[index]
                                        : kNaN);
    }

    if (def.exponential_fit) {
      try {
        sr.fit = exponential_fit(errors, ladder);
      } catch (const std::exception& e) {
        sr.fit_error = e.what();
      }
    }
    report.series.push_back(std::move(sr));
  }
  return report;
}

std::vector<double> observed_orders(const std::vector<double>& errors,
                                    const std::vector<int>& ladder) {
  if (errors.size() != ladder.size())
    throw std::invalid_argument("observed_orders: errors and ladder differ in length");
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double ratio = static_cast<double>(ladder[i + 1]) / ladder[i];
    if (!(ratio > 1.0))
      throw std::invalid_argument("observed_orders: ladder must be increasing");
    orders.push_back(observed_order(errors[i], errors[i + 1]) / std::log2(ratio));
  }
  return orders;
}

ExponentialFit exponential_fit(const std::vector<double>& errors, const std::vector<int>& ladder,
                               double tolerance) {
  if (errors.size() != ladder.size())
    throw std::invalid_argument("exponential_fit: errors and ladder differ in length");
  if (errors.size() < 3 || std::any_of(errors.begin(), errors.end(),
                                       [](double e) { return !(e > 0.0); }))
    throw std::invalid_argument("exponential_fit: needs at least three positive errors");
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    if (errors[i + 1] > errors[i] * (1.0 + tolerance))
      throw FitFailed(fmt::format("errors grow from N = {} to N = {}", ladder[i], ladder[i + 1]));

  const double count = static_cast<double>(errors.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double x = ladder[i];
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  if (!(denom > 0.0))
    throw FitFailed("exponential_fit: ladder is degenerate");
  const double slope = (count * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / count;
  return {std::exp(intercept), std::exp(slope)};
}

double calibrate_table5_a0(double target, int n, double lo, double hi, int workers) {
  const StudyDefinition& def = study_definition(StudyId::Table5);
  const SeriesDefinition& series = def.series.front();
  const auto residual = [&](double a0) {
    return run_series_point(def, series, n, a0, workers).rel_error - target;
  };
  const double flo = residual(lo);
  const double fhi = residual(hi);
  if (flo == 0.0)
    return lo;
  if (fhi == 0.0)
    return hi;
  if ((flo < 0.0) == (fhi < 0.0))
    throw FitFailed(fmt::format("a0 bracket [{}, {}] does not enclose the target error {}", lo,
                                hi, target));
  std::uintmax_t iterations = 100;
  const auto [a, b] = boost::math::tools::toms748_solve(
      residual, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(40), iterations);
  return 0.5 * (a + b);
}

} // namespace lsint
