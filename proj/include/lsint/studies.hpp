#pragma once

#include "lsint/geometry.hpp"
#include "lsint/grid.hpp"
#include "lsint/kernels.hpp"
#include "lsint/quadrature.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lsint {

enum class StudyId { Table1, LipschitzCircle, Table2, Table3, Table4, Table5 };

std::string_view study_name(StudyId id);
StudyId parse_study_name(std::string_view name);
std::vector<StudyId> all_studies();

/// One row series of a study: a fixed shape, kernel, band policy and side.
struct SeriesDefinition {
  std::string name;
  ShapeDescriptor shape;
  IntegrandKind integrand = IntegrandKind::ConstantOne;
  Point integrand_center{0.0, 0.0, 0.0};
  WeightFamily family = WeightFamily::Bump;
  int moments = 1;
  double rho = 0.0;
  EpsilonPolicy policy;
  /// Power of a0 multiplying the policy coefficient; 0 when a0 is unused.
  int a0_power = 0;
  BandSide side = BandSide::Positive;
  double shift = 0.0;
  /// Published relative errors per ladder entry, where known.
  std::vector<double> published_errors;
};

struct StudyDefinition {
  StudyId id = StudyId::Table1;
  std::string title;
  int half_width = 1;
  std::vector<int> ladder;
  /// Extra rungs run only with StudyOverrides::include_opt_in.
  std::vector<int> opt_in_ladder;
  std::vector<SeriesDefinition> series;
  bool exponential_fit = false;
  /// Base of the published exponential fit, when there is one.
  std::optional<double> published_alpha;
  bool requires_a0 = false;
};

/// The registry. Definitions are plain data.
const StudyDefinition& study_definition(StudyId id);

struct StudyOverrides {
  std::optional<int> max_n;
  std::optional<std::vector<int>> ladder;
  std::optional<double> a0;
  bool include_opt_in = false;
  int workers = 1;
  bool timing = false;
};

struct ReportRow {
  int n = 0;
  double h = 0.0;
  double eps = 0.0;
  double value = 0.0;
  double reference = 0.0;
  double rel_error = 0.0;
  /// NaN on the first row.
  double observed_order = 0.0;
  std::size_t band_count = 0;
  /// Seconds; negative when timing is off.
  double wall_time = -1.0;
  bool under_resolved = false;
};

struct ExponentialFit {
  double c = 0.0;
  double alpha = 0.0;
};

struct SeriesReport {
  std::string name;
  std::string kernel;
  std::string policy;
  std::vector<ReportRow> rows;
  std::vector<double> published_errors;
  std::optional<ExponentialFit> fit;
  std::string fit_error;
};

struct ConvergenceReport {
  StudyId id = StudyId::Table1;
  std::string title;
  std::vector<SeriesReport> series;
};

/// Throws ResourceCap for disallowed N and std::invalid_argument for a missing a0.
ConvergenceReport run_study(StudyId id, const StudyOverrides& overrides = {});

/// Runs one series at one N.
ReportRow run_series_point(const StudyDefinition& study, const SeriesDefinition& series, int n,
                           std::optional<double> a0, int workers = 1);

/// order_i = log(e_i / e_{i+1}) / log(N_{i+1} / N_i).
std::vector<double> observed_orders(const std::vector<double>& errors,
                                    const std::vector<int>& ladder);

/// Least squares of log e against N: e ~ C alpha^N. Throws FitFailed when the
/// errors grow by more than `tolerance` (relative) between rungs, and
/// std::invalid_argument for fewer than three positive errors.
ExponentialFit exponential_fit(const std::vector<double>& errors, const std::vector<int>& ladder,
                               double tolerance = 0.1);

/// a0 such that the first Table5 series at N has relative error `target`.
double calibrate_table5_a0(double target = 1.01552e-2, int n = 200, double lo = 2.75,
                           double hi = 3.25, int workers = 1);

} // namespace lsint
