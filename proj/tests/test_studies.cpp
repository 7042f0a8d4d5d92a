#include "lsint/errors.hpp"
#include "lsint/report_csv.hpp"
#include "lsint/studies.hpp"

#include "doctest.h"

#include <cmath>
#include <sstream>

using namespace lsint;

TEST_SUITE("studies") {

TEST_CASE("names round trip") {
  for (StudyId id : all_studies())
    CHECK(parse_study_name(study_name(id)) == id);
  CHECK(all_studies().size() == 6);
  CHECK(study_name(StudyId::LipschitzCircle) == "lipschitz");
  CHECK_THROWS_AS(parse_study_name("table9"), std::invalid_argument);
}

TEST_CASE("registry") {
  const auto& t1 = study_definition(StudyId::Table1);
  CHECK(t1.ladder == std::vector<int>{100, 200, 400, 800, 1600, 3200});
  REQUIRE(t1.series.size() == 2);
  CHECK(t1.series[0].moments == 1);
  CHECK(t1.series[1].moments == 2);
  CHECK(t1.series[0].shape.kind == ShapeKind::CircleQuadratic);
  const auto& t3 = study_definition(StudyId::Table3);
  CHECK(t3.series[0].side == BandSide::Negative);
  CHECK(t3.series[0].shift == -0.05);
  const auto& t4 = study_definition(StudyId::Table4);
  CHECK(t4.opt_in_ladder == std::vector<int>{800});
  CHECK(*t4.published_alpha == 0.9875);
  const auto& t5 = study_definition(StudyId::Table5);
  CHECK(t5.requires_a0);
  CHECK(t5.half_width == 2);
  CHECK(t5.series[1].a0_power == 2);
  CHECK(t5.series[0].rho == 0.1);
}

TEST_CASE("observed orders") {
  const auto o = observed_orders({1e-2, 2.5e-3, 6.25e-4}, {100, 200, 400});
  REQUIRE(o.size() == 2);
  CHECK(o[0] == doctest::Approx(2.0));
  CHECK(o[1] == doctest::Approx(2.0));
  const auto uneven = observed_orders({8e-3, 1e-3}, {100, 400});
  CHECK(uneven[0] == doctest::Approx(1.5));
  CHECK(std::isnan(observed_orders({0.0, 1e-3}, {100, 200})[0]));
  CHECK_THROWS_AS(observed_orders({1.0}, {100, 200}), std::invalid_argument);
}

TEST_CASE("exponential fit") {
  const std::vector<int> ladder{100, 200, 400, 800};
  std::vector<double> errors;
  for (int n : ladder)
    errors.push_back(3.0 * std::pow(0.99, n));
  const auto fit = exponential_fit(errors, ladder);
  CHECK(fit.alpha == doctest::Approx(0.99).epsilon(1e-12));
  CHECK(fit.c == doctest::Approx(3.0).epsilon(1e-9));
  CHECK_THROWS_AS(exponential_fit({1e-3, 2e-3, 1e-4}, {100, 200, 400}), FitFailed);
  CHECK_NOTHROW(exponential_fit({1e-3, 1.05e-3, 1e-4}, {100, 200, 400}));
  CHECK_THROWS_AS(exponential_fit({1e-3, 1e-4}, {100, 200}), std::invalid_argument);
}

TEST_CASE("max-n trims the ladder") {
  StudyOverrides o;
  o.max_n = 400;
  const auto report = run_study(StudyId::Table4, o);
  REQUIRE(report.series.size() == 1);
  const auto& rows = report.series[0].rows;
  REQUIRE(rows.size() == 3);
  CHECK(std::isnan(rows[0].observed_order));
  CHECK(rows[0].wall_time < 0.0);
  CHECK(rows[2].rel_error == doctest::Approx(8.19894e-4).epsilon(1e-5));
  CHECK(report.series[0].fit.has_value());
}

TEST_CASE("opt-in rungs and caps") {
  StudyOverrides o;
  o.ladder = std::vector<int>{400, 800};
  CHECK_THROWS_AS(run_study(StudyId::Table4, o), ResourceCap);
  o.ladder = std::vector<int>{400, 1000};
  o.include_opt_in = true;
  CHECK_THROWS_AS(run_study(StudyId::Table4, o), ResourceCap);
  o.ladder = std::vector<int>{400, 200};
  CHECK_THROWS_AS(run_study(StudyId::Table4, o), std::invalid_argument);
  o.ladder = std::vector<int>{};
  CHECK_THROWS_AS(run_study(StudyId::Table4, o), std::invalid_argument);
}

TEST_CASE("a0 is required where the policy uses it") {
  CHECK_THROWS_AS(run_study(StudyId::Table5), std::invalid_argument);
  StudyOverrides o;
  o.a0 = 2.973046248;
  o.max_n = 200;
  const auto report = run_study(StudyId::Table5, o);
  REQUIRE(report.series.size() == 2);
  CHECK(report.series[0].rows[0].rel_error == doctest::Approx(1.01552e-2).epsilon(1e-4));
}

TEST_CASE("worker count does not change results") {
  StudyOverrides o;
  o.max_n = 400;
  const auto serial = run_study(StudyId::Table2, o);
  o.workers = 4;
  const auto parallel = run_study(StudyId::Table2, o);
  std::ostringstream a, b;
  write_report_csv(a, serial);
  write_report_csv(b, parallel);
  CHECK(a.str() == b.str());
}

TEST_CASE("calibration of a0") {
  const double a0 = calibrate_table5_a0();
  CHECK(a0 == doctest::Approx(2.973046248).epsilon(1e-6));
  CHECK_THROWS_AS(calibrate_table5_a0(1.01552e-2, 200, 3.1, 3.2), NumericalError);
}

}

TEST_SUITE("report_csv") {

TEST_CASE("header and rows") {
  std::ostringstream out;
  write_csv_header(out);
  ReportRow row;
  row.n = 100;
  row.h = 0.02;
  row.eps = 0.1;
  row.value = 3.0;
  row.reference = 3.1;
  row.rel_error = 0.03;
  row.observed_order = std::nan("");
  row.band_count = 42;
  write_csv_row(out, "table1", "s", row);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == kCsvVersionLine);
  std::getline(in, line);
  CHECK(line == kCsvColumns);
  std::getline(in, line);
  CHECK(line.rfind("table1,s,100,", 0) == 0);
  CHECK(line.substr(line.size() - 7) == ",-,42,-");
}

TEST_CASE("summary mentions every series") {
  StudyOverrides o;
  o.max_n = 200;
  const auto report = run_study(StudyId::Table1, o);
  const auto text = format_summary(report);
  for (const auto& s : report.series)
    CHECK(text.find(s.name) != std::string::npos);
}

}
