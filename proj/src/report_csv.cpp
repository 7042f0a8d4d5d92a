#include "lsint/report_csv.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <ostream>

namespace lsint {

void write_csv_header(std::ostream& out) {
  fmt::print(out, "{}\n{}\n", kCsvVersionLine, kCsvColumns);
}

void write_csv_row(std::ostream& out, std::string_view study, std::string_view series,
                   const ReportRow& row) {
  const std::string order =
      std::isnan(row.observed_order) ? "-" : fmt::format("{:.4f}", row.observed_order);
  const std::string wall = row.wall_time < 0.0 ? "-" : fmt::format("{:.3f}", row.wall_time);
  fmt::print(out, "{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.6e},{},{},{}\n", study, series,
             row.n, row.h, row.eps, row.value, row.reference, row.rel_error, order,
             row.band_count, wall);
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report) {
  write_csv_header(out);
  for (const auto& series : report.series)
    for (const auto& row : series.rows)
      write_csv_row(out, study_name(report.id), series.name, row);
}

std::string format_summary(const ConvergenceReport& report) {
  std::string text = fmt::format("{}: {}\n", study_name(report.id), report.title);
  for (const auto& series : report.series) {
    text += fmt::format("\n  {} ({}, eps = {})\n", series.name, series.kernel, series.policy);
    text += fmt::format("  {:>6}  {:>12}  {:>12}  {:>6}  {:>12}\n", "N", "eps", "rel. error",
                        "order", "published");
    for (std::size_t i = 0; i < series.rows.size(); ++i) {
      const ReportRow& row = series.rows[i];
      const double published =
          i < series.published_errors.size() ? series.published_errors[i] : NAN;
      text += fmt::format(
          "  {:>6}  {:>12.5e}  {:>12.5e}  {:>6}  {:>12}{}\n", row.n, row.eps, row.rel_error,
          std::isnan(row.observed_order) ? std::string("-")
                                         : fmt::format("{:.2f}", row.observed_order),
          std::isnan(published) ? std::string("-") : fmt::format("{:.5e}", published),
          row.under_resolved ? "  (eps < 2h)" : "");
    }
    if (series.fit)
      text += fmt::format("  exponential fit: error ~ {:.3e} * {:.5f}^N\n", series.fit->c,
                          series.fit->alpha);
    else if (!series.fit_error.empty())
      text += fmt::format("  exponential fit failed: {}\n", series.fit_error);
  }
  return text;
}

} // namespace lsint
