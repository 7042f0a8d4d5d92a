#pragma once

#include "lsint/studies.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace lsint {

inline constexpr std::string_view kCsvVersionLine = "# lsint results v1";
inline constexpr std::string_view kCsvColumns =
    "study,series,N,h,eps,S_N,reference,rel_error,observed_order,band_count,wall_time";

void write_csv_header(std::ostream& out);

/// One data row. NaN orders and negative wall times are written as "-".
void write_csv_row(std::ostream& out, std::string_view study, std::string_view series,
                   const ReportRow& row);

/// Header followed by every row of every series.
void write_report_csv(std::ostream& out, const ConvergenceReport& report);

/// Plain-text table per series: N, eps, relative error, order, published error.
std::string format_summary(const ConvergenceReport& report);

} // namespace lsint
