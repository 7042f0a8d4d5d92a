#pragma once

#include <cstddef>
#include <span>

namespace lsint {

/// Kahan-Babuska (Neumaier) accumulator.
class CompensatedSum {
public:
  void add(double term) noexcept;
  /// Folds another partial sum in; merging in a fixed order is deterministic.
  void merge(const CompensatedSum& other) noexcept;
  double value() const noexcept { return sum_ + compensation_; }
  std::size_t count() const noexcept { return count_; }

private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
  std::size_t count_ = 0;
};

double compensated_sum(std::span<const double> terms);

/// Splits `terms` into `chunks` contiguous pieces, sums each with its own
/// accumulator and merges the partials in ascending chunk order.
double chunked_compensated_sum(std::span<const double> terms, std::size_t chunks);

} // namespace lsint
