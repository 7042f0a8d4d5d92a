#include "lsint/compensated_sum.hpp"

#include <algorithm>
#include <cmath>

namespace lsint {

void CompensatedSum::add(double term) noexcept {
  const double t = sum_ + term;
  if (std::abs(sum_) >= std::abs(term))
    compensation_ += (sum_ - t) + term;
  else
    compensation_ += (term - t) + sum_;
  sum_ = t;
  ++count_;
}

void CompensatedSum::merge(const CompensatedSum& other) noexcept {
  const std::size_t n = count_ + other.count_;
  add(other.sum_);
  add(other.compensation_);
  count_ = n;
}

double compensated_sum(std::span<const double> terms) {
  CompensatedSum acc;
  for (double t : terms)
    acc.add(t);
  return acc.value();
}

double chunked_compensated_sum(std::span<const double> terms, std::size_t chunks) {
  chunks = std::max<std::size_t>(chunks, 1);
  const std::size_t n = terms.size();
  CompensatedSum total;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = n * c / chunks;
    const std::size_t hi = n * (c + 1) / chunks;
    CompensatedSum part;
    for (std::size_t i = lo; i < hi; ++i)
      part.add(terms[i]);
    total.merge(part);
  }
  return total.value();
}

} // namespace lsint
