#include "lsint/grid.hpp"

#include "lsint/compensated_sum.hpp"
#include "lsint/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace lsint {

double GridSpec::cell_volume() const noexcept {
  const double h = spacing();
  return dim == 3 ? h * h * h : h * h;
}

void validate(const GridSpec& grid) {
  if (grid.dim != 2 && grid.dim != 3)
    throw std::invalid_argument(fmt::format("grid dimension must be 2 or 3, got {}", grid.dim));
  if (grid.n_cells < 1)
    throw std::invalid_argument("grid needs at least one cell per axis");
  if (grid.half_width < 1)
    throw std::invalid_argument("grid half-width must be at least 1");
  if (!(grid.offset >= 0.0 && grid.offset < 1.0))
    throw std::invalid_argument("grid offset must lie in [0, 1)");
  const int cap = grid.dim == 3 ? kMaxCells3d : kMaxCells2d;
  if (grid.n_cells > cap)
    throw ResourceCap(fmt::format("N = {} exceeds the {}D cap of {}", grid.n_cells,
                                  grid.dim, cap));
}

std::string_view to_string(BandSide side) {
  switch (side) {
  case BandSide::Positive:
    return "positive";
  case BandSide::Negative:
    return "negative";
  case BandSide::Both:
    return "both";
  }
  return "unknown";
}

BandSide parse_band_side(std::string_view name) {
  if (name == "positive" || name == "+")
    return BandSide::Positive;
  if (name == "negative" || name == "-")
    return BandSide::Negative;
  if (name == "both")
    return BandSide::Both;
  throw std::invalid_argument(fmt::format("unknown band side '{}'", name));
}

BandMask BandMask::for_side(double eps, BandSide side) {
  switch (side) {
  case BandSide::Positive:
    return {0.0, eps, false, true};
  case BandSide::Negative:
    return {-eps, 0.0, true, false};
  case BandSide::Both:
    break;
  }
  return {-eps, eps, true, true};
}

std::vector<BandNode> iterate_band(const GridSpec& grid, const ImplicitField& field,
                                   double eps, BandSide side) {
  if (!(eps > 0.0))
    throw std::invalid_argument("iterate_band: eps must be positive");
  std::vector<BandNode> nodes;
  for_each_band_node(grid, field, BandMask::for_side(eps, side),
                     [&](const BandNode& node) { nodes.push_back(node); });
  return nodes;
}

namespace {

CompensatedSum reduce_slab(const GridSpec& grid, const ImplicitField& field,
                           const BandMask& mask, const BandTerm& term, long i) {
  const long n = grid.nodes_per_axis();
  const long nk = grid.dim == 3 ? n : 1;
  CompensatedSum acc;
  BandNode node;
  node.x[0] = grid.coordinate(i);
  for (long j = 0; j < n; ++j) {
    node.x[1] = grid.coordinate(j);
    for (long k = 0; k < nk; ++k) {
      node.x[2] = grid.dim == 3 ? grid.coordinate(k) : 0.0;
      const double v = field.phi(node.x);
      if (!mask.contains(v))
        continue;
      node.index = {i, j, k};
      node.value = v;
      acc.add(term(node));
    }
  }
  return acc;
}

} // namespace

BandReduction band_reduce(const GridSpec& grid, const ImplicitField& field,
                          const BandMask& mask, const BandTerm& term, int workers) {
  const long slabs = grid.nodes_per_axis();
  std::vector<CompensatedSum> partials(static_cast<std::size_t>(slabs));

  workers = std::clamp(workers, 1, static_cast<int>(std::min<long>(slabs, 256)));
  if (workers == 1) {
    for (long i = 0; i < slabs; ++i)
      partials[i] = reduce_slab(grid, field, mask, term, i);
  } else {
    std::atomic<long> next{0};
    auto run = [&] {
      for (long i = next.fetch_add(1); i < slabs; i = next.fetch_add(1))
        partials[i] = reduce_slab(grid, field, mask, term, i);
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w)
      pool.emplace_back(run);
    run();
  }

  CompensatedSum total;
  for (const auto& part : partials)
    total.merge(part);
  return {total.value(), total.count()};
}

} // namespace lsint
