#pragma once

#include "lsint/geometry.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

namespace lsint {

/// Uniform lattice with spacing h = 2/N over [-L, L]^dim. With the default
/// L = 1 and offset 0 the node coordinates are i*h - 1, i = 0..N.
struct GridSpec {
  int dim = 2;
  int n_cells = 100;
  /// Half-width L of the sampled box, in units of the reference cube [-1, 1].
  int half_width = 1;
  /// Shift of every node by offset*h along each axis.
  double offset = 0.0;

  double spacing() const noexcept { return 2.0 / n_cells; }
  long nodes_per_axis() const noexcept { return static_cast<long>(half_width) * n_cells + 1; }
  double coordinate(long i) const noexcept {
    return (static_cast<double>(i) + offset) * spacing() - half_width;
  }
  double cell_volume() const noexcept;
};

inline constexpr int kMaxCells3d = 800;
inline constexpr int kMaxCells2d = 25600;

/// Throws std::invalid_argument for malformed grids and ResourceCap above the caps.
void validate(const GridSpec& grid);

enum class BandSide { Positive, Negative, Both };

std::string_view to_string(BandSide side);
BandSide parse_band_side(std::string_view name);

/// Interval of level values selected by a band.
struct BandMask {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double v) const noexcept {
    return (lo_closed ? v >= lo : v > lo) && (hi_closed ? v <= hi : v < hi);
  }

  /// (0, eps] for Positive, [-eps, 0) for Negative, [-eps, eps] for Both.
  static BandMask for_side(double eps, BandSide side);
};

struct BandNode {
  std::array<long, 3> index{0, 0, 0};
  Point x{0.0, 0.0, 0.0};
  double value = 0.0;
};

/// Visits nodes whose level value lies in `mask`, in lexicographic order
/// (first axis slowest). Returns the number of nodes visited.
template <class Visit>
std::size_t for_each_band_node(const GridSpec& grid, const ImplicitField& field,
                               const BandMask& mask, Visit&& visit) {
  const long n = grid.nodes_per_axis();
  const long nk = grid.dim == 3 ? n : 1;
  std::size_t count = 0;
  BandNode node;
  for (long i = 0; i < n; ++i) {
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
        visit(node);
        ++count;
      }
    }
  }
  return count;
}

/// Nodes with phi in (0, eps], [-eps, 0) or [-eps, eps]. An empty result is the
/// EmptyBand signal; it is not an error here.
std::vector<BandNode> iterate_band(const GridSpec& grid, const ImplicitField& field,
                                   double eps, BandSide side);

struct BandReduction {
  double sum = 0.0;
  std::size_t count = 0;
};

using BandTerm = std::function<double(const BandNode&)>;

/// Compensated sum of term(node) over the band. Work is split into one chunk
/// per slab of the first axis; chunk partials are merged in ascending slab
/// order, so the result does not depend on `workers`.
BandReduction band_reduce(const GridSpec& grid, const ImplicitField& field,
                          const BandMask& mask, const BandTerm& term, int workers = 1);

} // namespace lsint
