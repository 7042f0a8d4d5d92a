#pragma once

#include "lsint/geometry.hpp"
#include "lsint/grid.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lsint {

/// Node-wise signed distance estimates on a grid. Storage is row-major with
/// the last axis fastest, matching the band iteration order.
struct DistanceGrid {
  GridSpec grid;
  std::vector<double> values;
  std::vector<std::uint8_t> frozen;
  int rounds = 0;
  double last_change = 0.0;

  std::size_t index(long i, long j, long k = 0) const noexcept {
    const long n = grid.nodes_per_axis();
    return grid.dim == 3 ? static_cast<std::size_t>((i * n + j) * n + k)
                         : static_cast<std::size_t>(i * n + j);
  }
};

/// phi at every node, in DistanceGrid storage order.
std::vector<double> sample_nodes(const GridSpec& grid, const ImplicitField& field);

/// Nodes adjacent to a sign change get the smallest axis-wise linear
/// interpolation distance and are frozen; every other node starts at +-inf.
/// Throws NoInterface when phi never changes sign.
DistanceGrid initialize_interface(const GridSpec& grid, std::span<const double> phi);

struct SweepOptions {
  int max_rounds = 50;
  /// Convergence threshold on the largest per-node change in one round.
  /// Negative selects 1e-12 times the domain diameter.
  double tol = -1.0;
};

/// First-order Godunov fast sweeping for |grad d| = 1. One round runs all
/// 2^dim axis orderings. Throws NotConverged when rounds run out.
DistanceGrid fast_sweep(DistanceGrid dg, const SweepOptions& options = {});

/// Largest Godunov residual | |grad d|_upwind - 1 | over non-frozen nodes.
double eikonal_residual(const DistanceGrid& dg);

/// Multilinear interpolant of the node values, flagged as a distance field.
ImplicitField make_sampled_field(const DistanceGrid& dg);

} // namespace lsint
