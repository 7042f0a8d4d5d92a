#pragma once

#include "lsint/grid.hpp"
#include "lsint/redistance.hpp"

#include <iosfwd>
#include <vector>

namespace lsint {

/// Node samples on the default [-1, 1]^dim lattice.
struct NodeSamples {
  GridSpec grid;
  /// DistanceGrid storage order.
  std::vector<double> values;
};

/// Reads rows `i,j,phi` or `i,j,k,phi`. A header row and lines starting with
/// '#' are skipped. Every node of an (N+1)^dim lattice must appear exactly
/// once; N is taken from the largest index. Throws std::invalid_argument.
NodeSamples read_node_csv(std::istream& in);

/// Writes `i,j,phi` rows for sampled values in storage order.
void write_node_csv(std::ostream& out, const GridSpec& grid, const std::vector<double>& values,
                    const char* value_column = "phi");

/// Writes `i,j,d` rows of a redistanced grid.
void write_distance_csv(std::ostream& out, const DistanceGrid& dg);

} // namespace lsint
