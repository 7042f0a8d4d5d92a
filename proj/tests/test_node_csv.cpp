#include "lsint/geometry.hpp"
#include "lsint/node_csv.hpp"

#include "doctest.h"

#include <sstream>

using namespace lsint;

TEST_SUITE("node_csv") {

TEST_CASE("round trip") {
  const GridSpec g{2, 12};
  const auto values = sample_nodes(g, make_circle_sdf(0.501));
  std::stringstream io;
  write_node_csv(io, g, values);
  const auto back = read_node_csv(io);
  CHECK(back.grid.dim == 2);
  CHECK(back.grid.n_cells == 12);
  CHECK(back.values == values);
}

TEST_CASE("three columns of indices") {
  std::stringstream io;
  io << "# comment\ni,j,k,phi\n";
  for (int i = 0; i <= 1; ++i)
    for (int j = 0; j <= 1; ++j)
      for (int k = 0; k <= 1; ++k)
        io << i << ',' << j << ',' << k << ',' << (i + j + k - 1.5) << '\n';
  const auto s = read_node_csv(io);
  CHECK(s.grid.dim == 3);
  CHECK(s.grid.n_cells == 1);
  CHECK(s.values.size() == 8);
  CHECK(s.values.back() == 1.5);
}

TEST_CASE("rows may come in any order") {
  std::stringstream io("1,1,4\n0,0,1\n1,0,3\n0,1,2\n");
  const auto s = read_node_csv(io);
  CHECK(s.values == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("malformed input") {
  for (const char* text : {"0,0\n", "0,0,x\n", "0,0,1\ni,j,phi\n", "0,0,0,0,0\n", "-1,0,1\n",
                           ""}) {
    std::stringstream io(text);
    CHECK_THROWS_AS(read_node_csv(io), std::invalid_argument);
  }
}

TEST_CASE("missing node") {
  std::stringstream io("0,0,1\n0,1,1\n1,0,1\n");
  CHECK_THROWS_AS(read_node_csv(io), std::invalid_argument);
}

TEST_CASE("duplicate node") {
  std::stringstream io("0,0,1\n0,1,1\n1,0,1\n1,1,1\n1,1,2\n");
  CHECK_THROWS_AS(read_node_csv(io), std::invalid_argument);
}

TEST_CASE("distance column") {
  const GridSpec g{2, 4};
  DistanceGrid dg{g, sample_nodes(g, make_circle_sdf(0.5)), std::vector<std::uint8_t>(25, 0), 0,
                  0.0};
  std::stringstream io;
  write_distance_csv(io, dg);
  std::string header;
  std::getline(io, header);
  CHECK(header == "i,j,d");
}

}
