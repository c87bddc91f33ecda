#include <doctest.h>

#include "mocca/lattice.hpp"

using namespace mocca;

TEST_SUITE("lattice") {

TEST_CASE("centered_mod maps into the half-open centered range") {
  CHECK(centered_mod({5, 0}, 8) == GridIndex{-3, 0});
  CHECK(centered_mod({0, 0}, 8) == GridIndex{0, 0});
  CHECK(centered_mod({-4, 4}, 8) == GridIndex{-4, -4});
}

TEST_CASE("centered_mod rejects odd or nonpositive N") {
  CHECK_THROWS_AS(centered_mod({0, 0}, 7), std::invalid_argument);
  CHECK_THROWS_AS(centered_mod({0, 0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(centered_mod({0, 0}, -4), std::invalid_argument);
}

TEST_CASE("centered_mod is idempotent on in-range inputs") {
  for (int n : {2, 4, 8, 10}) {
    const CenteredGrid grid(n);
    for (const auto& idx : enumerate(grid)) CHECK(centered_mod(idx, n) == idx);
  }
}

TEST_CASE("centered_mod is N-periodic per axis") {
  for (int k = -3; k <= 3; ++k)
    for (int l = -3; l <= 3; ++l)
      for (int v1 = -9; v1 <= 9; v1 += 3)
        for (int v2 = -9; v2 <= 9; v2 += 4)
          CHECK(centered_mod({v1 + 8 * k, v2 + 8 * l}, 8) == centered_mod({v1, v2}, 8));
}

TEST_CASE("enumerate order is column-major with n2 outer") {
  const auto two = enumerate(CenteredGrid(2));
  REQUIRE(two.size() == 4);
  CHECK(two[0] == GridIndex{-1, -1});
  CHECK(two[1] == GridIndex{0, -1});
  CHECK(two[2] == GridIndex{-1, 0});
  CHECK(two[3] == GridIndex{0, 0});

  const auto one = enumerate(CenteredGrid(1));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == GridIndex{0, 0});

  const auto three = enumerate(CenteredGrid(3));
  REQUIRE(three.size() == 9);
  CHECK(three.front() == GridIndex{-1, -1});
  CHECK(three.back() == GridIndex{1, 1});
}

TEST_CASE("enumerate covers size squared entries matching flat_index") {
  for (int n : {1, 2, 3, 8}) {
    const CenteredGrid grid(n);
    const auto idx = enumerate(grid);
    CHECK(idx.size() == grid.cardinality());
    for (std::size_t i = 0; i < idx.size(); ++i)
      CHECK(flat_index(grid, idx[i].n1, idx[i].n2) == i);
  }
}

TEST_CASE("grid ranges follow the floor conventions") {
  CHECK(CenteredGrid(8).lo() == -4);
  CHECK(CenteredGrid(8).hi() == 3);
  CHECK(CenteredGrid(5).lo() == -2);
  CHECK(CenteredGrid(5).hi() == 2);
  CHECK(CenteredGrid(10).lo() == -5);
  CHECK(CenteredGrid(10).hi() == 4);
}

}  // TEST_SUITE
