#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "suhub/lattice.hpp"

using suhub::Lattice;

TEST_CASE("2x2 box is a complete graph on 4 sites", "[lattice]") {
    Lattice lat({2, 2});
    REQUIRE(lat.num_sites() == 4);
    // Coordinates are {-1,0}^2 in lexicographic order.
    const int corner = lat.index_of(std::vector<int>{-1, -1});
    CHECK(lat.neighbors(corner).size() == 3);
    for (int s = 0; s < 4; ++s) CHECK(lat.neighbors(s).size() == 3);
}

TEST_CASE("3x3 box: center has 8 neighbors, corner has 3", "[lattice]") {
    Lattice lat({3, 3});
    REQUIRE(lat.num_sites() == 9);
    const int center = lat.index_of(std::vector<int>{0, 0});
    CHECK(lat.neighbors(center).size() == 8);
    const int corner = lat.index_of(std::vector<int>{-1, -1});
    CHECK(lat.neighbors(corner).size() == 3);
}

TEST_CASE("1xK box is a path graph", "[lattice]") {
    Lattice lat({1, 5});
    REQUIRE(lat.num_sites() == 5);
    const int interior = lat.index_of(std::vector<int>{0, 0});
    CHECK(lat.neighbors(interior).size() == 2);
    const int end = lat.index_of(std::vector<int>{0, -2});
    CHECK(lat.neighbors(end).size() == 1);
}

TEST_CASE("neighbor relation is symmetric and irreflexive", "[lattice]") {
    Lattice lat({2, 3, 2});
    for (int x = 0; x < lat.num_sites(); ++x) {
        for (int y : lat.neighbors(x)) {
            CHECK(x != y);
            const auto& back = lat.neighbors(y);
            CHECK(std::find(back.begin(), back.end(), x) != back.end());
        }
    }
}

TEST_CASE("sites are distinct and index round-trips", "[lattice]") {
    Lattice lat({3, 2});
    std::set<std::vector<int>> seen;
    for (int s = 0; s < lat.num_sites(); ++s) {
        auto c = lat.coords(s);
        seen.insert(std::vector<int>(c.begin(), c.end()));
        CHECK(lat.index_of(c) == s);
    }
    CHECK(seen.size() == static_cast<std::size_t>(lat.num_sites()));
}

TEST_CASE("out-of-lattice coordinates are a domain error", "[lattice]") {
    Lattice lat({2, 2});
    CHECK_THROWS_AS(lat.index_of(std::vector<int>{5, 0}), std::domain_error);
    CHECK_THROWS_AS(lat.neighbors(99), std::domain_error);
    CHECK_THROWS_AS(Lattice({0, 2}), std::invalid_argument);
}
