#include <algorithm>
#include <set>

#include "doctest.h"
#include "wetting/error.hpp"
#include "wetting/lattice.hpp"

using namespace wetting;

TEST_CASE("semi box site lists") {
  const auto sites = sites_of(Region::semi_box(2, 1, 2));
  REQUIRE(sites.size() == 6);
  CHECK(sites.front() == Site{-1, 1});
  CHECK(sites.back() == Site{1, 2});
  CHECK(std::is_sorted(sites.begin(), sites.end()));

  for (int d : {2, 3})
    for (int n = 0; n <= 3; ++n)
      for (int m = 1; m <= 4; ++m) {
        const Region r = Region::semi_box(d, n, m);
        std::size_t expect = static_cast<std::size_t>(m);
        for (int k = 0; k + 1 < d; ++k) expect *= static_cast<std::size_t>(2 * n + 1);
        CHECK(sites_of(r).size() == expect);
        CHECK(r.size() == expect);
      }
}

TEST_CASE("extended box is the semi box plus its reflection") {
  for (auto refl : {Reflection::half_plane, Reflection::negate}) {
    const Region r = Region::extended_box(2, 1, refl);
    const auto sites = sites_of(r);
    CHECK(sites.size() == 6);
    std::set<Site> set(sites.begin(), sites.end());
    for (const auto& s : sites) CHECK(set.count(reflect(s, refl)) == 1);
    for (const auto& s : sites) CHECK(reflect(reflect(s, refl), refl) == s);
  }
  const auto half = sites_of(Region::extended_box(2, 2, Reflection::half_plane));
  CHECK(half.size() == 20);
  CHECK(std::find(half.begin(), half.end(), Site{0, -1}) != half.end());
  const auto neg = sites_of(Region::extended_box(3, 1, Reflection::negate));
  CHECK(neg.size() == 18);
  CHECK(std::none_of(neg.begin(), neg.end(), [](const Site& s) { return s.height() == 0; }));
}

TEST_CASE("explicit and full boxes") {
  CHECK(sites_of(Region::explicit_sites(2, {Site{0, 1}})).size() == 1);
  CHECK(sites_of(Region::full_box(2, 1, 1)).size() == 9);
  CHECK(sites_of(Region::full_box(3, 1, 2)).size() == 45);
  CHECK(Region::full_box(2, 1, 1).default_universe() == Universe::full);
  CHECK(Region::semi_box(2, 1, 1).default_universe() == Universe::semi_infinite);
}

TEST_CASE("site cap") { CHECK_THROWS_AS(sites_of(Region::semi_box(2, 100, 100), 1000), CapacityError); }

TEST_CASE("neighbours") {
  const auto wall = neighbors(Site{0, 1}, Universe::semi_infinite);
  CHECK(wall.size() == 3);
  CHECK(std::find(wall.begin(), wall.end(), Site{0, 2}) != wall.end());
  CHECK(neighbors(Site{0, 2}, Universe::semi_infinite).size() == 4);
  const auto full = neighbors(Site{0, 0}, Universe::full);
  CHECK(full.size() == 4);
  CHECK(std::find(full.begin(), full.end(), Site{0, -1}) != full.end());
  CHECK(neighbors(Site{3, 1, 1}, Universe::semi_infinite).size() == 5);
}

TEST_CASE("neighbour relation is symmetric") {
  for (auto u : {Universe::semi_infinite, Universe::full})
    for (const auto& s : sites_of(Region::semi_box(3, 2, 3))) {
      for (const auto& t : neighbors(s, u)) {
        const auto back = neighbors(t, u);
        CHECK(std::find(back.begin(), back.end(), s) != back.end());
      }
    }
}

TEST_CASE("edges reject non-neighbours") {
  CHECK_NOTHROW(Edge(Site{0, 1}, Site{1, 1}));
  CHECK_THROWS(Edge(Site{0, 1}, Site{1, 2}));
  CHECK_THROWS(Edge(Site{0, 1}, Site{0, 1}));
  const Edge e(Site{1, 1}, Site{0, 1});
  CHECK(e.a == Site{0, 1});
}

TEST_CASE("boundary edges") {
  auto single = boundary_edges(Region::explicit_sites(2, {Site{0, 1}}), Universe::semi_infinite);
  CHECK(single.interior.empty());
  CHECK(single.frontier.size() == 3);

  // Strip of three wall sites: two bonds inside, three above, one at each end.
  auto strip = boundary_edges(Region::semi_box(2, 1, 1), Universe::semi_infinite);
  CHECK(strip.interior.size() == 2);
  CHECK(strip.frontier.size() == 5);
  auto strip_full = boundary_edges(Region::semi_box(2, 1, 1), Universe::full);
  CHECK(strip_full.frontier.size() == 8);

  auto empty = boundary_edges(Region::explicit_sites(2, {}), Universe::semi_infinite);
  CHECK(empty.interior.empty());
  CHECK(empty.frontier.empty());

  // Every edge counted once: 2 d |R| = 2 |interior| + |frontier| in the full universe.
  const Region box = Region::full_box(3, 1, 2);
  auto be = boundary_edges(box, Universe::full);
  CHECK(2 * 3 * box.size() == 2 * be.interior.size() + be.frontier.size());
}

TEST_CASE("boundary conditions") {
  CHECK(BoundaryCondition::plus().spin_at(Site{0, 5}) == 1);
  CHECK(BoundaryCondition::minus().spin_at(Site{0, 5}) == -1);
  CHECK(BoundaryCondition::minus_plus().spin_at(Site{0, 5}) == -1);
  CHECK(BoundaryCondition::minus_plus().spin_at(Site{0, 0}) == 1);
  CHECK_FALSE(BoundaryCondition::free().spin_at(Site{0, 0}).has_value());

  const auto fixed = BoundaryCondition::fixed({{Site{0, 2}, -1}});
  CHECK(fixed.spin_at(Site{0, 2}) == -1);
  CHECK_THROWS_AS(fixed.spin_at(Site{1, 2}), ConfigurationError);

  const auto embedded = BoundaryCondition::embed_plus(fixed);
  CHECK(embedded.spin_at(Site{0, 2}) == -1);
  CHECK(embedded.spin_at(Site{0, 0}) == 1);
  CHECK(BoundaryCondition::embed_plus(BoundaryCondition::minus()).spin_at(Site{4, -3}) == 1);

  CHECK(BoundaryCondition::plus().flipped() == BoundaryCondition::minus());
  CHECK(fixed.flipped().spin_at(Site{0, 2}) == 1);
}
