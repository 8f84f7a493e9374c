#include <algorithm>
#include <numeric>

#include "catch_amalgamated.hpp"
#include "support/support.hpp"

using namespace gcorr;

namespace {

  /// Brute force over all arrow bijections; only for a handful of arrows.
  bool groupoids_isomorphic(FiniteGroupoid const& A, FiniteGroupoid const& B) {
    if (A.num_arrows() != B.num_arrows() || A.num_units() != B.num_units()) {
      return false;
    }
    std::vector<Index> perm(A.num_arrows());
    std::iota(perm.begin(), perm.end(), Index{0});
    do {
      std::vector<Index> unit_map(A.num_units(), npos);
      bool               ok = true;
      for (Index u = 0; ok && u < A.num_units(); ++u) {
        Index b = perm[A.unit_arrow(u)];
        ok      = B.is_unit_arrow(b);
        if (ok) {
          unit_map[u] = B.src(b);
        }
      }
      for (Index a = 0; ok && a < A.num_arrows(); ++a) {
        ok = unit_map[A.src(a)] == B.src(perm[a]) && unit_map[A.dst(a)] == B.dst(perm[a])
             && perm[A.inv(a)] == B.inv(perm[a]);
      }
      for (Index a = 0; ok && a < A.num_arrows(); ++a) {
        for (Index b : A.range_fibre(A.src(a))) {
          ok = ok && perm[A.compose(a, b)] == B.compose(perm[a], perm[b]);
        }
      }
      if (ok) {
        return true;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
  }

  GroupoidAction c2_translation(Side side) {
    auto         g = share(group_groupoid(FiniteGroup::cyclic(2)));
    ActionTables t{side, {"p0", "p1"}, {0, 0}, {}};
    for (Index a = 0; a < 2; ++a) {
      for (Index x = 0; x < 2; ++x) {
        t.table.push_back({a, x, (a + x) % 2});
      }
    }
    return build_action(g, t);
  }

}  // namespace

TEST_CASE("pair groupoid on two units is valid", "[groupoid_core]") {
  FiniteGroupoid g = build_groupoid(pair_groupoid(2).tables());
  CHECK(g.num_units() == 2);
  CHECK(g.num_arrows() == 4);
  Index a12 = g.find_arrow("(1,2)");
  Index a21 = g.find_arrow("(2,1)");
  CHECK(g.compose(a12, a21) == g.find_arrow("(1,1)"));
  CHECK(g.inv(a12) == a21);
  CHECK(g.src(a12) == g.find_unit("2"));
  CHECK(g.dst(a12) == g.find_unit("1"));
}

TEST_CASE("cyclic group of order three as a one-unit groupoid", "[groupoid_core]") {
  FiniteGroupoid g = build_groupoid(group_groupoid(FiniteGroup::cyclic(3)).tables());
  CHECK(g.num_units() == 1);
  CHECK(g.num_arrows() == 3);
  CHECK(g.compose(g.find_arrow("1"), g.find_arrow("2")) == g.find_arrow("0"));
}

TEST_CASE("self-inverse off-diagonal arrow is rejected as BadInverse", "[groupoid_core]") {
  GroupoidTables t   = pair_groupoid(2).tables();
  Index          a12 = 1;  // "(1,2)"
  REQUIRE(t.arrows[a12] == "(1,2)");
  t.inv[a12] = a12;
  try {
    (void)build_groupoid(t);
    FAIL("expected a GroupoidError");
  } catch (GroupoidError const& e) {
    bool found = std::any_of(e.violations().begin(), e.violations().end(),
                             [](auto const& v) { return v.kind == ErrorCode::bad_inverse; });
    CHECK(found);
    CHECK_FALSE(e.witness().empty());
  }
}

TEST_CASE("wrong product entry is rejected", "[groupoid_core]") {
  GroupoidTables t = group_groupoid(FiniteGroup::cyclic(3)).tables();
  // 1∘1 = 2 in Z/3; claim 0 instead.
  for (auto& c : t.comp) {
    if (c[0] == 1 && c[1] == 1) {
      c[2] = 0;
    }
  }
  CHECK_THROWS_AS(build_groupoid(t), GroupoidError);
}

TEST_CASE("dangling endpoint is rejected", "[groupoid_core]") {
  GroupoidTables t = pair_groupoid(2).tables();
  t.src[1]         = 7;
  try {
    (void)build_groupoid(t);
    FAIL("expected a GroupoidError");
  } catch (GroupoidError const& e) {
    CHECK(e.code() == ErrorCode::dangling_endpoint);
  }
}

TEST_CASE("trivial group on three points gives three isolated units", "[groupoid_core]") {
  auto         g = share(group_groupoid(FiniteGroup::trivial()));
  ActionTables t{Side::left, {"a", "b", "c"}, {0, 0, 0}, {{0, 0, 0}, {0, 1, 1}, {0, 2, 2}}};
  auto         tg = transformation_groupoid(build_action(g, t));
  CHECK(tg.groupoid->num_units() == 3);
  CHECK(tg.groupoid->num_arrows() == 3);
  for (Index a = 0; a < 3; ++a) {
    CHECK(tg.groupoid->is_unit_arrow(a));
  }
}

TEST_CASE("Z/2 translating itself gives the pair groupoid", "[groupoid_core]") {
  for (Side side : {Side::left, Side::right}) {
    auto tg = transformation_groupoid(c2_translation(side));
    CHECK(groupoids_isomorphic(*tg.groupoid, pair_groupoid(2)));
    CHECK_FALSE(groupoids_isomorphic(*tg.groupoid, group_groupoid(FiniteGroup::klein())));
  }
}

TEST_CASE("Z/2 acting trivially on a point is Z/2", "[groupoid_core]") {
  auto         g = share(group_groupoid(FiniteGroup::cyclic(2)));
  ActionTables t{Side::left, {"pt"}, {0}, {{0, 0, 0}, {1, 0, 0}}};
  auto         tg = transformation_groupoid(build_action(g, t));
  CHECK(groupoids_isomorphic(*tg.groupoid, group_groupoid(FiniteGroup::cyclic(2))));
}

TEST_CASE("transformation groupoid endpoints follow the action", "[groupoid_core]") {
  auto left = c2_translation(Side::left);
  auto tg   = transformation_groupoid(left);
  for (Index x = 0; x < 2; ++x) {
    for (Index a = 0; a < 2; ++a) {
      Index k = tg.arrow(a, x);
      CHECK(tg.groupoid->src(k) == x);
      CHECK(tg.groupoid->dst(k) == left.act(a, x));
    }
  }
}

TEST_CASE("bad action tables are rejected", "[groupoid_core]") {
  auto g = share(group_groupoid(FiniteGroup::cyclic(2)));
  SECTION("unit moves a point") {
    ActionTables t{Side::left, {"p0", "p1"}, {0, 0}, {{0, 0, 1}, {0, 1, 0}, {1, 0, 1}, {1, 1, 0}}};
    CHECK_THROWS_AS(build_action(g, t), Error);
  }
  SECTION("missing entry") {
    ActionTables t{Side::left, {"p0", "p1"}, {0, 0}, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}}};
    CHECK_THROWS_AS(build_action(g, t), Error);
  }
}

TEST_CASE("check_proper reports fibre sizes", "[groupoid_core]") {
  SECTION("pair groupoid") {
    auto ev = check_proper(pair_groupoid(2));
    CHECK(ev.proper);
    CHECK(ev.fibre_sizes.size() == 4);
    for (auto const& [uv, n] : ev.fibre_sizes) {
      CHECK(n == 1);
    }
  }
  SECTION("Z/3") {
    auto ev = check_proper(group_groupoid(FiniteGroup::cyclic(3)));
    CHECK(ev.fibre_sizes.at({0, 0}) == 3);
  }
  SECTION("disjoint union of Z/2 and a pair groupoid") {
    auto g  = disjoint_union({group_groupoid(FiniteGroup::cyclic(2)), pair_groupoid(2)});
    auto ev = check_proper(g);
    CHECK(ev.proper);
    CHECK(ev.fibre_sizes.size() == 5);
    CHECK(ev.fibre_sizes.at({0, 0}) == 2);
    CHECK(ev.fibre_sizes.at({1, 2}) == 1);
    CHECK(ev.fibre_sizes.count({0, 1}) == 0);
  }
}

TEST_CASE("fibre products", "[groupoid_core]") {
  SECTION("Z/2 translation on both sides: all four pairs lie over the one unit") {
    auto z = fibre_product(c2_translation(Side::right), c2_translation(Side::left));
    CHECK(z.pairs.size() == 4);
    CHECK(orbit_space(z.diagonal).num_orbits() == 2);
  }
  SECTION("disjoint momentum images") {
    auto         g = share(unit_groupoid({"u", "v"}));
    ActionTables xr{Side::right, {"x1", "x2"}, {0, 0}, {{0, 0, 0}, {0, 1, 1}}};
    ActionTables yl{Side::left, {"y1"}, {1}, {{1, 0, 0}}};
    auto         z = fibre_product(build_action(g, xr), build_action(g, yl));
    CHECK(z.pairs.empty());
  }
  SECTION("three by two over one unit") {
    auto         g = share(unit_groupoid({"u"}));
    ActionTables xr{Side::right, {"x1", "x2", "x3"}, {0, 0, 0}, {{0, 0, 0}, {0, 1, 1}, {0, 2, 2}}};
    ActionTables yl{Side::left, {"y1", "y2"}, {0, 0}, {{0, 0, 0}, {0, 1, 1}}};
    auto         z = fibre_product(build_action(g, xr), build_action(g, yl));
    CHECK(z.pairs.size() == 6);
    CHECK(z.diagonal.point_name(z.find(1, 0)) == "(x2,y1)");
  }
  SECTION("different groupoids are refused") {
    auto         g = share(unit_groupoid({"u"}));
    auto         h = share(unit_groupoid({"w"}));
    ActionTables xr{Side::right, {"x"}, {0}, {{0, 0, 0}}};
    ActionTables yl{Side::left, {"y"}, {0}, {{0, 0, 0}}};
    try {
      (void)fibre_product(build_action(g, xr), build_action(h, yl));
      FAIL("expected GroupoidMismatch");
    } catch (Error const& e) {
      CHECK(e.code() == ErrorCode::groupoid_mismatch);
    }
  }
}

TEST_CASE("orbit spaces", "[groupoid_core]") {
  SECTION("trivial action gives singletons") {
    auto         g = share(unit_groupoid({"u"}));
    ActionTables t{Side::left, {"a", "b", "c", "d"}, {0, 0, 0, 0}, {{0, 0, 0}, {0, 1, 1}, {0, 2, 2}, {0, 3, 3}}};
    auto         o = orbit_space(build_action(g, t));
    CHECK(o.num_orbits() == 4);
  }
  SECTION("Z/2 on itself is one orbit") {
    auto o = orbit_space(c2_translation(Side::left));
    CHECK(o.num_orbits() == 1);
    CHECK(o.members[0].size() == 2);
  }
  SECTION("diagonal action on four points") {
    auto z = fibre_product(c2_translation(Side::right), c2_translation(Side::left));
    auto o = orbit_space(z.diagonal);
    REQUIRE(o.num_orbits() == 2);
    for (Index k = 0; k < 2; ++k) {
      CHECK(o.members[k].size() == 2);
      CHECK(o.projection[o.representative[k]] == k);
    }
    // (x,y) and (x+1,y+1) share an orbit.
    CHECK(o.projection[z.find(0, 0)] == o.projection[z.find(1, 1)]);
    CHECK(o.projection[z.find(0, 1)] != o.projection[z.find(0, 0)]);
  }
}

TEST_CASE("bispace axioms", "[groupoid_core]") {
  auto g = share(group_groupoid(FiniteGroup::cyclic(2)));
  // Left translation commutes with right translation on an abelian group.
  CHECK_NOTHROW(make_bispace(c2_translation(Side::left), c2_translation(Side::right)));
  // A right "action" that swaps only under the unit breaks the axioms
  // already at build time; a valid right action that moves the left
  // momentum needs two left units.
  auto         u2 = share(unit_groupoid({"l0", "l1"}));
  ActionTables l{Side::left, {"p0", "p1"}, {0, 1}, {{0, 0, 0}, {1, 1, 1}}};
  try {
    (void)make_bispace(build_action(u2, l), c2_translation(Side::right));
    FAIL("expected NotCommuting");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::not_commuting);
    CHECK_FALSE(e.witness().empty());
  }
}
