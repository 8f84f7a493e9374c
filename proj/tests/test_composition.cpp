#include <cmath>

#include "catch_amalgamated.hpp"
#include "support/support.hpp"

using namespace gcorr;
using gcorr::test::find_isomorphism;

namespace {

  GroupoidPtr z2() {
    return share(group_groupoid(FiniteGroup::cyclic(2)));
  }

  /// Z/2 acting trivially on one point, on the side given; the other side
  /// is the trivial group.
  Correspondence trivial_z2_point(bool z2_on_left) {
    auto         g = z2();
    auto         t = share(group_groupoid(FiniteGroup::trivial()));
    auto         l = z2_on_left ? g : t;
    auto         r = z2_on_left ? t : g;
    ActionTables lt{Side::left, {"pt"}, {0}, {}};
    ActionTables rt{Side::right, {"pt"}, {0}, {}};
    for (Index a = 0; a < l->num_arrows(); ++a) {
      lt.table.push_back({a, 0, 0});
    }
    for (Index a = 0; a < r->num_arrows(); ++a) {
      rt.table.push_back({a, 0, 0});
    }
    return make_correspondence(z2_on_left ? "Y" : "X", HaarSystem::counting(l),
                               HaarSystem::counting(r),
                               make_bispace(build_action(l, lt), build_action(r, rt)),
                               MeasureFamily({0}, 1, {Scalar(1)}));
  }

  /// Z/2 by left translation on {0,1}, trivial group on the right,
  /// λ = (a, b).
  Correspondence weighted_z2(Scalar a, Scalar b) {
    auto         g = z2();
    auto         t = share(group_groupoid(FiniteGroup::trivial()));
    ActionTables l{Side::left, {"y0", "y1"}, {0, 0}, {}};
    for (Index e = 0; e < 2; ++e) {
      for (Index x = 0; x < 2; ++x) {
        l.table.push_back({e, x, (e + x) % 2});
      }
    }
    ActionTables r{Side::right, {"y0", "y1"}, {0, 0}, {{0, 0, 0}, {0, 1, 1}}};
    return make_correspondence("Yw", HaarSystem::counting(g), HaarSystem::counting(t),
                               make_bispace(build_action(g, l), build_action(t, r)),
                               MeasureFamily({0, 0}, 1, {a, b}));
  }

  Correspondence z2_identity() {
    auto z = FiniteGroup::cyclic(2);
    return from_group_hom(z, z, {0, 1}, "id");
  }

  void check_isomorphic(Correspondence const& a, Correspondence const& b) {
    auto phi = find_isomorphism(a, b);
    CHECK(phi.has_value());
  }

}  // namespace

TEST_CASE("m on singletons is the product of the two masses", "[composition]") {
  auto X = quiver_correspondence({"e"}, {"u"}, {"v"}, {0}, {0}, {Scalar(3)});
  auto Y = quiver_correspondence({"f"}, {"v"}, {"w"}, {0}, {0}, {Scalar::fraction(2, 5)});
  auto R = compose(X, Y);
  REQUIRE(R.Z.pairs.size() == 1);
  CHECK(R.m.weight(0) == Scalar::fraction(6, 5));
  CHECK(R.composite.lambda.weight(0) == Scalar::fraction(6, 5));
}

TEST_CASE("maps: m is the point mass on graph pairs", "[composition]") {
  auto e = catalog::fn_compose();
  auto R = compose(e.X, e.Y);
  CHECK(R.Z.pairs.size() == 5);
  for (Index z = 0; z < R.Z.pairs.size(); ++z) {
    CHECK(R.m.weight(z) == Scalar(1));
  }
  CHECK(R.exact());
}

TEST_CASE("lambda_pi aggregation", "[composition]") {
  SECTION("trivial middle groupoid gives point masses") {
    auto e = catalog::quiver();
    auto R = compose(e.X, e.Y);
    CHECK(R.orbits.num_orbits() == R.Z.pairs.size());
    for (Index z = 0; z < R.Z.pairs.size(); ++z) {
      CHECK(R.lambda_pi.weight(z) == Scalar(1));
    }
  }
  SECTION("free Z/2 diagonal action: two points of weight one per orbit") {
    auto X = z2_identity();
    auto Y = z2_identity();
    auto R = compose(X, Y);
    CHECK(R.Z.pairs.size() == 4);
    REQUIRE(R.orbits.num_orbits() == 2);
    for (Index k = 0; k < 2; ++k) {
      CHECK(R.orbits.members[k].size() == 2);
    }
    for (Index z = 0; z < 4; ++z) {
      CHECK(R.lambda_pi.weight(z) == Scalar(1));
    }
  }
  SECTION("stabiliser Z/2: one point of weight two") {
    auto X = trivial_z2_point(false);
    auto Y = trivial_z2_point(true);
    auto R = compose(X, Y);
    REQUIRE(R.Z.pairs.size() == 1);
    CHECK(R.orbits.num_orbits() == 1);
    CHECK(R.lambda_pi.weight(0) == Scalar(2));
    CHECK(verify_theorem(X, Y, R).ok());
  }
}

TEST_CASE("Delta_Z", "[composition]") {
  SECTION("unimodular input gives Delta_Z = 1") {
    auto e = catalog::group_hom();
    auto R = compose(e.X, e.Y);
    for (auto const& d : R.delta_Z.value) {
      CHECK(d.is_one());
    }
  }
  SECTION("weighted Y: Delta_Z((x,y),g) = Delta_2(g^-1, y)") {
    auto X = z2_identity();
    auto Y = weighted_z2(Scalar(1), Scalar(3));
    auto R = compose(X, Y);
    auto const& g2 = X.H();
    for (Index k = 0; k < R.ZG.base_arrow.size(); ++k) {
      Index gamma = R.ZG.base_arrow[k];
      Index y     = R.Z.pairs[R.ZG.point[k]].second;
      CHECK(R.delta_Z(k) == Y.delta(g2.inv(gamma), y));
    }
  }
}

TEST_CASE("canonical cochain b", "[composition]") {
  SECTION("Delta = 1 keeps b exactly 1") {
    auto e = catalog::subgroup();
    auto R = compose(e.X, e.Y);
    for (auto const& v : R.b.value) {
      CHECK(v.is_exact());
      CHECK(v.is_one());
    }
  }
  SECTION("free Z/2 with lambda = (1,3): geometric means") {
    auto X = z2_identity();
    auto Y = weighted_z2(Scalar(1), Scalar(3));
    auto R = compose(X, Y);
    for (Index z = 0; z < R.Z.pairs.size(); ++z) {
      Index  y    = R.Z.pairs[z].second;
      double here = Y.lambda.weight(y).to_double();
      double away = Y.lambda.weight(1 - y).to_double();
      CHECK(std::abs(R.b(z).to_double() - std::sqrt(away / here)) < 1e-12);
    }
    CHECK(R.report.find("b.ratio")->residual < 1e-9);
    CHECK_FALSE(R.exact());
    CHECK(verify_theorem(X, Y, R).ok());
  }
}

TEST_CASE("push-down mu", "[composition]") {
  SECTION("trivial middle groupoid: mu = b m") {
    auto e = catalog::quiver();
    auto R = compose(e.X, e.Y);
    for (Index z = 0; z < R.Z.pairs.size(); ++z) {
      CHECK(R.mu.weight(R.pi(z)) == R.b(z) * R.m.weight(z));
    }
  }
  SECTION("default cutoff is exactly normalised") {
    auto p = random_pair(11);
    auto R = compose(p.X, p.Y);
    Check c = check_cutoff(R.e, R.chi);
    CHECK(c.passed);
    CHECK(c.residual == 0.0);
  }
  SECTION("independent cutoffs agree") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto p = random_pair(seed);
      auto R = compose(p.X, p.Y);
      INFO("seed " << seed);
      CHECK(R.report.find("mu.cutoff_independence")->residual < 1e-9);
      CompositionOptions other;
      other.cutoff_seed = seed * 7919;
      auto R2           = compose(p.X, p.Y, other);
      for (Index k = 0; k < R.mu.total_size(); ++k) {
        CHECK(within(R.mu.weight(k), R2.mu.weight(k), test::tight));
      }
    }
  }
}

TEST_CASE("Delta12", "[composition]") {
  SECTION("group-hom catalog gives Delta12 = 1") {
    auto e = catalog::group_hom();
    auto R = compose(e.X, e.Y);
    for (auto const& d : R.delta12.value) {
      CHECK(d.is_one());
    }
  }
  SECTION("random instances: representative independence") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto p = random_pair(seed);
      auto R = compose(p.X, p.Y);
      INFO("seed " << seed);
      CHECK(R.report.find("Delta12.well_defined")->residual < 1e-9);
    }
  }
}

TEST_CASE("catalog composites match their expected correspondences", "[composition]") {
  for (auto const& name : catalog_names()) {
    auto e = catalog_entry(name);
    auto R = compose(e.X, e.Y);
    INFO(name);
    CHECK(R.report.ok());
    CHECK(R.exact());
    check_isomorphic(R.composite, e.expected);
  }
}

TEST_CASE("quiver composite carries the product weights", "[composition]") {
  auto e = catalog::quiver();
  auto R = compose(e.X, e.Y);
  for (Index k = 0; k < R.orbits.num_orbits(); ++k) {
    auto [x, y] = R.Z.pairs[R.orbits.representative[k]];
    CHECK(R.composite.lambda.weight(k) == e.X.lambda.weight(x) * e.Y.lambda.weight(y));
  }
}

TEST_CASE("mismatched middle groupoids fail at the match stage", "[composition]") {
  auto e = catalog::fn_compose();
  try {
    (void)compose(e.Y, e.Y);
    FAIL("expected a StageError");
  } catch (StageError const& err) {
    CHECK(err.stage() == "match");
    CHECK(err.code() == ErrorCode::groupoid_mismatch);
  }
}

TEST_CASE("different middle Haar weights are a mismatch", "[composition]") {
  auto X = z2_identity();
  auto g = z2();
  auto Y = weighted_z2(Scalar(1), Scalar(1));
  Y.left = HaarSystem::from_unit_weights(g, {Scalar(2)});
  try {
    (void)compose(X, Y);
    FAIL("expected a StageError");
  } catch (StageError const& err) {
    CHECK(err.stage() == "match");
  }
}

TEST_CASE("empty fibre product composes to the empty correspondence", "[composition]") {
  auto X = quiver_correspondence({"e"}, {"u"}, {"v1", "v2"}, {0}, {0}, {Scalar(1)});
  auto Y = quiver_correspondence({"f"}, {"v1", "v2"}, {"w"}, {1}, {0}, {Scalar(1)});
  auto R = compose(X, Y);
  CHECK(R.Z.pairs.empty());
  CHECK(R.composite.num_points() == 0);
  CHECK(R.report.ok());
  CHECK_FALSE(R.report.notes().empty());
}

TEST_CASE("exact override equal to the canonical cochain is accepted", "[composition]") {
  auto               e = catalog::subgroup();
  CompositionOptions opt;
  opt.b_override = std::vector<Scalar>(36, Scalar(1));
  auto R         = compose(e.X, e.Y, opt);
  CHECK(R.report.ok());
  CHECK(R.report.find("b.override_equivalence")->passed);
}

TEST_CASE("random pairs compose with every check passing", "[composition][property]") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    auto p = random_pair(seed);
    INFO("seed " << seed);
    CompositionResult R;
    REQUIRE_NOTHROW(R = compose(p.X, p.Y));
    CHECK(R.report.ok());
    CHECK(R.report.find("m.G3_invariant")->residual == 0.0);
    CHECK(R.report.find("mu.G3_invariant")->residual == 0.0);
    CHECK(check_cocycle(R.delta12).passed);
  }
}
