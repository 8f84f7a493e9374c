#include "catch_amalgamated.hpp"
#include "support/support.hpp"

using namespace gcorr;

namespace {

  /// Z/2 translating itself on the left, a one-unit groupoid on the right,
  /// λ = (1, 3) in the single right fibre.
  Correspondence weighted_z2() {
    auto         g = share(group_groupoid(FiniteGroup::cyclic(2)));
    auto         h = share(unit_groupoid({"h"}));
    ActionTables l{Side::left, {"z0", "z1"}, {0, 0}, {}};
    for (Index a = 0; a < 2; ++a) {
      for (Index x = 0; x < 2; ++x) {
        l.table.push_back({a, x, (a + x) % 2});
      }
    }
    ActionTables r{Side::right, {"z0", "z1"}, {0, 0}, {{0, 0, 0}, {0, 1, 1}}};
    Bispace      space = make_bispace(build_action(g, l), build_action(h, r));
    MeasureFamily lambda({0, 0}, 1, {Scalar(1), Scalar(3)});
    return make_correspondence("weighted", HaarSystem::counting(g), HaarSystem::counting(h),
                               std::move(space), std::move(lambda));
  }

  void check_delta_one(Correspondence const& c) {
    for (auto const& d : c.adjoining.value) {
      CHECK(d.is_exact());
      CHECK(d.is_one());
    }
  }

}  // namespace

TEST_CASE("weighted Z/2 translation: Delta is the lambda ratio", "[correspondence]") {
  Correspondence c = weighted_z2();
  auto const&    g = c.G();
  for (Index eta = 0; eta < 2; ++eta) {
    for (Index z = 0; z < 2; ++z) {
      Index ez = c.space.left.act(eta, z);
      CHECK(c.delta(eta, z) == c.lambda.weight(z) / c.lambda.weight(ez));
    }
  }
  CHECK(c.delta(g.find_arrow("1"), 0) == Scalar::fraction(1, 3));
  CHECK(c.delta(g.find_arrow("1"), 1) == Scalar(3));
  CHECK(check_cocycle(c.adjoining).passed);
  CHECK(validate(c).ok());
  // The closed formula agrees with the solved one.
  auto formula = adjoining_formula(c.left, c.space, c.lambda, c.action_groupoid);
  CHECK(formula.value == c.adjoining.value);
}

TEST_CASE("trivial left group gives Delta = 1", "[correspondence]") {
  auto         g = share(group_groupoid(FiniteGroup::trivial()));
  auto         h = share(unit_groupoid({"u", "v"}));
  ActionTables l{Side::left, {"a", "b"}, {0, 0}, {{0, 0, 0}, {0, 1, 1}}};
  ActionTables r{Side::right, {"a", "b"}, {0, 1}, {{0, 0, 0}, {1, 1, 1}}};
  auto         c = make_correspondence("t", HaarSystem::counting(g), HaarSystem::counting(h),
                                       make_bispace(build_action(g, l), build_action(h, r)),
                                       MeasureFamily({0, 1}, 2, {Scalar(2), Scalar(7)}));
  check_delta_one(c);
  CHECK(validate(c).ok());
}

TEST_CASE("maps", "[correspondence]") {
  SECTION("identity") {
    auto c = from_map({"a", "b", "c"}, {"a", "b", "c"}, {0, 1, 2});
    CHECK(validate(c).ok());
    for (Index x = 0; x < 3; ++x) {
      CHECK(c.space.r(x) == x);
      CHECK(c.space.s(x) == x);
    }
  }
  SECTION("constant map from three points") {
    auto c = from_map({"a", "b", "c"}, {"*"}, {0, 0, 0});
    CHECK(validate(c).ok());
    CHECK(c.lambda.base_size() == 3);
    for (Index x = 0; x < 3; ++x) {
      CHECK(c.lambda.fibre(x) == std::vector<Index>{x});
      CHECK(c.lambda.weight(x) == Scalar(1));
    }
  }
}

TEST_CASE("group homomorphisms", "[correspondence]") {
  SECTION("identity on Z/2") {
    auto z2 = FiniteGroup::cyclic(2);
    CHECK(validate(from_group_hom(z2, z2, {0, 1})).ok());
  }
  SECTION("Z/4 onto Z/2 has a kernel") {
    auto c = from_group_hom(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), {0, 1, 0, 1});
    CHECK(validate(c).ok());
    Index two = c.G().find_arrow("2");
    for (Index x = 0; x < c.num_points(); ++x) {
      CHECK(c.space.left.act(two, x) == x);
    }
  }
  SECTION("Z/2 to Z/3 is trivial and has Delta = 1") {
    auto c = from_group_hom(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), {0, 0});
    check_delta_one(c);
    CHECK(validate(c).ok());
  }
  SECTION("a non-homomorphism is refused") {
    try {
      (void)from_group_hom(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), {0, 1});
      FAIL("expected NotAHomomorphism");
    } catch (Error const& e) {
      CHECK(e.code() == ErrorCode::not_a_homomorphism);
    }
  }
}

TEST_CASE("induction instances", "[correspondence]") {
  SECTION("H = K = G") {
    auto     g = FiniteGroup::cyclic(3);
    Subgroup all{0, 1, 2};
    auto [x, y] = induction_instance(g, all, all);
    CHECK(validate(x).ok());
    CHECK(validate(y).ok());
    CHECK(x.space == y.space);
  }
  SECTION("S3 with A3 and a transposition") {
    auto s3      = FiniteGroup::symmetric(3);
    auto a3      = generated_subgroup(s3, {s3.find("120")});
    auto k       = generated_subgroup(s3, {s3.find("102")});
    auto [x, y]  = induction_instance(s3, a3, k);
    CHECK(a3.size() == 3);
    CHECK(k.size() == 2);
    CHECK(validate(x).ok());
    CHECK(validate(y).ok());
    check_delta_one(x);
    check_delta_one(y);
  }
  SECTION("Z/4 with 2Z/4 and Z/4") {
    auto     z4 = FiniteGroup::cyclic(4);
    Subgroup even{0, 2};
    auto [x, y] = induction_instance(z4, even, Subgroup{0, 1, 2, 3});
    CHECK(validate(x).ok());
    CHECK(validate(y).ok());
  }
  SECTION("a non-subgroup is refused") {
    auto z4 = FiniteGroup::cyclic(4);
    CHECK_THROWS_AS(induction_instance(z4, Subgroup{0, 1}, Subgroup{0}), Error);
  }
}

TEST_CASE("every catalog correspondence validates", "[correspondence]") {
  for (auto const& name : catalog_names()) {
    auto e = catalog_entry(name);
    INFO(name);
    CHECK(validate(e.X).ok());
    CHECK(validate(e.Y).ok());
    CHECK(validate(e.expected).ok());
  }
}

TEST_CASE("derived adjoining functions are cocycles on random instances", "[correspondence][property]") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto p = random_pair(seed);
    INFO("seed " << seed);
    CHECK(check_cocycle(p.X.adjoining).passed);
    CHECK(check_cocycle(p.Y.adjoining).passed);
    Report vx = validate(p.X);
    Report vy = validate(p.Y);
    CHECK(vx.ok());
    CHECK(vy.ok());
  }
}

TEST_CASE("derive_adjoining is independent of the visiting order", "[correspondence][property]") {
  auto p = random_pair(3);
  auto const& X = p.X;
  Index n = X.action_groupoid.groupoid->num_arrows();
  std::vector<Index> order(n);
  for (Index k = 0; k < n; ++k) {
    order[k] = n - 1 - k;
  }
  auto d = derive_adjoining(X.left, X.space, X.lambda, X.action_groupoid, &order);
  CHECK(d.value == X.adjoining.value);
}
