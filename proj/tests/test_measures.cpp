#include "catch_amalgamated.hpp"
#include "support/support.hpp"

using namespace gcorr;

namespace {

  GroupoidPtr pair2() {
    return share(pair_groupoid(2));
  }

  HaarSystem pair_haar(Scalar w1, Scalar w2) {
    return HaarSystem::from_unit_weights(pair2(), {w1, w2});
  }

  Index arrow(HaarSystem const& h, std::string const& name) {
    return h.g().find_arrow(name);
  }

}  // namespace

TEST_CASE("counting weights on a group are Haar", "[measures]") {
  for (auto const& g : small_groups()) {
    auto h = HaarSystem::counting(share(group_groupoid(g)));
    CHECK(check_haar(h).passed);
  }
}

TEST_CASE("unit-weighted pair groupoid is Haar", "[measures]") {
  auto h = pair_haar(Scalar(3), Scalar::fraction(5, 7));
  CHECK(check_haar(h).passed);
  CHECK(h(arrow(h, "(1,2)")) == Scalar::fraction(5, 7));
  CHECK(h(arrow(h, "(2,1)")) == Scalar(3));
}

TEST_CASE("mismatched weights on the pair groupoid are not Haar", "[measures]") {
  auto h = pair_haar(Scalar(1), Scalar(1));
  h.weight[arrow(h, "(1,1)")] = Scalar(2);  // now α¹((1,1)) ≠ α²((2,1))
  Check c                     = check_haar(h);
  CHECK_FALSE(c.passed);
  CHECK_FALSE(c.witness.empty());
  try {
    (void)require_haar(h);
    FAIL("expected NotHaar");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::not_haar);
  }
}

TEST_CASE("zero and negative weights are refused", "[measures]") {
  try {
    MeasureFamily({0, 0}, 1, {Scalar(1), Scalar(0)});
    FAIL("expected ZeroWeight");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::zero_weight);
  }
  try {
    MeasureFamily({0}, 1, {Scalar(-1)});
    FAIL("expected NonPositive");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::non_positive);
  }
}

TEST_CASE("induced measures", "[measures]") {
  SECTION("Z/2, uniform m, counting") {
    auto h   = HaarSystem::counting(share(group_groupoid(FiniteGroup::cyclic(2))));
    auto fwd = induced_measure({Scalar(1)}, h, Direction::forward);
    auto bwd = induced_measure({Scalar(1)}, h, Direction::inverse);
    CHECK(fwd.weight == std::vector<Scalar>{Scalar(1), Scalar(1)});
    CHECK(bwd.weight == fwd.weight);
  }
  SECTION("pair groupoid, m = (1,2)") {
    auto                h = pair_haar(Scalar(1), Scalar(1));
    std::vector<Scalar> m{Scalar(1), Scalar(2)};
    auto                fwd = induced_measure(m, h, Direction::forward);
    auto                bwd = induced_measure(m, h, Direction::inverse);
    auto const&         g   = h.g();
    for (Index a = 0; a < g.num_arrows(); ++a) {
      CHECK(fwd.weight[a] == m[g.dst(a)]);
      CHECK(bwd.weight[a] == m[g.src(a)]);
    }
  }
  SECTION("empty groupoid") {
    auto h = HaarSystem::counting(share(build_groupoid(GroupoidTables{})));
    CHECK(induced_measure({}, h, Direction::forward).weight.empty());
  }
}

TEST_CASE("symmetry of unit measures", "[measures]") {
  auto g3 = HaarSystem::counting(share(group_groupoid(FiniteGroup::symmetric(3))));
  CHECK(is_symmetric({Scalar(4)}, g3).passed);

  auto  h     = pair_haar(Scalar(1), Scalar(1));
  Check asym  = is_symmetric({Scalar(1), Scalar(2)}, h);
  CHECK_FALSE(asym.passed);
  CHECK(asym.residual == 1.0);
  CHECK(is_symmetric({Scalar(1), Scalar(1)}, h).passed);
}

TEST_CASE("quotient families", "[measures]") {
  SECTION("group: total mass at the one orbit") {
    auto h = HaarSystem::from_unit_weights(share(group_groupoid(FiniteGroup::cyclic(3))),
                                           {Scalar::fraction(2, 3)});
    auto q = quotient_family(h, orbit_space(unit_action(h.groupoid)));
    REQUIRE(q.total_size() == 1);
    CHECK(q.weight(0) == Scalar(2));
  }
  SECTION("pair groupoid, counting: counting on both units") {
    auto h = pair_haar(Scalar(1), Scalar(1));
    auto q = quotient_family(h, orbit_space(unit_action(h.groupoid)));
    CHECK(q.base_size() == 1);
    CHECK(q.weights() == std::vector<Scalar>{Scalar(1), Scalar(1)});
  }
  SECTION("units only: λ on singleton orbits") {
    auto h = HaarSystem::from_unit_weights(share(unit_groupoid({"a", "b", "c"})),
                                           {Scalar(2), Scalar(3), Scalar(5)});
    auto q = quotient_family(h, orbit_space(unit_action(h.groupoid)));
    CHECK(q.base_size() == 3);
    CHECK(q.weights() == h.weight);
  }
}

TEST_CASE("cutoffs", "[measures]") {
  auto h = pair_haar(Scalar(1), Scalar(2));
  auto e = default_cutoff(h);
  CHECK(check_cutoff(e, h).passed);
  // h(u) = 1 + 2 = 3 at both units
  CHECK(e == std::vector<Scalar>{Scalar::fraction(1, 3), Scalar::fraction(1, 3)});
  CHECK_FALSE(check_cutoff({Scalar(1), Scalar(1)}, h).passed);
}

TEST_CASE("push-down on the pair groupoid", "[measures]") {
  auto                h = pair_haar(Scalar(1), Scalar(1));
  std::vector<Scalar> m{Scalar(1), Scalar(1)};
  auto                half = push_measure_down(m, h, {Scalar::fraction(1, 2), Scalar::fraction(1, 2)});
  REQUIRE(half.mu.size() == 1);
  CHECK(half.mu[0] == Scalar(1));
  CHECK(compose_with_quotient(half.mu, half.quotient) == m);
  CHECK(half.report.ok());

  auto lopsided = push_measure_down(m, h, {Scalar(1), Scalar(0)});
  CHECK(lopsided.mu == half.mu);
}

TEST_CASE("push-down refuses asymmetric measures and bad cutoffs", "[measures]") {
  auto h = pair_haar(Scalar(1), Scalar(1));
  try {
    (void)push_measure_down({Scalar(1), Scalar(2)}, h, default_cutoff(h));
    FAIL("expected NotInvariant");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::not_invariant);
  }
  try {
    (void)push_measure_down({Scalar(1), Scalar(1)}, h, {Scalar(1), Scalar(1)});
    FAIL("expected BadCutoff");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::bad_cutoff);
  }
}

TEST_CASE("every mu composed with [lambda] is symmetric", "[measures][property]") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng        rng(seed);
    auto       g      = share(random_groupoid(rng, 80));
    HaarSystem lambda = random_haar(rng, g);
    OrbitSpace orbits = orbit_space(unit_action(g));
    auto       q      = quotient_family(lambda, orbits);
    std::vector<Scalar> mu;
    for (Index k = 0; k < orbits.num_orbits(); ++k) {
      mu.push_back(rng.positive_rational(11, 3));
    }
    auto m = compose_with_quotient(mu, q);
    INFO("seed " << seed);
    CHECK(is_symmetric(m, lambda).passed);
    auto down = push_measure_down(m, lambda, default_cutoff(lambda));
    CHECK(down.mu == mu);
  }
}

TEST_CASE("random Haar systems pass the Haar check", "[measures][property]") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng  rng(seed);
    auto g = share(random_groupoid(rng));
    INFO("seed " << seed);
    CHECK(check_haar(random_haar(rng, g)).passed);
  }
}
