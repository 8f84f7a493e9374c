#ifndef GCORR_COMPOSITION_HPP
#define GCORR_COMPOSITION_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcorr/cohomology.hpp"
#include "gcorr/correspondence.hpp"
#include "gcorr/error.hpp"
#include "gcorr/groupoid.hpp"
#include "gcorr/measures.hpp"
#include "gcorr/report.hpp"
#include "gcorr/rng.hpp"
#include "gcorr/scalar.hpp"

namespace gcorr {

  /// A failure inside the composition pipeline; keeps the original code
  /// and names the stage it happened in.
  class StageError : public Error {
   public:
    StageError(std::string stage, Error const& cause)
        : Error(cause.code(), "stage '" + stage + "': " + cause.message(), cause.witness()),
          stage_(std::move(stage)) {}

    std::string const& stage() const noexcept {
      return stage_;
    }

   private:
    std::string stage_;
  };

  struct CompositionOptions {
    Tolerance tol;
    /// Replaces the canonical cochain; indexed by fibre-product point.
    std::optional<std::vector<Scalar>> b_override;
    /// Seed for the second, random cutoff used by the independence check.
    std::uint64_t cutoff_seed = 0x9e3779b97f4a7c15ULL;
  };

  struct CompositionResult {
    FibreProduct           Z;       // points, diagonal G₂ action, outer bispace
    TransformationGroupoid ZG;      // Z⋊G₂
    HaarSystem             chi;     // χ((z,γ)) = χ₂(γ) on Z⋊G₂
    OrbitSpace             orbits;  // Ω = Z/G₂
    Bispace                omega;
    MeasureFamily          m;          // along s_Z
    MeasureFamily          lambda_pi;  // along π
    Cocycle1               delta_Z;
    ProbabilityFamily      p;
    Cochain0               b;
    std::vector<Scalar>    e;
    MeasureFamily          mu;  // along s_Ω
    Cocycle1               delta12;
    Correspondence         composite;
    Report                 report;

    Index pi(Index z) const {
      return orbits.projection[z];
    }
    bool exact() const {
      return b.is_exact() && mu.is_exact();
    }
  };

  namespace detail {

    template <class F>
    auto run_stage(std::string const& name, F&& f) -> decltype(f()) {
      try {
        return f();
      } catch (StageError const&) {
        throw;
      } catch (Error const& e) {
        throw StageError(name, e);
      }
    }

    inline std::string z_name(FibreProduct const& Z, Index z) {
      return Z.diagonal.point_name(z);
    }

    /// Running max of a comparison, keeping the first failing witness.
    struct Sweep {
      Check check;
      Tolerance tol;
      bool relative = false;

      Sweep(std::string name, Tolerance t, bool rel = false)
          : check{std::move(name), true, 0.0, {}, {}}, tol(t), relative(rel) {}

      void operator()(Scalar const& a, Scalar const& b, std::function<std::string()> const& w) {
        double d = relative ? relative_deviation(a, b) : deviation(a, b);
        check.residual = std::max(check.residual, d);
        if (check.passed && !within(a, b, tol)) {
          check.passed  = false;
          check.witness = w();
        }
      }
    };

  }  // namespace detail

  /// m((x,y)) = λ_X(x)·λ_Y(y), a family along s_Z.
  inline MeasureFamily build_m(Correspondence const& X, Correspondence const& Y,
                               FibreProduct const& Z) {
    std::vector<Index>  along;
    std::vector<Scalar> w;
    for (auto [x, y] : Z.pairs) {
      along.push_back(Y.space.s(y));
      w.push_back(X.lambda.weight(x) * Y.lambda.weight(y));
    }
    return MeasureFamily(std::move(along), Y.H().num_units(), std::move(w),
                         &Z.diagonal.point_names());
  }

  /// λ^{[z₀]}({z₀γ}) = Σ_{γ : z₀γ = z} χ₂(γ), evaluated at orbit
  /// representatives; stabilisers make several γ land on one point.
  inline MeasureFamily build_lambda_pi(FibreProduct const& Z, OrbitSpace const& orbits,
                                       HaarSystem const& chi2) {
    std::vector<Scalar> w(Z.pairs.size());
    for (Index k = 0; k < orbits.num_orbits(); ++k) {
      Index z0 = orbits.representative[k];
      for (Index gamma : Z.diagonal.acting_arrows(z0)) {
        w[Z.diagonal.act(gamma, z0)] += chi2(gamma);
      }
    }
    return MeasureFamily(orbits.projection, orbits.num_orbits(), std::move(w),
                         &Z.diagonal.point_names());
  }

  /// Δ((x,y),γ) = Δ₂(γ⁻¹, y) on the arrows of Z⋊G₂.
  inline Cocycle1 build_Delta_Z(Correspondence const& Y, FibreProduct const& Z,
                                TransformationGroupoid const& ZG) {
    auto const& g2 = Y.G();
    Cocycle1    d{ZG.groupoid, Flavor::multiplicative, {}};
    d.value.reserve(ZG.base_arrow.size());
    for (Index k = 0; k < ZG.base_arrow.size(); ++k) {
      Index gamma = ZG.base_arrow[k];
      Index y     = Z.pairs[ZG.point[k]].second;
      d.value.push_back(Y.delta(g2.inv(gamma), y));
    }
    return d;
  }

  /// Canonical b from the F ≡ 1 probability family on Z⋊G₂.
  inline std::pair<ProbabilityFamily, Cochain0> build_b(HaarSystem const& chi,
                                                        Cocycle1 const& delta_Z,
                                                        Tolerance tol = {}) {
    ProbabilityFamily p = invariant_probability_family(chi, std::nullopt, tol);
    Cochain0          b = decompose_multiplicative(delta_Z, p, tol);
    return {std::move(p), std::move(b)};
  }

  /// μ({ω}) = Σ_{z∈π⁻¹(ω)} e(z)·b(z)·m(z), along s_Ω. Inexact terms are
  /// added in ascending order so that the sum depends only on the multiset
  /// of terms.
  inline MeasureFamily build_mu(MeasureFamily const& m, Cochain0 const& b,
                                std::vector<Scalar> const& e, OrbitSpace const& orbits,
                                Bispace const& omega, Index g3_units) {
    std::vector<Scalar> w;
    std::vector<Index>  along;
    for (Index k = 0; k < orbits.num_orbits(); ++k) {
      std::vector<Scalar> terms;
      for (Index z : orbits.members[k]) {
        terms.push_back(e[z] * b(z) * m.weight(z));
      }
      bool exact = std::all_of(terms.begin(), terms.end(), [](auto const& t) { return t.is_exact(); });
      if (!exact) {
        std::sort(terms.begin(), terms.end(), [](Scalar const& a, Scalar const& c) {
          return a.to_double() < c.to_double();
        });
      }
      Scalar s;
      for (auto const& t : terms) {
        s += t;
      }
      w.push_back(s);
      along.push_back(omega.s(k));
    }
    return MeasureFamily(std::move(along), g3_units, std::move(w), &omega.point_names());
  }

  /// e′ = F′/h_{F′} for a random positive F′ on Z; normalised like 1/h.
  inline std::vector<Scalar> random_cutoff(HaarSystem const& chi, std::uint64_t seed) {
    auto const&         g = chi.g();
    Rng                 rng(seed);
    std::vector<Scalar> F;
    for (Index z = 0; z < g.num_units(); ++z) {
      F.push_back(rng.positive_rational(8, 3));
    }
    std::vector<Scalar> h(g.num_units());
    for (Index a = 0; a < g.num_arrows(); ++a) {
      h[g.dst(a)] += F[g.src(a)] * chi(a);
    }
    std::vector<Scalar> e(g.num_units());
    for (Index z = 0; z < g.num_units(); ++z) {
      e[z] = F[z] / h[z];
    }
    return e;
  }

  /// Δ₁,₂(η,[x,y]) = b(ηx,y)⁻¹·Δ₁(η,x)·b(x,y) at the representative, plus a
  /// check that every other representative gives the same value.
  inline std::pair<Cocycle1, Check> build_Delta12(Correspondence const& X, Cochain0 const& b,
                                                  FibreProduct const& Z,
                                                  OrbitSpace const& orbits,
                                                  TransformationGroupoid const& g1_omega,
                                                  Tolerance tol = {}) {
    Cocycle1      d{g1_omega.groupoid, Flavor::multiplicative, {}};
    detail::Sweep wd("Delta12.well_defined", tol, true);
    auto value = [&](Index eta, Index z) {
      auto [x, y] = Z.pairs[z];
      Index ez    = Z.find(X.space.left.act(eta, x), y);
      return X.delta(eta, x) * b(z) / b(ez);
    };
    for (Index k = 0; k < g1_omega.base_arrow.size(); ++k) {
      Index  eta   = g1_omega.base_arrow[k];
      Index  omega = g1_omega.point[k];
      Scalar v     = value(eta, orbits.representative[omega]);
      for (Index z : orbits.members[omega]) {
        wd(value(eta, z), v, [&] {
          return "(orbit " + g1_omega.groupoid->unit_name(omega) + ", rep "
                 + detail::z_name(Z, z) + ", " + X.G().arrow_name(eta) + ")";
        });
      }
      d.value.push_back(std::move(v));
    }
    return {std::move(d), wd.check};
  }

  /// Ω with η[x,y] = [ηx,y] and [x,y]γ₃ = [x,yγ₃], evaluated at every
  /// member of each orbit.
  inline std::pair<Bispace, Check> build_omega(FibreProduct const& Z, OrbitSpace const& orbits,
                                               Correspondence const& X, Correspondence const& Y) {
    std::vector<std::string> names;
    for (Index k = 0; k < orbits.num_orbits(); ++k) {
      auto [x, y] = Z.pairs[orbits.representative[k]];
      names.push_back("[" + X.space.point_name(x) + "," + Y.space.point_name(y) + "]");
    }
    ActionTables l{Side::left, names, {}, {}};
    ActionTables r{Side::right, names, {}, {}};
    Check        wd{"omega.actions_well_defined", true, 0.0, {}, {}};
    auto const&  zb = Z.bispace;
    for (Index k = 0; k < orbits.num_orbits(); ++k) {
      Index z0 = orbits.representative[k];
      l.momentum.push_back(zb.r(z0));
      r.momentum.push_back(zb.s(z0));
      for (Index eta : zb.left.acting_arrows(z0)) {
        Index target = orbits.projection[zb.left.act(eta, z0)];
        l.table.push_back({eta, k, target});
        for (Index z : orbits.members[k]) {
          if (wd.passed && orbits.projection[zb.left.act(eta, z)] != target) {
            wd.passed  = false;
            wd.witness = "(" + X.G().arrow_name(eta) + "," + detail::z_name(Z, z) + ")";
          }
        }
      }
      for (Index g3 : zb.right.acting_arrows(z0)) {
        Index target = orbits.projection[zb.right.act(g3, z0)];
        r.table.push_back({g3, k, target});
        for (Index z : orbits.members[k]) {
          if (wd.passed && orbits.projection[zb.right.act(g3, z)] != target) {
            wd.passed  = false;
            wd.witness = "(" + detail::z_name(Z, z) + "," + Y.H().arrow_name(g3) + ")";
          }
        }
      }
    }
    if (!wd.passed) {
      throw Error(ErrorCode::not_well_defined, "actions do not descend to the orbit space",
                  wd.witness);
    }
    Bispace omega = make_bispace(build_action(zb.left.groupoid_ptr(), std::move(l)),
                                 build_action(zb.right.groupoid_ptr(), std::move(r)));
    return {std::move(omega), wd};
  }

  /// Checks a user-supplied cochain: positive, d⁰(b′) = Δ_Z and
  /// G₃-invariant. Throws NotACocycle / NotInvariant / NonPositive.
  inline Report check_cochain_override(std::vector<Scalar> const& b, Cocycle1 const& delta_Z,
                                       FibreProduct const& Z, Tolerance tol) {
    Report r;
    if (b.size() != Z.pairs.size()) {
      throw Error(ErrorCode::mismatch, "cochain does not cover the fibre product");
    }
    for (Index z = 0; z < b.size(); ++z) {
      if (!b[z].is_positive()) {
        throw Error(ErrorCode::non_positive, "cochain must be positive", detail::z_name(Z, z));
      }
    }
    Cochain0 c{delta_Z.groupoid, Flavor::multiplicative, b};
    Check    res = coboundary_residual(delta_Z, c, tol);
    res.name     = "b.override_coboundary";
    r.add(res);
    if (!res.passed) {
      throw Error(ErrorCode::not_a_cocycle, "d0(b) differs from Delta", res.witness);
    }
    detail::Sweep inv("b.override_G3_invariant", tol, true);
    auto const&   right = Z.bispace.right;
    for (Index z = 0; z < b.size(); ++z) {
      for (Index g3 : right.acting_arrows(z)) {
        inv(b[right.act(g3, z)], b[z], [&] { return detail::z_name(Z, z); });
      }
    }
    r.add(inv.check);
    if (!inv.check.passed) {
      throw Error(ErrorCode::not_invariant, "cochain is not G3-invariant", inv.check.witness);
    }
    return r;
  }

  /// The full pipeline. Every check is recorded in `report`; the first
  /// failure aborts with a StageError naming its stage.
  inline CompositionResult compose(Correspondence const& X, Correspondence const& Y,
                                   CompositionOptions const& opt = {}) {
    Tolerance const   tol = opt.tol;
    CompositionResult R;
    auto              fail_on = [&](Check const& c, std::string const& stage, ErrorCode code) {
      R.report.add(c);
      if (!c.passed) {
        throw StageError(stage, Error(code, "check '" + c.name + "' failed", c.witness));
      }
    };

    detail::run_stage("match", [&] {
      if (!(X.H() == Y.G())) {
        throw Error(ErrorCode::groupoid_mismatch,
                    "right groupoid of the first correspondence differs from the left "
                    "groupoid of the second");
      }
      if (X.right.weight != Y.left.weight) {
        throw Error(ErrorCode::groupoid_mismatch, "middle Haar systems differ");
      }
      R.report.pass("match.middle_groupoid");
      return 0;
    });

    detail::run_stage("fibre_product", [&] {
      R.Z = fibre_product(X.space, Y.space);
      if (R.Z.pairs.empty()) {
        R.report.note("fibre product is empty");
      }
      R.ZG  = transformation_groupoid(R.Z.diagonal);
      R.chi = HaarSystem{R.ZG.groupoid, {}};
      for (Index k = 0; k < R.ZG.base_arrow.size(); ++k) {
        R.chi.weight.push_back(Y.left(R.ZG.base_arrow[k]));
      }
      return 0;
    });
    {
      Check h = check_haar(R.chi, tol);
      h.name  = "chi.haar";
      fail_on(h, "fibre_product", ErrorCode::not_haar);
    }

    detail::run_stage("orbit_space", [&] {
      R.orbits         = orbit_space(R.Z.diagonal);
      auto [omega, wd] = build_omega(R.Z, R.orbits, X, Y);
      R.omega          = std::move(omega);
      R.report.add(wd);
      return 0;
    });

    detail::run_stage("m", [&] {
      R.m = build_m(X, Y, R.Z);
      return 0;
    });
    {
      detail::Sweep inv("m.G3_invariant", tol);
      auto const&   right = R.Z.bispace.right;
      for (Index z = 0; z < R.Z.pairs.size(); ++z) {
        for (Index g3 : right.acting_arrows(z)) {
          inv(R.m.weight(right.act(g3, z)), R.m.weight(z),
              [&] { return "(" + detail::z_name(R.Z, z) + "," + Y.H().arrow_name(g3) + ")"; });
        }
      }
      fail_on(inv.check, "m", ErrorCode::not_invariant);
    }

    detail::run_stage("lambda_pi", [&] {
      R.lambda_pi = build_lambda_pi(R.Z, R.orbits, Y.left);
      Index stab  = 0;
      for (Index k = 0; k < R.orbits.num_orbits(); ++k) {
        Index z0 = R.orbits.representative[k];
        stab += R.Z.diagonal.acting_arrows(z0).size() - R.orbits.members[k].size();
      }
      R.report.pass("lambda_pi.built", 0.0,
                    std::to_string(stab) + " arrows aggregated over stabilisers");
      return 0;
    });

    detail::run_stage("Delta_Z", [&] {
      R.delta_Z = build_Delta_Z(Y, R.Z, R.ZG);
      return 0;
    });
    {
      Check c = check_cocycle(R.delta_Z, tol);
      c.name  = "Delta_Z.cocycle";
      fail_on(c, "Delta_Z", ErrorCode::not_a_cocycle);
      detail::Sweep g1("Delta_Z.G1_invariant", tol, true);
      detail::Sweep g3("Delta_Z.G3_invariant", tol, true);
      auto const&   zb = R.Z.bispace;
      for (Index k = 0; k < R.ZG.base_arrow.size(); ++k) {
        Index gamma = R.ZG.base_arrow[k];
        Index z     = R.ZG.point[k];
        for (Index a : zb.left.acting_arrows(z)) {
          g1(R.delta_Z(R.ZG.arrow(gamma, zb.left.act(a, z))), R.delta_Z(k),
             [&] { return "(" + R.ZG.groupoid->arrow_name(k) + "," + X.G().arrow_name(a) + ")"; });
        }
        for (Index a : zb.right.acting_arrows(z)) {
          g3(R.delta_Z(R.ZG.arrow(gamma, zb.right.act(a, z))), R.delta_Z(k),
             [&] { return "(" + R.ZG.groupoid->arrow_name(k) + "," + Y.H().arrow_name(a) + ")"; });
        }
      }
      fail_on(g1.check, "Delta_Z", ErrorCode::not_invariant);
      fail_on(g3.check, "Delta_Z", ErrorCode::not_invariant);
    }

    detail::run_stage("b", [&] {
      if (opt.b_override) {
        R.report.append(check_cochain_override(*opt.b_override, R.delta_Z, R.Z, tol));
        R.p = invariant_probability_family(R.chi, std::nullopt, tol);
        R.b = Cochain0{R.ZG.groupoid, Flavor::multiplicative, *opt.b_override};
        auto canonical = decompose_multiplicative(R.delta_Z, R.p, tol);
        // b/b′ is positive and constant on G₂-orbits when d⁰ agrees.
        detail::Sweep eq("b.override_equivalence", tol, true);
        for (Index k = 0; k < R.orbits.num_orbits(); ++k) {
          Index  z0    = R.orbits.representative[k];
          Scalar ratio = canonical(z0) / R.b(z0);
          for (Index z : R.orbits.members[k]) {
            eq(canonical(z) / R.b(z), ratio, [&] { return detail::z_name(R.Z, z); });
          }
        }
        R.report.add(eq.check);
      } else {
        auto [p, b] = build_b(R.chi, R.delta_Z, tol);
        R.p         = std::move(p);
        R.b         = std::move(b);
      }
      return 0;
    });
    {
      Check ratio = coboundary_residual(R.delta_Z, R.b, tol);
      ratio.name  = "b.ratio";
      fail_on(ratio, "b", ErrorCode::not_a_cocycle);
      detail::Sweep g1("b.G1_invariant", tol, true);
      detail::Sweep g3("b.G3_invariant", tol, true);
      auto const&   zb = R.Z.bispace;
      for (Index z = 0; z < R.Z.pairs.size(); ++z) {
        for (Index a : zb.left.acting_arrows(z)) {
          g1(R.b(zb.left.act(a, z)), R.b(z), [&] { return detail::z_name(R.Z, z); });
        }
        for (Index a : zb.right.acting_arrows(z)) {
          g3(R.b(zb.right.act(a, z)), R.b(z), [&] { return detail::z_name(R.Z, z); });
        }
      }
      // G₁-invariance holds for the canonical b; an override need not have it.
      if (opt.b_override) {
        R.report.add(g1.check);
      } else {
        fail_on(g1.check, "b", ErrorCode::not_invariant);
      }
      fail_on(g3.check, "b", ErrorCode::not_invariant);
    }

    detail::run_stage("mu", [&] {
      R.e       = default_cutoff(R.chi);
      Check cut = check_cutoff(R.e, R.chi, tol);
      cut.name  = "e.normalised";
      fail_on(cut, "mu", ErrorCode::bad_cutoff);

      std::vector<Scalar> bm(R.Z.pairs.size());
      for (Index z = 0; z < bm.size(); ++z) {
        bm[z] = R.b(z) * R.m.weight(z);
      }
      Check sym = is_symmetric(bm, R.chi, tol);
      sym.name  = "bm.symmetric";
      fail_on(sym, "mu", ErrorCode::not_invariant);

      R.mu = build_mu(R.m, R.b, R.e, R.orbits, R.omega, Y.H().num_units());

      detail::Sweep dis("mu.disintegration", tol);
      for (Index z = 0; z < bm.size(); ++z) {
        dis(bm[z], R.mu.weight(R.pi(z)) * R.lambda_pi.weight(z),
            [&] { return detail::z_name(R.Z, z); });
      }
      fail_on(dis.check, "mu", ErrorCode::not_well_defined);

      auto          e2  = random_cutoff(R.chi, opt.cutoff_seed);
      Check         cut2 = check_cutoff(e2, R.chi, tol);
      cut2.name     = "e2.normalised";
      fail_on(cut2, "mu", ErrorCode::bad_cutoff);
      MeasureFamily mu2 = build_mu(R.m, R.b, e2, R.orbits, R.omega, Y.H().num_units());
      detail::Sweep ind("mu.cutoff_independence", tol);
      for (Index k = 0; k < R.orbits.num_orbits(); ++k) {
        ind(mu2.weight(k), R.mu.weight(k), [&] { return R.omega.point_name(k); });
      }
      fail_on(ind.check, "mu", ErrorCode::not_well_defined);

      Check inv{"mu.G3_invariant", true, 0.0, {}, {}};
      for (Index k = 0; k < R.orbits.num_orbits(); ++k) {
        for (Index g3 : R.omega.right.acting_arrows(k)) {
          Scalar const& a = R.mu.weight(R.omega.right.act(g3, k));
          Scalar const& c = R.mu.weight(k);
          inv.residual    = std::max(inv.residual, deviation(a, c));
          if (inv.passed && !within(a, c, tol)) {
            inv.passed  = false;
            inv.witness = "(" + R.omega.point_name(k) + "," + Y.H().arrow_name(g3) + ")";
          }
        }
      }
      inv.detail = inv.residual == 0.0 ? "exact" : "within tolerance";
      fail_on(inv, "mu", ErrorCode::not_invariant);
      return 0;
    });

    TransformationGroupoid g1_omega = transformation_groupoid(R.omega.left);
    detail::run_stage("Delta12", [&] {
      auto [d, wd] = build_Delta12(X, R.b, R.Z, R.orbits, g1_omega, tol);
      R.delta12    = std::move(d);
      if (!wd.passed) {
        R.report.add(wd);
        throw Error(ErrorCode::not_well_defined, "Delta12 depends on the representative",
                    wd.witness);
      }
      R.report.add(wd);
      return 0;
    });
    {
      Check c = check_cocycle(R.delta12, tol);
      c.name  = "Delta12.cocycle";
      fail_on(c, "Delta12", ErrorCode::not_a_cocycle);
    }

    detail::run_stage("composite", [&] {
      R.composite = make_correspondence(X.name + "*" + Y.name, X.left, Y.right, R.omega, R.mu,
                                        R.delta12.value, tol);
      Cocycle1      derived = adjoining_formula(R.composite.left, R.composite.space,
                                                R.composite.lambda, R.composite.action_groupoid);
      detail::Sweep same("Delta12.matches_derived", tol, true);
      for (Index k = 0; k < derived.value.size(); ++k) {
        same(R.composite.adjoining(k), derived(k),
             [&] { return R.composite.action_groupoid.groupoid->arrow_name(k); });
      }
      fail_on(same.check, "composite", ErrorCode::not_well_defined);
      Report v = validate(R.composite, tol);
      R.report.append(v, "composite");
      if (auto const* f = v.first_failure()) {
        throw Error(ErrorCode::not_well_defined, "composite fails '" + f->name + "'", f->witness);
      }
      return 0;
    });
    return R;
  }

}  // namespace gcorr

#endif  // GCORR_COMPOSITION_HPP
