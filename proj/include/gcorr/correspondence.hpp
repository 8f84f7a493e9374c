#ifndef GCORR_CORRESPONDENCE_HPP
#define GCORR_CORRESPONDENCE_HPP

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "gcorr/cohomology.hpp"
#include "gcorr/error.hpp"
#include "gcorr/groupoid.hpp"
#include "gcorr/groups.hpp"
#include "gcorr/measures.hpp"
#include "gcorr/report.hpp"
#include "gcorr/scalar.hpp"

namespace gcorr {

  /// A correspondence (X, λ) from (G, α) to (H, β) at finite scale.
  ///
  /// `lambda` lives along s_X with base H⁰; `adjoining` is a multiplicative
  /// function on the arrows of G⋉X, where arrow (η, z) goes from z to ηz.
  struct Correspondence {
    std::string            name;
    HaarSystem             left;
    HaarSystem             right;
    Bispace                space;
    MeasureFamily          lambda;
    TransformationGroupoid action_groupoid;
    Cocycle1               adjoining;

    FiniteGroupoid const& G() const {
      return left.g();
    }
    FiniteGroupoid const& H() const {
      return right.g();
    }
    Index num_points() const {
      return space.num_points();
    }

    /// Δ(η, z) for s(η) = r_X(z).
    Scalar const& delta(Index eta, Index z) const {
      return adjoining(action_groupoid.arrow(eta, z));
    }
  };

  /// Δ(η,z) = α(η⁻¹)·λ(z) / (α(η)·λ(ηz)) for every arrow of G⋉X.
  inline Cocycle1 adjoining_formula(HaarSystem const& alpha, Bispace const& X,
                                    MeasureFamily const& lambda,
                                    TransformationGroupoid const& gx) {
    auto const& g = alpha.g();
    Cocycle1    d{gx.groupoid, Flavor::multiplicative, {}};
    d.value.reserve(gx.base_arrow.size());
    for (Index k = 0; k < gx.base_arrow.size(); ++k) {
      Index eta = gx.base_arrow[k];
      Index z   = gx.point[k];
      Index ez  = X.left.act(eta, z);
      d.value.push_back(alpha(g.inv(eta)) * lambda.weight(z) / (alpha(eta) * lambda.weight(ez)));
    }
    return d;
  }

  namespace detail {

    /// Both sides of the quasi-invariance identity on the point mass at
    /// each arrow k = (η, z) of G⋉X, Δ excluded from the right side:
    ///   lhs[k] = Σ_x Σ_{γ∈G^{r(x)}} [ (γ⁻¹, x) = k ] α(γ) λ(x)
    ///   rhs[k] = Σ_x Σ_{γ∈G^{r(x)}} [ (γ, γ⁻¹x) = k ] α(γ) λ(x)
    struct PointMassSides {
      std::vector<Scalar> lhs;
      std::vector<Scalar> rhs;
    };

    inline PointMassSides point_mass_sides(HaarSystem const& alpha, Bispace const& X,
                                           MeasureFamily const& lambda,
                                           TransformationGroupoid const& gx,
                                           Cocycle1 const* delta) {
      auto const&    g = alpha.g();
      Index          n = gx.base_arrow.size();
      PointMassSides out{std::vector<Scalar>(n), std::vector<Scalar>(n)};
      for (Index x = 0; x < X.num_points(); ++x) {
        for (Index gamma : g.range_fibre(X.r(x))) {
          Scalar w = alpha(gamma) * lambda.weight(x);
          out.lhs[gx.arrow(g.inv(gamma), x)] += w;
          Index y = X.left.act(g.inv(gamma), x);
          Index k = gx.arrow(gamma, y);
          out.rhs[k] += delta != nullptr ? w * (*delta)(k) : w;
        }
      }
      return out;
    }

  }  // namespace detail

  /// Solves the quasi-invariance identity for Δ, one point mass at a time,
  /// visiting G⋉X arrows in `order` (all arrows, ascending, by default),
  /// then checks the cocycle property. Throws NotWellDefined when (X, λ)
  /// admits no adjoining function.
  inline Cocycle1 derive_adjoining(HaarSystem const& alpha, Bispace const& X,
                                   MeasureFamily const& lambda,
                                   TransformationGroupoid const& gx,
                                   std::vector<Index> const* order = nullptr,
                                   Tolerance tol = {}) {
    auto     sides = detail::point_mass_sides(alpha, X, lambda, gx, nullptr);
    Index    n     = sides.lhs.size();
    Cocycle1 d{gx.groupoid, Flavor::multiplicative, std::vector<Scalar>(n)};
    std::vector<bool> seen(n, false);
    auto visit = [&](Index k) {
      if (sides.rhs[k].is_zero()) {
        throw Error(ErrorCode::not_well_defined, "point mass has zero weight",
                    gx.groupoid->arrow_name(k));
      }
      d.value[k] = sides.lhs[k] / sides.rhs[k];
      seen[k]    = true;
    };
    if (order != nullptr) {
      for (Index k : *order) {
        visit(k);
      }
    }
    for (Index k = 0; k < n; ++k) {
      if (!seen[k]) {
        visit(k);
      }
    }
    Check c = check_cocycle(d, tol);
    if (!c.passed) {
      throw Error(ErrorCode::not_well_defined, "derived adjoining function is not a cocycle",
                  c.witness);
    }
    return d;
  }

  /// Records the quasi-invariance identity on every point mass.
  inline Check check_adjoining_identity(Correspondence const& c, Tolerance tol = {}) {
    auto sides = detail::point_mass_sides(c.left, c.space, c.lambda, c.action_groupoid,
                                          &c.adjoining);
    Check out{"adjoining.identity", true, 0.0, {}, {}};
    for (Index k = 0; k < sides.lhs.size(); ++k) {
      out.residual = std::max(out.residual, relative_deviation(sides.lhs[k], sides.rhs[k]));
      if (out.passed && !within(sides.lhs[k], sides.rhs[k], tol)) {
        out.passed  = false;
        out.witness = c.action_groupoid.groupoid->arrow_name(k);
      }
    }
    return out;
  }

  inline Check check_bispace(Bispace const& b) {
    try {
      make_bispace(b.left, b.right);
    } catch (Error const& e) {
      return Check{"bispace", false, 0.0, e.witness().empty() ? "(bispace)" : e.witness(),
                   e.what()};
    }
    return Check{"bispace", true, 0.0, {}, {}};
  }

  /// λ(xη) = λ(x) for every x and η ∈ H^{s(x)}.
  inline Check check_lambda_invariant(Correspondence const& c, Tolerance tol = {}) {
    Check out{"lambda.invariant", true, 0.0, {}, {}};
    auto const& right = c.space.right;
    for (Index x = 0; x < c.num_points(); ++x) {
      for (Index eta : right.acting_arrows(x)) {
        Index xe = right.act(eta, x);
        out.residual =
            std::max(out.residual, deviation(c.lambda.weight(xe), c.lambda.weight(x)));
        if (out.passed && !within(c.lambda.weight(xe), c.lambda.weight(x), tol)) {
          out.passed  = false;
          out.witness = "(" + c.space.point_name(x) + "," + c.H().arrow_name(eta) + ")";
        }
      }
    }
    return out;
  }

  /// Runs every axiom check; never throws on a mathematical failure.
  inline Report validate(Correspondence const& c, Tolerance tol = {}) {
    Report r;
    Check  lh = check_haar(c.left, tol);
    lh.name   = "left.haar";
    r.add(lh);
    Check rh = check_haar(c.right, tol);
    rh.name  = "right.haar";
    r.add(rh);
    bool same_g = c.space.left.groupoid() == c.G();
    bool same_h = c.space.right.groupoid() == c.H();
    r.expect(same_g && same_h, "bispace.groupoids", 0.0,
             same_g ? "(right groupoid)" : "(left groupoid)",
             "actions are over the stated groupoids");
    r.add(check_bispace(c.space));

    auto proper = check_proper(c.H());
    r.pass("right.proper", 0.0,
           std::to_string(proper.fibre_sizes.size()) + " nonempty fibres, all finite");

    bool along_ok = c.lambda.total_size() == c.num_points()
                    && c.lambda.base_size() == c.H().num_units();
    std::string along_witness;
    for (Index x = 0; along_ok && x < c.num_points(); ++x) {
      if (c.lambda.along(x) != c.space.s(x)) {
        along_ok      = false;
        along_witness = c.space.point_name(x);
      }
    }
    r.expect(along_ok, "lambda.along", 0.0, along_witness, "family lives along s_X");
    if (!along_ok) {
      return r;
    }
    Check full{"lambda.full_support", true, 0.0, {}, {}};
    for (Index x = 0; x < c.num_points(); ++x) {
      if (!c.lambda.weight(x).is_positive()) {
        full.passed  = false;
        full.witness = c.space.point_name(x);
        break;
      }
    }
    r.add(full);
    r.add(check_lambda_invariant(c, tol));

    Check ident = check_adjoining_identity(c, tol);
    r.add(ident);
    Check coc = check_cocycle(c.adjoining, tol);
    coc.name  = "adjoining.cocycle";
    r.add(coc);
    return r;
  }

  /// Assembles a correspondence, deriving Δ when none is supplied. Throws
  /// on structural problems only; call `validate` for the axioms.
  inline Correspondence make_correspondence(std::string name, HaarSystem left, HaarSystem right,
                                            Bispace space, MeasureFamily lambda,
                                            std::optional<std::vector<Scalar>> adjoining = {},
                                            Tolerance tol = {}) {
    Correspondence c;
    c.name            = std::move(name);
    c.left            = std::move(left);
    c.right           = std::move(right);
    c.space           = std::move(space);
    c.lambda          = std::move(lambda);
    c.action_groupoid = transformation_groupoid(c.space.left);
    if (c.lambda.total_size() != c.space.num_points()) {
      throw Error(ErrorCode::mismatch, "measure family does not cover the space");
    }
    if (adjoining) {
      if (adjoining->size() != c.action_groupoid.groupoid->num_arrows()) {
        throw Error(ErrorCode::mismatch, "adjoining function does not cover G x X");
      }
      c.adjoining = Cocycle1{c.action_groupoid.groupoid, Flavor::multiplicative,
                             std::move(*adjoining)};
    } else {
      c.adjoining = derive_adjoining(c.left, c.space, c.lambda, c.action_groupoid, nullptr, tol);
    }
    return c;
  }

  // ---------------------------------------------------------------------
  // Catalog builders

  /// Correspondence from Y (units only) to X for f: X → Y; λ = point masses.
  inline Correspondence from_map(std::vector<std::string> const& xs,
                                 std::vector<std::string> const& ys,
                                 std::vector<Index> const& f, std::string name = "map") {
    if (f.size() != xs.size()) {
      throw Error(ErrorCode::mismatch, "map must be total");
    }
    auto         gy = share(unit_groupoid(ys));
    auto         gx = share(unit_groupoid(xs));
    ActionTables l{Side::left, xs, f, {}};
    ActionTables r{Side::right, xs, {}, {}};
    for (Index x = 0; x < xs.size(); ++x) {
      if (f[x] >= ys.size()) {
        throw Error(ErrorCode::mismatch, "map value out of range", xs[x]);
      }
      l.table.push_back({f[x], x, x});
      r.momentum.push_back(x);
      r.table.push_back({x, x, x});
    }
    Bispace       space = make_bispace(build_action(gy, std::move(l)), build_action(gx, std::move(r)));
    MeasureFamily lambda(space.right.momenta(), xs.size(),
                         std::vector<Scalar>(xs.size(), Scalar(1)), &xs);
    return make_correspondence(std::move(name), HaarSystem::counting(gy), HaarSystem::counting(gx),
                               std::move(space), std::move(lambda));
  }

  /// Correspondence from (H, counting) to (G, counting) on the space G;
  /// h·g = φ(h)g and g·g' = gg'.
  inline Correspondence from_group_hom(FiniteGroup const& h, FiniteGroup const& g,
                                       std::vector<Index> const& phi,
                                       std::string name = "group-hom") {
    check_homomorphism(h, g, phi);
    auto         gh = share(group_groupoid(h));
    auto         gg = share(group_groupoid(g));
    Index        n  = g.order();
    ActionTables l{Side::left, g.names, std::vector<Index>(n, 0), {}};
    ActionTables r{Side::right, g.names, std::vector<Index>(n, 0), {}};
    for (Index x = 0; x < n; ++x) {
      for (Index a = 0; a < h.order(); ++a) {
        l.table.push_back({a, x, g.product(phi[a], x)});
      }
      for (Index b = 0; b < n; ++b) {
        r.table.push_back({b, x, g.product(x, b)});
      }
    }
    Bispace       space = make_bispace(build_action(gh, std::move(l)), build_action(gg, std::move(r)));
    MeasureFamily lambda(std::vector<Index>(n, 0), 1, std::vector<Scalar>(n, Scalar(1)), &g.names);
    return make_correspondence(std::move(name), HaarSystem::counting(gh), HaarSystem::counting(gg),
                               std::move(space), std::move(lambda));
  }

  /// The space G as an H-K bispace by left and right multiplication, with
  /// counting measure; H and K are subgroups of G.
  inline Correspondence subgroup_bimodule(FiniteGroup const& g, Subgroup const& h,
                                          Subgroup const& k, std::string name) {
    if (!is_subgroup(g, h) || !is_subgroup(g, k)) {
      throw Error(ErrorCode::not_a_subgroup, "elements do not form a subgroup");
    }
    FiniteGroup  hg = subgroup_as_group(g, h);
    FiniteGroup  kg = subgroup_as_group(g, k);
    auto         gh = share(group_groupoid(hg));
    auto         gk = share(group_groupoid(kg));
    Index        n  = g.order();
    ActionTables l{Side::left, g.names, std::vector<Index>(n, 0), {}};
    ActionTables r{Side::right, g.names, std::vector<Index>(n, 0), {}};
    for (Index x = 0; x < n; ++x) {
      for (Index a = 0; a < h.size(); ++a) {
        l.table.push_back({a, x, g.product(h[a], x)});
      }
      for (Index b = 0; b < k.size(); ++b) {
        r.table.push_back({b, x, g.product(x, k[b])});
      }
    }
    Bispace       space = make_bispace(build_action(gh, std::move(l)), build_action(gk, std::move(r)));
    MeasureFamily lambda(std::vector<Index>(n, 0), 1, std::vector<Scalar>(n, Scalar(1)), &g.names);
    return make_correspondence(std::move(name), HaarSystem::counting(gh), HaarSystem::counting(gk),
                               std::move(space), std::move(lambda));
  }

  /// (G, α⁻¹) from H to G, and (G, α⁻¹) from G to K.
  inline std::pair<Correspondence, Correspondence> induction_instance(FiniteGroup const& g,
                                                                      Subgroup const& h,
                                                                      Subgroup const& k) {
    Subgroup all(g.order());
    std::iota(all.begin(), all.end(), Index{0});
    if (!is_subgroup(g, h) || !is_subgroup(g, k)) {
      throw Error(ErrorCode::not_a_subgroup, "elements do not form a subgroup");
    }
    return {subgroup_bimodule(g, h, all, "subgroup.H-G"), subgroup_bimodule(g, all, k, "subgroup.G-K")};
  }

  /// A correspondence between unit groupoids: edges E with r: E → V_left,
  /// s: E → V_right and a positive family λ along s.
  inline Correspondence quiver_correspondence(std::vector<std::string> const& edges,
                                              std::vector<std::string> const& left_units,
                                              std::vector<std::string> const& right_units,
                                              std::vector<Index> const& r,
                                              std::vector<Index> const& s,
                                              std::vector<Scalar> const& lambda,
                                              std::string name = "quiver") {
    auto         gl = share(unit_groupoid(left_units));
    auto         gr = share(unit_groupoid(right_units));
    ActionTables l{Side::left, edges, r, {}};
    ActionTables rt{Side::right, edges, s, {}};
    for (Index x = 0; x < edges.size(); ++x) {
      l.table.push_back({r[x], x, x});
      rt.table.push_back({s[x], x, x});
    }
    Bispace       space = make_bispace(build_action(gl, std::move(l)), build_action(gr, std::move(rt)));
    MeasureFamily fam(s, right_units.size(), lambda, &edges);
    return make_correspondence(std::move(name), HaarSystem::counting(gl), HaarSystem::counting(gr),
                               std::move(space), std::move(fam));
  }

}  // namespace gcorr

#endif  // GCORR_CORRESPONDENCE_HPP
