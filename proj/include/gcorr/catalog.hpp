#ifndef GCORR_CATALOG_HPP
#define GCORR_CATALOG_HPP

#include <string>
#include <vector>

#include "gcorr/correspondence.hpp"
#include "gcorr/error.hpp"
#include "gcorr/groups.hpp"

// Named composable pairs with a known composite, for the `example`
// command and for tests. In each entry the pair is (X, Y) with X: G₁ → G₂
// and Y: G₂ → G₃, composed as compose(X, Y).

namespace gcorr {

  struct CatalogEntry {
    std::string    name;
    std::string    summary;
    Correspondence X, Y;
    Correspondence expected;  // the composite up to isomorphism
  };

  namespace catalog {

    /// f: {x1..x5} → {y1,y2,y3}, g: {y1,y2,y3} → {z1,z2}; the composite of
    /// the map correspondences is the map correspondence of g∘f.
    inline CatalogEntry fn_compose() {
      std::vector<std::string> xs{"x1", "x2", "x3", "x4", "x5"};
      std::vector<std::string> ys{"y1", "y2", "y3"};
      std::vector<std::string> zs{"z1", "z2"};
      std::vector<Index>       f{0, 0, 1, 2, 2};
      std::vector<Index>       g{0, 1, 1};
      std::vector<Index>       gf;
      for (Index x : f) {
        gf.push_back(g[x]);
      }
      return {"fn-compose", "map correspondences compose like functions",
              from_map(ys, zs, g, "map.g"), from_map(xs, ys, f, "map.f"),
              from_map(xs, zs, gf, "map.gf")};
    }

    /// ψ: Z/4 → Z/2 (reduction), φ = id on Z/2.
    inline CatalogEntry group_hom() {
      FiniteGroup        k = FiniteGroup::cyclic(4);
      FiniteGroup        h = FiniteGroup::cyclic(2);
      FiniteGroup        g = FiniteGroup::cyclic(2);
      std::vector<Index> psi{0, 1, 0, 1};
      std::vector<Index> phi{0, 1};
      std::vector<Index> both;
      for (Index a : psi) {
        both.push_back(phi[a]);
      }
      return {"group-hom", "homomorphism correspondences compose like homomorphisms",
              from_group_hom(k, h, psi, "hom.psi"), from_group_hom(h, g, phi, "hom.phi"),
              from_group_hom(k, g, both, "hom.phi-psi")};
    }

    /// H = A3 and K = ⟨102⟩ inside S3; G from H to G composed with G
    /// from G to K is G as an H-K bispace.
    inline CatalogEntry subgroup() {
      FiniteGroup s3 = FiniteGroup::symmetric(3);
      Subgroup    a3 = generated_subgroup(s3, {s3.find("120")});
      Subgroup    k  = generated_subgroup(s3, {s3.find("102")});
      auto [x, y]    = induction_instance(s3, a3, k);
      return {"subgroup", "subgroup bimodules through the ambient group", std::move(x),
              std::move(y), subgroup_bimodule(s3, a3, k, "subgroup.H-K")};
    }

    /// G as an H-K bispace followed by K (counting) from K to the trivial
    /// group. The composite space (G×K)/K is G again, with counting measure.
    inline CatalogEntry induction_finite() {
      FiniteGroup s3 = FiniteGroup::symmetric(3);
      Subgroup    a3 = generated_subgroup(s3, {s3.find("120")});
      Subgroup    k  = generated_subgroup(s3, {s3.find("102")});
      FiniteGroup kg = subgroup_as_group(s3, k);
      Subgroup    all_k(kg.order());
      std::iota(all_k.begin(), all_k.end(), Index{0});
      return {"induction-finite", "inducing along a subgroup, then forgetting",
              subgroup_bimodule(s3, a3, k, "induction.H-K"),
              subgroup_bimodule(kg, all_k, Subgroup{0}, "induction.K-1"),
              subgroup_bimodule(s3, a3, Subgroup{0}, "induction.H-1")};
    }

    /// Edge correspondences between vertex sets; the composite lives on
    /// paths of length two with μ = λ₁·λ₂.
    inline CatalogEntry quiver() {
      std::vector<std::string> v0{"u1", "u2"};
      std::vector<std::string> v1{"v1", "v2", "v3"};
      std::vector<std::string> v2{"w1", "w2"};
      // E has r in V0 and s in V1; F has r in V1 and s in V2.
      std::vector<std::string> e{"e1", "e2", "e3", "e4"};
      std::vector<Index>       er{0, 0, 1, 1}, es{0, 1, 1, 2};
      std::vector<Scalar>      el{Scalar(2), Scalar::fraction(1, 3), Scalar(5), Scalar::fraction(3, 2)};
      std::vector<std::string> f{"f1", "f2", "f3", "f4"};
      std::vector<Index>       fr{0, 1, 1, 2}, fs{0, 0, 1, 1};
      std::vector<Scalar>      fl{Scalar(1), Scalar::fraction(4, 7), Scalar(3), Scalar::fraction(1, 2)};
      std::vector<std::string> paths;
      std::vector<Index>       pr, ps;
      std::vector<Scalar>      pl;
      for (Index a = 0; a < e.size(); ++a) {
        for (Index b = 0; b < f.size(); ++b) {
          if (es[a] == fr[b]) {
            paths.push_back("(" + e[a] + "," + f[b] + ")");
            pr.push_back(er[a]);
            ps.push_back(fs[b]);
            pl.push_back(el[a] * fl[b]);
          }
        }
      }
      return {"quiver", "edge correspondences compose to paths of length two",
              quiver_correspondence(e, v0, v1, er, es, el, "quiver.E"),
              quiver_correspondence(f, v1, v2, fr, fs, fl, "quiver.F"),
              quiver_correspondence(paths, v0, v2, pr, ps, pl, "quiver.EF")};
    }

  }  // namespace catalog

  inline std::vector<std::string> catalog_names() {
    return {"fn-compose", "group-hom", "subgroup", "induction-finite", "quiver"};
  }

  inline CatalogEntry catalog_entry(std::string const& name) {
    if (name == "fn-compose") {
      return catalog::fn_compose();
    }
    if (name == "group-hom") {
      return catalog::group_hom();
    }
    if (name == "subgroup") {
      return catalog::subgroup();
    }
    if (name == "induction-finite") {
      return catalog::induction_finite();
    }
    if (name == "quiver") {
      return catalog::quiver();
    }
    throw Error(ErrorCode::unknown_name, "no catalog entry named '" + name + "'", name);
  }

}  // namespace gcorr

#endif  // GCORR_CATALOG_HPP
