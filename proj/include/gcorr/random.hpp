#ifndef GCORR_RANDOM_HPP
#define GCORR_RANDOM_HPP

#include <cstdio>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gcorr/cohomology.hpp"
#include "gcorr/correspondence.hpp"
#include "gcorr/groupoid.hpp"
#include "gcorr/groups.hpp"
#include "gcorr/measures.hpp"
#include "gcorr/rng.hpp"

// Seeded generators. Groupoids are transformation groupoids Γ⋉A of small
// groups acting on disjoint unions of coset spaces; correspondences are
// disjoint unions of products P×Q of a Γ₁-set over A₁ and a Γ₂-set over
// A₂, so both actions are genuinely non-free in general.

namespace gcorr {

  /// The small groups the generators draw from.
  inline std::vector<FiniteGroup> const& small_groups() {
    static std::vector<FiniteGroup> const groups = {
        FiniteGroup::trivial(),   FiniteGroup::cyclic(2), FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),   FiniteGroup::klein(),   FiniteGroup::symmetric(3),
        FiniteGroup::dihedral(4),
    };
    return groups;
  }

  /// A finite left Γ-set made of coset spaces Γ/K_i.
  struct GammaSet {
    FiniteGroup                     group;
    std::vector<CosetSpace>         pieces;
    std::vector<Subgroup>           stabilizers;
    std::vector<Index>              offset;  // piece -> first point
    std::vector<Index>              piece_of;
    std::vector<std::vector<Index>> act;     // act[g][p]

    Index size() const {
      return piece_of.size();
    }

    /// Appends Γ/K; returns the piece id.
    Index add_piece(Subgroup k) {
      CosetSpace cs = left_cosets(group, k);
      Index      id = pieces.size();
      Index      n0 = size();
      offset.push_back(n0);
      act.resize(group.order());
      for (Index g = 0; g < group.order(); ++g) {
        for (Index c = 0; c < cs.cosets.size(); ++c) {
          act[g].push_back(n0 + cs.act[g][c]);
        }
      }
      piece_of.insert(piece_of.end(), cs.cosets.size(), id);
      pieces.push_back(std::move(cs));
      stabilizers.push_back(std::move(k));
      return id;
    }

    Index piece_size(Index i) const {
      return pieces[i].cosets.size();
    }
  };

  /// Γ⋉A together with its description.
  struct ActionGroupoid {
    GammaSet               set;
    GroupoidPtr            group;  // Γ as a one-unit groupoid
    GroupoidAction         action;
    TransformationGroupoid tg;

    GroupoidPtr const& groupoid() const {
      return tg.groupoid;
    }
    /// Arrow (g, a), from a to g·a.
    Index arrow(Index g, Index a) const {
      return tg.arrow(g, a);
    }
  };

  inline ActionGroupoid action_groupoid(GammaSet set, std::string const& prefix) {
    ActionGroupoid out;
    out.group = share(group_groupoid(set.group));
    ActionTables t{Side::left, {}, std::vector<Index>(set.size(), 0), {}};
    for (Index p = 0; p < set.size(); ++p) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%zu.%zu", prefix.c_str(), set.piece_of[p],
                    p - set.offset[set.piece_of[p]]);
      t.points.push_back(buf);
      for (Index g = 0; g < set.group.order(); ++g) {
        t.table.push_back({g, p, set.act[g][p]});
      }
    }
    out.action = make_action_unchecked(out.group, std::move(t));
    out.tg     = transformation_groupoid(out.action);
    out.set    = std::move(set);
    return out;
  }

  namespace detail {

    inline Subgroup random_subgroup(Rng& rng, FiniteGroup const& g) {
      auto subs = subgroups(g);
      return subs[rng.below(subs.size())];
    }

    inline std::vector<Subgroup> subgroups_within(FiniteGroup const& g, Subgroup const& k) {
      std::vector<Subgroup> out;
      for (auto const& s : subgroups(g)) {
        if (std::includes(k.begin(), k.end(), s.begin(), s.end())) {
          out.push_back(s);
        }
      }
      return out;
    }

    inline std::string padded(char const* prefix, Index i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%02zu", prefix, i);
      return buf;
    }

  }  // namespace detail

  /// A Γ-set of at most `max_points` points, with 1 to `max_pieces` pieces.
  inline GammaSet random_gamma_set(Rng& rng, FiniteGroup const& g, Index max_points,
                                   Index max_pieces = 3) {
    GammaSet s{g, {}, {}, {}, {}, {}};
    Index    pieces = static_cast<Index>(rng.between(1, static_cast<long long>(max_pieces)));
    for (Index i = 0; i < pieces; ++i) {
      for (int attempt = 0; attempt < 8; ++attempt) {
        Subgroup k    = detail::random_subgroup(rng, g);
        Index    size = g.order() / k.size();
        if (s.size() + size <= max_points) {
          s.add_piece(std::move(k));
          break;
        }
      }
    }
    if (s.size() == 0) {
      Subgroup all(g.order());
      std::iota(all.begin(), all.end(), Index{0});
      s.add_piece(std::move(all));
    }
    return s;
  }

  /// A transitive Γ-set Γ/K lying over piece `target` of `base` (K inside
  /// the stabiliser there), with the equivariant map to `base`.
  struct Cover {
    CosetSpace         cosets;
    std::vector<Index> map;  // coset -> point of base
  };

  inline Cover random_cover(Rng& rng, GammaSet const& base, Index target) {
    auto const& g     = base.group;
    auto        inner = detail::subgroups_within(g, base.stabilizers[target]);
    Subgroup    k     = inner[rng.below(inner.size())];
    Cover       c{left_cosets(g, k), {}};
    for (auto const& coset : c.cosets.cosets) {
      c.map.push_back(base.offset[target] + base.pieces[target].coset_of[coset.front()]);
    }
    return c;
  }

  /// Seeded groupoid: a disjoint union of up to three Γ⋉A, at most
  /// `max_arrows` arrows in total.
  inline FiniteGroupoid random_groupoid(Rng& rng, Index max_arrows = 200) {
    auto const&                 groups = small_groups();
    std::vector<FiniteGroupoid> parts;
    Index                       used  = 0;
    Index                       count = static_cast<Index>(rng.between(1, 3));
    for (Index i = 0; i < count; ++i) {
      FiniteGroup const& g      = groups[rng.below(groups.size())];
      Index              budget = (max_arrows - used) / g.order();
      if (budget == 0) {
        continue;
      }
      auto ag = action_groupoid(random_gamma_set(rng, g, std::min<Index>(budget, 12)), "a");
      used += ag.groupoid()->num_arrows();
      parts.push_back(*ag.groupoid());
    }
    if (parts.empty()) {
      parts.push_back(unit_groupoid({"a0.0"}));
    }
    return disjoint_union(parts);
  }

  /// Positive rational unit weights, as a left Haar system.
  inline HaarSystem random_haar(Rng& rng, GroupoidPtr g) {
    std::vector<Scalar> w;
    for (Index u = 0; u < g->num_units(); ++u) {
      w.push_back(rng.positive_rational(9, 4));
    }
    return HaarSystem::from_unit_weights(std::move(g), w);
  }

  /// A random 0-cochain: exact rationals, or doubles when `exact` is off.
  /// Multiplicative cochains are positive.
  inline Cochain0 random_cochain(Rng& rng, GroupoidPtr g, Flavor flavor, bool exact = true) {
    Cochain0 t{g, flavor, {}};
    for (Index u = 0; u < g->num_units(); ++u) {
      if (flavor == Flavor::additive) {
        t.value.push_back(exact ? Scalar::fraction(rng.between(-20, 20), rng.between(1, 6))
                                : Scalar::inexact(10.0 * rng.symmetric()));
      } else {
        t.value.push_back(exact ? rng.positive_rational(9, 9)
                                : Scalar::inexact(0.1 + 4.0 * rng.unit()));
      }
    }
    return t;
  }

  /// A symmetric measure relative to λ: m(u) = c([u])·λ(e_u) with c
  /// random on orbits.
  inline std::vector<Scalar> random_symmetric_measure(Rng& rng, HaarSystem const& lambda) {
    auto const&         g      = lambda.g();
    OrbitSpace          orbits = orbit_space(unit_action(lambda.groupoid));
    std::vector<Scalar> c;
    for (Index k = 0; k < orbits.num_orbits(); ++k) {
      c.push_back(rng.positive_rational(7, 5));
    }
    std::vector<Scalar> m;
    for (Index u = 0; u < g.num_units(); ++u) {
      m.push_back(c[orbits.projection[u]] * lambda(g.unit_arrow(u)));
    }
    return m;
  }

  /// A correspondence from Γ₁⋉A₁ to Γ₂⋉A₂: the space ⊔ P_i × Q_i, at most
  /// `max_points` points, λ random on right orbits, Δ derived. When
  /// `left_pieces` is nonempty, P_i only lies over those pieces of A₁.
  inline Correspondence random_correspondence(Rng& rng, ActionGroupoid const& L,
                                              HaarSystem const& alpha, ActionGroupoid const& R,
                                              HaarSystem const& beta, Index max_points,
                                              char const* prefix, std::string name,
                                              std::vector<Index> const& left_pieces = {}) {
    struct Term {
      Cover p, q;
    };
    std::vector<Term> terms;
    Index             total = 0;
    Index             want  = static_cast<Index>(rng.between(1, 3));
    for (int attempt = 0; attempt < 12 && terms.size() < want; ++attempt) {
      Index lp = left_pieces.empty() ? rng.below(L.set.pieces.size())
                                     : left_pieces[rng.below(left_pieces.size())];
      Cover p  = random_cover(rng, L.set, lp);
      Cover q  = random_cover(rng, R.set, rng.below(R.set.pieces.size()));
      Index sz = p.map.size() * q.map.size();
      if (total + sz <= max_points) {
        total += sz;
        terms.push_back({std::move(p), std::move(q)});
      }
    }
    if (terms.empty()) {
      // Γ/Γ over the first point of each side always fits.
      auto whole = [](GammaSet const& s) {
        Subgroup all(s.group.order());
        std::iota(all.begin(), all.end(), Index{0});
        Index piece = npos;
        for (Index i = 0; i < s.pieces.size(); ++i) {
          if (s.piece_size(i) == 1) {
            piece = i;
          }
        }
        return std::pair{all, piece};
      };
      auto [la, lp] = whole(L.set);
      auto [ra, rp] = whole(R.set);
      if (lp == npos || rp == npos) {
        throw Error(ErrorCode::mismatch, "no room for a random correspondence");
      }
      terms.push_back({Cover{left_cosets(L.set.group, la), {L.set.offset[lp]}},
                       Cover{left_cosets(R.set.group, ra), {R.set.offset[rp]}}});
    }

    struct Point {
      Index term, p, q;
    };
    std::vector<Point>                 points;
    std::vector<std::vector<Index>>    index(terms.size());
    for (Index i = 0; i < terms.size(); ++i) {
      Index np = terms[i].p.map.size(), nq = terms[i].q.map.size();
      index[i].resize(np * nq);
      for (Index p = 0; p < np; ++p) {
        for (Index q = 0; q < nq; ++q) {
          index[i][p * nq + q] = points.size();
          points.push_back({i, p, q});
        }
      }
    }
    auto at = [&](Index i, Index p, Index q) { return index[i][p * terms[i].q.map.size() + q]; };

    std::vector<std::string> names;
    for (Index x = 0; x < points.size(); ++x) {
      names.push_back(detail::padded(prefix, x));
    }
    FiniteGroup const& g1 = L.set.group;
    FiniteGroup const& g2 = R.set.group;
    ActionTables       lt{Side::left, names, {}, {}};
    ActionTables       rt{Side::right, names, {}, {}};
    for (Index x = 0; x < points.size(); ++x) {
      auto const& [i, p, q] = points[x];
      auto const& T         = terms[i];
      Index       a         = T.p.map[p];
      Index       b0        = T.q.map[q];
      lt.momentum.push_back(a);
      rt.momentum.push_back(b0);
      for (Index g = 0; g < g1.order(); ++g) {
        lt.table.push_back({L.arrow(g, a), x, at(i, T.p.cosets.act[g][p], q)});
      }
      for (Index h = 0; h < g2.order(); ++h) {
        Index hi = g2.inv[h];
        Index b  = R.set.act[hi][b0];
        rt.table.push_back({R.arrow(h, b), x, at(i, p, T.q.cosets.act[hi][q])});
      }
    }
    // λ is constant on {p} × Q_i, the right orbits.
    std::vector<std::vector<Scalar>> per(terms.size());
    for (Index i = 0; i < terms.size(); ++i) {
      for (Index p = 0; p < terms[i].p.map.size(); ++p) {
        per[i].push_back(rng.positive_rational(6, 4));
      }
    }
    std::vector<Scalar> w;
    for (auto const& pt : points) {
      w.push_back(per[pt.term][pt.p]);
    }
    Bispace space = make_bispace(build_action(L.groupoid(), std::move(lt)),
                                 build_action(R.groupoid(), std::move(rt)));
    MeasureFamily lambda(space.right.momenta(), R.groupoid()->num_units(), std::move(w), &names);
    return make_correspondence(std::move(name), alpha, beta, std::move(space), std::move(lambda));
  }

  struct RandomSizes {
    Index max_x  = 40;
    Index max_y  = 40;
    Index max_g2 = 24;  // arrows of the middle groupoid
  };

  struct RandomPair {
    Correspondence X, Y;
  };

  /// A composable pair (X: G₁ → G₂, Y: G₂ → G₃), reproducible from `seed`.
  inline RandomPair random_pair(std::uint64_t seed, RandomSizes sizes = {}) {
    Rng         rng(seed);
    auto const& groups = small_groups();
    auto        pick   = [&](Index max_arrows, char const* prefix) {
      for (;;) {
        FiniteGroup const& g = groups[rng.below(groups.size())];
        Index              room = max_arrows / g.order();
        if (room == 0) {
          continue;
        }
        GammaSet s = random_gamma_set(rng, g, std::min<Index>(room, 6), 2);
        return action_groupoid(std::move(s), prefix);
      }
    };
    ActionGroupoid G1 = pick(48, "a");
    ActionGroupoid G2 = pick(sizes.max_g2, "b");
    ActionGroupoid G3 = pick(48, "c");
    HaarSystem     a1 = random_haar(rng, G1.groupoid());
    HaarSystem     a2 = random_haar(rng, G2.groupoid());
    HaarSystem     a3 = random_haar(rng, G3.groupoid());
    Correspondence X  = random_correspondence(rng, G1, a1, G2, a2, sizes.max_x, "x", "X");
    // Y sits over the part of A₂ that X reaches, so Z is never empty.
    std::set<Index> reached;
    for (Index x = 0; x < X.num_points(); ++x) {
      reached.insert(G2.set.piece_of[X.space.s(x)]);
    }
    Correspondence Y = random_correspondence(rng, G2, a2, G3, a3, sizes.max_y, "y", "Y",
                                             {reached.begin(), reached.end()});
    return RandomPair{std::move(X), std::move(Y)};
  }

}  // namespace gcorr

#endif  // GCORR_RANDOM_HPP
