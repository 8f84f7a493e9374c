#ifndef GCORR_GROUPS_HPP
#define GCORR_GROUPS_HPP

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "gcorr/error.hpp"
#include "gcorr/groupoid.hpp"

namespace gcorr {

  /// A finite group given by its multiplication table; element 0 is the
  /// identity.
  struct FiniteGroup {
    std::vector<std::string>        names;
    std::vector<std::vector<Index>> mul;  // mul[a][b] = ab
    std::vector<Index>              inv;

    Index order() const {
      return names.size();
    }
    Index product(Index a, Index b) const {
      return mul[a][b];
    }

    Index find(std::string const& name) const {
      auto it = std::find(names.begin(), names.end(), name);
      return it == names.end() ? npos : static_cast<Index>(it - names.begin());
    }

    static FiniteGroup from_table(std::vector<std::string> names,
                                  std::vector<std::vector<Index>> mul) {
      FiniteGroup g{std::move(names), std::move(mul), {}};
      Index       n = g.order();
      g.inv.assign(n, npos);
      for (Index a = 0; a < n; ++a) {
        for (Index b = 0; b < n; ++b) {
          if (g.mul[a][b] == 0) {
            g.inv[a] = b;
          }
        }
        if (g.inv[a] == npos) {
          throw Error(ErrorCode::bad_inverse, "group element has no inverse", g.names[a]);
        }
      }
      return g;
    }

    static FiniteGroup trivial() {
      return cyclic(1);
    }

    static FiniteGroup cyclic(Index n) {
      std::vector<std::string>        names;
      std::vector<std::vector<Index>> mul(n, std::vector<Index>(n));
      for (Index a = 0; a < n; ++a) {
        names.push_back(std::to_string(a));
        for (Index b = 0; b < n; ++b) {
          mul[a][b] = (a + b) % n;
        }
      }
      return from_table(std::move(names), std::move(mul));
    }

    static FiniteGroup klein() {
      // e, a, b, c = ab with xor multiplication on two bits.
      std::vector<std::string>        names{"e", "a", "b", "c"};
      std::vector<std::vector<Index>> mul(4, std::vector<Index>(4));
      for (Index x = 0; x < 4; ++x) {
        for (Index y = 0; y < 4; ++y) {
          mul[x][y] = x ^ y;
        }
      }
      return from_table(std::move(names), std::move(mul));
    }

    /// Symmetric group on {0,..,n-1}; elements are named by their one-line
    /// images ("102"), ab means "apply b, then a".
    static FiniteGroup symmetric(Index n) {
      std::vector<std::vector<Index>> perms;
      std::vector<Index>              p(n);
      std::iota(p.begin(), p.end(), Index{0});
      do {
        perms.push_back(p);
      } while (std::next_permutation(p.begin(), p.end()));
      return from_permutations(perms);
    }

    /// Dihedral group of order 2n: r^k are rotations "r<k>", s r^k
    /// reflections "s<k>".
    static FiniteGroup dihedral(Index n) {
      std::vector<std::vector<Index>> perms;
      for (Index k = 0; k < n; ++k) {
        std::vector<Index> p(n);
        for (Index i = 0; i < n; ++i) {
          p[i] = (i + k) % n;
        }
        perms.push_back(p);
      }
      for (Index k = 0; k < n; ++k) {
        std::vector<Index> p(n);
        for (Index i = 0; i < n; ++i) {
          p[i] = (k + n - i) % n;
        }
        perms.push_back(p);
      }
      FiniteGroup g = from_permutations(perms);
      for (Index k = 0; k < n; ++k) {
        g.names[k]     = "r" + std::to_string(k);
        g.names[n + k] = "s" + std::to_string(k);
      }
      return g;
    }

    /// Group of the given permutations (must be closed); the first
    /// permutation must be the identity.
    static FiniteGroup from_permutations(std::vector<std::vector<Index>> const& perms) {
      Index                    n = perms.size();
      std::vector<std::string> names;
      for (auto const& p : perms) {
        std::string s;
        for (Index i : p) {
          s += static_cast<char>(i < 10 ? '0' + i : 'a' + (i - 10));
        }
        names.push_back(s);
      }
      std::vector<std::vector<Index>> mul(n, std::vector<Index>(n));
      for (Index a = 0; a < n; ++a) {
        for (Index b = 0; b < n; ++b) {
          std::vector<Index> c(perms[a].size());
          for (Index i = 0; i < c.size(); ++i) {
            c[i] = perms[a][perms[b][i]];
          }
          auto it = std::find(perms.begin(), perms.end(), c);
          if (it == perms.end()) {
            throw Error(ErrorCode::mismatch, "permutation set is not closed");
          }
          mul[a][b] = static_cast<Index>(it - perms.begin());
        }
      }
      return from_table(std::move(names), std::move(mul));
    }
  };

  /// Sorted element list of a subgroup.
  using Subgroup = std::vector<Index>;

  inline Subgroup generated_subgroup(FiniteGroup const& g, std::vector<Index> const& gens) {
    for (Index s : gens) {
      if (s >= g.order()) {
        throw Error(ErrorCode::not_a_subgroup, "generator is not a group element");
      }
    }
    std::set<Index>    seen{0};
    std::vector<Index> frontier{0};
    while (!frontier.empty()) {
      Index a = frontier.back();
      frontier.pop_back();
      for (Index s : gens) {
        Index b = g.product(a, s);
        if (seen.insert(b).second) {
          frontier.push_back(b);
        }
      }
    }
    return {seen.begin(), seen.end()};
  }

  inline bool is_subgroup(FiniteGroup const& g, Subgroup const& h) {
    if (h.empty() || !std::binary_search(h.begin(), h.end(), Index{0})) {
      return false;
    }
    for (Index a : h) {
      for (Index b : h) {
        if (!std::binary_search(h.begin(), h.end(), g.product(a, g.inv[b]))) {
          return false;
        }
      }
    }
    return true;
  }

  /// All subgroups generated by at most two elements (every subgroup of
  /// the small groups used here), sorted by order then elements.
  inline std::vector<Subgroup> subgroups(FiniteGroup const& g) {
    std::set<Subgroup> found;
    for (Index a = 0; a < g.order(); ++a) {
      for (Index b = a; b < g.order(); ++b) {
        found.insert(generated_subgroup(g, {a, b}));
      }
    }
    std::vector<Subgroup> out(found.begin(), found.end());
    std::stable_sort(out.begin(), out.end(),
                     [](auto const& x, auto const& y) { return x.size() < y.size(); });
    return out;
  }

  /// The restriction of g's multiplication to h, with h's element names.
  inline FiniteGroup subgroup_as_group(FiniteGroup const& g, Subgroup const& h) {
    if (!is_subgroup(g, h)) {
      throw Error(ErrorCode::not_a_subgroup, "elements do not form a subgroup");
    }
    std::vector<std::string>        names;
    std::vector<std::vector<Index>> mul(h.size(), std::vector<Index>(h.size()));
    for (Index i = 0; i < h.size(); ++i) {
      names.push_back(g.names[h[i]]);
      for (Index j = 0; j < h.size(); ++j) {
        Index p  = g.product(h[i], h[j]);
        mul[i][j] = static_cast<Index>(std::lower_bound(h.begin(), h.end(), p) - h.begin());
      }
    }
    return FiniteGroup::from_table(std::move(names), std::move(mul));
  }

  /// Throws NotAHomomorphism with the offending pair.
  inline void check_homomorphism(FiniteGroup const& from, FiniteGroup const& to,
                                 std::vector<Index> const& phi) {
    if (phi.size() != from.order()) {
      throw Error(ErrorCode::not_a_homomorphism, "map must cover every element");
    }
    for (Index x : phi) {
      if (x >= to.order()) {
        throw Error(ErrorCode::not_a_homomorphism, "image out of range");
      }
    }
    for (Index a = 0; a < from.order(); ++a) {
      for (Index b = 0; b < from.order(); ++b) {
        if (phi[from.product(a, b)] != to.product(phi[a], phi[b])) {
          throw Error(ErrorCode::not_a_homomorphism, "phi(ab) != phi(a)phi(b)",
                      "(" + from.names[a] + "," + from.names[b] + ")");
        }
      }
    }
  }

  /// Inclusion of a subgroup, as a homomorphism.
  inline std::vector<Index> inclusion(Subgroup const& h) {
    return h;
  }

  /// A group as a groupoid with the single unit "*".
  inline FiniteGroupoid group_groupoid(FiniteGroup const& g) {
    GroupoidTables t;
    t.units  = {"*"};
    t.arrows = g.names;
    Index n  = g.order();
    t.src.assign(n, 0);
    t.dst.assign(n, 0);
    t.inv        = g.inv;
    t.unit_arrow = {0};
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        t.comp.push_back({a, b, g.product(a, b)});
      }
    }
    return detail::assemble_groupoid(std::move(t), nullptr);
  }

  /// Pair groupoid: arrow "(i,j)" goes from j to i.
  inline FiniteGroupoid pair_groupoid(std::vector<std::string> const& units) {
    GroupoidTables t;
    t.units = units;
    Index n = units.size();
    auto  id = [n](Index i, Index j) { return i * n + j; };
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        t.arrows.push_back("(" + units[i] + "," + units[j] + ")");
        t.dst.push_back(i);
        t.src.push_back(j);
        t.inv.push_back(id(j, i));
        for (Index k = 0; k < n; ++k) {
          t.comp.push_back({id(i, j), id(j, k), id(i, k)});
        }
      }
      t.unit_arrow.push_back(id(i, i));
    }
    return detail::assemble_groupoid(std::move(t), nullptr);
  }

  inline FiniteGroupoid pair_groupoid(Index n) {
    std::vector<std::string> names;
    for (Index i = 1; i <= n; ++i) {
      names.push_back(std::to_string(i));
    }
    return pair_groupoid(names);
  }

  /// The groupoid with only identity arrows; arrow names equal unit names.
  inline FiniteGroupoid unit_groupoid(std::vector<std::string> const& units) {
    GroupoidTables t;
    t.units  = units;
    t.arrows = units;
    for (Index u = 0; u < units.size(); ++u) {
      t.src.push_back(u);
      t.dst.push_back(u);
      t.inv.push_back(u);
      t.unit_arrow.push_back(u);
      t.comp.push_back({u, u, u});
    }
    return detail::assemble_groupoid(std::move(t), nullptr);
  }

  /// Disjoint union; names are prefixed "<k>:" when `tag` is set.
  inline FiniteGroupoid disjoint_union(std::vector<FiniteGroupoid> const& parts, bool tag = true) {
    GroupoidTables t;
    Index          unit_base = 0, arrow_base = 0;
    for (Index k = 0; k < parts.size(); ++k) {
      auto const& g      = parts[k];
      std::string prefix = tag ? std::to_string(k) + ":" : "";
      for (Index u = 0; u < g.num_units(); ++u) {
        t.units.push_back(prefix + g.unit_name(u));
        t.unit_arrow.push_back(arrow_base + g.unit_arrow(u));
      }
      for (Index a = 0; a < g.num_arrows(); ++a) {
        t.arrows.push_back(prefix + g.arrow_name(a));
        t.src.push_back(unit_base + g.src(a));
        t.dst.push_back(unit_base + g.dst(a));
        t.inv.push_back(arrow_base + g.inv(a));
        for (Index b : g.range_fibre(g.src(a))) {
          t.comp.push_back({arrow_base + a, arrow_base + b, arrow_base + g.compose(a, b)});
        }
      }
      unit_base += g.num_units();
      arrow_base += g.num_arrows();
    }
    return detail::assemble_groupoid(std::move(t), nullptr);
  }

  /// Left cosets aH as a left G-set. `coset_of[a]` is the coset of a.
  struct CosetSpace {
    std::vector<Subgroup>           cosets;
    std::vector<Index>              coset_of;
    std::vector<std::vector<Index>> act;  // act[g][c] = g·c
  };

  inline CosetSpace left_cosets(FiniteGroup const& g, Subgroup const& h) {
    CosetSpace cs;
    cs.coset_of.assign(g.order(), npos);
    for (Index a = 0; a < g.order(); ++a) {
      if (cs.coset_of[a] != npos) {
        continue;
      }
      Subgroup c;
      for (Index x : h) {
        c.push_back(g.product(a, x));
      }
      std::sort(c.begin(), c.end());
      for (Index x : c) {
        cs.coset_of[x] = cs.cosets.size();
      }
      cs.cosets.push_back(std::move(c));
    }
    cs.act.assign(g.order(), std::vector<Index>(cs.cosets.size()));
    for (Index a = 0; a < g.order(); ++a) {
      for (Index c = 0; c < cs.cosets.size(); ++c) {
        cs.act[a][c] = cs.coset_of[g.product(a, cs.cosets[c].front())];
      }
    }
    return cs;
  }

}  // namespace gcorr

#endif  // GCORR_GROUPS_HPP
