#ifndef GCORR_GROUPOID_HPP
#define GCORR_GROUPOID_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gcorr/error.hpp"

namespace gcorr {

  using Index = std::size_t;
  inline constexpr Index npos = static_cast<Index>(-1);

  /// Raw, index-based description of a groupoid as it comes out of a file
  /// or a generator. `comp` lists triples (a, b, a∘b), where a∘b means
  /// "a after b" and requires src(a) == dst(b).
  struct GroupoidTables {
    std::vector<std::string>           units;
    std::vector<std::string>           arrows;
    std::vector<Index>                 src;
    std::vector<Index>                 dst;
    std::vector<Index>                 inv;
    std::vector<std::array<Index, 3>>  comp;
    std::vector<Index>                 unit_arrow;  // optional, derived if empty
  };

  struct GroupoidViolation {
    ErrorCode   kind;
    std::string what;
    std::string witness;  // the offending arrow triple (or pair), by name
  };

  class GroupoidError : public Error {
   public:
    explicit GroupoidError(std::vector<GroupoidViolation> v)
        : Error(v.empty() ? ErrorCode::dangling_endpoint : v.front().kind,
                summary(v), v.empty() ? std::string{} : v.front().witness),
          violations_(std::move(v)) {}

    std::vector<GroupoidViolation> const& violations() const noexcept {
      return violations_;
    }

   private:
    static std::string summary(std::vector<GroupoidViolation> const& v) {
      if (v.empty()) {
        return "invalid groupoid";
      }
      std::string s = v.front().what + " " + v.front().witness;
      if (v.size() > 1) {
        s += " (+" + std::to_string(v.size() - 1) + " more)";
      }
      return s;
    }

    std::vector<GroupoidViolation> violations_;
  };

  class FiniteGroupoid;
  FiniteGroupoid build_groupoid(GroupoidTables tables);

  namespace detail {
    FiniteGroupoid assemble_groupoid(GroupoidTables tables,
                                     std::vector<GroupoidViolation>* problems);
  }

  /// A finite groupoid, immutable once built.
  ///
  /// Arrows in the range fibre G^u (dst == u) and source fibre G_u
  /// (src == u) are stored contiguously; `range_pos`/`source_pos` give an
  /// arrow's slot inside its fibre, which is how every table in the
  /// library is indexed.
  class FiniteGroupoid {
   public:
    FiniteGroupoid() = default;

    Index num_units() const noexcept {
      return unit_names_.size();
    }
    Index num_arrows() const noexcept {
      return arrow_names_.size();
    }

    Index src(Index a) const {
      return src_[a];
    }
    Index dst(Index a) const {
      return dst_[a];
    }
    Index inv(Index a) const {
      return inv_[a];
    }
    Index unit_arrow(Index u) const {
      return unit_arrow_[u];
    }
    bool is_unit_arrow(Index a) const {
      return unit_arrow_[src_[a]] == a;
    }

    bool composable(Index a, Index b) const {
      return src_[a] == dst_[b];
    }

    /// a∘b ("a after b"); requires src(a) == dst(b).
    Index compose(Index a, Index b) const {
      if (src_[a] != dst_[b]) {
        throw Error(ErrorCode::mismatch, "arrows are not composable",
                    "(" + arrow_names_[a] + "," + arrow_names_[b] + ")");
      }
      return comp_[comp_start_[a] + range_pos_[b]];
    }

    std::span<Index const> range_fibre(Index u) const {
      return {range_list_.data() + range_offsets_[u],
              range_offsets_[u + 1] - range_offsets_[u]};
    }
    std::span<Index const> source_fibre(Index u) const {
      return {source_list_.data() + source_offsets_[u],
              source_offsets_[u + 1] - source_offsets_[u]};
    }
    Index range_pos(Index a) const {
      return range_pos_[a];
    }
    Index source_pos(Index a) const {
      return source_pos_[a];
    }

    std::string const& unit_name(Index u) const {
      return unit_names_[u];
    }
    std::string const& arrow_name(Index a) const {
      return arrow_names_[a];
    }
    std::vector<std::string> const& unit_names() const noexcept {
      return unit_names_;
    }
    std::vector<std::string> const& arrow_names() const noexcept {
      return arrow_names_;
    }

    Index find_unit(std::string const& name) const {
      auto it = unit_index_.find(name);
      return it == unit_index_.end() ? npos : it->second;
    }
    Index find_arrow(std::string const& name) const {
      auto it = arrow_index_.find(name);
      return it == arrow_index_.end() ? npos : it->second;
    }

    /// Tables suitable for serialisation or for re-validation.
    GroupoidTables tables() const {
      GroupoidTables t;
      t.units      = unit_names_;
      t.arrows     = arrow_names_;
      t.src        = src_;
      t.dst        = dst_;
      t.inv        = inv_;
      t.unit_arrow = unit_arrow_;
      for (Index a = 0; a < num_arrows(); ++a) {
        for (Index b : range_fibre(src_[a])) {
          t.comp.push_back({a, b, compose(a, b)});
        }
      }
      return t;
    }

    friend bool operator==(FiniteGroupoid const& x, FiniteGroupoid const& y) {
      return x.unit_names_ == y.unit_names_ && x.arrow_names_ == y.arrow_names_
             && x.src_ == y.src_ && x.dst_ == y.dst_ && x.inv_ == y.inv_
             && x.comp_ == y.comp_ && x.unit_arrow_ == y.unit_arrow_;
    }

   private:
    friend FiniteGroupoid detail::assemble_groupoid(GroupoidTables,
                                                    std::vector<GroupoidViolation>*);

    std::vector<std::string>               unit_names_;
    std::vector<std::string>               arrow_names_;
    std::unordered_map<std::string, Index> unit_index_;
    std::unordered_map<std::string, Index> arrow_index_;
    std::vector<Index>                     src_, dst_, inv_, unit_arrow_;
    std::vector<Index>                     range_offsets_, range_list_, range_pos_;
    std::vector<Index>                     source_offsets_, source_list_, source_pos_;
    std::vector<Index>                     comp_start_, comp_;
  };

  using GroupoidPtr = std::shared_ptr<FiniteGroupoid const>;

  inline GroupoidPtr share(FiniteGroupoid g) {
    return std::make_shared<FiniteGroupoid const>(std::move(g));
  }

  namespace detail {

    inline std::string triple(FiniteGroupoid const& g, Index a, Index b, Index c) {
      return "(" + g.arrow_name(a) + "," + g.arrow_name(b) + "," + g.arrow_name(c) + ")";
    }

    inline void build_fibres(std::vector<Index> const& key, Index num_keys,
                             std::vector<Index>& offsets, std::vector<Index>& list,
                             std::vector<Index>& pos) {
      offsets.assign(num_keys + 1, 0);
      for (Index k : key) {
        ++offsets[k + 1];
      }
      std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
      list.assign(key.size(), 0);
      pos.assign(key.size(), 0);
      std::vector<Index> fill(offsets.begin(), offsets.end() - 1);
      for (Index a = 0; a < key.size(); ++a) {
        pos[a]              = fill[key[a]] - offsets[key[a]];
        list[fill[key[a]]++] = a;
      }
    }

    /// Builds the fibre and composition indices. Structural problems
    /// (dangling endpoints, missing composites) are reported in `problems`
    /// when non-null; with a null sink the tables are trusted.
    inline FiniteGroupoid assemble_groupoid(GroupoidTables t,
                                            std::vector<GroupoidViolation>* problems) {
      auto report = [&](ErrorCode k, std::string what, std::string witness) {
        if (problems != nullptr) {
          problems->push_back({k, std::move(what), std::move(witness)});
        }
      };
      FiniteGroupoid g;
      Index const    nu = t.units.size();
      Index const    na = t.arrows.size();
      if (t.src.size() != na || t.dst.size() != na || t.inv.size() != na) {
        throw GroupoidError({{ErrorCode::dangling_endpoint,
                              "src/dst/inv tables must cover every arrow", ""}});
      }
      for (Index a = 0; a < na; ++a) {
        if (t.src[a] >= nu || t.dst[a] >= nu || t.inv[a] >= na) {
          report(ErrorCode::dangling_endpoint, "endpoint or inverse out of range",
                 "(" + t.arrows[a] + ")");
        }
      }
      if (problems != nullptr && !problems->empty()) {
        throw GroupoidError(std::move(*problems));
      }
      g.unit_names_  = std::move(t.units);
      g.arrow_names_ = std::move(t.arrows);
      for (Index u = 0; u < nu; ++u) {
        if (!g.unit_index_.emplace(g.unit_names_[u], u).second) {
          report(ErrorCode::dangling_endpoint, "duplicate unit id", "(" + g.unit_names_[u] + ")");
        }
      }
      for (Index a = 0; a < na; ++a) {
        if (!g.arrow_index_.emplace(g.arrow_names_[a], a).second) {
          report(ErrorCode::dangling_endpoint, "duplicate arrow id",
                 "(" + g.arrow_names_[a] + ")");
        }
      }
      g.src_ = std::move(t.src);
      g.dst_ = std::move(t.dst);
      g.inv_ = std::move(t.inv);
      build_fibres(g.dst_, nu, g.range_offsets_, g.range_list_, g.range_pos_);
      build_fibres(g.src_, nu, g.source_offsets_, g.source_list_, g.source_pos_);

      g.comp_start_.assign(na + 1, 0);
      for (Index a = 0; a < na; ++a) {
        g.comp_start_[a + 1] = g.comp_start_[a] + g.range_fibre(g.src_[a]).size();
      }
      g.comp_.assign(g.comp_start_[na], npos);
      for (auto const& [a, b, c] : t.comp) {
        if (a >= na || b >= na || c >= na) {
          report(ErrorCode::dangling_endpoint, "composition entry out of range", "");
          continue;
        }
        if (g.src_[a] != g.dst_[b]) {
          report(ErrorCode::dangling_endpoint, "composite listed for non-composable pair",
                 triple(g, a, b, c));
          continue;
        }
        if (g.src_[c] != g.src_[b] || g.dst_[c] != g.dst_[a]) {
          report(ErrorCode::dangling_endpoint, "composite has wrong endpoints",
                 triple(g, a, b, c));
          continue;
        }
        Index& slot = g.comp_[g.comp_start_[a] + g.range_pos_[b]];
        if (slot != npos && slot != c) {
          report(ErrorCode::dangling_endpoint, "conflicting composites", triple(g, a, b, c));
          continue;
        }
        slot = c;
      }
      for (Index a = 0; a < na; ++a) {
        for (Index b : g.range_fibre(g.src_[a])) {
          if (g.comp_[g.comp_start_[a] + g.range_pos_[b]] == npos) {
            report(ErrorCode::dangling_endpoint, "composite missing",
                   "(" + g.arrow_names_[a] + "," + g.arrow_names_[b] + ")");
          }
        }
      }
      if (problems != nullptr && !problems->empty()) {
        throw GroupoidError(std::move(*problems));
      }

      // Units: explicit table, or the unique idempotent arrow at each unit.
      g.unit_arrow_.assign(nu, npos);
      if (!t.unit_arrow.empty()) {
        if (t.unit_arrow.size() != nu) {
          report(ErrorCode::bad_unit, "identity table must cover every unit", "");
        } else {
          for (Index u = 0; u < nu; ++u) {
            Index e = t.unit_arrow[u];
            if (e >= na || g.src_[e] != u || g.dst_[e] != u) {
              report(ErrorCode::bad_unit, "identity arrow has wrong endpoints",
                     "(" + g.unit_names_[u] + ")");
            } else {
              g.unit_arrow_[u] = e;
            }
          }
        }
      } else {
        for (Index u = 0; u < nu; ++u) {
          for (Index e : g.range_fibre(u)) {
            if (g.src_[e] == u && g.comp_[g.comp_start_[e] + g.range_pos_[e]] == e) {
              g.unit_arrow_[u] = e;
              break;
            }
          }
          if (g.unit_arrow_[u] == npos) {
            report(ErrorCode::bad_unit, "no identity arrow at unit", "(" + g.unit_names_[u] + ")");
          }
        }
      }
      if (problems != nullptr && !problems->empty()) {
        throw GroupoidError(std::move(*problems));
      }
      return g;
    }

  }  // namespace detail

  /// Validates the groupoid axioms on `tables` and returns the groupoid.
  ///
  /// Throws GroupoidError listing every violation found (capped at 64);
  /// each violation names the offending arrows.
  inline FiniteGroupoid build_groupoid(GroupoidTables tables) {
    std::vector<GroupoidViolation> problems;
    FiniteGroupoid                 g = detail::assemble_groupoid(std::move(tables), &problems);
    constexpr std::size_t          cap = 64;
    auto add = [&](ErrorCode k, std::string what, std::string witness) {
      if (problems.size() < cap) {
        problems.push_back({k, std::move(what), std::move(witness)});
      }
    };
    Index const na = g.num_arrows();
    for (Index u = 0; u < g.num_units(); ++u) {
      Index e = g.unit_arrow(u);
      for (Index a : g.range_fibre(u)) {
        if (g.compose(e, a) != a) {
          add(ErrorCode::bad_unit, "identity does not act trivially",
              detail::triple(g, e, a, g.compose(e, a)));
        }
      }
      for (Index a : g.source_fibre(u)) {
        if (g.compose(a, e) != a) {
          add(ErrorCode::bad_unit, "identity does not act trivially",
              detail::triple(g, a, e, g.compose(a, e)));
        }
      }
    }
    for (Index a = 0; a < na; ++a) {
      Index i = g.inv(a);
      if (g.src(i) != g.dst(a) || g.dst(i) != g.src(a)) {
        add(ErrorCode::bad_inverse, "inverse has wrong endpoints",
            "(" + g.arrow_name(a) + "," + g.arrow_name(i) + ")");
        continue;
      }
      if (g.compose(i, a) != g.unit_arrow(g.src(a))
          || g.compose(a, i) != g.unit_arrow(g.dst(a))) {
        add(ErrorCode::bad_inverse, "inverse does not cancel",
            "(" + g.arrow_name(a) + "," + g.arrow_name(i) + ")");
      }
    }
    for (Index a = 0; a < na && problems.size() < cap; ++a) {
      for (Index b : g.range_fibre(g.src(a))) {
        Index ab = g.compose(a, b);
        for (Index c : g.range_fibre(g.src(b))) {
          if (g.compose(ab, c) != g.compose(a, g.compose(b, c))) {
            add(ErrorCode::non_associative, "(ab)c != a(bc)", detail::triple(g, a, b, c));
          }
        }
      }
    }
    if (!problems.empty()) {
      throw GroupoidError(std::move(problems));
    }
    return g;
  }

  /// Evidence that a finite groupoid is proper: the cardinalities |G^u_v|.
  struct ProperEvidence {
    bool                                  proper = true;
    std::map<std::pair<Index, Index>, Index> fibre_sizes;  // (u, v) -> |G^u_v|
  };

  inline ProperEvidence check_proper(FiniteGroupoid const& g) {
    ProperEvidence ev;
    for (Index a = 0; a < g.num_arrows(); ++a) {
      ++ev.fibre_sizes[{g.dst(a), g.src(a)}];
    }
    return ev;
  }

  // ---------------------------------------------------------------------
  // Actions

  enum class Side { left, right };

  /// (arrow, point, result): for a left action result = arrow·point,
  /// for a right action result = point·arrow.
  struct ActionTables {
    Side                              side = Side::left;
    std::vector<std::string>          points;
    std::vector<Index>                momentum;
    std::vector<std::array<Index, 3>> table;
  };

  class GroupoidAction;
  GroupoidAction build_action(GroupoidPtr g, ActionTables t);

  /// An action of a finite groupoid on a finite set.
  ///
  /// For a left action the momentum is r_X and γ acts on x when
  /// s(γ) = r_X(x); for a right action the momentum is s_X and γ acts on x
  /// when r(γ) = s_X(x).
  class GroupoidAction {
   public:
    GroupoidAction() = default;

    Side side() const noexcept {
      return side_;
    }
    FiniteGroupoid const& groupoid() const {
      return *groupoid_;
    }
    GroupoidPtr const& groupoid_ptr() const noexcept {
      return groupoid_;
    }
    Index num_points() const noexcept {
      return points_.size();
    }
    Index momentum(Index x) const {
      return momentum_[x];
    }
    std::vector<Index> const& momenta() const noexcept {
      return momentum_;
    }
    std::string const& point_name(Index x) const {
      return points_[x];
    }
    std::vector<std::string> const& point_names() const noexcept {
      return points_;
    }

    /// Arrows that act on x.
    std::span<Index const> acting_arrows(Index x) const {
      return side_ == Side::left ? groupoid_->source_fibre(momentum_[x])
                                 : groupoid_->range_fibre(momentum_[x]);
    }

    bool acts(Index arrow, Index x) const {
      return side_ == Side::left ? groupoid_->src(arrow) == momentum_[x]
                                 : groupoid_->dst(arrow) == momentum_[x];
    }

    /// γ·x (left) or x·γ (right).
    Index act(Index arrow, Index x) const {
      if (!acts(arrow, x)) {
        throw Error(ErrorCode::mismatch, "arrow does not act on point",
                    "(" + groupoid_->arrow_name(arrow) + "," + points_[x] + ")");
      }
      return result_[offset_[x] + slot(arrow)];
    }

    ActionTables tables() const {
      ActionTables t{side_, points_, momentum_, {}};
      for (Index x = 0; x < num_points(); ++x) {
        for (Index a : acting_arrows(x)) {
          t.table.push_back({a, x, act(a, x)});
        }
      }
      return t;
    }

    friend bool operator==(GroupoidAction const& a, GroupoidAction const& b) {
      return a.side_ == b.side_ && *a.groupoid_ == *b.groupoid_ && a.points_ == b.points_
             && a.momentum_ == b.momentum_ && a.result_ == b.result_;
    }

   private:
    friend GroupoidAction build_action(GroupoidPtr, ActionTables);
    friend GroupoidAction make_action_unchecked(GroupoidPtr, ActionTables);

    Index slot(Index arrow) const {
      return side_ == Side::left ? groupoid_->source_pos(arrow) : groupoid_->range_pos(arrow);
    }

    Side                     side_ = Side::left;
    GroupoidPtr              groupoid_;
    std::vector<std::string> points_;
    std::vector<Index>       momentum_;
    std::vector<Index>       offset_;
    std::vector<Index>       result_;
  };

  inline GroupoidAction make_action_unchecked(GroupoidPtr g, ActionTables t) {
    GroupoidAction act;
    act.side_     = t.side;
    act.groupoid_ = std::move(g);
    act.points_   = std::move(t.points);
    act.momentum_ = std::move(t.momentum);
    Index n       = act.points_.size();
    act.offset_.assign(n + 1, 0);
    for (Index x = 0; x < n; ++x) {
      if (act.momentum_[x] >= act.groupoid_->num_units()) {
        throw Error(ErrorCode::bad_action, "momentum out of range", "(" + act.points_[x] + ")");
      }
      act.offset_[x + 1] = act.offset_[x] + act.acting_arrows(x).size();
    }
    act.result_.assign(act.offset_[n], npos);
    for (auto const& [a, x, y] : t.table) {
      if (a < act.groupoid_->num_arrows() && x < n && y < n && act.acts(a, x)) {
        act.result_[act.offset_[x] + act.slot(a)] = y;
      }
    }
    return act;
  }

  /// Validates an action table: defined exactly on the fibre product,
  /// momentum of results correct, units act trivially, compatible with
  /// composition. Throws Error(BadAction) with the first witness.
  inline GroupoidAction build_action(GroupoidPtr g, ActionTables t) {
    Index const n = t.points.size();
    if (t.momentum.size() != n) {
      throw Error(ErrorCode::bad_action, "momentum must cover every point");
    }
    for (auto const& [a, x, y] : t.table) {
      if (a >= g->num_arrows() || x >= n || y >= n) {
        throw Error(ErrorCode::bad_action, "action entry out of range");
      }
      bool ok = t.side == Side::left ? g->src(a) == t.momentum[x] : g->dst(a) == t.momentum[x];
      if (!ok) {
        throw Error(ErrorCode::bad_action, "action entry outside the fibre product",
                    "(" + g->arrow_name(a) + "," + t.points[x] + ")");
      }
    }
    GroupoidAction act = make_action_unchecked(g, std::move(t));
    auto           name = [&](Index a, Index x) {
      return "(" + g->arrow_name(a) + "," + act.point_name(x) + ")";
    };
    for (Index x = 0; x < n; ++x) {
      for (Index a : act.acting_arrows(x)) {
        if (act.result_[act.offset_[x] + act.slot(a)] == npos) {
          throw Error(ErrorCode::bad_action, "action undefined on the fibre product", name(a, x));
        }
      }
    }
    for (Index x = 0; x < n; ++x) {
      Index u = act.momentum(x);
      if (act.act(g->unit_arrow(u), x) != x) {
        throw Error(ErrorCode::bad_action, "unit arrow acts non-trivially",
                    name(g->unit_arrow(u), x));
      }
      for (Index a : act.acting_arrows(x)) {
        Index y        = act.act(a, x);
        Index expected = act.side() == Side::left ? g->dst(a) : g->src(a);
        if (act.momentum(y) != expected) {
          throw Error(ErrorCode::bad_action, "result has the wrong momentum", name(a, x));
        }
        for (Index b : act.acting_arrows(y)) {
          // left: b(a x) = (b a) x ; right: (x a) b = x (a b)
          Index lhs = act.act(b, y);
          Index rhs = act.side() == Side::left ? act.act(g->compose(b, a), x)
                                               : act.act(g->compose(a, b), x);
          if (lhs != rhs) {
            throw Error(ErrorCode::bad_action, "action incompatible with composition",
                        "(" + g->arrow_name(a) + "," + g->arrow_name(b) + "," + act.point_name(x)
                            + ")");
          }
        }
      }
    }
    return act;
  }

  /// A G-H-bispace: a left G-action and a right H-action on one point set.
  struct Bispace {
    GroupoidAction left;
    GroupoidAction right;

    Index num_points() const {
      return left.num_points();
    }
    std::string const& point_name(Index x) const {
      return left.point_name(x);
    }
    std::vector<std::string> const& point_names() const {
      return left.point_names();
    }
    Index r(Index x) const {
      return left.momentum(x);
    }
    Index s(Index x) const {
      return right.momentum(x);
    }

    friend bool operator==(Bispace const&, Bispace const&) = default;
  };

  /// Checks the commuting-actions axioms; throws Error(NotCommuting).
  inline Bispace make_bispace(GroupoidAction left, GroupoidAction right) {
    if (left.side() != Side::left || right.side() != Side::right) {
      throw Error(ErrorCode::bad_action, "bispace needs a left and a right action");
    }
    if (left.point_names() != right.point_names()) {
      throw Error(ErrorCode::bad_action, "left and right actions live on different point sets");
    }
    auto const& g = left.groupoid();
    auto const& h = right.groupoid();
    for (Index x = 0; x < left.num_points(); ++x) {
      for (Index a : left.acting_arrows(x)) {
        Index ax = left.act(a, x);
        if (right.momentum(ax) != right.momentum(x)) {
          throw Error(ErrorCode::not_commuting, "left action moves the right momentum",
                      "(" + g.arrow_name(a) + "," + left.point_name(x) + ")");
        }
        for (Index b : right.acting_arrows(x)) {
          Index xb = right.act(b, x);
          if (left.momentum(xb) != left.momentum(x)) {
            throw Error(ErrorCode::not_commuting, "right action moves the left momentum",
                        "(" + left.point_name(x) + "," + h.arrow_name(b) + ")");
          }
          if (right.act(b, ax) != left.act(a, xb)) {
            throw Error(ErrorCode::not_commuting, "(a x) b != a (x b)",
                        "(" + g.arrow_name(a) + "," + left.point_name(x) + "," + h.arrow_name(b)
                            + ")");
          }
        }
      }
    }
    return Bispace{std::move(left), std::move(right)};
  }

  // ---------------------------------------------------------------------
  // Derived constructions

  /// The groupoid G⋉X (left) or X⋊G (right) of an action.
  ///
  /// Left:  arrow (γ,x) with s = x, r = γx, (η,γx)∘(γ,x) = (ηγ,x).
  /// Right: arrow (x,γ) with r = x, s = xγ, (x,γ)∘(xγ,η) = (x,γη).
  struct TransformationGroupoid {
    GroupoidPtr        groupoid;
    Side               side = Side::left;
    std::vector<Index> base_arrow;  // transformation arrow -> acting arrow
    std::vector<Index> point;       // transformation arrow -> x of (γ,x) / (x,γ)
    std::vector<Index> offset;      // point -> first transformation arrow

    /// Index of (γ,x) or (x,γ).
    Index arrow(Index base, Index x) const {
      auto const& g = *acting;
      return offset[x] + (side == Side::left ? g.source_pos(base) : g.range_pos(base));
    }

    GroupoidPtr acting;
  };

  inline TransformationGroupoid transformation_groupoid(GroupoidAction const& action) {
    auto const&            g = action.groupoid();
    TransformationGroupoid tg;
    tg.side   = action.side();
    tg.acting = action.groupoid_ptr();
    Index n   = action.num_points();
    tg.offset.assign(n + 1, 0);
    for (Index x = 0; x < n; ++x) {
      tg.offset[x + 1] = tg.offset[x] + action.acting_arrows(x).size();
    }
    GroupoidTables t;
    t.units = action.point_names();
    for (Index x = 0; x < n; ++x) {
      for (Index a : action.acting_arrows(x)) {
        tg.base_arrow.push_back(a);
        tg.point.push_back(x);
        Index y = action.act(a, x);
        if (tg.side == Side::left) {
          t.arrows.push_back("(" + g.arrow_name(a) + "," + action.point_name(x) + ")");
          t.src.push_back(x);
          t.dst.push_back(y);
        } else {
          t.arrows.push_back("(" + action.point_name(x) + "," + g.arrow_name(a) + ")");
          t.src.push_back(y);
          t.dst.push_back(x);
        }
      }
    }
    Index na = t.arrows.size();
    t.inv.resize(na);
    t.unit_arrow.resize(n);
    for (Index k = 0; k < na; ++k) {
      Index a = tg.base_arrow[k];
      Index x = tg.point[k];
      Index y = action.act(a, x);
      t.inv[k] = tg.arrow(g.inv(a), y);
      if (g.is_unit_arrow(a)) {
        t.unit_arrow[x] = k;
      }
    }
    for (Index k = 0; k < na; ++k) {
      Index a = tg.base_arrow[k];
      Index x = tg.point[k];
      if (tg.side == Side::left) {
        // (η, a x) ∘ (a, x) = (η a, x)
        Index y = action.act(a, x);
        for (Index eta : action.acting_arrows(y)) {
          t.comp.push_back({tg.arrow(eta, y), k, tg.arrow(g.compose(eta, a), x)});
        }
      } else {
        // (x, a) ∘ (x a, η) = (x, a η)
        Index y = action.act(a, x);
        for (Index eta : action.acting_arrows(y)) {
          t.comp.push_back({k, tg.arrow(eta, y), tg.arrow(g.compose(a, eta), x)});
        }
      }
    }
    tg.groupoid = share(detail::assemble_groupoid(std::move(t), nullptr));
    return tg;
  }

  /// Z = X ×_{G⁰} Y with the diagonal right action (x,y)·γ = (xγ, γ⁻¹y).
  struct FibreProduct {
    std::vector<std::pair<Index, Index>> pairs;
    std::map<std::pair<Index, Index>, Index> index;
    GroupoidAction diagonal;  // right action of the middle groupoid
    Bispace        bispace;   // outer bispace, filled by the bispace overload

    Index find(Index x, Index y) const {
      auto it = index.find({x, y});
      return it == index.end() ? npos : it->second;
    }
  };

  inline std::string pair_name(std::string const& x, std::string const& y) {
    return "(" + x + "," + y + ")";
  }

  inline FibreProduct fibre_product(GroupoidAction const& x_right, GroupoidAction const& y_left) {
    if (x_right.side() != Side::right || y_left.side() != Side::left) {
      throw Error(ErrorCode::mismatch, "fibre product needs a right and a left action");
    }
    if (!(x_right.groupoid() == y_left.groupoid())) {
      throw Error(ErrorCode::groupoid_mismatch, "actions are over different groupoids");
    }
    auto const&  g = x_right.groupoid();
    FibreProduct z;
    std::vector<std::vector<Index>> y_by_unit(g.num_units());
    for (Index y = 0; y < y_left.num_points(); ++y) {
      y_by_unit[y_left.momentum(y)].push_back(y);
    }
    ActionTables t;
    t.side = Side::right;
    for (Index x = 0; x < x_right.num_points(); ++x) {
      for (Index y : y_by_unit[x_right.momentum(x)]) {
        z.index[{x, y}] = z.pairs.size();
        z.pairs.emplace_back(x, y);
        t.points.push_back(pair_name(x_right.point_name(x), y_left.point_name(y)));
        t.momentum.push_back(x_right.momentum(x));
      }
    }
    for (Index k = 0; k < z.pairs.size(); ++k) {
      auto [x, y] = z.pairs[k];
      for (Index a : x_right.acting_arrows(x)) {
        Index xa = x_right.act(a, x);
        Index ya = y_left.act(g.inv(a), y);
        t.table.push_back({a, k, z.index.at({xa, ya})});
      }
    }
    z.diagonal = make_action_unchecked(x_right.groupoid_ptr(), std::move(t));
    return z;
  }

  /// Fibre product of a G₁-G₂ bispace with a G₂-G₃ bispace, with the outer
  /// G₁-G₃ bispace (γ₁·(x,y) = (γ₁x,y), (x,y)·γ₃ = (x,yγ₃)).
  inline FibreProduct fibre_product(Bispace const& X, Bispace const& Y) {
    FibreProduct z = fibre_product(X.right, Y.left);
    ActionTables l{Side::left, z.diagonal.point_names(), {}, {}};
    ActionTables r{Side::right, z.diagonal.point_names(), {}, {}};
    for (Index k = 0; k < z.pairs.size(); ++k) {
      auto [x, y] = z.pairs[k];
      l.momentum.push_back(X.r(x));
      r.momentum.push_back(Y.s(y));
      for (Index a : X.left.acting_arrows(x)) {
        l.table.push_back({a, k, z.index.at({X.left.act(a, x), y})});
      }
      for (Index b : Y.right.acting_arrows(y)) {
        r.table.push_back({b, k, z.index.at({x, Y.right.act(b, y)})});
      }
    }
    z.bispace = Bispace{make_action_unchecked(X.left.groupoid_ptr(), std::move(l)),
                        make_action_unchecked(Y.right.groupoid_ptr(), std::move(r))};
    return z;
  }

  /// Orbits of an action. Representatives are the lexicographically
  /// smallest point ids; orbits are ordered by representative.
  struct OrbitSpace {
    std::vector<Index>              projection;      // point -> orbit
    std::vector<Index>              representative;  // orbit -> point
    std::vector<std::vector<Index>> members;         // orbit -> sorted points

    Index num_orbits() const {
      return representative.size();
    }
  };

  inline OrbitSpace orbit_space(GroupoidAction const& action) {
    Index const        n = action.num_points();
    std::vector<Index> comp(n, npos);
    std::vector<std::vector<Index>> groups;
    for (Index start = 0; start < n; ++start) {
      if (comp[start] != npos) {
        continue;
      }
      Index id = groups.size();
      groups.emplace_back();
      std::vector<Index> stack{start};
      comp[start] = id;
      while (!stack.empty()) {
        Index x = stack.back();
        stack.pop_back();
        groups[id].push_back(x);
        for (Index a : action.acting_arrows(x)) {
          Index y = action.act(a, x);
          if (comp[y] == npos) {
            comp[y] = id;
            stack.push_back(y);
          }
        }
      }
    }
    auto by_name = [&](Index a, Index b) { return action.point_name(a) < action.point_name(b); };
    for (auto& grp : groups) {
      std::sort(grp.begin(), grp.end(), by_name);
    }
    std::sort(groups.begin(), groups.end(),
              [&](auto const& a, auto const& b) { return by_name(a.front(), b.front()); });
    OrbitSpace o;
    o.projection.assign(n, npos);
    for (Index k = 0; k < groups.size(); ++k) {
      o.representative.push_back(groups[k].front());
      for (Index x : groups[k]) {
        o.projection[x] = k;
      }
    }
    o.members = std::move(groups);
    return o;
  }

  /// The action of a groupoid on its own units, γ·s(γ) = r(γ).
  inline GroupoidAction unit_action(GroupoidPtr const& g) {
    ActionTables t{Side::left, g->unit_names(), {}, {}};
    for (Index u = 0; u < g->num_units(); ++u) {
      t.momentum.push_back(u);
    }
    for (Index a = 0; a < g->num_arrows(); ++a) {
      t.table.push_back({a, g->src(a), g->dst(a)});
    }
    return make_action_unchecked(g, std::move(t));
  }

}  // namespace gcorr

#endif  // GCORR_GROUPOID_HPP
