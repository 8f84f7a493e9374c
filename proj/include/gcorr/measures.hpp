#ifndef GCORR_MEASURES_HPP
#define GCORR_MEASURES_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "gcorr/error.hpp"
#include "gcorr/groupoid.hpp"
#include "gcorr/report.hpp"
#include "gcorr/scalar.hpp"

namespace gcorr {

  /// A family of strictly positive point weights along a map
  /// `along: total -> base`; the measure at b lives on along⁻¹(b).
  class MeasureFamily {
   public:
    MeasureFamily() = default;

    /// Throws ZeroWeight / NonPositive on a weight that is not > 0.
    MeasureFamily(std::vector<Index> along, Index base_size, std::vector<Scalar> weight,
                  std::vector<std::string> const* names = nullptr)
        : along_(std::move(along)), weight_(std::move(weight)), fibres_(base_size) {
      if (along_.size() != weight_.size()) {
        throw Error(ErrorCode::mismatch, "measure family: map and weights differ in size");
      }
      for (Index t = 0; t < along_.size(); ++t) {
        std::string who = names != nullptr ? (*names)[t] : std::to_string(t);
        if (along_[t] >= base_size) {
          throw Error(ErrorCode::mismatch, "measure family: base index out of range", who);
        }
        if (weight_[t].is_zero()) {
          throw Error(ErrorCode::zero_weight, "weight must be strictly positive", who);
        }
        if (!weight_[t].is_positive()) {
          throw Error(ErrorCode::non_positive, "weight must be strictly positive", who);
        }
        fibres_[along_[t]].push_back(t);
      }
    }

    Index total_size() const {
      return along_.size();
    }
    Index base_size() const {
      return fibres_.size();
    }
    Index along(Index t) const {
      return along_[t];
    }
    Scalar const& weight(Index t) const {
      return weight_[t];
    }
    std::vector<Scalar> const& weights() const {
      return weight_;
    }
    std::vector<Index> const& along_map() const {
      return along_;
    }
    std::vector<Index> const& fibre(Index b) const {
      return fibres_[b];
    }

    Scalar total_mass(Index b) const {
      Scalar s;
      for (Index t : fibres_[b]) {
        s += weight_[t];
      }
      return s;
    }

    bool is_exact() const {
      return std::all_of(weight_.begin(), weight_.end(),
                         [](Scalar const& w) { return w.is_exact(); });
    }

    friend bool operator==(MeasureFamily const& a, MeasureFamily const& b) {
      return a.along_ == b.along_ && a.weight_ == b.weight_ && a.base_size() == b.base_size();
    }

   private:
    std::vector<Index>              along_;
    std::vector<Scalar>             weight_;
    std::vector<std::vector<Index>> fibres_;
  };

  /// Weights on arrows, fibred along dst: α^u lives on G^u.
  struct HaarSystem {
    GroupoidPtr         groupoid;
    std::vector<Scalar> weight;

    FiniteGroupoid const& g() const {
      return *groupoid;
    }
    Scalar const& operator()(Index arrow) const {
      return weight[arrow];
    }

    MeasureFamily family() const {
      return MeasureFamily(std::vector<Index>(dst_map()), groupoid->num_units(), weight,
                           &groupoid->arrow_names());
    }

    std::vector<Index> dst_map() const {
      std::vector<Index> d(groupoid->num_arrows());
      for (Index a = 0; a < d.size(); ++a) {
        d[a] = groupoid->dst(a);
      }
      return d;
    }

    static HaarSystem counting(GroupoidPtr g) {
      return HaarSystem{g, std::vector<Scalar>(g->num_arrows(), Scalar(1))};
    }

    /// weight(γ) = w(s(γ)); the general left-invariant system on a finite
    /// groupoid.
    static HaarSystem from_unit_weights(GroupoidPtr g, std::vector<Scalar> const& w) {
      HaarSystem h{g, {}};
      for (Index a = 0; a < g->num_arrows(); ++a) {
        h.weight.push_back(w[g->src(a)]);
      }
      return h;
    }

    friend bool operator==(HaarSystem const& a, HaarSystem const& b) {
      return *a.groupoid == *b.groupoid && a.weight == b.weight;
    }
  };

  /// Fails on the first non-positive weight; residual is unused.
  inline Check check_positive(std::string name, std::vector<Scalar> const& w,
                              std::vector<std::string> const& names) {
    for (Index t = 0; t < w.size(); ++t) {
      if (!w[t].is_positive()) {
        return Check{std::move(name), false, w[t].to_double(), names[t], "weight <= 0"};
      }
    }
    return Check{std::move(name), true, 0.0, {}, {}};
  }

  /// Left invariance weight(ηγ) = weight(γ) over all composable pairs.
  inline Check check_haar(HaarSystem const& h, Tolerance tol = {}) {
    auto const& g = h.g();
    Check       c{"haar", true, 0.0, {}, {}};
    if (h.weight.size() != g.num_arrows()) {
      c.passed  = false;
      c.witness = "(weights)";
      c.detail  = "weight table does not cover the arrows";
      return c;
    }
    for (Index a = 0; a < g.num_arrows(); ++a) {
      if (!h.weight[a].is_positive()) {
        c.passed  = false;
        c.witness = "(" + g.arrow_name(a) + ")";
        c.detail  = "weight must be strictly positive";
        return c;
      }
    }
    for (Index eta = 0; eta < g.num_arrows(); ++eta) {
      for (Index gamma : g.range_fibre(g.src(eta))) {
        Scalar const& x = h.weight[g.compose(eta, gamma)];
        Scalar const& y = h.weight[gamma];
        double        d = deviation(x, y);
        c.residual      = std::max(c.residual, d);
        if (c.passed && !within(x, y, tol)) {
          c.passed  = false;
          c.witness = "(" + g.arrow_name(eta) + "," + g.arrow_name(gamma) + ")";
        }
      }
    }
    return c;
  }

  inline HaarSystem require_haar(HaarSystem h, Tolerance tol = {}) {
    Check c = check_haar(h, tol);
    if (!c.passed) {
      throw Error(ErrorCode::not_haar, "weights are not left invariant " + c.detail, c.witness);
    }
    return h;
  }

  /// A measure on the arrows of a groupoid.
  struct GroupoidMeasure {
    GroupoidPtr         groupoid;
    std::vector<Scalar> weight;
  };

  enum class Direction { forward, inverse };

  /// forward: m(r γ)·λ(γ); inverse: m(s γ)·λ(γ⁻¹).
  inline GroupoidMeasure induced_measure(std::vector<Scalar> const& m, HaarSystem const& lambda,
                                         Direction dir) {
    auto const& g = lambda.g();
    if (m.size() != g.num_units()) {
      throw Error(ErrorCode::mismatch, "unit measure does not cover the units");
    }
    GroupoidMeasure out{lambda.groupoid, {}};
    out.weight.reserve(g.num_arrows());
    for (Index a = 0; a < g.num_arrows(); ++a) {
      out.weight.push_back(dir == Direction::forward ? m[g.dst(a)] * lambda(a)
                                                     : m[g.src(a)] * lambda(g.inv(a)));
    }
    return out;
  }

  /// m∘λ = m∘λ⁻¹ arrow by arrow; residual is the max absolute difference.
  inline Check is_symmetric(std::vector<Scalar> const& m, HaarSystem const& lambda,
                            Tolerance tol = {}) {
    auto  fwd = induced_measure(m, lambda, Direction::forward);
    auto  bwd = induced_measure(m, lambda, Direction::inverse);
    Check c{"symmetric", true, 0.0, {}, {}};
    for (Index a = 0; a < fwd.weight.size(); ++a) {
      c.residual = std::max(c.residual, deviation(fwd.weight[a], bwd.weight[a]));
      if (c.passed && !within(fwd.weight[a], bwd.weight[a], tol)) {
        c.passed  = false;
        c.witness = "(" + lambda.g().arrow_name(a) + ")";
      }
    }
    return c;
  }

  /// [λ]^{[u]}({v}) = Σ_{γ∈G^u, s(γ)=v} λ(γ), evaluated at each orbit's
  /// representative u. Returned along the orbit projection of the units.
  inline MeasureFamily quotient_family(HaarSystem const& lambda, OrbitSpace const& orbits) {
    auto const&         g = lambda.g();
    std::vector<Scalar> w(g.num_units());
    for (Index k = 0; k < orbits.num_orbits(); ++k) {
      Index u = orbits.representative[k];
      for (Index a : g.range_fibre(u)) {
        w[g.src(a)] += lambda(a);
      }
    }
    return MeasureFamily(orbits.projection, orbits.num_orbits(), std::move(w), &g.unit_names());
  }

  /// (μ∘[λ])({v}) = μ([v])·[λ]^{[v]}({v}).
  inline std::vector<Scalar> compose_with_quotient(std::vector<Scalar> const& mu,
                                                   MeasureFamily const& quotient) {
    std::vector<Scalar> m(quotient.total_size());
    for (Index v = 0; v < m.size(); ++v) {
      m[v] = mu[quotient.along(v)] * quotient.weight(v);
    }
    return m;
  }

  /// Σ_{γ∈G^u} e(s γ)·λ(γ) = 1 for all u.
  inline Check check_cutoff(std::vector<Scalar> const& e, HaarSystem const& lambda,
                            Tolerance tol = {}) {
    auto const& g = lambda.g();
    Check       c{"cutoff", true, 0.0, {}, {}};
    for (Index u = 0; u < g.num_units(); ++u) {
      Scalar s;
      for (Index a : g.range_fibre(u)) {
        if (e[g.src(a)].sign() < 0) {
          return Check{"cutoff", false, e[g.src(a)].to_double(), g.unit_name(g.src(a)),
                       "cutoff must be nonnegative"};
        }
        s += e[g.src(a)] * lambda(a);
      }
      c.residual = std::max(c.residual, deviation(s, Scalar(1)));
      if (c.passed && !within(s, Scalar(1), tol)) {
        c.passed  = false;
        c.witness = "(" + g.unit_name(u) + ")";
      }
    }
    return c;
  }

  /// The canonical cutoff e = 1/h, h(u) = Σ_{γ∈G^u} λ(γ).
  inline std::vector<Scalar> default_cutoff(HaarSystem const& lambda) {
    auto const&         g = lambda.g();
    std::vector<Scalar> h(g.num_units());
    for (Index a = 0; a < g.num_arrows(); ++a) {
      h[g.dst(a)] += lambda(a);
    }
    // h is orbit constant for a Haar system, so e(s γ) = 1/h(s γ) = 1/h(r γ).
    for (auto& x : h) {
      x = Scalar(1) / x;
    }
    return h;
  }

  struct PushDown {
    std::vector<Scalar> mu;         // per orbit
    MeasureFamily       quotient;   // [λ]
    Report              report;
  };

  /// μ([u]) = Σ_{v ∈ [u]} m(v)·e(v). Throws NotInvariant when m is not
  /// symmetric and BadCutoff when e is not normalised.
  inline PushDown push_measure_down(std::vector<Scalar> const& m, HaarSystem const& lambda,
                                    std::vector<Scalar> const& e, Tolerance tol = {}) {
    auto const& g = lambda.g();
    if (m.size() != g.num_units() || e.size() != g.num_units()) {
      throw Error(ErrorCode::mismatch, "unit measure or cutoff does not cover the units");
    }
    PushDown out;
    Check    sym = is_symmetric(m, lambda, tol);
    out.report.add(sym);
    if (!sym.passed) {
      throw Error(ErrorCode::not_invariant, "measure is not symmetric", sym.witness);
    }
    Check cut = check_cutoff(e, lambda, tol);
    out.report.add(cut);
    if (!cut.passed) {
      throw Error(ErrorCode::bad_cutoff, "cutoff is not normalised", cut.witness);
    }
    OrbitSpace orbits = orbit_space(unit_action(lambda.groupoid));
    out.quotient      = quotient_family(lambda, orbits);
    out.mu.assign(orbits.num_orbits(), Scalar(0));
    for (Index k = 0; k < orbits.num_orbits(); ++k) {
      for (Index v : orbits.members[k]) {
        out.mu[k] += m[v] * e[v];
      }
    }
    auto  back = compose_with_quotient(out.mu, out.quotient);
    Check rt{"round_trip", true, 0.0, {}, {}};
    for (Index v = 0; v < back.size(); ++v) {
      rt.residual = std::max(rt.residual, deviation(back[v], m[v]));
      if (rt.passed && !within(back[v], m[v], tol)) {
        rt.passed  = false;
        rt.witness = "(" + g.unit_name(v) + ")";
      }
    }
    out.report.add(rt);
    return out;
  }

}  // namespace gcorr

#endif  // GCORR_MEASURES_HPP
