#ifndef GCORR_COHOMOLOGY_HPP
#define GCORR_COHOMOLOGY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gcorr/error.hpp"
#include "gcorr/groupoid.hpp"
#include "gcorr/measures.hpp"
#include "gcorr/report.hpp"
#include "gcorr/scalar.hpp"

namespace gcorr {

  enum class Flavor { additive, multiplicative };

  inline Scalar identity_of(Flavor f) {
    return f == Flavor::additive ? Scalar(0) : Scalar(1);
  }

  inline Scalar combine(Flavor f, Scalar const& a, Scalar const& b) {
    return f == Flavor::additive ? a + b : a * b;
  }

  /// A function on arrows; a cocycle when it is a homomorphism.
  struct Cocycle1 {
    GroupoidPtr         groupoid;
    Flavor              flavor = Flavor::multiplicative;
    std::vector<Scalar> value;

    Scalar const& operator()(Index a) const {
      return value[a];
    }
    bool is_exact() const {
      return std::all_of(value.begin(), value.end(), [](auto const& v) { return v.is_exact(); });
    }
  };

  /// A function on units.
  struct Cochain0 {
    GroupoidPtr         groupoid;
    Flavor              flavor = Flavor::multiplicative;
    std::vector<Scalar> value;

    Scalar const& operator()(Index u) const {
      return value[u];
    }
    bool is_exact() const {
      return std::all_of(value.begin(), value.end(), [](auto const& v) { return v.is_exact(); });
    }
  };

  /// Probability weights on range fibres.
  struct ProbabilityFamily {
    GroupoidPtr         groupoid;
    std::vector<Scalar> weight;

    Scalar const& operator()(Index a) const {
      return weight[a];
    }
  };

  /// Homomorphism identity on all composable pairs and on unit arrows.
  inline Check check_cocycle(Cocycle1 const& c, Tolerance tol = {}) {
    auto const& g = *c.groupoid;
    Check       out{"cocycle", true, 0.0, {}, {}};
    Scalar      one = identity_of(c.flavor);
    for (Index u = 0; u < g.num_units(); ++u) {
      Index e = g.unit_arrow(u);
      out.residual = std::max(out.residual, deviation(c(e), one));
      if (!within(c(e), one, tol)) {
        out.passed  = false;
        out.witness = "(" + g.arrow_name(e) + ")";
        out.detail  = "unit arrow is not mapped to the identity";
        return out;
      }
    }
    if (c.flavor == Flavor::multiplicative) {
      for (Index a = 0; a < g.num_arrows(); ++a) {
        if (!c(a).is_positive()) {
          out.passed  = false;
          out.witness = "(" + g.arrow_name(a) + ")";
          out.detail  = "multiplicative cocycle must be positive";
          return out;
        }
      }
    }
    for (Index a = 0; a < g.num_arrows(); ++a) {
      for (Index b : g.range_fibre(g.src(a))) {
        Scalar lhs = c(g.compose(a, b));
        Scalar rhs = combine(c.flavor, c(a), c(b));
        double d   = c.flavor == Flavor::additive ? deviation(lhs, rhs) : relative_deviation(lhs, rhs);
        out.residual = std::max(out.residual, d);
        if (out.passed && !within(lhs, rhs, tol)) {
          out.passed  = false;
          out.witness = "(" + g.arrow_name(a) + "," + g.arrow_name(b) + ")";
        }
      }
    }
    return out;
  }

  inline void require_cocycle(Cocycle1 const& c, Tolerance tol = {}) {
    Check ch = check_cocycle(c, tol);
    if (!ch.passed) {
      throw Error(ErrorCode::not_a_cocycle, "not a homomorphism " + ch.detail, ch.witness);
    }
  }

  /// additive: t∘s − t∘r; multiplicative: (t∘s)/(t∘r).
  inline Cocycle1 d0(Cochain0 const& t) {
    auto const& g = *t.groupoid;
    Cocycle1    c{t.groupoid, t.flavor, {}};
    c.value.reserve(g.num_arrows());
    for (Index a = 0; a < g.num_arrows(); ++a) {
      c.value.push_back(t.flavor == Flavor::additive ? t(g.src(a)) - t(g.dst(a))
                                                     : t(g.src(a)) / t(g.dst(a)));
    }
    return c;
  }

  /// h(u) = Σ_{γ∈G^u} F(sγ)·α(γ) and p^u(γ) = F(sγ)·α(γ)/h(u), F ≡ 1 by
  /// default. Throws NotInvariant when h is not orbit constant.
  inline ProbabilityFamily invariant_probability_family(
      HaarSystem const& alpha, std::optional<std::vector<Scalar>> const& F = std::nullopt,
      Tolerance tol = {}) {
    auto const& g = alpha.g();
    auto        f = [&](Index u) { return F ? (*F)[u] : Scalar(1); };
    if (F) {
      if (F->size() != g.num_units()) {
        throw Error(ErrorCode::mismatch, "F does not cover the units");
      }
      for (Index u = 0; u < g.num_units(); ++u) {
        if (!(*F)[u].is_positive()) {
          throw Error(ErrorCode::non_positive, "F must be strictly positive", g.unit_name(u));
        }
      }
    }
    std::vector<Scalar> h(g.num_units());
    for (Index a = 0; a < g.num_arrows(); ++a) {
      h[g.dst(a)] += f(g.src(a)) * alpha(a);
    }
    for (Index a = 0; a < g.num_arrows(); ++a) {
      if (!within(h[g.src(a)], h[g.dst(a)], tol)) {
        throw Error(ErrorCode::not_invariant, "h is not constant on orbits",
                    "(" + g.arrow_name(a) + ")");
      }
    }
    ProbabilityFamily p{alpha.groupoid, {}};
    p.weight.reserve(g.num_arrows());
    for (Index a = 0; a < g.num_arrows(); ++a) {
      p.weight.push_back(f(g.src(a)) * alpha(a) / h[g.dst(a)]);
    }
    return p;
  }

  /// Fibre sums equal 1, and for every η and δ ∈ G^{r(η)}:
  /// p^{s(η)}(η⁻¹δ) = p^{r(η)}(δ) (invariance tested on indicators).
  inline Report check_probability_family(ProbabilityFamily const& p, Tolerance tol = {}) {
    auto const& g = *p.groupoid;
    Report      r;
    Check       sums{"fibre_sums", true, 0.0, {}, {}};
    for (Index u = 0; u < g.num_units(); ++u) {
      Scalar s;
      for (Index a : g.range_fibre(u)) {
        if (p(a).sign() < 0) {
          sums.passed  = false;
          sums.witness = "(" + g.arrow_name(a) + ")";
          sums.detail  = "negative weight";
        }
        s += p(a);
      }
      sums.residual = std::max(sums.residual, deviation(s, Scalar(1)));
      if (sums.passed && !within(s, Scalar(1), tol)) {
        sums.passed  = false;
        sums.witness = "(" + g.unit_name(u) + ")";
      }
    }
    r.add(sums);
    Check inv{"invariance", true, 0.0, {}, {}};
    for (Index eta = 0; eta < g.num_arrows(); ++eta) {
      Index eta_inv = g.inv(eta);
      for (Index delta : g.range_fibre(g.dst(eta))) {
        Scalar const& x = p(g.compose(eta_inv, delta));
        Scalar const& y = p(delta);
        inv.residual    = std::max(inv.residual, deviation(x, y));
        if (inv.passed && !within(x, y, tol)) {
          inv.passed  = false;
          inv.witness = "(" + g.arrow_name(eta) + "," + g.arrow_name(delta) + ")";
        }
      }
    }
    r.add(inv);
    return r;
  }

  /// max over arrows of |c(γ) − (t(sγ) − t(rγ))|, or the relative error of
  /// c(γ)·t(rγ) against t(sγ) for the multiplicative flavour.
  inline Check coboundary_residual(Cocycle1 const& c, Cochain0 const& t, Tolerance tol = {}) {
    auto const& g = *c.groupoid;
    Check       out{"coboundary", true, 0.0, {}, {}};
    for (Index a = 0; a < g.num_arrows(); ++a) {
      Scalar lhs, rhs;
      double d;
      if (c.flavor == Flavor::additive) {
        lhs = c(a);
        rhs = t(g.src(a)) - t(g.dst(a));
        d   = deviation(lhs, rhs);
      } else {
        lhs = c(a) * t(g.dst(a));
        rhs = t(g.src(a));
        d   = relative_deviation(lhs, rhs);
      }
      out.residual = std::max(out.residual, d);
      if (out.passed && !within(lhs, rhs, tol)) {
        out.passed  = false;
        out.witness = "(" + g.arrow_name(a) + ")";
      }
    }
    return out;
  }

  /// b̲(u) = −Σ_{γ∈G^u} c(γ)·p^u(γ), so that c = b̲∘s − b̲∘r.
  ///
  /// Exact when c and p are rational. Throws NotACocycle if c is not a
  /// homomorphism.
  inline Cochain0 solve_coboundary_additive(Cocycle1 const& c, ProbabilityFamily const& p,
                                            Tolerance tol = {}) {
    if (c.flavor != Flavor::additive) {
      throw Error(ErrorCode::mismatch, "additive solver needs an additive cocycle");
    }
    require_cocycle(c, tol);
    auto const& g = *c.groupoid;
    Cochain0    b{c.groupoid, Flavor::additive, std::vector<Scalar>(g.num_units())};
    for (Index a = 0; a < g.num_arrows(); ++a) {
      b.value[g.dst(a)] -= c(a) * p(a);
    }
    Check res = coboundary_residual(c, b, tol);
    if (!res.passed) {
      throw Error(ErrorCode::not_a_cocycle, "coboundary residual too large", res.witness);
    }
    return b;
  }

  /// b = exp(−Σ log Δ·p), so that Δ(γ)·b(rγ) = b(sγ). When Δ ≡ 1 exactly
  /// the result is exactly 1.
  inline Cochain0 decompose_multiplicative(Cocycle1 const& delta, ProbabilityFamily const& p,
                                           Tolerance tol = {}) {
    if (delta.flavor != Flavor::multiplicative) {
      throw Error(ErrorCode::mismatch, "multiplicative solver needs a multiplicative cocycle");
    }
    auto const& g = *delta.groupoid;
    for (Index a = 0; a < g.num_arrows(); ++a) {
      if (!delta(a).is_positive()) {
        throw Error(ErrorCode::non_positive, "cocycle value must be positive",
                    "(" + g.arrow_name(a) + ")");
      }
    }
    require_cocycle(delta, tol);
    Cochain0 b{delta.groupoid, Flavor::multiplicative, {}};
    bool     trivial = std::all_of(delta.value.begin(), delta.value.end(),
                                   [](Scalar const& v) { return v.is_exact() && v.is_one(); });
    if (trivial) {
      b.value.assign(g.num_units(), Scalar(1));
      return b;
    }
    std::vector<double> log_b(g.num_units(), 0.0);
    for (Index a = 0; a < g.num_arrows(); ++a) {
      log_b[g.dst(a)] -= std::log(delta(a).to_double()) * p(a).to_double();
    }
    for (double x : log_b) {
      b.value.push_back(Scalar::inexact(std::exp(x)));
    }
    Check res = coboundary_residual(delta, b, tol);
    if (!res.passed) {
      throw Error(ErrorCode::not_a_cocycle, "coboundary ratio residual too large", res.witness);
    }
    return b;
  }

}  // namespace gcorr

#endif  // GCORR_COHOMOLOGY_HPP
