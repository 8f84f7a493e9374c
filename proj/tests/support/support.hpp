#ifndef GCORR_TEST_SUPPORT_HPP
#define GCORR_TEST_SUPPORT_HPP

#include <complex>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gcorr/gcorr.hpp"

namespace gcorr::test {

  inline Tolerance const tight{1e-12, 1e-9};

  inline bool close(Scalar const& a, Scalar const& b, Tolerance tol = tight) {
    if (a.is_exact() && b.is_exact()) {
      return a == b;
    }
    return within(a, b, tol);
  }

  /// Searches for a bijection φ: A → B of correspondences between the same
  /// groupoids that preserves both momenta, both actions, λ and Δ. Returns
  /// φ as a point map, or nothing. Plain backtracking with momentum and
  /// weight pruning; meant for a dozen points.
  inline std::optional<std::vector<Index>> find_isomorphism(Correspondence const& A,
                                                            Correspondence const& B) {
    if (!(A.left == B.left) || !(A.right == B.right)) {
      return std::nullopt;
    }
    Index n = A.num_points();
    if (n != B.num_points()) {
      return std::nullopt;
    }
    auto const& al = A.space.left;
    auto const& ar = A.space.right;
    auto const& bl = B.space.left;
    auto const& br = B.space.right;

    std::vector<Index> phi(n, npos);
    std::vector<bool>  used(n, false);

    // A partial map is consistent when every action edge between assigned
    // points is carried to an action edge, and Δ agrees on it.
    auto consistent = [&](Index x) {
      for (Index a : al.acting_arrows(x)) {
        Index ax = al.act(a, x);
        if (phi[ax] != npos && bl.act(a, phi[x]) != phi[ax]) {
          return false;
        }
        if (!close(A.delta(a, x), B.delta(a, phi[x]))) {
          return false;
        }
      }
      for (Index x2 = 0; x2 < n; ++x2) {
        if (phi[x2] == npos || x2 == x) {
          continue;
        }
        for (Index a : al.acting_arrows(x2)) {
          if (al.act(a, x2) == x && bl.act(a, phi[x2]) != phi[x]) {
            return false;
          }
        }
        for (Index b : ar.acting_arrows(x2)) {
          if (ar.act(b, x2) == x && br.act(b, phi[x2]) != phi[x]) {
            return false;
          }
        }
      }
      for (Index b : ar.acting_arrows(x)) {
        Index xb = ar.act(b, x);
        if (phi[xb] != npos && br.act(b, phi[x]) != phi[xb]) {
          return false;
        }
      }
      return true;
    };

    auto search = [&](auto&& self, Index x) -> bool {
      if (x == n) {
        return true;
      }
      for (Index y = 0; y < n; ++y) {
        if (used[y] || al.momentum(x) != bl.momentum(y) || ar.momentum(x) != br.momentum(y)
            || !close(A.lambda.weight(x), B.lambda.weight(y))) {
          continue;
        }
        phi[x]  = y;
        used[y] = true;
        if (consistent(x) && self(self, x + 1)) {
          return true;
        }
        phi[x]  = npos;
        used[y] = false;
      }
      return false;
    };
    if (!search(search, 0)) {
      return std::nullopt;
    }
    return phi;
  }

  // -------------------------------------------------------------------
  // Oracles, written straight from the defining sums and independent of
  // the library's loop order.

  /// Pair-groupoid element as an n×n matrix, M[dst][src].
  inline std::vector<std::vector<Complex>> as_matrix(AlgebraElement const& phi) {
    auto const&                       g = *phi.groupoid;
    Index                             n = g.num_units();
    std::vector<std::vector<Complex>> M(n, std::vector<Complex>(n));
    for (Index a = 0; a < g.num_arrows(); ++a) {
      M[g.dst(a)][g.src(a)] = phi.coeff[a];
    }
    return M;
  }

  inline std::vector<std::vector<Complex>> matmul(std::vector<std::vector<Complex>> const& A,
                                                  std::vector<std::vector<Complex>> const& B) {
    Index                             n = A.size();
    std::vector<std::vector<Complex>> C(n, std::vector<Complex>(n));
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
          C[i][j] += A[i][k] * B[k][j];
        }
      }
    }
    return C;
  }

  /// Λ′(f⊗g)([x₀,y₀]) = Σ_{γ∈G₂^{s(x₀)}} f(x₀γ)·g(γ⁻¹y₀)·b(x₀γ,γ⁻¹y₀)^{-1/2}·χ₂(γ).
  inline std::vector<Complex> lambda_prime_oracle(ModuleElement const& f, ModuleElement const& g,
                                                  Correspondence const& X,
                                                  Correspondence const& Y,
                                                  CompositionResult const& R) {
    auto const&          g2 = X.H();
    std::vector<Complex> out(R.orbits.num_orbits());
    for (Index k = 0; k < R.orbits.num_orbits(); ++k) {
      auto [x0, y0] = R.Z.pairs[R.orbits.representative[k]];
      for (Index gamma : g2.range_fibre(X.space.s(x0))) {
        Index  x = X.space.right.act(gamma, x0);
        Index  y = Y.space.left.act(g2.inv(gamma), y0);
        Index  z = R.Z.find(x, y);
        double w = Y.left(gamma).to_double() / std::sqrt(R.b(z).to_double());
        out[k] += f.coeff[x] * g.coeff[y] * w;
      }
    }
    return out;
  }

  /// ⟨f⊗g, f′⊗g′⟩(η) as an explicit triple sum over y ∈ Y, γ ∈ G₂ and x ∈ X.
  inline std::vector<Complex> tensor_inner_oracle(ModuleElement const& f, ModuleElement const& g,
                                                  ModuleElement const& fp,
                                                  ModuleElement const& gp,
                                                  Correspondence const& X,
                                                  Correspondence const& Y) {
    auto const&          g2 = X.H();
    auto const&          g3 = Y.H();
    std::vector<Complex> out(g3.num_arrows());
    for (Index eta = 0; eta < g3.num_arrows(); ++eta) {
      for (Index y = 0; y < Y.num_points(); ++y) {
        if (Y.space.s(y) != g3.dst(eta)) {
          continue;
        }
        Index yeta = Y.space.right.act(eta, y);
        for (Index gamma = 0; gamma < g2.num_arrows(); ++gamma) {
          if (g2.dst(gamma) != Y.space.r(yeta)) {
            continue;
          }
          Index   yy   = Y.space.left.act(g2.inv(gamma), yeta);
          double  root = std::sqrt(Y.delta(gamma, yy).to_double());
          Complex inner;
          for (Index x = 0; x < X.num_points(); ++x) {
            if (X.space.s(x) != g2.dst(gamma)) {
              continue;
            }
            inner += std::conj(f.coeff[x]) * fp.coeff[X.space.right.act(gamma, x)]
                     * X.lambda.weight(x).to_double();
          }
          out[eta] += std::conj(g.coeff[y]) * Y.lambda.weight(y).to_double() * inner
                      * gp.coeff[yy] * root * Y.left(gamma).to_double();
        }
      }
    }
    return out;
  }

  inline ModuleElement random_vector(Rng& rng, Index n) {
    ModuleElement f = ModuleElement::zero(n);
    for (auto& c : f.coeff) {
      c = Complex(rng.symmetric(), rng.symmetric());
    }
    return f;
  }

  inline double max_diff(std::vector<Complex> const& a, std::vector<Complex> const& b) {
    double d = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
      d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
  }

}  // namespace gcorr::test

#endif  // GCORR_TEST_SUPPORT_HPP
