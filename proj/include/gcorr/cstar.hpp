#ifndef GCORR_CSTAR_HPP
#define GCORR_CSTAR_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "gcorr/composition.hpp"
#include "gcorr/correspondence.hpp"
#include "gcorr/error.hpp"
#include "gcorr/groupoid.hpp"
#include "gcorr/measures.hpp"
#include "gcorr/report.hpp"
#include "gcorr/rng.hpp"

namespace gcorr {

  using Complex = std::complex<double>;

  /// A function on the arrows of a groupoid (an element of C_c(G)).
  struct AlgebraElement {
    GroupoidPtr          groupoid;
    std::vector<Complex> coeff;

    static AlgebraElement zero(GroupoidPtr g) {
      Index n = g->num_arrows();
      return {std::move(g), std::vector<Complex>(n)};
    }
    static AlgebraElement point_mass(GroupoidPtr g, Index a, Complex v = 1.0) {
      AlgebraElement e = zero(std::move(g));
      e.coeff[a]       = v;
      return e;
    }
  };

  /// A function on the points of a space (an element of C_c(X)).
  struct ModuleElement {
    std::vector<Complex> coeff;

    static ModuleElement zero(Index n) {
      return {std::vector<Complex>(n)};
    }
    static ModuleElement point_mass(Index n, Index x, Complex v = 1.0) {
      ModuleElement f = zero(n);
      f.coeff[x]      = v;
      return f;
    }
  };

  inline bool same_groupoid(GroupoidPtr const& a, GroupoidPtr const& b) {
    return a == b || *a == *b;
  }

  /// Haar weights converted to doubles once.
  struct HaarWeights {
    GroupoidPtr         groupoid;
    std::vector<double> w;

    HaarWeights() = default;
    explicit HaarWeights(HaarSystem const& h) : groupoid(h.groupoid) {
      w.reserve(h.weight.size());
      for (auto const& x : h.weight) {
        w.push_back(x.to_double());
      }
    }
  };

  /// The data of a correspondence in double precision, ready for the
  /// convolution formulas.
  struct HilbertModule {
    Correspondence const* corr = nullptr;
    GroupoidPtr           left_groupoid;
    GroupoidPtr           right_groupoid;
    HaarWeights           alpha;
    HaarWeights           beta;
    std::vector<double>   lambda;
    std::vector<double>   sqrt_delta;  // on G⋉X arrows

    HilbertModule() = default;
    explicit HilbertModule(Correspondence const& c)
        : corr(&c),
          left_groupoid(c.left.groupoid),
          right_groupoid(c.right.groupoid),
          alpha(c.left),
          beta(c.right) {
      for (Index x = 0; x < c.num_points(); ++x) {
        lambda.push_back(c.lambda.weight(x).to_double());
      }
      for (auto const& d : c.adjoining.value) {
        sqrt_delta.push_back(std::sqrt(d.to_double()));
      }
    }

    Index num_points() const {
      return lambda.size();
    }
  };

  namespace detail {
    inline void require(bool ok, ErrorCode code, char const* what) {
      if (!ok) {
        throw Error(code, what);
      }
    }
  }  // namespace detail

  /// (φ*ψ)(γ) = Σ_{η∈G^{r(γ)}} φ(η)·ψ(η⁻¹γ)·α(η).
  inline AlgebraElement convolve(AlgebraElement const& phi, AlgebraElement const& psi,
                                 HaarWeights const& alpha) {
    detail::require(same_groupoid(phi.groupoid, psi.groupoid)
                        && same_groupoid(phi.groupoid, alpha.groupoid),
                    ErrorCode::groupoid_mismatch, "convolution over different groupoids");
    auto const&    g   = *phi.groupoid;
    AlgebraElement out = AlgebraElement::zero(phi.groupoid);
    for (Index eta = 0; eta < g.num_arrows(); ++eta) {
      if (phi.coeff[eta] == 0.0) {
        continue;
      }
      Complex c = phi.coeff[eta] * alpha.w[eta];
      for (Index delta : g.range_fibre(g.src(eta))) {
        if (psi.coeff[delta] != 0.0) {
          out.coeff[g.compose(eta, delta)] += c * psi.coeff[delta];
        }
      }
    }
    return out;
  }

  inline AlgebraElement convolve(AlgebraElement const& phi, AlgebraElement const& psi,
                                 HaarSystem const& alpha) {
    return convolve(phi, psi, HaarWeights(alpha));
  }

  /// φ*(γ) = conj(φ(γ⁻¹)).
  inline AlgebraElement involution(AlgebraElement const& phi) {
    auto const&    g   = *phi.groupoid;
    AlgebraElement out = AlgebraElement::zero(phi.groupoid);
    for (Index a = 0; a < g.num_arrows(); ++a) {
      out.coeff[a] = std::conj(phi.coeff[g.inv(a)]);
    }
    return out;
  }

  /// (φ·f)(x) = Σ_{γ∈G^{r(x)}} φ(γ)·f(γ⁻¹x)·Δ^{1/2}(γ,γ⁻¹x)·α(γ).
  inline ModuleElement left_action(AlgebraElement const& phi, ModuleElement const& f,
                                   HilbertModule const& M) {
    detail::require(same_groupoid(phi.groupoid, M.left_groupoid), ErrorCode::mismatch,
                    "algebra element is not over the left groupoid");
    detail::require(f.coeff.size() == M.num_points(), ErrorCode::mismatch,
                    "module element is not over this space");
    auto const&   act = M.corr->space.left;
    auto const&   gx  = M.corr->action_groupoid;
    ModuleElement out = ModuleElement::zero(M.num_points());
    for (Index x = 0; x < f.coeff.size(); ++x) {
      if (f.coeff[x] == 0.0) {
        continue;
      }
      for (Index gamma : act.acting_arrows(x)) {
        if (phi.coeff[gamma] == 0.0) {
          continue;
        }
        out.coeff[act.act(gamma, x)] += phi.coeff[gamma] * f.coeff[x]
                                        * M.sqrt_delta[gx.arrow(gamma, x)] * M.alpha.w[gamma];
      }
    }
    return out;
  }

  /// (f·ψ)(x) = Σ_{η∈H^{s(x)}} f(xη)·ψ(η⁻¹)·β(η).
  inline ModuleElement right_action(ModuleElement const& f, AlgebraElement const& psi,
                                    HilbertModule const& M) {
    detail::require(same_groupoid(psi.groupoid, M.right_groupoid), ErrorCode::mismatch,
                    "algebra element is not over the right groupoid");
    detail::require(f.coeff.size() == M.num_points(), ErrorCode::mismatch,
                    "module element is not over this space");
    auto const&   act = M.corr->space.right;
    auto const&   h   = *M.right_groupoid;
    ModuleElement out = ModuleElement::zero(M.num_points());
    for (Index xp = 0; xp < f.coeff.size(); ++xp) {
      if (f.coeff[xp] == 0.0) {
        continue;
      }
      // x' = xη, so x = x'θ with θ = η⁻¹.
      for (Index theta : act.acting_arrows(xp)) {
        if (psi.coeff[theta] == 0.0) {
          continue;
        }
        out.coeff[act.act(theta, xp)] += f.coeff[xp] * psi.coeff[theta] * M.beta.w[h.inv(theta)];
      }
    }
    return out;
  }

  /// ⟨f,g⟩(η) = Σ_{x∈X_{r(η)}} conj(f(x))·g(xη)·λ(x).
  inline AlgebraElement inner_product(ModuleElement const& f, ModuleElement const& g,
                                      HilbertModule const& M) {
    detail::require(f.coeff.size() == M.num_points() && g.coeff.size() == M.num_points(),
                    ErrorCode::mismatch, "module elements are not over this space");
    auto const&    act = M.corr->space.right;
    AlgebraElement out = AlgebraElement::zero(M.right_groupoid);
    for (Index x = 0; x < f.coeff.size(); ++x) {
      if (f.coeff[x] == 0.0) {
        continue;
      }
      Complex c = std::conj(f.coeff[x]) * M.lambda[x];
      for (Index eta : act.acting_arrows(x)) {
        Complex gv = g.coeff[act.act(eta, x)];
        if (gv != 0.0) {
          out.coeff[eta] += c * gv;
        }
      }
    }
    return out;
  }

  /// ⟨g, ⟨f,f′⟩_X · g′⟩_Y.
  inline AlgebraElement tensor_inner_product(ModuleElement const& f, ModuleElement const& g,
                                             ModuleElement const& fp, ModuleElement const& gp,
                                             HilbertModule const& MX, HilbertModule const& MY) {
    AlgebraElement phi = inner_product(f, fp, MX);
    return inner_product(g, left_action(phi, gp, MY), MY);
  }

  /// Λ′ precomputed from a composition: for each x the pairs (y, z) with
  /// z = (x,y), and the coefficient b(z)^{-1/2}·λ_pi(z).
  struct LambdaPrime {
    std::vector<std::vector<std::pair<Index, Index>>> by_x;
    std::vector<double>                               coef;
    std::vector<Index>                                pi;
    Index                                             num_y = 0;
    Index                                             num_omega = 0;

    LambdaPrime() = default;
    LambdaPrime(CompositionResult const& R, Index num_x, Index num_y_points)
        : by_x(num_x), num_y(num_y_points), num_omega(R.orbits.num_orbits()) {
      for (Index z = 0; z < R.Z.pairs.size(); ++z) {
        auto [x, y] = R.Z.pairs[z];
        by_x[x].emplace_back(y, z);
        coef.push_back(R.lambda_pi.weight(z).to_double() / std::sqrt(R.b(z).to_double()));
        pi.push_back(R.pi(z));
      }
    }
  };

  /// Λ′(f⊗g)(ω) = Σ_{z=(x,y)∈π⁻¹(ω)} f(x)·g(y)·b(z)^{-1/2}·λ_pi(z), which equals
  /// Σ_{γ∈G₂^{s(x₀)}} f(x₀γ)·g(γ⁻¹y₀)·b^{-1/2}(x₀γ,γ⁻¹y₀)·χ₂(γ) at the
  /// representative [x₀,y₀].
  inline ModuleElement lambda_prime(ModuleElement const& f, ModuleElement const& g,
                                    LambdaPrime const& L) {
    detail::require(f.coeff.size() == L.by_x.size() && g.coeff.size() == L.num_y,
                    ErrorCode::mismatch, "tensor factors do not match the composition");
    ModuleElement out = ModuleElement::zero(L.num_omega);
    for (Index x = 0; x < f.coeff.size(); ++x) {
      if (f.coeff[x] == 0.0) {
        continue;
      }
      for (auto [y, z] : L.by_x[x]) {
        if (g.coeff[y] != 0.0) {
          out.coeff[L.pi[z]] += f.coeff[x] * g.coeff[y] * L.coef[z];
        }
      }
    }
    return out;
  }

  inline ModuleElement lambda_prime(ModuleElement const& f, ModuleElement const& g,
                                    CompositionResult const& R) {
    return lambda_prime(f, g, LambdaPrime(R, f.coeff.size(), g.coeff.size()));
  }

  /// Left regular representation on ℓ²(G_u, α∘inv), orthonormalised:
  ///   N[γ,γ′] = α(γ⁻¹)^{1/2}·φ(γγ′⁻¹)·α(γγ′⁻¹)·α(γ′⁻¹)^{-1/2}   for γ,γ′ ∈ G_u.
  inline Eigen::MatrixXcd representation_matrix(AlgebraElement const& phi,
                                                HaarWeights const& alpha, Index u) {
    auto const&      g   = *alpha.groupoid;
    auto             src = g.source_fibre(u);
    Index            n   = src.size();
    Eigen::MatrixXcd N   = Eigen::MatrixXcd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        Index gi = src[i], gj = src[j];
        Index eta = g.compose(gi, g.inv(gj));
        N(i, j)   = std::sqrt(alpha.w[g.inv(gi)]) * phi.coeff[eta] * alpha.w[eta]
                  / std::sqrt(alpha.w[g.inv(gj)]);
      }
    }
    return N;
  }

  /// One matrix per unit.
  inline std::vector<Eigen::MatrixXcd> representation_matrices(AlgebraElement const& phi,
                                                               HaarWeights const& alpha) {
    std::vector<Eigen::MatrixXcd> out;
    for (Index u = 0; u < alpha.groupoid->num_units(); ++u) {
      out.push_back(representation_matrix(phi, alpha, u));
    }
    return out;
  }

  /// Smallest eigenvalue of the (Hermitian part of the) representation of
  /// φ over all units; +inf for an empty groupoid.
  inline double min_eigenvalue(AlgebraElement const& phi, HaarWeights const& alpha) {
    double lo = std::numeric_limits<double>::infinity();
    for (Index u = 0; u < alpha.groupoid->num_units(); ++u) {
      Eigen::MatrixXcd N = representation_matrix(phi, alpha, u);
      if (N.rows() == 0) {
        continue;
      }
      Eigen::MatrixXcd H = (N + N.adjoint()) / 2.0;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
      lo = std::min(lo, es.eigenvalues().minCoeff());
    }
    return lo;
  }

  // ---------------------------------------------------------------------
  // Certification

  struct VerifyOptions {
    Tolerance     tol{1e-12, 1e-9};
    Index         trials  = 200;
    std::uint64_t seed    = 1;
    unsigned      threads = 1;
    Index         positivity_samples = 20;
  };

  struct GramReport {
    Index               basis_pairs  = 0;
    Index               random_pairs = 0;
    double              isometry_basis  = 0.0;
    double              isometry_random = 0.0;
    std::vector<double> isometry_by_arrow;  // G₃ arrow -> max deviation
    double              intertwining      = 0.0;
    double              right_module      = 0.0;
    Index               rank              = 0;
    Index               omega_dim         = 0;
    double              positivity_min    = std::numeric_limits<double>::infinity();
    Report              report;

    bool ok() const {
      return report.ok();
    }
  };

  namespace detail {

    struct Deviation {
      double      max_abs = 0.0;
      bool        passed  = true;
      Index       first   = npos;  // ordering key of the first failure
      std::string witness;

      void merge(Deviation const& o) {
        max_abs = std::max(max_abs, o.max_abs);
        if (!o.passed && (passed || o.first < first)) {
          passed  = false;
          first   = o.first;
          witness = o.witness;
        }
      }
    };

    inline bool close(Complex a, Complex b, Tolerance tol) {
      return std::abs(a - b) <= tol.bound(std::abs(a), std::abs(b));
    }

    inline Complex random_complex(Rng& rng) {
      return {rng.symmetric(), rng.symmetric()};
    }

    inline ModuleElement random_element(Rng& rng, Index n) {
      ModuleElement f = ModuleElement::zero(n);
      for (auto& c : f.coeff) {
        c = random_complex(rng);
      }
      return f;
    }

    inline AlgebraElement random_algebra(Rng& rng, GroupoidPtr g) {
      AlgebraElement f = AlgebraElement::zero(std::move(g));
      for (auto& c : f.coeff) {
        c = random_complex(rng);
      }
      return f;
    }

    template <class Body>
    void parallel_for(Index n, unsigned threads, Body&& body) {
      threads = std::max(1u, threads);
      if (threads == 1 || n < 2) {
        body(Index{0}, n, 0u);
        return;
      }
      std::vector<std::thread> pool;
      Index                    chunk = (n + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        Index lo = std::min(n, t * chunk), hi = std::min(n, lo + chunk);
        pool.emplace_back([&, lo, hi, t] { body(lo, hi, t); });
      }
      for (auto& th : pool) {
        th.join();
      }
    }

  }  // namespace detail

  /// Certifies that Λ′ induces an isomorphism of correspondences:
  /// isometry on the full point-mass basis and on random tensors,
  /// intertwining of the left actions, compatibility with the right
  /// action, surjectivity by rank, and positivity spot checks.
  ///
  /// "Isomorphism" here means: inner products are preserved and the image
  /// spans C(Ω); in finite dimension this makes the induced map on the
  /// balanced tensor product unitary.
  inline GramReport verify_theorem(Correspondence const& X, Correspondence const& Y,
                                   CompositionResult const& R, VerifyOptions const& opt = {}) {
    GramReport    G;
    HilbertModule MX(X), MY(Y), MO(R.composite);
    if (!same_groupoid(MX.right_groupoid, MY.left_groupoid)) {
      throw Error(ErrorCode::groupoid_mismatch, "middle groupoids differ");
    }
    MY.left_groupoid = MX.right_groupoid;
    LambdaPrime L(R, X.num_points(), Y.num_points());
    Index const nx = X.num_points(), ny = Y.num_points(), no = R.orbits.num_orbits();
    auto const& g3 = Y.H();
    Index const a3 = g3.num_arrows();
    G.omega_dim    = no;
    G.isometry_by_arrow.assign(a3, 0.0);
    Tolerance const tol = opt.tol;

    auto pair_name = [&](Index x, Index y) {
      return X.space.point_name(x) + "(x)" + Y.space.point_name(y);
    };

    // Λ′ of every basis tensor.
    std::vector<ModuleElement> image(nx * ny);
    for (Index x = 0; x < nx; ++x) {
      for (Index y = 0; y < ny; ++y) {
        image[x * ny + y] = lambda_prime(ModuleElement::point_mass(nx, x),
                                         ModuleElement::point_mass(ny, y), L);
      }
    }

    // (a) isometry on the point-mass basis. For a = (x,y), the pairs
    // (x′,y′) with x′ ∉ x·G₂ have ⟨δx,δx′⟩ = 0, hence a zero left side, and
    // a zero right side because [x′,y′] ∉ [x,y]·G₃. Those are skipped; all
    // other pairs are compared on every arrow of G₃.
    {
      std::vector<detail::Deviation>   dev(std::max(1u, opt.threads));
      std::vector<std::vector<double>> by_arrow(dev.size(), std::vector<double>(a3, 0.0));
      std::vector<Index>               counted(dev.size(), 0);
      detail::parallel_for(nx * ny, opt.threads, [&](Index lo, Index hi, unsigned t) {
        for (Index a = lo; a < hi; ++a) {
          Index         x = a / ny, y = a % ny;
          ModuleElement fx = ModuleElement::point_mass(nx, x);
          ModuleElement gy = ModuleElement::point_mass(ny, y);
          std::vector<Index> orbit_x;
          for (Index eta : X.space.right.acting_arrows(x)) {
            orbit_x.push_back(X.space.right.act(eta, x));
          }
          std::sort(orbit_x.begin(), orbit_x.end());
          orbit_x.erase(std::unique(orbit_x.begin(), orbit_x.end()), orbit_x.end());
          for (Index xp : orbit_x) {
            AlgebraElement phi = inner_product(fx, ModuleElement::point_mass(nx, xp), MX);
            for (Index yp = 0; yp < ny; ++yp) {
              AlgebraElement lhs =
                  inner_product(gy, left_action(phi, ModuleElement::point_mass(ny, yp), MY), MY);
              AlgebraElement rhs = inner_product(image[a], image[xp * ny + yp], MO);
              ++counted[t];
              for (Index k = 0; k < a3; ++k) {
                double d         = std::abs(lhs.coeff[k] - rhs.coeff[k]);
                by_arrow[t][k]   = std::max(by_arrow[t][k], d);
                dev[t].max_abs   = std::max(dev[t].max_abs, d);
                if (dev[t].passed && !detail::close(lhs.coeff[k], rhs.coeff[k], tol)) {
                  dev[t].passed  = false;
                  dev[t].first   = a;
                  dev[t].witness = "(" + pair_name(x, y) + ", " + pair_name(xp, yp) + ", "
                                   + g3.arrow_name(k) + ")";
                }
              }
            }
          }
        }
      });
      detail::Deviation all;
      for (Index t = 0; t < dev.size(); ++t) {
        all.merge(dev[t]);
        G.basis_pairs += counted[t];
        for (Index k = 0; k < a3; ++k) {
          G.isometry_by_arrow[k] = std::max(G.isometry_by_arrow[k], by_arrow[t][k]);
        }
      }
      G.isometry_basis = all.max_abs;
      G.report.expect(all.passed, "isometry.basis", all.max_abs, all.witness,
                      std::to_string(G.basis_pairs) + " basis pairs, every G3 arrow");
    }

    Rng rng(opt.seed);

    // (a′) isometry on random elementary tensors.
    {
      detail::Deviation dev;
      for (Index t = 0; t < opt.trials; ++t) {
        ModuleElement  f  = detail::random_element(rng, nx);
        ModuleElement  g  = detail::random_element(rng, ny);
        ModuleElement  fp = detail::random_element(rng, nx);
        ModuleElement  gp = detail::random_element(rng, ny);
        AlgebraElement lhs = tensor_inner_product(f, g, fp, gp, MX, MY);
        AlgebraElement rhs = inner_product(lambda_prime(f, g, L), lambda_prime(fp, gp, L), MO);
        for (Index k = 0; k < a3; ++k) {
          double d    = std::abs(lhs.coeff[k] - rhs.coeff[k]);
          dev.max_abs = std::max(dev.max_abs, d);
          if (dev.passed && !detail::close(lhs.coeff[k], rhs.coeff[k], tol)) {
            dev.passed  = false;
            dev.witness = "(trial " + std::to_string(t) + ", " + g3.arrow_name(k) + ")";
          }
        }
        ++G.random_pairs;
      }
      G.isometry_random = dev.max_abs;
      G.report.expect(dev.passed, "isometry.random", dev.max_abs, dev.witness,
                      std::to_string(opt.trials) + " random tensor pairs");
    }

    // (b) intertwining: Λ′((φ·f)⊗g) = φ·Λ′(f⊗g) for every basis φ over G₁,
    // on all composable basis tensors and on random tensors.
    {
      auto const&       g1 = X.G();
      detail::Deviation dev;
      auto compare = [&](ModuleElement const& a, ModuleElement const& b, auto&& witness) {
        for (Index w = 0; w < no; ++w) {
          double d    = std::abs(a.coeff[w] - b.coeff[w]);
          dev.max_abs = std::max(dev.max_abs, d);
          if (dev.passed && !detail::close(a.coeff[w], b.coeff[w], tol)) {
            dev.passed  = false;
            dev.witness = witness() + " at " + R.omega.point_name(w);
          }
        }
      };
      for (Index eta = 0; eta < g1.num_arrows(); ++eta) {
        AlgebraElement phi = AlgebraElement::point_mass(MX.left_groupoid, eta);
        for (Index z = 0; z < R.Z.pairs.size(); ++z) {
          auto [x, y] = R.Z.pairs[z];
          if (X.space.r(x) != g1.src(eta)) {
            continue;  // φ·δx = 0 and φ vanishes on the Ω fibre as well
          }
          ModuleElement fx  = ModuleElement::point_mass(nx, x);
          ModuleElement gy  = ModuleElement::point_mass(ny, y);
          ModuleElement lhs = lambda_prime(left_action(phi, fx, MX), gy, L);
          ModuleElement rhs = left_action(phi, image[x * ny + y], MO);
          compare(lhs, rhs, [&] { return "(" + g1.arrow_name(eta) + ", " + pair_name(x, y) + ")"; });
        }
      }
      Index random_cases = std::min<Index>(opt.trials, 50);
      for (Index t = 0; t < random_cases && g1.num_arrows() > 0; ++t) {
        AlgebraElement phi = detail::random_algebra(rng, MX.left_groupoid);
        ModuleElement  f   = detail::random_element(rng, nx);
        ModuleElement  g   = detail::random_element(rng, ny);
        compare(lambda_prime(left_action(phi, f, MX), g, L),
                left_action(phi, lambda_prime(f, g, L), MO),
                [&] { return "(random trial " + std::to_string(t) + ")"; });
      }
      G.intertwining = dev.max_abs;
      G.report.expect(dev.passed, "intertwining", dev.max_abs, dev.witness,
                      "every basis element of C_c(G1), plus random elements");
    }

    // Right module map: Λ′(f⊗(g·ψ)) = Λ′(f⊗g)·ψ.
    {
      detail::Deviation dev;
      Index             cases = std::min<Index>(opt.trials, 50);
      for (Index t = 0; t < cases && a3 > 0; ++t) {
        AlgebraElement psi = detail::random_algebra(rng, MY.right_groupoid);
        ModuleElement  f   = detail::random_element(rng, nx);
        ModuleElement  g   = detail::random_element(rng, ny);
        ModuleElement  a   = lambda_prime(f, right_action(g, psi, MY), L);
        ModuleElement  b   = right_action(lambda_prime(f, g, L), psi, MO);
        for (Index w = 0; w < no; ++w) {
          double d    = std::abs(a.coeff[w] - b.coeff[w]);
          dev.max_abs = std::max(dev.max_abs, d);
          if (dev.passed && !detail::close(a.coeff[w], b.coeff[w], tol)) {
            dev.passed  = false;
            dev.witness = "(trial " + std::to_string(t) + ", " + R.omega.point_name(w) + ")";
          }
        }
      }
      G.right_module = dev.max_abs;
      G.report.expect(dev.passed, "right_module_map", dev.max_abs, dev.witness);
    }

    // (c) surjectivity: rank of the Λ′ image = dim C(Ω), via the Gram
    // matrix P P* of the image vectors.
    {
      Eigen::MatrixXcd P(no, nx * ny);
      for (Index a = 0; a < image.size(); ++a) {
        for (Index w = 0; w < no; ++w) {
          P(w, a) = image[a].coeff[w];
        }
      }
      if (no > 0) {
        Eigen::MatrixXcd gram = P * P.adjoint();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
        double top = es.eigenvalues().maxCoeff();
        for (Index i = 0; i < no; ++i) {
          if (es.eigenvalues()(i) > 1e-10 * std::max(1.0, top)) {
            ++G.rank;
          }
        }
      }
      G.report.expect(G.rank == no, "surjectivity", static_cast<double>(no - G.rank),
                      "(rank " + std::to_string(G.rank) + " of " + std::to_string(no) + ")",
                      "rank " + std::to_string(G.rank) + " = dim C(Omega) " + std::to_string(no));
    }

    // Positivity of ⟨f,f⟩ in the regular representation of G₃.
    {
      for (Index t = 0; t < opt.positivity_samples && no > 0; ++t) {
        ModuleElement  f  = detail::random_element(rng, no);
        AlgebraElement ff = inner_product(f, f, MO);
        G.positivity_min  = std::min(G.positivity_min, min_eigenvalue(ff, MO.beta));
      }
      bool ok = !(G.positivity_min < -1e-10);
      G.report.expect(ok, "positivity", G.positivity_min < 0 ? -G.positivity_min : 0.0,
                      "(min eigenvalue " + std::to_string(G.positivity_min) + ")",
                      "min eigenvalue of <f,f> over all units of G3");
    }
    G.report.note("isomorphism certified as: inner products preserved on the full basis and "
                  "random tensors, and the image of Lambda' spans C(Omega)");
    return G;
  }

}  // namespace gcorr

#endif  // GCORR_CSTAR_HPP
