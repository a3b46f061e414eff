#ifndef CDKN_SPECTRAL_HPP
#define CDKN_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "cdkn/coeffs.hpp"
#include "cdkn/density.hpp"
#include "cdkn/ptrig.hpp"

// Sharp p-spectral gap lambda^{1,p}_{K,N,D}: shooting solver for the model
// ODE, Rayleigh-quotient oracle on grid densities, closed forms, the
// Li-Wang lower bound, and the almost-rigidity gap probe.

namespace cdkn::spectral {

using coeffs::kInf;
using density::GridDensity;

struct EigenResult {
  double lambda = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  double phi_end_error = 0.0;  // |phi(D/2) - pi_p/2| at the returned lambda
  double grid_step = 0.0;
  bool at_pole = false;  // K > 0 with D at the Bonnet-Myers bound
};

namespace detail {

// Shared sin_p samplers keyed by p; the shooting RHS is evaluated millions
// of times per bisection.
inline const ptrig::SinPSampler& sampler_for(double p) {
  static std::mutex mu;
  static std::map<double, std::unique_ptr<ptrig::SinPSampler>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(p);
  if (it == cache.end())
    it = cache.emplace(p, std::make_unique<ptrig::SinPSampler>(p)).first;
  return *it->second;
}

}  // namespace detail

inline double bonnet_myers_diameter(double K, double N) {
  if (!(K > 0.0) || !(N > 1.0)) return kInf;
  return std::numbers::pi * std::sqrt((N - 1.0) / K);
}

// Integrates the Pruefer phase
//   phi' = (lambda/(p-1))^{1/p}
//        + (q(t)/(p-1)) cos_p^{(p-1)}(phi) sin_p(phi)
// from phi(0) = 0 to t = D/2 with classical RK4; returns phi(D/2).
// q(t) is the log-derivative of the symmetric model weight on [-D/2, D/2]:
//   q = -(N-1) tan_kn for K > 0 (cos^{N-1} weight),
//   q = +(N-1) tan_kn for K < 0 (cosh^{N-1} weight).
// Both signs are pinned by an independent finite-element eigenvalue
// computation on the sampled model weight.
// If D sits at the Bonnet-Myers bound the integration stops a hair short of
// the tangent pole (one-sided limit).
inline double shoot_phi(double p, double K, double N, double D, double lambda,
                        double step) {
  if (!(p > 1.0)) throw std::domain_error("shoot_phi: p <= 1");
  if (!(lambda > 0.0)) throw std::domain_error("shoot_phi: lambda <= 0");
  if (!(N > 1.0)) throw std::domain_error("shoot_phi: N <= 1");
  if (!(D > 0.0)) throw std::domain_error("shoot_phi: D <= 0");
  const double drift = std::pow(lambda / (p - 1.0), 1.0 / p);
  double t_end = 0.5 * D;
  if (K > 0.0) {
    const double pole = 0.5 * std::numbers::pi * std::sqrt((N - 1.0) / K);
    if (t_end > pole)
      throw std::domain_error("shoot_phi: D beyond the Bonnet-Myers bound");
    if (t_end > pole - 1e-8) t_end = pole - 1e-8;
  }
  if (K == 0.0) return drift * t_end;  // tan_{0,N} == 0: phi is linear

  const auto& sp = detail::sampler_for(p);
  const double coef = (K > 0.0 ? -1.0 : 1.0) * (N - 1.0) / (p - 1.0);
  auto rhs = [&](double t, double phi) {
    const double c = sp.cos(phi);
    const double cpm1 = ptrig::signed_pow(c, p - 1.0);
    return drift + coef * coeffs::tan_kn(K, N, t) * cpm1 * sp.sin(phi);
  };
  const std::size_t n = std::max<std::size_t>(
      8, static_cast<std::size_t>(std::ceil(t_end / step)));
  const double h = t_end / static_cast<double>(n);
  double phi = 0.0;
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k1 = rhs(t, phi);
    const double k2 = rhs(t + 0.5 * h, phi + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, phi + 0.5 * h * k2);
    const double k4 = rhs(t + h, phi + h * k3);
    phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return phi;
}

// Closed forms: (p-1)(pi_p/D)^p for K = 0; KN/(N-1) for p = 2 at the
// Bonnet-Myers diameter. nullopt otherwise.
inline std::optional<double> lambda_closed_form(double p, double K, double N,
                                                double D) {
  if (!(p > 1.0) || !(D > 0.0)) return std::nullopt;
  if (K == 0.0)
    return (p - 1.0) * std::pow(ptrig::pi_p(p) / D, p);
  if (p == 2.0 && K > 0.0 && N > 1.0 &&
      std::abs(D - bonnet_myers_diameter(K, N)) <= 1e-12)
    return K * N / (N - 1.0);
  return std::nullopt;
}

// Li-Wang lower bound (1/(p-1)^{p-1}) (NK/(N-1))^{p/2} for K > 0, p >= 2.
inline double li_wang_bound(double p, double K, double N) {
  if (!(p >= 2.0)) throw std::domain_error("li_wang_bound: p < 2");
  if (!(K > 0.0)) throw std::domain_error("li_wang_bound: K <= 0");
  if (!(N > 1.0)) throw std::domain_error("li_wang_bound: N <= 1");
  return std::pow(N * K / (N - 1.0), 0.5 * p) / std::pow(p - 1.0, p - 1.0);
}

// First eigenvalue of the model ODE on [-D/2, D/2] by bisection on the
// shooting residual phi(D/2) - pi_p/2. For N = 1 (constant-density fiber)
// the closed form (p-1)(pi_p/D)^p is returned directly.
inline EigenResult lambda_model(double p, double K, double N, double D,
                                double tol = 1e-10) {
  if (!(tol > 0.0)) throw std::domain_error("lambda_model: tol <= 0");
  if (!(p > 1.0)) throw std::domain_error("lambda_model: p <= 1");
  if (!(D > 0.0)) throw std::domain_error("lambda_model: D <= 0");
  EigenResult res;
  res.grid_step = D / 20000.0;
  const double flat = (p - 1.0) * std::pow(ptrig::pi_p(p) / D, p);
  if (N <= 1.0 || K == 0.0) {
    // tan_{K,1} == 0 treatment and the exact K = 0 case
    res.lambda = flat;
    res.bracket_lo = res.bracket_hi = flat;
    return res;
  }
  if (K > 0.0) {
    const double dmax = bonnet_myers_diameter(K, N);
    if (D > dmax + 1e-12)
      throw std::domain_error("lambda_model: D beyond the Bonnet-Myers bound");
    res.at_pole = D >= dmax - 1e-8;
    if (res.at_pole && p == 2.0) {
      // at the pole the residual degenerates (the tangent singularity pins
      // phi(D/2) at pi_p/2 for a whole interval of lambda); the endpoint
      // value is the closed form
      res.lambda = K * N / (N - 1.0);
      res.bracket_lo = res.bracket_hi = res.lambda;
      return res;
    }
  }
  const double target = 0.5 * ptrig::pi_p(p);
  auto residual = [&](double lam) {
    return shoot_phi(p, K, N, D, lam, res.grid_step) - target;
  };
  // K = 0 value anchors the bracket; expand geometrically if needed.
  double lo = flat / 4.0;
  double hi = 4.0 * flat;
  if (p >= 2.0 && K > 0.0) hi = std::max(hi, 4.0 * li_wang_bound(p, K, N));
  int expand = 0;
  while (residual(lo) > 0.0 && expand++ < 60) lo *= 0.5;
  expand = 0;
  while (residual(hi) < 0.0 && expand++ < 60) hi *= 2.0;
  if (residual(lo) > 0.0 || residual(hi) < 0.0)
    throw std::runtime_error("lambda_model: bracket expansion failed");
  int iters = 0;
  while (hi - lo > tol && iters < 200) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    ++iters;
  }
  res.lambda = 0.5 * (lo + hi);
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  res.iterations = iters;
  res.phi_end_error = std::abs(residual(res.lambda));
  return res;
}

namespace detail {

// Trapezoid weights of the grid.
inline std::vector<double> trapezoid_weights(const GridDensity& h) {
  std::vector<double> w(h.size(), h.step);
  w.front() = 0.5 * h.step;
  w.back() = 0.5 * h.step;
  return w;
}

// Shift c with int (u-c)|u-c|^{p-2} h = 0, found by bisection on the
// strictly monotone map c -> -int (u-c)|u-c|^{p-2} h.
inline double p_mean_shift(const std::vector<double>& u,
                           const std::vector<double>& wh, double p) {
  auto g = [&](double c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      acc += wh[i] * ptrig::signed_pow(u[i] - c, p - 1.0);
    return -acc;
  };
  double lo = *std::min_element(u.begin(), u.end());
  double hi = *std::max_element(u.begin(), u.end());
  if (lo == hi) return lo;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Discrete p-Rayleigh quotient with the p-mean constraint enforced by shift.
inline double p_quotient(const GridDensity& h, const std::vector<double>& wh,
                         const std::vector<double>& u, double p) {
  const double c = p_mean_shift(u, wh, p);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double slope = (u[i + 1] - u[i]) / h.step;
    const double hcell = 0.5 * (h.values[i] + h.values[i + 1]) * h.step;
    num += std::pow(std::abs(slope), p) * hcell;
  }
  for (std::size_t i = 0; i < u.size(); ++i)
    den += wh[i] * std::pow(std::abs(u[i] - c), p);
  if (den <= 0.0) return kInf;
  return num / den;
}

// Smallest nonzero eigenvalue of the weighted P1 stiffness/lumped-mass
// pencil via inverse iteration with constant-mode deflation.
inline std::pair<double, std::vector<double>> neumann_eig2(
    const GridDensity& h) {
  const std::size_t n = h.size();
  std::vector<double> wh = trapezoid_weights(h);
  for (std::size_t i = 0; i < n; ++i) wh[i] *= h.values[i];
  const double wtot = [&] {
    double s = 0.0;
    for (double w : wh) s += w;
    return s;
  }();
  // stiffness tridiagonal: A = sum over cells of h_cell/step^2 * (e_i-e_j)^2
  std::vector<double> diag(n, 0.0), off(n - 1, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double k =
        0.5 * (h.values[i] + h.values[i + 1]) / h.step;  // hcell/step^2*step
    diag[i] += k;
    diag[i + 1] += k;
    off[i] -= k;
  }
  // shift to make the factorization nonsingular on the constant mode
  double scale = 0.0;
  for (double d : diag) scale = std::max(scale, d);
  const double sigma = 1e-10 * std::max(scale, 1.0);
  std::vector<double> a(n), b(n - 1);
  for (std::size_t i = 0; i < n; ++i) a[i] = diag[i] + sigma * wh[i];
  b.assign(off.begin(), off.end());

  auto thomas_solve = [&](std::vector<double> rhs) {
    std::vector<double> cp(n - 1), dp(n);
    cp[0] = b[0] / a[0];
    dp[0] = rhs[0] / a[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double m = a[i] - b[i - 1] * cp[i - 1] * 1.0;
      if (i < n - 1) cp[i] = b[i] / (a[i] - b[i - 1] * cp[i - 1]);
      dp[i] = (rhs[i] - b[i - 1] * dp[i - 1]) / (a[i] - b[i - 1] * cp[i - 1]);
      (void)m;
    }
    std::vector<double> x(n);
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
  };

  auto deflate = [&](std::vector<double>& u) {
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) num += wh[i] * u[i];
    const double c = num / wtot;
    for (double& v : u) v -= c;
  };

  // deterministic start: odd profile about the weighted center
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i)
    u[i] = static_cast<double>(i) / (n - 1) - 0.5;
  deflate(u);
  double lambda = 0.0;
  for (int it = 0; it < 60; ++it) {
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = wh[i] * u[i];
    u = thomas_solve(std::move(rhs));
    deflate(u);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += wh[i] * u[i] * u[i];
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) break;
    for (double& v : u) v /= norm;
    // Rayleigh quotient of the pencil
    double num = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double k = 0.5 * (h.values[i] + h.values[i + 1]) / h.step;
      const double d = u[i + 1] - u[i];
      num += k * d * d;
    }
    const double next = num;  // denominator is 1 after normalization
    if (it > 4 && std::abs(next - lambda) < 1e-13 * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return {lambda, u};
}

}  // namespace detail

// First nontrivial p-Rayleigh quotient of a grid density. p = 2 uses the
// tridiagonal fast path; p != 2 runs projected gradient descent from the
// p = 2 eigenvector with multi-start. The returned value is an upper bound
// on the continuum eigenvalue by construction.
inline double rayleigh_p(const GridDensity& h, double p, double tol = 1e-10,
                         unsigned seed = 0) {
  if (!(p > 1.0)) throw std::domain_error("rayleigh_p: p <= 1");
  if (!(h.mass() > 0.0)) throw std::domain_error("rayleigh_p: zero mass");
  (void)tol;
  auto [lam2, v2] = detail::neumann_eig2(h);
  if (p == 2.0) return lam2;

  std::vector<double> wh = detail::trapezoid_weights(h);
  for (std::size_t i = 0; i < wh.size(); ++i) wh[i] *= h.values[i];
  const std::size_t n = h.size();

  auto descend = [&](std::vector<double> u) {
    double q = detail::p_quotient(h, wh, u, p);
    double eta = 0.5;
    for (int it = 0; it < 400; ++it) {
      const double c = detail::p_mean_shift(u, wh, p);
      // gradient of log(num) - log(den) wrt nodal values
      double num = 0.0, den = 0.0;
      std::vector<double> gnum(n, 0.0), gden(n, 0.0);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double slope = (u[i + 1] - u[i]) / h.step;
        const double hcell = 0.5 * (h.values[i] + h.values[i + 1]) * h.step;
        num += std::pow(std::abs(slope), p) * hcell;
        const double g =
            p * ptrig::signed_pow(slope, p - 1.0) * hcell / h.step;
        gnum[i] -= g;
        gnum[i + 1] += g;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double v = u[i] - c;
        den += wh[i] * std::pow(std::abs(v), p);
        gden[i] = p * wh[i] * ptrig::signed_pow(v, p - 1.0);
      }
      if (!(den > 0.0) || !(num > 0.0)) break;
      double gnorm = 0.0;
      std::vector<double> grad(n);
      for (std::size_t i = 0; i < n; ++i) {
        grad[i] = gnum[i] / num - gden[i] / den;
        gnorm = std::max(gnorm, std::abs(grad[i]));
      }
      if (gnorm < 1e-12) break;
      bool improved = false;
      for (int ls = 0; ls < 25; ++ls) {
        std::vector<double> trial(n);
        for (std::size_t i = 0; i < n; ++i)
          trial[i] = u[i] - eta * grad[i] / gnorm;
        const double qt = detail::p_quotient(h, wh, trial, p);
        if (qt < q) {
          u = std::move(trial);
          q = qt;
          eta *= 1.3;
          improved = true;
          break;
        }
        eta *= 0.5;
      }
      if (!improved) break;
    }
    return q;
  };

  double best = kInf;
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double pip = ptrig::pi_p(p);
  const double len = h.support_length();
  for (int start = 0; start < 6; ++start) {
    std::vector<double> u = v2;
    if (start == 1)
      for (double& v : u) v = -v;
    else if (start == 2) {
      // sin_p centered on the support: the exact Neumann minimizer on a
      // flat density (slope cos_p vanishes at both ends), a strong seed
      // elsewhere
      const auto& sp = detail::sampler_for(p);
      for (std::size_t i = 0; i < n; ++i)
        u[i] = sp.sin(pip * ((h.node(i) - h.origin) / len - 0.5));
    } else if (start >= 3) {
      for (std::size_t i = 0; i < n; ++i) u[i] = gauss(rng);
      // smooth the noise a little so gradients are meaningful
      for (int pass = 0; pass < 8; ++pass)
        for (std::size_t i = 1; i + 1 < n; ++i)
          u[i] = 0.25 * u[i - 1] + 0.5 * u[i] + 0.25 * u[i + 1];
    }
    best = std::min(best, descend(std::move(u)));
  }
  return best;
}

// Numeric almost-rigidity gap
//   eta(eps) = min_{delta, D <= pi - eps} lambda(p, N-1-delta, N+delta, D)
//              - lambda(p, N-1, N, pi).
// Positive return certifies the mechanism at the sampled resolution.
inline double rigidity_gap(double p, double N, double eps,
                           const std::vector<double>& delta_grid,
                           int d_samples = 8, double d_min = 0.5) {
  if (!(eps > 0.0 && eps < std::numbers::pi))
    throw std::domain_error("rigidity_gap: eps out of (0, pi)");
  const double reference =
      lambda_model(p, N - 1.0, N, std::numbers::pi, 1e-9).lambda;
  double worst = kInf;
  const double d_max = std::numbers::pi - eps;
  for (double delta : delta_grid) {
    for (int i = 0; i < d_samples; ++i) {
      const double D =
          d_min + (d_max - d_min) * static_cast<double>(i) / (d_samples - 1);
      const double lam =
          lambda_model(p, N - 1.0 - delta, N + delta, D, 1e-9).lambda;
      worst = std::min(worst, lam - reference);
    }
  }
  return worst;
}

}  // namespace cdkn::spectral

#endif  // CDKN_SPECTRAL_HPP
