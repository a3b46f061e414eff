#ifndef CDKN_DENSITY_HPP
#define CDKN_DENSITY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdkn/coeffs.hpp"
#include "cdkn/detail/quad.hpp"

// One-dimensional CD(K,N) densities on a uniform grid: validation against
// the sigma-concavity inequality, mollification, and the model profiles.

namespace cdkn::density {

using coeffs::CdParams;
using coeffs::kInf;

// Non-negative density sampled at uniform nodes origin + i*step.
struct GridDensity {
  double origin = 0.0;
  double step = 0.0;
  std::vector<double> values;

  GridDensity() = default;
  GridDensity(double origin_, double step_, std::vector<double> values_)
      : origin(origin_), step(step_), values(std::move(values_)) {
    if (!(step > 0.0)) throw std::domain_error("GridDensity: step <= 0");
    if (values.size() < 4)
      throw std::domain_error("GridDensity: fewer than 4 nodes");
    for (double v : values)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::domain_error("GridDensity: negative or non-finite value");
  }

  std::size_t size() const { return values.size(); }
  double end() const { return origin + step * (values.size() - 1); }
  double support_length() const { return step * (values.size() - 1); }
  double node(std::size_t i) const { return origin + step * i; }

  // Piecewise-linear evaluation; zero outside [origin, end].
  double at(double t) const {
    if (t < origin || t > end()) return 0.0;
    const double x = (t - origin) / step;
    const std::size_t i =
        std::min(static_cast<std::size_t>(x), values.size() - 2);
    const double w = x - static_cast<double>(i);
    return values[i] * (1.0 - w) + values[i + 1] * w;
  }

  // Trapezoid integral of the sampled values.
  double mass() const {
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
    return s * step;
  }
};

struct CdValidationReport {
  bool valid = false;
  double worst_violation = 0.0;  // positive means a violated check
  // Witness triple (t0, t1, s) of the worst weak-inequality check, if any.
  std::optional<std::array<double, 3>> witness;
  long checks_run = 0;
};

// Weak sigma-concavity check of h^{1/(N-1)} over pair/s samples plus a
// finite-difference check of the differential inequality at interior nodes.
// For N = 1 the density must be constant on its support.
inline CdValidationReport validate_cd(const GridDensity& h, double K, double N,
                                      double tol = 1e-6) {
  if (!(tol > 0.0)) throw std::domain_error("validate_cd: tol <= 0");
  if (!(N >= 1.0)) throw std::domain_error("validate_cd: N < 1");
  CdValidationReport rep;
  const std::size_t n = h.size();

  if (N < 1.0 + 1e-6) {
    // CD(K,1): constant on the support {h > 0}.
    double hmax = 0.0, hmin = kInf;
    for (double v : h.values) hmax = std::max(hmax, v);
    for (double v : h.values)
      if (v > 1e-14 * hmax) hmin = std::min(hmin, v);
    const double dev = hmax > 0.0 ? (hmax - hmin) / hmax : 0.0;
    rep.worst_violation = dev - tol;
    rep.valid = dev <= tol;
    rep.checks_run = static_cast<long>(n);
    return rep;
  }

  const double ex = 1.0 / (N - 1.0);
  std::vector<double> g(n);
  double gmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::pow(h.values[i], ex);
    gmax = std::max(gmax, g[i]);
  }
  if (gmax == 0.0) {
    rep.valid = true;
    return rep;
  }
  const double scale = gmax;
  double worst = -kInf;

  // Weak inequality over index pairs differing by powers of two, with
  // s chosen so the intermediate point is itself a grid node. That keeps
  // the sigma-equality of the model profiles an exact identity instead of
  // an interpolation artifact. gap = 1 pairs are covered by the
  // finite-difference check below.
  //
  // Nodal samples certify sigma-concavity only up to the interpolation
  // error of the grid, which scales like step^2 times the curvature of
  // the inequality, so the pair tolerance carries the same step^2 floor
  // as the finite-difference check.
  const double pair_tol =
      std::max(tol, h.step * h.step * (1.0 + std::abs(K) / (N - 1.0)));
  static constexpr double kS[3] = {0.25, 0.5, 0.75};
  for (std::size_t gap = 2; gap < n; gap *= 2) {
    for (std::size_t i = 0; i + gap < n; ++i) {
      const std::size_t j = i + gap;
      const double t0 = h.node(i), t1 = h.node(j);
      const double theta = t1 - t0;
      for (double s : kS) {
        const std::size_t off = static_cast<std::size_t>(s * gap + 0.5);
        if (off == 0 || off == gap ||
            std::abs(s * gap - static_cast<double>(off)) > 1e-9)
          continue;
        const double lhs = g[i + off];
        const double s0 = coeffs::sigma(K, N - 1.0, 1.0 - s, theta);
        const double s1 = coeffs::sigma(K, N - 1.0, s, theta);
        double rhs;
        if (s0 == kInf || s1 == kInf) {
          // infinity * 0 convention: vacuous only if the endpoint mass is 0.
          const bool vac0 = (s0 != kInf) || g[i] <= 1e-14 * scale;
          const bool vac1 = (s1 != kInf) || g[j] <= 1e-14 * scale;
          rhs = (vac0 && vac1) ? 0.0 : kInf;
        } else {
          rhs = s0 * g[i] + s1 * g[j];
        }
        ++rep.checks_run;
        const double viol =
            rhs == kInf ? kInf : (rhs - lhs) / scale - pair_tol;
        if (viol > worst) {
          worst = viol;
          rep.witness = std::array<double, 3>{t0, t1, s};
        }
      }
    }
  }

  // Three-point finite-difference surrogate of (g'' + K/(N-1) g <= 0) at
  // interior nodes of the positivity set. The tolerance scales with the
  // inhomogeneity of the inequality in h, with a step^2 floor absorbing
  // the truncation error of the stencil.
  const double fd_tol = std::max(tol, h.step * h.step) *
                        (1.0 + std::abs(K) / (N - 1.0)) * scale;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (g[i - 1] <= 1e-14 * scale || g[i] <= 1e-14 * scale ||
        g[i + 1] <= 1e-14 * scale)
      continue;
    const double d2 = (g[i - 1] - 2.0 * g[i] + g[i + 1]) / (h.step * h.step);
    const double expr = d2 + K / (N - 1.0) * g[i];
    ++rep.checks_run;
    const double viol = (expr * h.step * h.step - fd_tol) / scale;
    if (viol > worst) {
      worst = viol;
      rep.witness = std::array<double, 3>{h.node(i - 1), h.node(i + 1), 0.5};
    }
  }

  rep.worst_violation = worst;
  rep.valid = worst <= 0.0;
  return rep;
}

namespace detail {

// Standard bump on (0,1), normalized to unit integral.
inline double bump_normalizer() {
  static const double c = [] {
    auto f = [](double x) {
      if (x <= 0.0 || x >= 1.0) return 0.0;
      return std::exp(-1.0 / (x * (1.0 - x)));
    };
    return 1.0 / cdkn::detail::trapezoid(f, 0.0, 1.0, 20000);
  }();
  return c;
}

inline double bump(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return bump_normalizer() * std::exp(-1.0 / (x * (1.0 - x)));
}

}  // namespace detail

// Power-convolved mollification
//   h_eps(t) = [ \int h(t - x)^{1/(N-1)} psi_eps(x) dx ]^{N-1}
// with psi supported in [0,1]. The kernel is one-sided, so for t in
// [origin + eps, end] it averages h^{1/(N-1)} entirely inside the original
// support, where the sigma-concavity cone is closed under such averages;
// the output grid is restricted to exactly that window. Including the
// partial-kernel fringe would convolve the zero extension, whose smoothed
// ramp is strictly convex at the foot and genuinely violates the condition.
inline GridDensity mollify(const GridDensity& h, double N, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("mollify: eps <= 0");
  if (!(N > 1.0 + 1e-6)) throw std::domain_error("mollify: requires N > 1");
  const std::size_t pad = static_cast<std::size_t>(std::ceil(eps / h.step));
  if (pad + 4 > h.size())
    throw std::domain_error("mollify: eps too large for the support");
  const double ex = 1.0 / (N - 1.0);
  const double origin = h.origin + pad * h.step;
  const std::size_t n = h.size() - pad;
  std::vector<double> out(n, 0.0);
  const int m = 128;  // quadrature panels across the kernel support
  const double dx = eps / m;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = origin + h.step * i;
    double acc = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double x = dx * k;
      const double w = (k == 0 || k == m) ? 0.5 : 1.0;
      acc += w * std::pow(h.at(t - x), ex) * detail::bump(x / eps) / eps;
    }
    out[i] = std::pow(acc * dx, N - 1.0);
  }
  return GridDensity(origin, h.step, std::move(out));
}

enum class ModelKind { Sin, Sinh, Cosh, Exp, Power, Constant };

// Sampled model profile on [shift, shift + D]:
//   sin:   sin(sqrt(K/(N-1)) t)^{N-1}            (K > 0)
//   sinh:  sinh(sqrt(-K/(N-1)) t)^{N-1}          (K < 0)
//   cosh:  cosh(sqrt(-K/(N-1)) t)^{N-1}          (K < 0)
//   exp:   exp(sqrt(-K (N-1)) t)                 (K < 0)
//   power: t^{N-1}                               (K = 0)
//   const: 1                                     (any K; valid for K <= 0)
inline GridDensity model_density(ModelKind kind, const CdParams& cd,
                                 double shift, std::size_t grid_nodes) {
  if (grid_nodes < 4) throw std::domain_error("model_density: too few nodes");
  if (!std::isfinite(cd.D))
    throw std::domain_error("model_density: D must be finite");
  const double K = cd.K, N = cd.N;
  const double step = cd.D / (grid_nodes - 1);
  std::vector<double> v(grid_nodes);
  auto fill = [&](auto&& f) {
    for (std::size_t i = 0; i < grid_nodes; ++i) v[i] = f(shift + step * i);
  };
  switch (kind) {
    case ModelKind::Sin: {
      if (!(K > 0.0) || !(N > 1.0))
        throw std::domain_error("model_density: sin requires K > 0, N > 1");
      const double a = std::sqrt(K / (N - 1.0));
      fill([&](double t) {
        const double s = std::sin(a * t);
        return s <= 0.0 ? 0.0 : std::pow(s, N - 1.0);
      });
      break;
    }
    case ModelKind::Sinh: {
      if (!(K < 0.0) || !(N > 1.0))
        throw std::domain_error("model_density: sinh requires K < 0, N > 1");
      const double a = std::sqrt(-K / (N - 1.0));
      fill([&](double t) {
        const double s = std::sinh(a * t);
        return s <= 0.0 ? 0.0 : std::pow(s, N - 1.0);
      });
      break;
    }
    case ModelKind::Cosh: {
      if (!(K < 0.0) || !(N > 1.0))
        throw std::domain_error("model_density: cosh requires K < 0, N > 1");
      const double a = std::sqrt(-K / (N - 1.0));
      fill([&](double t) { return std::pow(std::cosh(a * t), N - 1.0); });
      break;
    }
    case ModelKind::Exp: {
      if (!(K < 0.0))
        throw std::domain_error("model_density: exp requires K < 0");
      const double a = std::sqrt(-K * (N - 1.0));
      fill([&](double t) { return std::exp(a * t); });
      break;
    }
    case ModelKind::Power: {
      if (K != 0.0)
        throw std::domain_error("model_density: power requires K = 0");
      if (shift < 0.0)
        throw std::domain_error("model_density: power requires shift >= 0");
      fill([&](double t) { return std::pow(std::max(t, 0.0), N - 1.0); });
      break;
    }
    case ModelKind::Constant: {
      if (K > 0.0)
        throw std::domain_error("model_density: constant requires K <= 0");
      fill([](double) { return 1.0; });
      break;
    }
  }
  return GridDensity(shift, step, std::move(v));
}

// Rescale to unit trapezoid mass.
inline GridDensity normalize(const GridDensity& h) {
  const double m = h.mass();
  if (!(m > 0.0)) throw std::domain_error("normalize: zero mass");
  GridDensity out = h;
  for (double& v : out.values) v /= m;
  return out;
}

}  // namespace cdkn::density

#endif  // CDKN_DENSITY_HPP
