#ifndef CDKN_TRANSPORT1D_HPP
#define CDKN_TRANSPORT1D_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cdkn/coeffs.hpp"
#include "cdkn/density.hpp"

// One-dimensional optimal transport on grid measures: CDF/quantile tables,
// monotone rearrangement, W2, entropies, intermediate sets and the sharp
// Brunn-Minkowski verifier.

namespace cdkn::transport1d {

using coeffs::kInf;
using density::GridDensity;

// Probability measure as a grid density plus its cumulative table.
struct Measure1D {
  GridDensity grid;
  std::vector<double> cdf;  // nondecreasing, cdf.front()=0, cdf.back()=1

  static Measure1D from_density(const GridDensity& h) {
    Measure1D mu;
    mu.grid = density::normalize(h);
    const auto& v = mu.grid.values;
    mu.cdf.resize(v.size());
    mu.cdf[0] = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i)
      mu.cdf[i] = mu.cdf[i - 1] + 0.5 * (v[i - 1] + v[i]) * mu.grid.step;
    const double total = mu.cdf.back();
    for (double& c : mu.cdf) c /= total;  // kill trapezoid rounding drift
    return mu;
  }
};

// Piecewise-linear CDF evaluation; clamps outside the support.
inline double cdf_at(const Measure1D& mu, double t) {
  const auto& g = mu.grid;
  if (t <= g.origin) return 0.0;
  if (t >= g.end()) return 1.0;
  const double x = (t - g.origin) / g.step;
  const std::size_t i = std::min(static_cast<std::size_t>(x),
                                 mu.cdf.size() - 2);
  const double w = x - static_cast<double>(i);
  return mu.cdf[i] * (1.0 - w) + mu.cdf[i + 1] * w;
}

// Generalized inverse (left-continuous): inf { t : cdf(t) >= v }.
inline double quantile(const Measure1D& mu, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("quantile: v not in [0,1]");
  const auto& c = mu.cdf;
  if (v <= 0.0) {
    // left edge of the positivity set
    std::size_t i = 0;
    while (i + 1 < c.size() && c[i + 1] <= 0.0) ++i;
    return mu.grid.node(i);
  }
  const auto it = std::lower_bound(c.begin(), c.end(), v);
  std::size_t j = static_cast<std::size_t>(it - c.begin());
  if (j == 0) return mu.grid.origin;
  const double c0 = c[j - 1], c1 = c[j];
  if (c1 <= c0) return mu.grid.node(j);
  const double w = (v - c0) / (c1 - c0);
  return mu.grid.node(j - 1) + w * mu.grid.step;
}

// Monotone rearrangement T = quantile_mu1 o cdf_mu0 sampled on mu0's grid.
inline std::vector<double> monotone_map(const Measure1D& mu0,
                                        const Measure1D& mu1) {
  std::vector<double> T(mu0.grid.size());
  for (std::size_t i = 0; i < T.size(); ++i)
    T[i] = quantile(mu1, std::min(1.0, std::max(0.0, mu0.cdf[i])));
  return T;
}

// W2 via the quantile formula, composite trapezoid in v.
inline double w2(const Measure1D& mu0, const Measure1D& mu1,
                 std::size_t panels = 4096) {
  double acc = 0.0;
  for (std::size_t k = 0; k <= panels; ++k) {
    const double v = static_cast<double>(k) / panels;
    const double d = quantile(mu0, v) - quantile(mu1, v);
    const double w = (k == 0 || k == panels) ? 0.5 : 1.0;
    acc += w * d * d;
  }
  return std::sqrt(acc / panels);
}

// Relative entropy int rho log rho dref with rho = dmu/dref nodewise.
// +infinity when mu carries mass where the reference density vanishes.
inline double entropy_relative(const Measure1D& mu, const Measure1D& ref) {
  if (mu.grid.size() != ref.grid.size() ||
      mu.grid.origin != ref.grid.origin || mu.grid.step != ref.grid.step)
    throw std::domain_error("entropy_relative: grid mismatch");
  const std::size_t n = mu.grid.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = mu.grid.values[i];
    const double r = ref.grid.values[i];
    if (r < 1e-14) {
      if (m > 1e-12) return kInf;
      continue;
    }
    const double rho = m / r;
    if (rho > 0.0) {
      const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
      acc += w * rho * std::log(rho) * r * mu.grid.step;
    }
  }
  return acc;
}

// N-entropy S_N(mu | ref) = -int rho^{-1/N} dmu = -int rho^{(N-1)/N} dref.
inline double entropy_n(const Measure1D& mu, const Measure1D& ref, double N) {
  if (mu.grid.size() != ref.grid.size() ||
      mu.grid.origin != ref.grid.origin || mu.grid.step != ref.grid.step)
    throw std::domain_error("entropy_n: grid mismatch");
  if (!(N >= 1.0)) throw std::domain_error("entropy_n: N < 1");
  const std::size_t n = mu.grid.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ref.grid.values[i];
    if (r < 1e-14) continue;
    const double rho = mu.grid.values[i] / r;
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    acc += w * std::pow(rho, (N - 1.0) / N) * r * mu.grid.step;
  }
  return -acc;
}

// Sorted disjoint closed intervals on the line.
struct IntervalSet {
  std::vector<std::pair<double, double>> parts;

  IntervalSet() = default;
  IntervalSet(std::initializer_list<std::pair<double, double>> init)
      : parts(init) {
    normalize();
  }
  explicit IntervalSet(std::vector<std::pair<double, double>> p)
      : parts(std::move(p)) {
    normalize();
  }

  bool empty() const { return parts.empty(); }
  double min() const { return parts.front().first; }
  double max() const { return parts.back().second; }

  void normalize() {
    for (auto& [a, b] : parts)
      if (b < a) throw std::domain_error("IntervalSet: b < a");
    std::sort(parts.begin(), parts.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : parts) {
      if (!merged.empty() && iv.first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, iv.second);
      else
        merged.push_back(iv);
    }
    parts = std::move(merged);
  }
};

// t-intermediate set A_t = { (1-t)x + ty : x in A0, y in A1 }.
inline IntervalSet intermediate_set(const IntervalSet& A0,
                                    const IntervalSet& A1, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("intermediate_set: t not in [0,1]");
  std::vector<std::pair<double, double>> parts;
  for (const auto& [a0, b0] : A0.parts)
    for (const auto& [a1, b1] : A1.parts)
      parts.emplace_back((1.0 - t) * a0 + t * a1, (1.0 - t) * b0 + t * b1);
  return IntervalSet(std::move(parts));
}

// Extremal geodesic length between the sets: inf distance for K >= 0,
// sup distance for K < 0.
inline double theta_extremal(const IntervalSet& A0, const IntervalSet& A1,
                             double K) {
  if (A0.empty() || A1.empty())
    throw std::domain_error("theta_extremal: empty set");
  if (K < 0.0)
    return std::max(A1.max() - A0.min(), A0.max() - A1.min());
  double best = kInf;
  for (const auto& [a0, b0] : A0.parts)
    for (const auto& [a1, b1] : A1.parts) {
      double d = 0.0;
      if (b0 < a1) d = a1 - b0;
      else if (b1 < a0) d = a0 - b1;
      if (d < best) best = d;
    }
  return best;
}

// Exact integral of the piecewise-linear density over [a, b].
inline double mass_on_interval(const GridDensity& h, double a, double b) {
  a = std::max(a, h.origin);
  b = std::min(b, h.end());
  if (!(b > a)) return 0.0;
  auto primitive_cell = [&](std::size_t i, double x0, double x1) {
    // integral over [x0, x1] inside cell i, coordinates in [0,1] cell units
    const double v0 = h.values[i], v1 = h.values[i + 1];
    auto F = [&](double x) { return v0 * x + 0.5 * (v1 - v0) * x * x; };
    return (F(x1) - F(x0)) * h.step;
  };
  const double xa = (a - h.origin) / h.step;
  const double xb = (b - h.origin) / h.step;
  const std::size_t ia = std::min(static_cast<std::size_t>(xa), h.size() - 2);
  const std::size_t ib = std::min(static_cast<std::size_t>(xb), h.size() - 2);
  if (ia == ib) return primitive_cell(ia, xa - ia, xb - ia);
  double acc = primitive_cell(ia, xa - ia, 1.0);
  for (std::size_t i = ia + 1; i < ib; ++i) acc += primitive_cell(i, 0.0, 1.0);
  acc += primitive_cell(ib, 0.0, xb - ib);
  return acc;
}

inline double mass_on_set(const GridDensity& h, const IntervalSet& A) {
  double acc = 0.0;
  for (const auto& [a, b] : A.parts) acc += mass_on_interval(h, a, b);
  return acc;
}

struct BmReport {
  double lhs = 0.0;    // m(A_t)^{1/N}
  double rhs = 0.0;
  double theta = 0.0;
  double slack = 0.0;  // lhs - rhs
  bool holds = false;
  bool infinite_coefficient = false;  // tau = +inf against positive mass
};

// Sharp Brunn-Minkowski slack for a density against interval sets.
// m(A_t)^{1/N} >= tau^{(1-t)}(theta) m(A0)^{1/N} + tau^{(t)}(theta) m(A1)^{1/N}
inline BmReport verify_bm(const GridDensity& h, double K, double N,
                          const IntervalSet& A0, const IntervalSet& A1,
                          double t, double tol = 1e-9) {
  if (!(N >= 1.0)) throw std::domain_error("verify_bm: N < 1");
  const GridDensity hn = density::normalize(h);
  const double m0 = mass_on_set(hn, A0);
  const double m1 = mass_on_set(hn, A1);
  if (m0 <= 1e-12 || m1 <= 1e-12)
    throw std::domain_error("verify_bm: zero-mass input set");
  BmReport rep;
  rep.theta = theta_extremal(A0, A1, K);
  const IntervalSet At = intermediate_set(A0, A1, t);
  const double mt = mass_on_set(hn, At);
  rep.lhs = std::pow(mt, 1.0 / N);
  const double tau0 = coeffs::tau(K, N, 1.0 - t, rep.theta);
  const double tau1 = coeffs::tau(K, N, t, rep.theta);
  if (tau0 == kInf || tau1 == kInf) {
    // positive mass against an infinite coefficient: flagged violation
    rep.infinite_coefficient = true;
    rep.rhs = kInf;
    rep.slack = -kInf;
    rep.holds = false;
    return rep;
  }
  rep.rhs = tau0 * std::pow(m0, 1.0 / N) + tau1 * std::pow(m1, 1.0 / N);
  rep.slack = rep.lhs - rep.rhs;
  rep.holds = rep.slack >= -tol;
  return rep;
}

}  // namespace cdkn::transport1d

#endif  // CDKN_TRANSPORT1D_HPP
