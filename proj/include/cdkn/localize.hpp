#ifndef CDKN_LOCALIZE_HPP
#define CDKN_LOCALIZE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdkn/coeffs.hpp"
#include "cdkn/density.hpp"
#include "cdkn/functional.hpp"
#include "cdkn/spectral.hpp"
#include "cdkn/transport1d.hpp"

// Synthetic disintegration bench: a measure split into weighted 1-D fibers
// plus a singular point part, with mechanical replays of the aggregation
// arguments (spectral gap, Brunn-Minkowski, log-Sobolev, 4-functions).

namespace cdkn::localize {

using coeffs::kInf;
using density::GridDensity;
using transport1d::IntervalSet;

struct Fiber {
  double weight = 0.0;          // q_i > 0
  GridDensity density;          // normalized fiber density
  std::vector<double> function; // fiber test function at the grid nodes
};

struct SingularPoint {
  double weight = 0.0;
  double value = 0.0;  // value of the test function at the point
};

struct Disintegration {
  std::vector<Fiber> fibers;
  std::vector<SingularPoint> singular;

  double singular_weight() const {
    double s = 0.0;
    for (const auto& z : singular) s += z.weight;
    return s;
  }
  double total_weight() const {
    double s = singular_weight();
    for (const auto& f : fibers) s += f.weight;
    return s;
  }
};

struct FiberIssue {
  std::size_t fiber = 0;
  double violation = 0.0;
  std::string what;
};

struct AggregateReport {
  bool holds = false;
  double global_lhs = 0.0;
  double global_rhs = 0.0;
  double global_slack = 0.0;   // rhs - lhs (or the op's sign convention)
  double worst_fiber_slack = kInf;
  std::vector<FiberIssue> issues;
  bool degenerate = false;
};

namespace detail {

inline double integral(const GridDensity& h, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < h.size(); ++i)
    acc += 0.25 * (f[i] * h.values[i] + f[i + 1] * h.values[i + 1] +
                   f[i] * h.values[i + 1] + f[i + 1] * h.values[i]) *
           h.step;
  return acc;
}

inline double integral_pow(const GridDensity& h, const std::vector<double>& f,
                           double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double w = (i == 0 || i + 1 == h.size()) ? 0.5 : 1.0;
    acc += w * std::pow(std::abs(f[i]), p) * h.values[i] * h.step;
  }
  return acc;
}

inline double dirichlet_pow(const GridDensity& h, const std::vector<double>& f,
                            double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    const double slope = std::abs(f[i + 1] - f[i]) / h.step;
    acc += std::pow(slope, p) * 0.5 * (h.values[i] + h.values[i + 1]) *
           h.step;
  }
  return acc;
}

}  // namespace detail

// Weight normalization plus CD(K,N) validation of every fiber density.
struct DisintegrationReport {
  bool valid = false;
  double weight_defect = 0.0;
  std::optional<std::size_t> worst_fiber;
  double worst_violation = 0.0;
};

inline DisintegrationReport verify_disintegration(const Disintegration& d,
                                                  double K, double N,
                                                  double cd_tol = 1e-6) {
  DisintegrationReport rep;
  rep.weight_defect = std::abs(d.total_weight() - 1.0);
  rep.valid = rep.weight_defect <= 1e-12;
  for (const auto& z : d.singular)
    if (!(z.weight > 0.0)) rep.valid = false;
  for (std::size_t i = 0; i < d.fibers.size(); ++i) {
    const auto& fb = d.fibers[i];
    if (!(fb.weight > 0.0)) {
      rep.valid = false;
      continue;
    }
    const auto v = density::validate_cd(fb.density, K, N, cd_tol);
    if (!v.valid) {
      rep.valid = false;
      if (v.worst_violation > rep.worst_violation) {
        rep.worst_violation = v.worst_violation;
        rep.worst_fiber = i;
      }
    }
  }
  return rep;
}

// Spectral-gap aggregation: fiberwise lambda int |f|^p <= int |f'|^p with
// zero p-mean fiber functions, then the weighted sum.
inline AggregateReport aggregate_spectral(const Disintegration& d, double p,
                                          double K, double N, double D,
                                          double tol = 1e-9,
                                          double pmean_tol = 1e-8) {
  if (!(p > 1.0)) throw std::domain_error("aggregate_spectral: p <= 1");
  AggregateReport rep;
  const double lambda = spectral::lambda_model(p, K, N, D, 1e-9).lambda;
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < d.fibers.size(); ++i) {
    const auto& fb = d.fibers[i];
    // precondition: zero p-mean against the fiber
    double pm = 0.0;
    for (std::size_t k = 0; k < fb.density.size(); ++k) {
      const double w =
          (k == 0 || k + 1 == fb.density.size()) ? 0.5 : 1.0;
      pm += w * ptrig::signed_pow(fb.function[k], p - 1.0) *
            fb.density.values[k] * fb.density.step;
    }
    const double scale = std::max(1.0, detail::integral_pow(fb.density,
                                                            fb.function, p));
    if (std::abs(pm) > pmean_tol * scale)
      throw std::domain_error("aggregate_spectral: fiber " +
                              std::to_string(i) + " violates zero p-mean");
    const double lp = detail::integral_pow(fb.density, fb.function, p);
    const double dir = detail::dirichlet_pow(fb.density, fb.function, p);
    const double fib_slack = dir - lambda * lp;
    rep.worst_fiber_slack = std::min(rep.worst_fiber_slack, fib_slack);
    if (fib_slack < -tol * std::max(1.0, dir))
      rep.issues.push_back({i, fib_slack, "fiber spectral inequality"});
    lhs += fb.weight * lambda * lp;
    rhs += fb.weight * dir;
  }
  // the proof's f = 0 on Z: singular contributions vanish on both sides
  for (const auto& z : d.singular) {
    lhs += z.weight * lambda * std::pow(std::abs(z.value), p) * 0.0;
  }
  rep.global_lhs = lhs;
  rep.global_rhs = rhs;
  rep.global_slack = rhs - lhs;
  rep.holds = rep.issues.empty() &&
              rep.global_slack >= -tol * std::max(1.0, rhs);
  if (d.fibers.empty()) {
    rep.holds = true;
    rep.worst_fiber_slack = 0.0;
  }
  return rep;
}

struct BmAggregateReport : AggregateReport {
  std::vector<transport1d::BmReport> fiber_reports;
  double z_coefficient_slack = kInf;  // 1 - (tau^{(1-t)} + tau^{(t)})^N
};

// Brunn-Minkowski aggregation. Each fiber i carries its own interval pair
// (A0[i], A1[i]); the fiberwise inequality runs through verify_bm and the
// integrated inequality uses the global theta over each fiber's sets. The
// mass-ratio precondition m_q(A0)/m(A0) = m_q(A1)/m(A1) is enforced.
// Singular points found in both sets contribute through the coefficient
// inequality (tau^{(1-t)} + tau^{(t)})^N <= 1 (K <= 0 regime).
inline BmAggregateReport aggregate_bm(const Disintegration& d,
                                      const std::vector<IntervalSet>& A0,
                                      const std::vector<IntervalSet>& A1,
                                      double t, double K, double N,
                                      double tol = 1e-9,
                                      double ratio_tol = 1e-8) {
  if (A0.size() != d.fibers.size() || A1.size() != d.fibers.size())
    throw std::domain_error("aggregate_bm: per-fiber set count mismatch");
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error("aggregate_bm: t");
  BmAggregateReport rep;

  // global masses first (the ratio precondition references them)
  double m0 = 0.0, m1 = 0.0;
  std::vector<double> f0(d.fibers.size()), f1(d.fibers.size());
  for (std::size_t i = 0; i < d.fibers.size(); ++i) {
    const GridDensity hn = density::normalize(d.fibers[i].density);
    f0[i] = transport1d::mass_on_set(hn, A0[i]);
    f1[i] = transport1d::mass_on_set(hn, A1[i]);
    m0 += d.fibers[i].weight * f0[i];
    m1 += d.fibers[i].weight * f1[i];
  }
  // singular points: a point z in a set contributes its whole fiber mass
  std::vector<bool> z0(d.singular.size()), z1(d.singular.size());
  for (std::size_t i = 0; i < d.singular.size(); ++i) {
    const double z = d.singular[i].value;
    z0[i] = false;
    z1[i] = false;
    // a singular point belongs to a set when its coordinate lies in the
    // union of the per-fiber sets
    for (const auto& S : A0)
      for (const auto& part : S.parts)
        if (z >= part.first - 1e-12 && z <= part.second + 1e-12) z0[i] = true;
    for (const auto& S : A1)
      for (const auto& part : S.parts)
        if (z >= part.first - 1e-12 && z <= part.second + 1e-12) z1[i] = true;
    if (z0[i]) m0 += d.singular[i].weight;
    if (z1[i]) m1 += d.singular[i].weight;
  }
  if (!(m0 > 1e-12) || !(m1 > 1e-12))
    throw std::domain_error("aggregate_bm: a set has zero mass");

  double mt = 0.0;
  double rhs = 0.0;
  bool infinite_coef = false;
  for (std::size_t i = 0; i < d.fibers.size(); ++i) {
    const auto& fb = d.fibers[i];
    const double r0 = f0[i] / m0, r1 = f1[i] / m1;
    if (std::abs(r0 - r1) > ratio_tol * std::max(1.0, std::max(r0, r1)))
      throw std::domain_error("aggregate_bm: fiber " + std::to_string(i) +
                              " violates the mass-ratio condition");
    auto fib = transport1d::verify_bm(fb.density, K, N, A0[i], A1[i], t, tol);
    rep.fiber_reports.push_back(fib);
    rep.worst_fiber_slack = std::min(rep.worst_fiber_slack, fib.slack);
    if (!fib.holds)
      rep.issues.push_back({i, fib.slack, "fiber Brunn-Minkowski"});
    infinite_coef = infinite_coef || fib.infinite_coefficient;
    const IntervalSet At = transport1d::intermediate_set(A0[i], A1[i], t);
    const GridDensity hn = density::normalize(fb.density);
    mt += fb.weight * transport1d::mass_on_set(hn, At);
  }
  for (std::size_t i = 0; i < d.singular.size(); ++i) {
    // a point intermediate between itself and itself is itself
    if (z0[i] && z1[i]) mt += d.singular[i].weight;
    if (z0[i] && z1[i] && K <= 0.0) {
      const double tau0 = coeffs::tau(K, N, 1.0 - t, 0.0);
      const double tau1 = coeffs::tau(K, N, t, 0.0);
      rep.z_coefficient_slack =
          std::min(rep.z_coefficient_slack,
                   1.0 - std::pow(tau0 + tau1, N));
    }
  }
  // global inequality with the extremal theta over the union sets
  IntervalSet U0, U1;
  for (const auto& S : A0)
    for (const auto& p : S.parts) U0.parts.push_back(p);
  for (const auto& S : A1)
    for (const auto& p : S.parts) U1.parts.push_back(p);
  U0.normalize();
  U1.normalize();
  const double theta = transport1d::theta_extremal(U0, U1, K);
  const double tau0 = coeffs::tau(K, N, 1.0 - t, theta);
  const double tau1 = coeffs::tau(K, N, t, theta);
  if (tau0 == kInf || tau1 == kInf) infinite_coef = true;
  rep.degenerate = infinite_coef;
  if (!infinite_coef)
    rhs = tau0 * std::pow(m0, 1.0 / N) + tau1 * std::pow(m1, 1.0 / N);
  else
    rhs = kInf;
  rep.global_lhs = std::pow(mt, 1.0 / N);
  rep.global_rhs = rhs;
  rep.global_slack = infinite_coef ? -kInf : rep.global_lhs - rhs;
  rep.holds = rep.issues.empty() && rep.global_slack >= -tol;
  return rep;
}

// Log-Sobolev aggregation: fiberwise 2 alpha Ent_i <= Fisher_i for
// normalized nonnegative fiber functions, f == 1 on the singular part,
// then the weighted sum.
inline AggregateReport aggregate_logsob(const Disintegration& d, double K,
                                        double N, double D,
                                        std::optional<double> alpha_opt = {},
                                        double tol = 1e-9) {
  AggregateReport rep;
  double alpha;
  if (alpha_opt)
    alpha = *alpha_opt;
  else if (K > 0.0 && N > 1.0 &&
           std::abs(D - std::numbers::pi * std::sqrt((N - 1.0) / K)) <= 1e-9)
    alpha = K * N / (N - 1.0);
  else
    throw std::domain_error(
        "aggregate_logsob: no sharp model constant at these parameters; "
        "supply alpha");
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < d.fibers.size(); ++i) {
    const auto& fb = d.fibers[i];
    const GridDensity hn = density::normalize(fb.density);
    for (double v : fb.function)
      if (v < 0.0)
        throw std::domain_error("aggregate_logsob: fiber " +
                                std::to_string(i) + " has negative f");
    const double mass = detail::integral(hn, fb.function);
    if (std::abs(mass - 1.0) > 1e-6)
      throw std::domain_error("aggregate_logsob: fiber " +
                              std::to_string(i) + " not normalized");
    double fisher = 0.0, ent = 0.0;
    for (std::size_t k = 0; k + 1 < hn.size(); ++k) {
      const double fm = 0.5 * (fb.function[k] + fb.function[k + 1]);
      if (!(fm > 0.0)) continue;
      const double slope = (fb.function[k + 1] - fb.function[k]) / hn.step;
      fisher += slope * slope / fm * 0.5 *
                (hn.values[k] + hn.values[k + 1]) * hn.step;
    }
    for (std::size_t k = 0; k < hn.size(); ++k) {
      const double v = fb.function[k];
      if (!(v > 0.0)) continue;
      const double w = (k == 0 || k + 1 == hn.size()) ? 0.5 : 1.0;
      ent += w * v * std::log(v) * hn.values[k] * hn.step;
    }
    const double fib_slack = fisher - 2.0 * alpha * ent;
    rep.worst_fiber_slack = std::min(rep.worst_fiber_slack, fib_slack);
    if (fib_slack < -tol * std::max(1.0, fisher))
      rep.issues.push_back({i, fib_slack, "fiber log-Sobolev"});
    lhs += fb.weight * 2.0 * alpha * ent;
    rhs += fb.weight * fisher;
  }
  // f == 1 on the singular part: f log f vanishes there exactly
  for (const auto& z : d.singular)
    if (std::abs(z.value - 1.0) > 1e-12)
      throw std::domain_error("aggregate_logsob: singular part must carry "
                              "f == 1");
  rep.global_lhs = lhs;
  rep.global_rhs = rhs;
  rep.global_slack = rhs - lhs;
  rep.holds = rep.issues.empty() &&
              rep.global_slack >= -tol * std::max(1.0, rhs);
  return rep;
}

// 4-functions scheme. Inputs are per-fiber nodal functions plus singular
// point values for f1..f4. Checks, with c = int f3 / int f1:
//   (a) per fiber: (int f1)^alpha (int f2)^beta <= (int f3)^alpha
//       (int f4)^beta,
//   (b) on Z pointwise: f2 <= c^{alpha/beta} f4 (skipped, flagged
//       degenerate, when beta = 0),
//   (c) per fiber: int (f3 - c f1) dm_q = 0,
// and then the implied global product inequality.
struct FourFunctionsInput {
  std::vector<std::vector<double>> f1, f2, f3, f4;  // per fiber, nodal
  std::vector<std::array<double, 4>> z_values;      // per singular point
};

inline AggregateReport four_functions(const Disintegration& d,
                                      const FourFunctionsInput& in,
                                      double alpha, double beta,
                                      double tol = 1e-9) {
  if (alpha < 0.0 || beta < 0.0)
    throw std::domain_error("four_functions: negative exponent");
  AggregateReport rep;
  rep.degenerate = (alpha == 0.0 || beta == 0.0);
  const std::size_t nf = d.fibers.size();
  if (in.f1.size() != nf || in.f2.size() != nf || in.f3.size() != nf ||
      in.f4.size() != nf || in.z_values.size() != d.singular.size())
    throw std::domain_error("four_functions: shape mismatch");

  double I1 = 0.0, I2 = 0.0, I3 = 0.0, I4 = 0.0;
  std::vector<std::array<double, 4>> fib(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    const GridDensity hn = density::normalize(d.fibers[i].density);
    fib[i] = {detail::integral(hn, in.f1[i]), detail::integral(hn, in.f2[i]),
              detail::integral(hn, in.f3[i]), detail::integral(hn, in.f4[i])};
    const double w = d.fibers[i].weight;
    I1 += w * fib[i][0];
    I2 += w * fib[i][1];
    I3 += w * fib[i][2];
    I4 += w * fib[i][3];
  }
  for (std::size_t i = 0; i < d.singular.size(); ++i) {
    const double w = d.singular[i].weight;
    I1 += w * in.z_values[i][0];
    I2 += w * in.z_values[i][1];
    I3 += w * in.z_values[i][2];
    I4 += w * in.z_values[i][3];
  }
  if (!(I1 > 0.0) || !(I3 > 0.0))
    throw std::domain_error("four_functions: nonpositive global integrals");
  const double c = I3 / I1;

  for (std::size_t i = 0; i < nf; ++i) {
    const auto& [a1, a2, a3, a4] = fib[i];
    const double lhs = std::pow(std::max(a1, 0.0), alpha) *
                       std::pow(std::max(a2, 0.0), beta);
    const double rhs = std::pow(std::max(a3, 0.0), alpha) *
                       std::pow(std::max(a4, 0.0), beta);
    if (lhs - rhs > tol * std::max(1.0, rhs))
      rep.issues.push_back({i, lhs - rhs, "fiber product inequality"});
    rep.worst_fiber_slack = std::min(rep.worst_fiber_slack, rhs - lhs);
    const GridDensity hn = density::normalize(d.fibers[i].density);
    std::vector<double> g(hn.size());
    for (std::size_t k = 0; k < g.size(); ++k)
      g[k] = in.f3[i][k] - c * in.f1[i][k];
    const double zero = detail::integral(hn, g);
    if (std::abs(zero) > 1e-6 * std::max(1.0, std::abs(c) * fib[i][0]))
      rep.issues.push_back({i, zero, "fiber zero-mean constraint"});
  }
  if (beta > 0.0) {
    const double factor = std::pow(c, alpha / beta);
    for (std::size_t i = 0; i < d.singular.size(); ++i) {
      const double lhs = in.z_values[i][1];
      const double rhs = factor * in.z_values[i][3];
      if (lhs - rhs > tol * std::max(1.0, std::abs(rhs)))
        rep.issues.push_back(
            {i, lhs - rhs, "singular pointwise inequality"});
    }
  }
  rep.global_lhs = std::pow(I1, alpha) * std::pow(I2, beta);
  rep.global_rhs = std::pow(I3, alpha) * std::pow(I4, beta);
  rep.global_slack = rep.global_rhs - rep.global_lhs;
  rep.holds = rep.issues.empty() &&
              rep.global_slack >= -tol * std::max(1.0, rep.global_rhs);
  return rep;
}

}  // namespace cdkn::localize

#endif  // CDKN_LOCALIZE_HPP
