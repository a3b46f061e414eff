#ifndef CDKN_PTRIG_HPP
#define CDKN_PTRIG_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cdkn/detail/quad.hpp"
#include "cdkn/detail/rootfind.hpp"

// Generalized trigonometric functions pi_p, sin_p, cos_p for p > 1.
// sin_p is the inverse of t(s) = \int_0^s (1 - u^p)^{-1/p} du on
// [-pi_p/2, pi_p/2], reflected across pi_p/2 and extended 2*pi_p-periodically.

namespace cdkn::ptrig {

inline void require_p(double p) {
  if (!(p > 1.0)) throw std::domain_error("ptrig: requires p > 1");
}

// pi_p = 2*pi / (p * sin(pi/p)); equals the defining integral
// \int_{-1}^{1} (1 - s^p)^{-1/p} ds.
inline double pi_p(double p) {
  require_p(p);
  return 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
}

// Incomplete integral t(s) = \int_0^s (1 - u^p)^{-1/p} du, odd in s.
// The integrable singularity at u = 1 is removed by the substitution
// u = 1 - v^{p/(p-1)}, under which the integrand becomes bounded.
inline double arcsin_p(double p, double s) {
  require_p(p);
  if (!(std::abs(s) <= 1.0)) throw std::domain_error("arcsin_p: |s| > 1");
  if (s == 0.0) return 0.0;
  const double sign = s < 0.0 ? -1.0 : 1.0;
  const double sa = std::abs(s);
  const double ex = p / (p - 1.0);
  // v runs from v(s) down to v(0) = 1, with u(v) = 1 - v^{p/(p-1)}.
  const double vs = std::pow(1.0 - sa, 1.0 / ex);
  // The exponents cancel exactly at v = 0 (the u = 1 endpoint):
  // v^{ex-1} (1 - u^p)^{-1/p} ~ v^{ex-1} (p v^ex)^{-1/p} = p^{-1/p} since
  // ex - 1 - ex/p = 0. Work in logs so the cancellation survives underflow.
  auto g = [p, ex](double v) {
    if (v <= 0.0) return ex * std::pow(p, -1.0 / p);
    const double lv = std::log(v);
    const double lw = ex * lv;  // log of v^ex = log(1 - u)
    double log_omu;             // log(1 - u^p)
    if (lw < -36.0) {
      log_omu = std::log(p) + lw;
    } else {
      const double w = std::exp(lw);
      log_omu = std::log(-std::expm1(p * std::log1p(-w)));
    }
    return ex * std::exp((ex - 1.0) * lv - log_omu / p);
  };
  return sign * detail::tanh_sinh(g, vs, 1.0, 1e-13);
}

// Inverse of arcsin_p on [-pi_p/2, pi_p/2]; bracketed Newton on s.
inline double sin_p_principal(double p, double t) {
  const double half = 0.5 * pi_p(p);
  if (t <= -half) return -1.0;
  if (t >= half) return 1.0;
  if (t == 0.0) return 0.0;
  auto fd = [p, t](double s) {
    const double f = arcsin_p(p, s) - t;
    const double df = std::pow(1.0 - std::pow(std::abs(s), p), -1.0 / p);
    return std::pair{f, df};
  };
  // Initial guess from the p = 2 analogue, rescaled to the right period.
  const double guess = std::sin(t * std::numbers::pi / (2.0 * half));
  return detail::newton_bracketed(fd, -1.0, 1.0, guess, 1e-12);
}

// Reduce t to the fundamental window [-pi_p/2, 3*pi_p/2).
inline double fold_to_window(double pip, double t) {
  const double period = 2.0 * pip;
  double u = std::fmod(t + 0.5 * pip, period);
  if (u < 0.0) u += period;
  return u - 0.5 * pip;
}

inline double sin_p(double p, double t) {
  require_p(p);
  if (p == 2.0) return std::sin(t);
  const double pip = pi_p(p);
  double u = fold_to_window(pip, t);
  if (u > 0.5 * pip) u = pip - u;  // reflection sin_p(t) = sin_p(pi_p - t)
  return sin_p_principal(p, u);
}

// cos_p(t) = d/dt sin_p(t) = (1 - |sin_p(t)|^p)^{1/p} signed by the slope.
inline double cos_p(double p, double t) {
  require_p(p);
  if (p == 2.0) return std::cos(t);
  const double pip = pi_p(p);
  const double u = fold_to_window(pip, t);
  const double s = sin_p(p, t);
  const double mag = std::pow(std::max(0.0, 1.0 - std::pow(std::abs(s), p)),
                              1.0 / p);
  return u <= 0.5 * pip ? mag : -mag;
}

// Signed power x^{(q)} := sign(x) |x|^q.
inline double signed_pow(double x, double q) {
  if (x == 0.0) return 0.0;
  return x < 0.0 ? -std::pow(-x, q) : std::pow(x, q);
}

// cos_p^{(p-1)}, the continuous signed power appearing in the model ODE.
inline double cos_p_signed_pm1(double p, double t) {
  return signed_pow(cos_p(p, t), p - 1.0);
}

// Cached sampler of sin_p/cos_p on [0, pi_p/2]; used by hot loops (the
// shooting integrator evaluates sin_p millions of times). Monotone cubic
// Hermite cells with exact endpoint slopes; cells adjacent to pi_p/2 fall
// back to the exact inversion because s(t) loses smoothness there.
class SinPSampler {
 public:
  explicit SinPSampler(double p, int cells = 4096)
      : p_(p), pip_(pi_p(p)), n_(cells) {
    s_.resize(n_ + 1);
    d_.resize(n_ + 1);
    h_ = 0.5 * pip_ / n_;
    s_[0] = 0.0;
    d_[0] = 1.0;
    for (int i = 1; i <= n_; ++i) {
      s_[i] = sin_p_principal(p_, h_ * i);
      d_[i] = std::pow(std::max(0.0, 1.0 - std::pow(std::abs(s_[i]), p_)),
                       1.0 / p_);
    }
    s_[n_] = 1.0;
    d_[n_] = 0.0;
  }

  double pip() const { return pip_; }
  double p() const { return p_; }

  // sin_p on all of R via folding.
  double sin(double t) const {
    if (p_ == 2.0) return std::sin(t);
    double u = fold_to_window(pip_, t);
    if (u > 0.5 * pip_) u = pip_ - u;
    const double sign = u < 0.0 ? -1.0 : 1.0;
    return sign * eval(std::abs(u));
  }

  double cos(double t) const {
    if (p_ == 2.0) return std::cos(t);
    const double u = fold_to_window(pip_, t);
    const double s = sin(t);
    const double mag = std::pow(
        std::max(0.0, 1.0 - std::pow(std::abs(s), p_)), 1.0 / p_);
    return u <= 0.5 * pip_ ? mag : -mag;
  }

 private:
  double eval(double u) const {
    if (u >= 0.5 * pip_) return 1.0;
    const int i = std::min(static_cast<int>(u / h_), n_ - 1);
    if (i >= n_ - 4) return sin_p_principal(p_, u);
    const double x = (u - h_ * i) / h_;
    const double s0 = s_[i], s1 = s_[i + 1];
    const double m0 = d_[i] * h_, m1 = d_[i + 1] * h_;
    const double x2 = x * x, x3 = x2 * x;
    return (2 * x3 - 3 * x2 + 1) * s0 + (x3 - 2 * x2 + x) * m0 +
           (-2 * x3 + 3 * x2) * s1 + (x3 - x2) * m1;
  }

  double p_;
  double pip_;
  int n_;
  double h_ = 0.0;
  std::vector<double> s_;
  std::vector<double> d_;
};

}  // namespace cdkn::ptrig

#endif  // CDKN_PTRIG_HPP
