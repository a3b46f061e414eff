#ifndef CDKN_COEFFS_HPP
#define CDKN_COEFFS_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

// Distortion coefficients sigma/tau, the model tangent tan_{K,N}, the
// sine/cosine pair s_delta/c_delta, and the model Jacobian J_{H,K,N}.

namespace cdkn::coeffs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Curvature-dimension-diameter triple. D may be +infinity.
struct CdParams {
  double K = 0.0;
  double N = 1.0;
  double D = kInf;

  CdParams(double K_, double N_, double D_) : K(K_), N(N_), D(D_) {
    if (!(N >= 1.0)) throw std::domain_error("CdParams: N must be >= 1");
    if (!(D > 0.0)) throw std::domain_error("CdParams: D must be > 0");
  }

  // Bonnet-Myers consistency: for K > 0 the diameter cannot exceed
  // pi*sqrt((N-1)/K). Flagged, not fatal.
  bool exceeds_bonnet_myers(double tol = 1e-12) const {
    if (K <= 0.0 || !std::isfinite(D)) return false;
    if (N <= 1.0) return true;
    return D > std::numbers::pi * std::sqrt((N - 1.0) / K) + tol;
  }
};

// sigma_{K,N}^{(t)}(theta), all five branches. Returns +infinity on the
// K*theta^2 >= N*pi^2 branch.
inline double sigma(double K, double N, double t, double theta) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("sigma: t not in [0,1]");
  if (!(theta >= 0.0)) throw std::domain_error("sigma: theta < 0");
  if (!(N >= 0.0)) throw std::domain_error("sigma: N < 0");
  const double kt2 = K * theta * theta;
  const double npi2 = N * std::numbers::pi * std::numbers::pi;
  if (kt2 >= npi2 && kt2 > 0.0) return kInf;
  if (kt2 == 0.0) return t;
  if (kt2 > 0.0) {
    const double a = theta * std::sqrt(K / N);
    return std::sin(t * a) / std::sin(a);
  }
  // kt2 < 0
  if (N == 0.0) return t;
  const double a = theta * std::sqrt(-K / N);
  return std::sinh(t * a) / std::sinh(a);
}

// tau_{K,N}^{(t)}(theta) = t^{1/N} * sigma_{K,N-1}^{(t)}(theta)^{(N-1)/N}.
// For N = 1 the exponent (N-1)/N = 0 and tau = t, even when sigma = +inf.
inline double tau(double K, double N, double t, double theta) {
  if (!(N >= 1.0)) throw std::domain_error("tau: N < 1");
  if (N == 1.0) return t;
  const double s = sigma(K, N - 1.0, t, theta);
  if (s == kInf) return t == 0.0 ? 0.0 : kInf;
  return std::pow(t, 1.0 / N) * std::pow(s, (N - 1.0) / N);
}

// tan_{K,N}: 0 for K = 0; sqrt(K/(N-1)) tan(sqrt(K/(N-1)) t) for K > 0
// (pole at |t| = (pi/2) sqrt((N-1)/K)); hyperbolic analogue for K < 0.
inline double tan_kn(double K, double N, double t) {
  if (!(N > 1.0)) throw std::domain_error("tan_kn: N must be > 1");
  if (K == 0.0) return 0.0;
  if (K < 0.0) {
    const double a = std::sqrt(-K / (N - 1.0));
    return a * std::tanh(a * t);
  }
  const double a = std::sqrt(K / (N - 1.0));
  const double pole = 0.5 * std::numbers::pi / a;
  if (!(std::abs(t) < pole))
    throw std::domain_error("tan_kn: t at or beyond the tangent pole");
  return a * std::tan(a * t);
}

// s_delta(t): sin-type solution of u'' + delta u = 0 with u(0)=0, u'(0)=1.
inline double s_delta(double delta, double t) {
  if (delta > 0.0) {
    const double r = std::sqrt(delta);
    return std::sin(r * t) / r;
  }
  if (delta < 0.0) {
    const double r = std::sqrt(-delta);
    return std::sinh(r * t) / r;
  }
  return t;
}

// c_delta(t): cos-type companion, c_delta(0) = 1.
inline double c_delta(double delta, double t) {
  if (delta > 0.0) return std::cos(std::sqrt(delta) * t);
  if (delta < 0.0) return std::cosh(std::sqrt(-delta) * t);
  return 1.0;
}

namespace detail {

// Roots of f(t) = c_delta(t) + b_raw * s_delta(t) bracketing 0: the first
// non-positive root xi_minus and first positive root xi_plus (+-inf when no
// root on that side). f(0) = 1 > 0 always.
struct RootPair {
  double lo;
  double hi;
};

inline RootPair truncation_roots(double delta, double b_raw) {
  if (delta > 0.0) {
    const double r = std::sqrt(delta);
    const double b = b_raw / r;  // f = cos(rt) + b sin(rt) = R cos(rt - phi)
    const double phi = std::atan2(b, 1.0);
    return {(phi - 0.5 * std::numbers::pi) / r,
            (phi + 0.5 * std::numbers::pi) / r};
  }
  if (delta == 0.0) {
    if (b_raw > 0.0) return {-1.0 / b_raw, kInf};
    if (b_raw < 0.0) return {-kInf, -1.0 / b_raw};
    return {-kInf, kInf};
  }
  const double r = std::sqrt(-delta);
  const double b = b_raw / r;  // f = cosh(rt) + b sinh(rt)
  if (std::abs(b) <= 1.0) return {-kInf, kInf};
  const double x0 = 0.5 * std::log((b - 1.0) / (b + 1.0));  // valid |b|>1
  if (b > 1.0) return {x0 / r, kInf};
  return {-kInf, 0.5 * std::log((-b + 1.0) / (-b - 1.0)) / r};
}

}  // namespace detail

// Model Jacobian J_{H,K,N}(t) with delta = K/(N-1) and the f_+ truncation
// outside the first roots around 0.
inline double jacobian_model(double H, double K, double N, double t) {
  if (!(N >= 1.0)) throw std::domain_error("jacobian_model: N < 1");
  if (N == 1.0) {
    if (K > 0.0) return t == 0.0 ? 1.0 : 0.0;
    return H * t >= 0.0 ? 1.0 : 0.0;
  }
  const double delta = K / (N - 1.0);
  const double b_raw = H / (N - 1.0);
  const auto [lo, hi] = detail::truncation_roots(delta, b_raw);
  if (t < lo || t > hi) return 0.0;
  const double f = c_delta(delta, t) + b_raw * s_delta(delta, t);
  if (f <= 0.0) return 0.0;
  return std::pow(f, N - 1.0);
}

}  // namespace cdkn::coeffs

#endif  // CDKN_COEFFS_HPP
