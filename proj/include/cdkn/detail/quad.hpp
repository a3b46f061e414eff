#ifndef CDKN_DETAIL_QUAD_HPP
#define CDKN_DETAIL_QUAD_HPP

#include <cmath>
#include <cstddef>

namespace cdkn::detail {

// Adaptive Simpson with straightforward recursion on the error estimate.
template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol,
                            int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol)
    return left + right + err / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                              depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-12,
                        int max_depth = 40) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Tanh-sinh (double exponential) quadrature on (a, b). Converges at spectral
// rate even when the integrand has algebraic endpoint singularities, which
// defeats interval-halving schemes. Abscissas are kept as offsets from the
// endpoints to avoid cancellation near them.
template <typename F>
double tanh_sinh(const F& f, double a, double b, double tol = 1e-13) {
  if (a == b) return 0.0;
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  const double half_pi = 1.5707963267948966;
  double h = 1.0;
  double integral = half_pi * f(c) * h * r;  // t = 0 node
  for (int level = 0; level <= 12; ++level) {
    // level 0 fills in t = +-1, +-2, ...; afterwards trapezoid doubling puts
    // the new nodes at odd multiples of the halved step
    if (level > 0) h *= 0.5;
    double add = 0.0;
    for (int k = level == 0 ? 1 : 1;; k += level == 0 ? 1 : 2) {
      const double t = k * h;
      const double u = half_pi * std::sinh(t);
      const double ch = std::cosh(u);
      const double w = half_pi * std::cosh(t) / (ch * ch);
      // distance of the abscissa from each endpoint, kept additive to avoid
      // cancellation: r * (1 - tanh(u)) = r / (e^u cosh(u))
      const double off = r / (std::exp(u) * ch);
      const double term = w * (f(a + off) + f(b - off));
      add += term;
      if (std::abs(term) <= 1e-18 * std::abs(add) || t > 4.0) break;
    }
    const double refined =
        (level == 0 ? integral : 0.5 * integral) + add * h * r;
    if (level >= 4 && std::abs(refined - integral) <=
                          tol * std::max(1e-300, std::abs(refined))) {
      return refined;
    }
    integral = refined;
  }
  return integral;
}

// Composite trapezoid over n uniform panels.
template <typename F>
double trapezoid(const F& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i));
  return s * h;
}

}  // namespace cdkn::detail

#endif  // CDKN_DETAIL_QUAD_HPP
