#ifndef CDKN_DETAIL_ROOTFIND_HPP
#define CDKN_DETAIL_ROOTFIND_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace cdkn::detail {

// Bisection on a bracketing interval. Assumes f(lo) and f(hi) have opposite
// signs (or one of them is zero).
template <typename F>
double bisect(const F& f, double lo, double hi, double xtol,
              int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw std::runtime_error("bisect: endpoints do not bracket a root");
  for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

// Newton iteration safeguarded by a shrinking bracket [lo, hi].
// `fd` returns the pair (f(x), f'(x)).
template <typename FD>
double newton_bracketed(const FD& fd, double lo, double hi, double x0,
                        double xtol, int max_iter = 100) {
  double x = x0;
  for (int it = 0; it < max_iter; ++it) {
    auto [fx, dfx] = fd(x);
    if (fx == 0.0) return x;
    if (fx > 0.0)
      hi = x;
    else
      lo = x;
    double step = (dfx != 0.0) ? fx / dfx : 0.0;
    double xn = x - step;
    if (!(xn > lo && xn < hi) || step == 0.0) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= xtol) return xn;
    x = xn;
  }
  return x;
}

// Golden-section minimization of a unimodal function on [a, b].
template <typename F>
double golden_min(const F& f, double a, double b, double xtol,
                  int max_iter = 200) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

// Coarse scan of n+1 equispaced points followed by golden-section refinement
// around the best sample. Returns the argmin.
template <typename F>
double scan_then_golden(const F& f, double a, double b, int n, double xtol) {
  if (!(b > a)) return a;
  double best_x = a;
  double best_f = f(a);
  const double h = (b - a) / n;
  for (int i = 1; i <= n; ++i) {
    const double x = a + h * i;
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  const double lo = std::max(a, best_x - h);
  const double hi = std::min(b, best_x + h);
  return golden_min(f, lo, hi, xtol);
}

}  // namespace cdkn::detail

#endif  // CDKN_DETAIL_ROOTFIND_HPP
