#pragma once

#include <cmath>
#include <utility>

namespace wgwin {

template <class F>
double bracketed_root(F&& f, double lo, double hi, double f_lo, double f_hi,
                      const RootOptions& opt) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  while (hi - lo > opt.bisection_width) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  // Illinois-modified regula falsi: secant steps that never leave the
  // bracket.
  int side = 0;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < opt.max_secant; ++it) {
    x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    if (hi - lo < opt.tol) break;
    if (std::abs(hi - lo) < 4.0 * std::abs(x) * 1e-16) break;
  }
  return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
}

}  // namespace wgwin
