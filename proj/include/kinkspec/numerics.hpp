#pragma once

// Small numerical building blocks shared by the solvers: bracketed root
// finding, adaptive quadrature and Hermite interpolation on uniform grids.

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kinkspec/errors.hpp"

namespace kinkspec::numerics {

/// Root of f on [a, b] given a sign change (or a zero at an endpoint).
/// Bisection safeguarded secant: each iteration tries the secant point of
/// the current bracket and falls back to the midpoint whenever the secant
/// lands outside the bracket or the bracket fails to halve.
template <class F>
double find_root(F&& f, double a, double b, double xtol = 1e-14, int max_iter = 400) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!(std::isfinite(fa) && std::isfinite(fb)) || (fa > 0) == (fb > 0)) {
    std::ostringstream msg;
    msg << "find_root: no sign change on [" << a << ", " << b << "] (f = " << fa << ", " << fb << ")";
    throw NumericalError(msg.str());
  }
  double width = std::abs(b - a);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(b - a) <= xtol) break;
    double x = b - fb * (b - a) / (fb - fa);
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double mid = 0.5 * (a + b);
    if (!(x > lo && x < hi) || std::abs(b - a) > 0.5 * width) x = mid;
    if (x == a || x == b) break;
    width = std::abs(b - a);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0) == (fa > 0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

/// Adaptive 31-point Gauss-Kronrod integral of f over [a, b].
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 15) {
  if (a == b) return 0.0;
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &err);
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "quadrature produced a non-finite value on [" << a << ", " << b << "]";
    throw NumericalError(msg.str());
  }
  return value;
}

/// Cubic Hermite interpolation on [0, 1] in local coordinate t with node
/// spacing h. Returns value and first derivative.
inline std::pair<double, double> hermite3(double t, double h, double f0, double d0, double f1, double d1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  const double value = h00 * f0 + h * h10 * d0 + h01 * f1 + h * h11 * d1;
  const double dh00 = 6 * t2 - 6 * t;
  const double dh10 = 3 * t2 - 4 * t + 1;
  const double dh01 = -dh00;
  const double dh11 = 3 * t2 - 2 * t;
  const double deriv = (dh00 * f0 + dh01 * f1) / h + dh10 * d0 + dh11 * d1;
  return {value, deriv};
}

/// Quintic Hermite interpolation matching value, first and second
/// derivative at both ends. Returns value, first and second derivative.
struct Quintic {
  double value;
  double d1;
  double d2;
};

inline Quintic hermite5(double t, double h, double f0, double g0, double c0, double f1, double g1, double c1) {
  // Basis in the local variable t, derivatives scaled by h.
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const double H3 = 0.5 * t3 - t4 + 0.5 * t5;
  const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double H5 = 10 * t3 - 15 * t4 + 6 * t5;

  const double dH0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double dH1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double dH2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
  const double dH3 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
  const double dH4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double dH5 = -dH0;

  const double ddH0 = -60 * t + 180 * t2 - 120 * t3;
  const double ddH1 = -36 * t + 96 * t2 - 60 * t3;
  const double ddH2 = 1 - 9 * t + 18 * t2 - 10 * t3;
  const double ddH3 = 3 * t - 12 * t2 + 10 * t3;
  const double ddH4 = -24 * t + 84 * t2 - 60 * t3;
  const double ddH5 = -ddH0;

  const double hg0 = h * g0, hg1 = h * g1;
  const double hhc0 = h * h * c0, hhc1 = h * h * c1;
  Quintic out{};
  out.value = H0 * f0 + H1 * hg0 + H2 * hhc0 + H5 * f1 + H4 * hg1 + H3 * hhc1;
  out.d1 = (dH0 * f0 + dH1 * hg0 + dH2 * hhc0 + dH5 * f1 + dH4 * hg1 + dH3 * hhc1) / h;
  out.d2 = (ddH0 * f0 + ddH1 * hg0 + ddH2 * hhc0 + ddH5 * f1 + ddH4 * hg1 + ddH3 * hhc1) / (h * h);
  return out;
}

}  // namespace kinkspec::numerics
