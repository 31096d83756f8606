#pragma once

// Fixed-step classical RK4 for small systems, split at breakpoints so that
// piecewise-smooth coefficients are never sampled across a jump.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace kinkspec::detail {

/// Integrates y' = rhs(x_eval, y) from a to b (either direction). The
/// interval is cut at every breakpoint strictly between a and b; inside a
/// piece the coefficient abscissa is clamped to the open piece so one-sided
/// values are used at jumps. `observe(x, y)` is called at each piece end.
template <std::size_t N, class Rhs, class Observe>
std::array<double, N> rk4(Rhs&& rhs, std::array<double, N> y, double a, double b, std::vector<double> breaks,
                          double max_step, Observe&& observe) {
  const double dir = b >= a ? 1.0 : -1.0;
  std::erase_if(breaks, [&](double x) { return !((x - a) * dir > 0 && (b - x) * dir > 0); });
  std::sort(breaks.begin(), breaks.end(), [dir](double u, double v) { return u * dir < v * dir; });
  breaks.push_back(b);

  double lo = a;
  for (const double hi : breaks) {
    const double len = std::abs(hi - lo);
    if (len == 0.0) continue;
    const auto steps = static_cast<long>(std::ceil(len / max_step));
    const double h = (hi - lo) / static_cast<double>(steps);
    const double guard = 1e-12 * std::max(1.0, std::abs(lo) + std::abs(hi));
    const double pmin = std::min(lo, hi) + guard;
    const double pmax = std::max(lo, hi) - guard;
    auto at = [&](double x) { return std::clamp(x, pmin, pmax); };
    auto axpy = [](const std::array<double, N>& u, double s, const std::array<double, N>& v) {
      std::array<double, N> out;
      for (std::size_t i = 0; i < N; ++i) out[i] = u[i] + s * v[i];
      return out;
    };
    for (long i = 0; i < steps; ++i) {
      const double x = lo + static_cast<double>(i) * h;
      const auto k1 = rhs(at(x), y);
      const auto k2 = rhs(at(x + 0.5 * h), axpy(y, 0.5 * h, k1));
      const auto k3 = rhs(at(x + 0.5 * h), axpy(y, 0.5 * h, k2));
      const auto k4 = rhs(at(x + h), axpy(y, h, k3));
      for (std::size_t j = 0; j < N; ++j) y[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    observe(hi, y);
    lo = hi;
  }
  return y;
}

template <std::size_t N, class Rhs>
std::array<double, N> rk4(Rhs&& rhs, std::array<double, N> y, double a, double b, std::vector<double> breaks,
                          double max_step) {
  return rk4<N>(rhs, y, a, b, std::move(breaks), max_step, [](double, const std::array<double, N>&) {});
}

}  // namespace kinkspec::detail
