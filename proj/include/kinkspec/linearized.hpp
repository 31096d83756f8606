#pragma once

#include <memory>
#include <vector>

#include "kinkspec/kink.hpp"

namespace kinkspec {

/// W(x) = U''(s(x)), the potential of the operator H = -d^2/dx^2 + W.
///
/// For the exact kink W0 is -b on |x| <= q and d outside. For a mollified
/// kink W_eps differs from W0 only on ||x| - q| < delta.
class LinearizedPotential {
 public:
  explicit LinearizedPotential(std::shared_ptr<const KinkProfile> kink);

  double operator()(double x) const;
  /// Piecewise-constant W0 of the same gamma.
  double unperturbed(double x) const;

  const KinkProfile& kink() const { return *kink_; }
  const GammaParams& params() const { return kink_->model().params(); }
  bool is_exact() const { return kink_->is_exact(); }
  double edge() const { return params().d; }
  double jump_locus() const { return params().q; }

  /// W = W0 whenever ||x| - q| >= support_pad(); 0 for the exact kink.
  double support_pad() const { return delta_; }
  /// W = d for |x| >= support_radius().
  double support_radius() const { return params().q + delta_; }
  /// x-interval (x > 0) on which the kink passes through the blend zone
  /// gamma - eps < s < gamma + eps; {q, q} for the exact kink.
  std::pair<double, double> blend_interval() const { return {blend_lo_, blend_hi_}; }
  /// Points x >= 0 where W or its derivatives may be non-smooth.
  std::vector<double> breakpoints() const;

  /// L^2 norm of w = W - W0 over the real line.
  double perturbation_l2_norm() const;

 private:
  std::shared_ptr<const KinkProfile> kink_;
  double delta_ = 0;
  double blend_lo_ = 0;
  double blend_hi_ = 0;
};

LinearizedPotential linearize(std::shared_ptr<const KinkProfile> kink);

}  // namespace kinkspec
