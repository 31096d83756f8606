#include "kinkspec/linearized.hpp"

#include <algorithm>
#include <cmath>

#include "kinkspec/numerics.hpp"

namespace kinkspec {

LinearizedPotential::LinearizedPotential(std::shared_ptr<const KinkProfile> kink) : kink_(std::move(kink)) {
  const GammaParams& p = params();
  if (kink_->is_exact()) {
    blend_lo_ = blend_hi_ = p.q;
    return;
  }
  const double eps = kink_->model().epsilon();
  blend_lo_ = kink_->position_of(p.gamma - eps);
  blend_hi_ = kink_->position_of(p.gamma + eps);
  delta_ = std::max(std::abs(p.q - blend_lo_), std::abs(blend_hi_ - p.q));
}

double LinearizedPotential::operator()(double x) const {
  if (is_exact()) return unperturbed(x);
  const double a = std::abs(x);
  if (a <= blend_lo_) return -params().b;
  if (a >= blend_hi_) return params().d;
  return kink_->model().eval(kink_->value(a), 2);
}

double LinearizedPotential::unperturbed(double x) const { return std::abs(x) <= params().q ? -params().b : params().d; }

std::vector<double> LinearizedPotential::breakpoints() const {
  if (is_exact()) return {params().q};
  std::vector<double> pts{blend_lo_, params().q, blend_hi_};
  std::sort(pts.begin(), pts.end());
  return pts;
}

double LinearizedPotential::perturbation_l2_norm() const {
  if (is_exact()) return 0.0;
  const double q = params().q;
  auto sq = [this](double x) {
    const double w = (*this)(x) - unperturbed(x);
    return w * w;
  };
  std::vector<double> cuts{q - delta_, blend_lo_, q, blend_hi_, q + delta_};
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += numerics::integrate(sq, cuts[i], cuts[i + 1], 1e-12);
  return std::sqrt(2.0 * total);
}

LinearizedPotential linearize(std::shared_ptr<const KinkProfile> kink) { return LinearizedPotential(std::move(kink)); }

}  // namespace kinkspec
