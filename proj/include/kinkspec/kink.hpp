#pragma once

#include <memory>
#include <vector>

#include "kinkspec/potential.hpp"

namespace kinkspec {

/// Closed-form kink s0 of the piecewise-parabolic potential.
double kink_exact(const GammaParams& p, double x);
/// s0' and s0'' by branch formulas (one-sided outer branch at |x| = q).
double kink_exact_derivative(const GammaParams& p, double x);
double kink_exact_second_derivative(const GammaParams& p, double x);

/// Odd monotone kink s(x) of a PotentialModel.
///
/// The exact model uses the closed form. The mollified model stores s, s'
/// and s'' on a uniform grid x in [0, tail_switch], built by inverting
/// x(s) = int_0^s du / sqrt(2 U_eps(u)), and continues with the exact
/// exponential tail 1 - c exp(-sqrt(d) x) of the quadratic outer well.
class KinkProfile {
 public:
  static constexpr double kTailGap = 1e-6;  ///< 1 - s at the tail switch

  explicit KinkProfile(std::shared_ptr<const PotentialModel> model);  // exact model only

  const PotentialModel& model() const { return *model_; }
  std::shared_ptr<const PotentialModel> model_ptr() const { return model_; }
  bool is_exact() const { return model_->kind() == PotentialKind::exact; }

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  /// Inverse of the profile: x with s(x) = s, for |s| < 1.
  double position_of(double s) const;

  double tail_switch() const { return tail_switch_; }
  double table_step() const { return step_; }
  std::size_t table_size() const { return s_.size(); }

 private:
  friend KinkProfile kink_mollified(std::shared_ptr<const PotentialModel>, double);

  KinkProfile() = default;
  struct Local {
    double s, ds, dds;
  };
  Local eval_positive(double x) const;

  std::shared_ptr<const PotentialModel> model_;
  double step_ = 0;
  double tail_switch_ = 0;
  double tail_coef_ = 0;  // 1 - s = tail_coef_ * exp(-sqrt(d) (x - tail_switch_))
  std::vector<double> s_, ds_, dds_;
};

/// Mollified kink on a uniform table with spacing `step`.
/// Throws DomainError for an exact model, NumericalError if the inversion fails.
KinkProfile kink_mollified(std::shared_ptr<const PotentialModel> model, double step = 2e-3);

/// Kink of either model kind.
std::shared_ptr<const KinkProfile> make_kink(std::shared_ptr<const PotentialModel> model);

}  // namespace kinkspec
