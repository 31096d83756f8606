#include "kinkspec/kink.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kinkspec/errors.hpp"
#include "kinkspec/numerics.hpp"

namespace kinkspec {

double kink_exact(const GammaParams& p, double x) {
  const double a = std::abs(x);
  const double v = a <= p.q ? p.C * std::sin(std::sqrt(p.b) * a) : 1.0 + p.A * std::exp(-std::sqrt(p.d) * a);
  return x < 0 ? -v : v;
}

double kink_exact_derivative(const GammaParams& p, double x) {
  const double a = std::abs(x);
  if (a <= p.q) return p.C * std::sqrt(p.b) * std::cos(std::sqrt(p.b) * a);
  return -std::sqrt(p.d) * p.A * std::exp(-std::sqrt(p.d) * a);
}

double kink_exact_second_derivative(const GammaParams& p, double x) {
  const double a = std::abs(x);
  const double v = a <= p.q ? -p.b * p.C * std::sin(std::sqrt(p.b) * a) : p.d * p.A * std::exp(-std::sqrt(p.d) * a);
  return x < 0 ? -v : v;
}

KinkProfile::KinkProfile(std::shared_ptr<const PotentialModel> model) : model_(std::move(model)) {
  if (!model_ || model_->kind() != PotentialKind::exact) {
    throw DomainError("KinkProfile(model) expects the exact potential; use kink_mollified");
  }
}

KinkProfile::Local KinkProfile::eval_positive(double x) const {
  const double root_d = std::sqrt(model_->params().d);
  if (x >= tail_switch_) {
    const double e = tail_coef_ * std::exp(-root_d * (x - tail_switch_));
    return {1.0 - e, root_d * e, -root_d * root_d * e};
  }
  const auto n = static_cast<long>(s_.size());
  long k = static_cast<long>(std::floor(x / step_));
  k = std::clamp(k, 0L, n - 2);
  const double t = x / step_ - static_cast<double>(k);
  const auto q = numerics::hermite5(t, step_, s_[k], ds_[k], dds_[k], s_[k + 1], ds_[k + 1], dds_[k + 1]);
  return {q.value, q.d1, q.d2};
}

double KinkProfile::value(double x) const {
  if (is_exact()) return kink_exact(model_->params(), x);
  const double v = eval_positive(std::abs(x)).s;
  return x < 0 ? -v : v;
}

double KinkProfile::derivative(double x) const {
  if (is_exact()) return kink_exact_derivative(model_->params(), x);
  return eval_positive(std::abs(x)).ds;
}

double KinkProfile::second_derivative(double x) const {
  if (is_exact()) return kink_exact_second_derivative(model_->params(), x);
  const double v = eval_positive(std::abs(x)).dds;
  return x < 0 ? -v : v;
}

double KinkProfile::position_of(double s) const {
  if (!(std::abs(s) < 1.0)) throw DomainError("position_of: |s| must be < 1");
  if (s < 0) return -position_of(-s);
  const GammaParams& p = model_->params();
  if (is_exact()) {
    if (s <= p.gamma) return std::asin(s / p.C) / std::sqrt(p.b);
    return -std::log((1.0 - s) / (-p.A)) / std::sqrt(p.d);
  }
  if (s >= s_.back()) return tail_switch_ + std::log(tail_coef_ / (1.0 - s)) / std::sqrt(p.d);
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const auto k = static_cast<std::size_t>(std::distance(s_.begin(), it)) - 1;
  const auto& model = *model_;
  const double dx = numerics::integrate([&model](double u) { return 1.0 / std::sqrt(2.0 * model.eval(u, 0)); },
                                        s_[k], s, 1e-14);
  return static_cast<double>(k) * step_ + dx;
}

KinkProfile kink_mollified(std::shared_ptr<const PotentialModel> model, double step) {
  if (!model || model->kind() != PotentialKind::mollified) {
    throw DomainError("kink_mollified requires a mollified potential model");
  }
  if (!(step > 0.0 && step <= 0.01)) throw DomainError("kink table step must lie in (0, 0.01]");

  const auto& m = *model;
  auto speed = [&m](double s) { return std::sqrt(2.0 * m.eval(s, 0)); };
  auto inv_speed = [&m](double u) { return 1.0 / std::sqrt(2.0 * m.eval(u, 0)); };
  const double s_stop = 1.0 - KinkProfile::kTailGap;

  KinkProfile k;
  k.model_ = model;
  k.step_ = step;
  k.s_.push_back(0.0);
  k.ds_.push_back(speed(0.0));
  k.dds_.push_back(m.eval(0.0, 1));

  for (std::size_t i = 0; i < 1000000; ++i) {
    const double s0 = k.s_.back();
    double s = s0 + step * k.ds_.back() + 0.5 * step * step * k.dds_.back();
    if (s >= 1.0) s = 0.5 * (s0 + 1.0);
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      const double g = numerics::integrate(inv_speed, s0, s, 1e-13, 6) - step;
      double next = s - g * speed(s);
      if (next >= 1.0) next = 0.5 * (s + 1.0);
      if (next <= s0) next = 0.5 * (s0 + s);
      const bool small = std::abs(g) < 1e-13 || std::abs(next - s) <= 4e-16;
      s = next;
      if (small) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "kink inversion did not converge on s in [" << s0 << ", " << s << "]";
      throw NumericalError(msg.str());
    }
    if (s >= s_stop) break;
    k.s_.push_back(s);
    k.ds_.push_back(speed(s));
    k.dds_.push_back(m.eval(s, 1));
  }
  if (k.s_.size() < 4) throw NumericalError("kink table too short; reduce the step");
  k.tail_switch_ = static_cast<double>(k.s_.size() - 1) * step;
  k.tail_coef_ = 1.0 - k.s_.back();
  return k;
}

std::shared_ptr<const KinkProfile> make_kink(std::shared_ptr<const PotentialModel> model) {
  if (model->kind() == PotentialKind::exact) return std::make_shared<const KinkProfile>(std::move(model));
  return std::make_shared<const KinkProfile>(kink_mollified(std::move(model)));
}

}  // namespace kinkspec
