#include "kinkspec/wave_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kinkspec/errors.hpp"

namespace kinkspec {

double BoostSpec::kappa() const { return 1.0 / std::sqrt(1.0 - v * v); }

FieldState init_state(std::shared_ptr<const PotentialModel> model, const InitialProfile& profile, double L,
                      double dx) {
  return init_state(make_kink(std::move(model)), profile, L, dx);
}

FieldState init_state(std::shared_ptr<const KinkProfile> kink, const InitialProfile& profile, double L, double dx) {
  const GammaParams& p = kink->model().params();
  if (!(dx > 0.0) || 1.0 / std::sqrt(p.d) < 20.0 * dx) {
    std::ostringstream msg;
    msg << "grid too coarse: dx must be at most 1/(20 sqrt(d)) = " << 1.0 / (20.0 * std::sqrt(p.d));
    throw DomainError(msg.str());
  }
  if (!(L > 4.0 * p.q + 1.0)) throw DomainError("domain half-width L too small for the kink");
  const auto cells = static_cast<std::size_t>(std::llround(2.0 * L / dx));
  FieldState s;
  s.L = L;
  s.dx = 2.0 * L / static_cast<double>(cells);
  s.model = kink->model_ptr();
  s.x.resize(cells + 1);
  s.psi.resize(cells + 1);
  s.pi.assign(cells + 1, 0.0);
  for (std::size_t i = 0; i <= cells; ++i) s.x[i] = -L + static_cast<double>(i) * s.dx;

  std::visit(
      [&](const auto& prof) {
        using T = std::decay_t<decltype(prof)>;
        if constexpr (std::is_same_v<T, StaticKink>) {
          for (std::size_t i = 0; i <= cells; ++i) s.psi[i] = kink->value(s.x[i]);
        } else if constexpr (std::is_same_v<T, BoostSpec>) {
          if (!(std::abs(prof.v) < 1.0)) throw DomainError("boost velocity must satisfy |v| < 1");
          const double k = prof.kappa();
          for (std::size_t i = 0; i <= cells; ++i) {
            const double arg = k * (s.x[i] - prof.q0);
            s.psi[i] = kink->value(arg);
            s.pi[i] = -prof.v * k * kink->derivative(arg);
          }
        } else {
          if (!(prof.width > 0.0)) throw DomainError("perturbation width must be positive");
          const double odd_scale = std::sqrt(2.0 * std::exp(1.0));
          for (std::size_t i = 0; i <= cells; ++i) {
            const double u = (s.x[i] - prof.center) / prof.width;
            const double shape =
                prof.parity == Parity::symmetric ? std::exp(-u * u) : odd_scale * u * std::exp(-u * u);
            s.psi[i] = kink->value(s.x[i]) + prof.amplitude * shape;
          }
        }
      },
      profile);
  s.psi.front() = -1.0;
  s.psi.back() = 1.0;
  s.pi.front() = s.pi.back() = 0.0;
  return s;
}

namespace {

void kick(FieldState& s, double half_dt) {
  const double inv = 1.0 / (s.dx * s.dx);
  const auto& model = *s.model;
  const std::size_t n = s.psi.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double lap = (s.psi[i - 1] - 2.0 * s.psi[i] + s.psi[i + 1]) * inv;
    s.pi[i] += half_dt * (lap - model.eval(s.psi[i], 1));
  }
}

}  // namespace

void step(FieldState& s, double dt) {
  if (!(std::abs(dt) <= 0.5 * s.dx * (1.0 + 1e-12)) || dt == 0.0) {
    std::ostringstream msg;
    msg << "time step violates the CFL bound |dt| <= 0.5 dx = " << 0.5 * s.dx << " (dt = " << dt << ")";
    throw DomainError(msg.str());
  }
  kick(s, 0.5 * dt);
  const std::size_t n = s.psi.size();
  for (std::size_t i = 1; i + 1 < n; ++i) s.psi[i] += dt * s.pi[i];
  kick(s, 0.5 * dt);
  s.t += dt;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(s.psi[i]) || !std::isfinite(s.pi[i])) {
      std::ostringstream msg;
      msg << "field became non-finite at t = " << s.t;
      throw NumericalError(msg.str());
    }
  }
}

double energy(const FieldState& s) {
  const auto& model = *s.model;
  double e = 0.0;
  for (std::size_t i = 0; i < s.psi.size(); ++i) e += 0.5 * s.pi[i] * s.pi[i] + model.eval(s.psi[i], 0);
  for (std::size_t i = 0; i + 1 < s.psi.size(); ++i) {
    const double g = (s.psi[i + 1] - s.psi[i]) / s.dx;
    e += 0.5 * g * g;
  }
  return e * s.dx;
}

namespace {

double crossing(const FieldState& s, double level, bool require_unique) {
  std::size_t hits = 0;
  double where = 0.0;
  for (std::size_t i = 0; i + 1 < s.psi.size(); ++i) {
    const double a = s.psi[i] - level;
    const double b = s.psi[i + 1] - level;
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
      if (hits == 0) where = s.x[i] + s.dx * a / (a - b);
      ++hits;
    }
  }
  if (hits == 0 || (require_unique && hits > 1)) {
    std::ostringstream msg;
    msg << "expected one crossing of psi = " << level << ", found " << hits << " at t = " << s.t;
    throw NumericalError(msg.str());
  }
  return where;
}

}  // namespace

double track_center(const FieldState& s) { return crossing(s, 0.0, true); }

double profile_width(const FieldState& s, double level) { return crossing(s, level, true) - crossing(s, -level, true); }

DiagnosticSample diagnose(const FieldState& s, const KinkProfile& reference, double window) {
  DiagnosticSample out{};
  out.t = s.t;
  out.center = track_center(s);
  out.energy = energy(s);
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (std::abs(s.x[i] - out.center) > window) continue;
    out.window_sup = std::max(out.window_sup, std::abs(s.psi[i] - reference.value(s.x[i] - out.center)));
  }
  return out;
}

std::vector<DiagnosticSample> perturbation_diagnostics(std::span<const FieldState> run, const KinkProfile& reference,
                                                       double window) {
  std::vector<DiagnosticSample> out;
  out.reserve(run.size());
  for (const auto& s : run) out.push_back(diagnose(s, reference, window));
  return out;
}

void simulate(const SimulationConfig& config, const std::function<void(const FieldState&)>& on_frame,
              const std::function<void(const DiagnosticSample&)>& on_diagnostic) {
  const GammaParams p = derive_params(config.gamma);
  auto model = std::make_shared<const PotentialModel>(
      config.epsilon > 0.0 ? build_mollified(config.gamma, config.epsilon, Mollifier::standard_bump())
                           : PotentialModel::exact(p));
  auto kink = make_kink(model);
  FieldState state = init_state(kink, config.profile, config.L, config.dx);
  if (!(config.dt > 0.0)) throw DomainError("dt must be positive");
  if (!(config.t_end >= 0.0)) throw DomainError("t_end must be nonnegative");
  const auto steps = static_cast<long>(std::llround(config.t_end / config.dt));

  auto emit = [&](long i) {
    if (on_frame && config.frame_stride > 0 && i % config.frame_stride == 0) on_frame(state);
    if (on_diagnostic && config.diagnostic_stride > 0 && i % config.diagnostic_stride == 0) {
      on_diagnostic(diagnose(state, *kink, config.window));
    }
  };
  emit(0);
  for (long i = 1; i <= steps; ++i) {
    step(state, config.dt);
    state.t = static_cast<double>(i) * config.dt;
    emit(i);
  }
}

}  // namespace kinkspec
