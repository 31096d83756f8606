#pragma once

// Leapfrog simulator for psi_tt = psi_xx - U'(psi) on [-L, L] with the
// field pinned to the kink asymptotics -1 and +1 at the ends.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kinkspec/kink.hpp"
#include "kinkspec/spectra_analytic.hpp"

namespace kinkspec {

struct FieldState {
  double L = 0;
  double dx = 0;
  double t = 0;
  std::vector<double> x;
  std::vector<double> psi;
  std::vector<double> pi;  ///< psi_t
  std::shared_ptr<const PotentialModel> model;
};

struct StaticKink {};

struct BoostSpec {
  double v = 0;   ///< |v| < 1
  double q0 = 0;  ///< initial centre
  double kappa() const;
};

/// Static kink plus a localised bump a * shape((x - center)/width) added to psi.
/// The even shape is exp(-u^2), the odd one sqrt(2e) u exp(-u^2); both peak at 1.
struct PerturbedKink {
  double amplitude = 0;
  double width = 1;
  double center = 0;
  Parity parity = Parity::antisymmetric;
};

using InitialProfile = std::variant<StaticKink, BoostSpec, PerturbedKink>;

/// DomainError if the kink width 1/sqrt(d) spans fewer than 20 cells or the profile is invalid.
FieldState init_state(std::shared_ptr<const PotentialModel> model, const InitialProfile& profile, double L, double dx);

/// Same, sampling an already built kink of the same model.
FieldState init_state(std::shared_ptr<const KinkProfile> kink, const InitialProfile& profile, double L, double dx);

/// One kick-drift-kick step in place. dt may be negative (time reversal).
/// DomainError if |dt| > 0.5 dx; NumericalError on non-finite values.
void step(FieldState& state, double dt);

/// Discrete energy sum [pi^2/2 + U(psi)] dx + sum (dpsi/dx)^2/2 dx.
double energy(const FieldState& state);

/// Linearly interpolated zero crossing of psi. NumericalError unless exactly one.
double track_center(const FieldState& state);

/// x(psi = +level) - x(psi = -level) on the monotone core.
double profile_width(const FieldState& state, double level = 0.5);

struct DiagnosticSample {
  double t;
  double center;
  double window_sup;  ///< sup over |x - center| <= window of |psi - s(x - center)|
  double energy;
};

DiagnosticSample diagnose(const FieldState& state, const KinkProfile& reference, double window);

std::vector<DiagnosticSample> perturbation_diagnostics(std::span<const FieldState> run, const KinkProfile& reference,
                                                       double window);

struct SimulationConfig {
  double gamma = 0.75;
  double epsilon = 0;  ///< 0 selects the exact potential
  InitialProfile profile = StaticKink{};
  double L = 30;
  double dx = 0.02;
  double dt = 0.01;
  double t_end = 50;
  int frame_stride = 0;       ///< steps between frames, 0 disables frames
  int diagnostic_stride = 10;  ///< steps between diagnostic samples
  double window = 5;
};

/// Runs a simulation, calling the sinks at the configured strides (and at t = 0).
void simulate(const SimulationConfig& config, const std::function<void(const FieldState&)>& on_frame,
              const std::function<void(const DiagnosticSample&)>& on_diagnostic);

}  // namespace kinkspec
