#include "kinkspec/spectra_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kinkspec/errors.hpp"
#include "kinkspec/numerics.hpp"

namespace kinkspec {

namespace {

using std::numbers::pi;

constexpr double kXiTol = 1e-14;

EigenMode make_mode(const GammaParams& p, double xi, double eta, Parity parity) {
  EigenMode m;
  m.parity = parity;
  m.xi = xi;
  m.eta = eta;
  m.beta = xi / p.q;
  m.alpha = eta / p.q;
  m.lambda = m.beta * m.beta - p.b;

  const bool odd = parity == Parity::antisymmetric;
  const double trig = odd ? std::sin(xi) : std::cos(xi);
  const double inner = 0.5 * p.q + (odd ? -1.0 : 1.0) * std::sin(2.0 * xi) / (4.0 * m.beta);
  const double outer = trig * trig / (2.0 * m.alpha);
  m.coefB = 1.0 / std::sqrt(2.0 * (inner + outer));
  m.coefA = m.coefB * trig * std::exp(eta);
  return m;
}

bool in_two_mode_window(const GammaParams& p) { return p.R > pi / 2 && p.R < pi; }

}  // namespace

const char* to_string(Parity p) { return p == Parity::antisymmetric ? "antisymmetric" : "symmetric"; }

std::vector<EigenMode> antisym_modes(const GammaParams& p) {
  // Branch k: xi in ((k - 1/2) pi, min(k pi, R)). The relation -eta = xi cot xi
  // is multiplied through by sin xi to remove the pole at k pi.
  std::vector<EigenMode> modes;
  const double R = p.R;
  auto f = [R](double xi) { return xi * std::cos(xi) + std::sqrt(std::max(0.0, R * R - xi * xi)) * std::sin(xi); };
  for (int k = 1; (k - 0.5) * pi < R; ++k) {
    const double lo = (k - 0.5) * pi;
    const double hi = std::min(k * pi, R);
    const double xi = numerics::find_root(f, lo, hi, kXiTol);
    const double eta = std::sqrt(std::max(0.0, R * R - xi * xi));
    if (eta < kEdgeEta) continue;
    modes.push_back(make_mode(p, xi, eta, Parity::antisymmetric));
  }
  return modes;
}

std::vector<EigenMode> sym_modes(const GammaParams& p) {
  // Branch k: xi in (k pi, min((k + 1/2) pi, R)); eta = xi tan xi times cos xi.
  std::vector<EigenMode> modes;
  const double R = p.R;
  auto g = [R](double xi) { return xi * std::sin(xi) - std::sqrt(std::max(0.0, R * R - xi * xi)) * std::cos(xi); };
  for (int k = 0; k * pi < R; ++k) {
    const double lo = k * pi;
    const double hi = std::min((k + 0.5) * pi, R);
    const double xi = numerics::find_root(g, lo, hi, kXiTol);
    const double eta = std::sqrt(std::max(0.0, R * R - xi * xi));
    if (eta < kEdgeEta) continue;
    modes.push_back(make_mode(p, xi, eta, Parity::symmetric));
  }
  return modes;
}

std::vector<EigenMode> all_modes(const GammaParams& p) {
  auto modes = sym_modes(p);
  auto odd = antisym_modes(p);
  modes.insert(modes.end(), odd.begin(), odd.end());
  std::sort(modes.begin(), modes.end(), [](const EigenMode& a, const EigenMode& b) { return a.lambda < b.lambda; });
  return modes;
}

double gamma_k(int k) {
  if (k < 1) throw DomainError("gamma_k requires k >= 1");
  const double target = k * pi / 2.0;
  return numerics::find_root([target](double g) { return circle_radius(g) - target; }, 1e-12, 1.0 - 1e-15, 0.0);
}

Lambda1 lambda1_solution(const GammaParams& p) {
  if (!(p.R > pi / 2 && p.R <= 1.5 * pi * (1 + 1e-14))) {
    std::ostringstream msg;
    msg << "lambda1 requires gamma in (gamma_1, gamma_3] = (" << gamma_k(1) << ", " << gamma_k(3) << "], got "
        << p.gamma;
    throw DomainError(msg.str());
  }
  const double R = p.R;
  const double xi = numerics::find_root([R](double x) { return x - R * std::sin(x); }, pi / 2, pi, kXiTol);
  const double s = std::sin(xi);
  return {(s * s / (1.0 - p.gamma) - 1.0) / p.gamma, xi};
}

double lambda1(const GammaParams& p) { return lambda1_solution(p).lambda; }

U2Check check_U2(const GammaParams& p, double tol) {
  U2Check out;
  const int k0 = static_cast<int>(std::floor(2.0 * p.R / pi));
  out.distance = std::numeric_limits<double>::infinity();
  for (int k = std::max(1, k0); k <= k0 + 1; ++k) {
    const double gk = gamma_k(k);
    const double dist = std::abs(p.gamma - gk);
    if (dist < out.distance) {
      out.distance = dist;
      out.nearest_k = k;
      out.nearest_gamma_k = gk;
    }
  }
  out.holds = out.distance > tol;
  return out;
}

U3Check check_U3(const GammaParams& p) {
  if (!in_two_mode_window(p)) {
    std::ostringstream msg;
    msg << "U3 check requires gamma in (gamma_1, gamma_2) = (" << gamma_k(1) << ", " << gamma_k(2) << "), got "
        << p.gamma;
    throw DomainError(msg.str());
  }
  const Lambda1 l1 = lambda1_solution(p);
  U3Check out;
  out.lambda1 = l1.lambda;
  out.xi = l1.xi;
  const double c = std::cos(l1.xi);
  out.cos2_test = 4.0 * c * c;
  out.ratio = 4.0 * l1.lambda / p.d;
  const bool trig_form = out.cos2_test < 3.0 * p.gamma;
  const bool direct_form = out.ratio > 1.0;
  if (trig_form != direct_form) {
    std::ostringstream msg;
    msg << "U3 tests disagree at gamma=" << p.gamma << ": 4cos^2(xi)=" << out.cos2_test << ", 4lambda1/d=" << out.ratio;
    throw NumericalError(msg.str());
  }
  out.holds = trig_form;
  return out;
}

double solve_u3_bound() {
  auto f = [](double a) {
    return circle_radius(a) - 2.0 * (pi - std::acos(std::sqrt(3.0 * a) / 2.0)) / std::sqrt(4.0 - 3.0 * a);
  };
  const double alpha = numerics::find_root(f, 0.5, 0.999, 0.0);
  if (!(alpha > gamma_k(2))) throw NumericalError("U3 bound does not exceed gamma_2");
  return alpha;
}

double fgr_value_analytic(const GammaParams& p) {
  if (!in_two_mode_window(p)) {
    std::ostringstream msg;
    msg << "FGR value requires gamma in (gamma_1, gamma_2), got " << p.gamma;
    throw DomainError(msg.str());
  }
  const double beta = std::sqrt(p.b + 4.0 * lambda1(p));
  return std::sin(beta * p.q);
}

GammaStar solve_gamma_star() {
  const double xi2 = lambda1_solution(derive_params(gamma_k(2))).xi;
  auto theta1 = [](double xi) { return std::sqrt(std::max(0.0, (4.0 * xi * xi - pi * pi) / 3.0)); };
  auto theta2 = [](double xi) {
    const double rhs = std::sin(xi) / xi;
    return numerics::find_root([rhs](double th) { return std::cos(th) - th * rhs; }, 0.0, pi / 2, kXiTol);
  };
  const double xi = numerics::find_root([&](double x) { return theta1(x) - theta2(x); }, pi / 2, xi2, kXiTol);
  const double theta = theta2(xi);
  const double s = std::sin(theta);
  return {s * s, xi, theta, xi2, theta1(xi2), theta2(xi2)};
}

double eigenfunction_eval(const EigenMode& m, const GammaParams& p, double x) {
  const double a = std::abs(x);
  const bool odd = m.parity == Parity::antisymmetric;
  if (a <= p.q) return odd ? m.coefB * std::sin(m.beta * x) : m.coefB * std::cos(m.beta * x);
  const double tail = m.coefA * std::exp(-m.alpha * a);
  return (odd && x < 0) ? -tail : tail;
}

double eigenfunction_derivative(const EigenMode& m, const GammaParams& p, double x) {
  const double a = std::abs(x);
  const bool odd = m.parity == Parity::antisymmetric;
  if (a <= p.q) return odd ? m.coefB * m.beta * std::cos(m.beta * x) : -m.coefB * m.beta * std::sin(m.beta * x);
  const double tail = -m.alpha * m.coefA * std::exp(-m.alpha * a);
  return (!odd && x < 0) ? -tail : tail;
}

SpectralReport certify(double gamma, const CertifyOptions& options) {
  SpectralReport r;
  r.gamma = gamma;
  r.params = derive_params(gamma);
  const GammaParams& p = r.params;
  r.modes = all_modes(p);

  r.u1.holds = true;
  r.u1.k_note = "K = infinity (exact quadratic wells): U - (d/2)(psi -+ 1)^2 vanishes identically near psi = +-1";
  r.u1.smoothness_note =
      "U0 is only C^1: U0'' jumps at psi = +-gamma; smoothness is restored by mollification";

  r.u2 = check_U2(p, options.resonance_tol);

  if (in_two_mode_window(p)) {
    r.u3 = check_U3(p);
    r.u3.holds = r.u3.holds && r.modes.size() == 2;
  } else {
    r.u3.holds = false;
    if (p.R > pi / 2 && p.R <= 1.5 * pi * (1 + 1e-14)) {
      const Lambda1 l1 = lambda1_solution(p);
      const double c = std::cos(l1.xi);
      r.u3.lambda1 = l1.lambda;
      r.u3.xi = l1.xi;
      r.u3.cos2_test = 4.0 * c * c;
      r.u3.ratio = 4.0 * l1.lambda / p.d;
    }
  }

  if (in_two_mode_window(p)) {
    static const double gamma_star = solve_gamma_star().gamma;
    r.u4.fgr_value = fgr_value_analytic(p);
    r.u4.distance_to_gamma_star = std::abs(gamma - gamma_star);
    r.u4.holds = *r.u4.distance_to_gamma_star > options.fgr_tol && *r.u4.fgr_value != 0.0;
  } else {
    r.u4.holds = false;
    r.u4.note = "gamma outside (gamma_1, gamma_2): the discrete spectrum is not {0, lambda1}";
  }
  return r;
}

}  // namespace kinkspec
