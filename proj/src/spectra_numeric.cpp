#include "kinkspec/spectra_numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kinkspec/errors.hpp"
#include "kinkspec/numerics.hpp"
#include "ode.hpp"

namespace kinkspec {

namespace {

using Vec2 = std::array<double, 2>;

std::vector<double> symmetric_breaks(const LinearizedPotential& W) {
  std::vector<double> out;
  for (double b : W.breakpoints()) {
    out.push_back(b);
    out.push_back(-b);
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------- discretize

DiscreteOperator discretize(const LinearizedPotential& W, double L, double h) {
  const double q = W.jump_locus();
  if (!(h > 0.0 && h <= 0.01)) throw DomainError("grid step h must lie in (0, 0.01]");
  if (!(L > 4.0 * q)) {
    std::ostringstream msg;
    msg << "domain half-width L must exceed 4q = " << 4.0 * q;
    throw DomainError(msg.str());
  }
  DiscreteOperator op;
  const auto cells = static_cast<long>(std::ceil(2.0 * q / h - 1e-9));
  op.h = 2.0 * q / static_cast<double>(cells);
  // q = (cells/2) h lies midway between nodes when the lattice offset has the
  // opposite half-integer parity.
  const double offset = (cells % 2 == 1) ? 0.0 : 0.5;
  const auto m = static_cast<long>(std::llround(L / op.h - offset));
  op.L = (static_cast<double>(m) + offset) * op.h;
  const long first = offset == 0.0 ? -(m - 1) : -m;
  const long last = m - 1;
  op.x0 = (static_cast<double>(first) + offset) * op.h;
  op.offdiag = -1.0 / (op.h * op.h);
  op.edge = W.edge();
  op.diag.reserve(static_cast<std::size_t>(last - first + 1));
  for (long j = first; j <= last; ++j) {
    const double x = (static_cast<double>(j) + offset) * op.h;
    op.diag.push_back(2.0 / (op.h * op.h) + W(x));
  }
  if (std::abs(op.h - h) > 1e-15 * h || std::abs(op.L - L) > 1e-12 * L) {
    op.adjusted = true;
    std::ostringstream msg;
    msg.precision(12);
    msg << "grid aligned to the jumps at +-q: h " << h << " -> " << op.h << ", L " << L << " -> " << op.L;
    op.note = msg.str();
  }
  return op;
}

// ------------------------------------------------------------ eigenvalues

std::size_t sturm_count(const DiscreteOperator& op, double shift) {
  const double e2 = op.offdiag * op.offdiag;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  std::size_t count = 0;
  double piv = 1.0;
  for (std::size_t i = 0; i < op.diag.size(); ++i) {
    piv = op.diag[i] - shift - (i == 0 ? 0.0 : e2 / piv);
    if (piv == 0.0) piv = -tiny;
    if (piv < 0.0) ++count;
  }
  return count;
}

std::vector<double> eigs_below_edge(const DiscreteOperator& op, double margin, double tol) {
  if (margin < 0) margin = 10.0 * op.h;
  const double upper = op.edge - margin;
  const std::size_t n = sturm_count(op, upper);
  const double lower = *std::min_element(op.diag.begin(), op.diag.end()) - 2.0 * std::abs(op.offdiag);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double lo = k == 0 ? lower : out.back() - tol;
    double hi = upper;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (sturm_count(op, mid) > k) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

std::vector<double> eigenvector(const DiscreteOperator& op, double lambda) {
  const std::size_t n = op.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.25 * std::sin(0.37 * static_cast<double>(i));
  std::vector<double> c(n), rhs(n);
  const double e = op.offdiag;
  const double shift = lambda + 1e-9 * std::max(1.0, std::abs(lambda));
  for (int iter = 0; iter < 4; ++iter) {
    // Thomas algorithm for (T - shift) y = v.
    double denom = op.diag[0] - shift;
    c[0] = e / denom;
    rhs[0] = v[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
      denom = op.diag[i] - shift - e * c[i - 1];
      c[i] = e / denom;
      rhs[i] = (v[i] - e * rhs[i - 1]) / denom;
    }
    v[n - 1] = rhs[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) v[i] = rhs[i] - c[i] * v[i + 1];
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (!std::isfinite(norm) || norm == 0.0) throw NumericalError("inverse iteration broke down");
    for (double& x : v) x /= norm;
  }
  return v;
}

// ------------------------------------------------------------- ODE oracles

double resonance_indicator(const LinearizedPotential& W, double L, double max_step) {
  if (!(L > W.support_radius())) throw DomainError("resonance indicator needs L beyond the support of W - d");
  const double d = W.edge();
  const double stiffness = (W.params().b + d) * max_step * max_step;
  if (!(stiffness < 0.1)) {
    std::ostringstream msg;
    msg << "resonance indicator step " << max_step << " is unstable for |W - d| <= " << W.params().b + d;
    throw NumericalError(msg.str());
  }
  auto rhs = [&W, d](double x, const Vec2& y) { return Vec2{y[1], (W(x) - d) * y[0]}; };
  const Vec2 end = detail::rk4<2>(rhs, Vec2{1.0, 0.0}, -L, L, symmetric_breaks(W), max_step);
  if (!std::isfinite(end[0]) || !std::isfinite(end[1])) throw NumericalError("resonance indicator diverged");
  return end[1] / std::max(1.0, std::abs(end[0]));
}

std::vector<double> continuum_solution(const LinearizedPotential& W, double lam, std::span<const double> x_grid,
                                       Parity parity, double max_step) {
  std::vector<double> radii;
  radii.reserve(x_grid.size());
  for (double x : x_grid) radii.push_back(std::abs(x));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  const bool odd = parity == Parity::antisymmetric;
  std::vector<double> values(radii.size());
  auto rhs = [&W, lam](double x, const Vec2& y) { return Vec2{y[1], (W(x) - lam) * y[0]}; };
  Vec2 y = odd ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
  double x = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    y = detail::rk4<2>(rhs, y, x, radii[i], W.breakpoints(), max_step);
    x = radii[i];
    values[i] = y[0];
  }
  std::vector<double> out;
  out.reserve(x_grid.size());
  for (double xv : x_grid) {
    const auto idx = static_cast<std::size_t>(std::lower_bound(radii.begin(), radii.end(), std::abs(xv)) - radii.begin());
    out.push_back((odd && xv < 0) ? -values[idx] : values[idx]);
  }
  return out;
}

double refine_odd_eigenvalue(const LinearizedPotential& W, double guess, double window) {
  const double d = W.edge();
  const double xm = W.support_radius() + 1.0;
  auto mismatch = [&](double lam) {
    auto rhs = [&W, lam](double x, const Vec2& y) { return Vec2{y[1], (W(x) - lam) * y[0]}; };
    const Vec2 y = detail::rk4<2>(rhs, Vec2{0.0, 1.0}, 0.0, xm, W.breakpoints(), 2.5e-4);
    return y[1] + std::sqrt(d - lam) * y[0];
  };
  const double lo = guess - window;
  const double hi = std::min(guess + window, d - 1e-9);
  return numerics::find_root(mismatch, lo, hi, 1e-13);
}

FgrIntegral fgr_integral_numeric(const LinearizedPotential& W, double lam1, Parity continuum_parity) {
  if (W.is_exact()) throw DomainError("numeric FGR integral needs a mollified kink (U0''' is a Dirac pair)");
  const double d = W.edge();
  if (!(lam1 > 0.0 && lam1 < d)) throw DomainError("lambda1 must lie in (0, d)");
  const double alpha = std::sqrt(d - lam1);
  const double xm = W.support_radius() + 0.5;
  const auto [blo, bhi] = W.blend_interval();
  const KinkProfile& kink = W.kink();
  const PotentialModel& model = kink.model();
  const double lam4 = 4.0 * lam1;

  using State = std::array<double, 6>;  // phi1, phi1', phi4, phi4', norm, integral
  auto rhs = [&](double x, const State& y) {
    const double w = W(x);
    const double a = std::abs(x);
    double coupling = 0.0;
    if (a > blo && a < bhi) coupling = model.eval(kink.value(x), 3) * y[2] * y[0] * y[0];
    return State{y[1], (w - lam1) * y[0], y[3], (w - lam4) * y[2], y[0] * y[0], coupling};
  };
  const bool odd = continuum_parity == Parity::antisymmetric;
  const State init{0.0, 1.0, odd ? 0.0 : 1.0, odd ? 1.0 : 0.0, 0.0, 0.0};
  const State right = detail::rk4<6>(rhs, init, 0.0, xm, symmetric_breaks(W), 2.5e-4);
  const State left = detail::rk4<6>(rhs, init, 0.0, -xm, symmetric_breaks(W), 2.5e-4);

  // Accumulators run with dx < 0 on the left half.
  const double norm = right[4] - left[4] + (right[0] * right[0] + left[0] * left[0]) / (2.0 * alpha);
  FgrIntegral out{};
  out.right = right[5] / norm;
  out.left = -left[5] / norm;
  out.value = out.left + out.right;
  if (!std::isfinite(out.value)) throw NumericalError("FGR quadrature produced a non-finite value");
  return out;
}

double fgr_limit_analytic(const GammaParams& p) {
  const auto odd = antisym_modes(p);
  if (odd.empty()) throw DomainError("FGR limit needs an antisymmetric eigenvalue");
  const EigenMode& m = odd.front();
  const double beta = std::sqrt(p.b + 4.0 * m.lambda);
  const double phi4 = std::sin(beta * p.q) / beta;
  const double phi1 = eigenfunction_eval(m, p, p.q);
  return 2.0 * (p.b + p.d) * phi4 * phi1 * phi1 / kink_exact_derivative(p, p.q);
}

// ------------------------------------------------------- convergence study

ConvergenceReport convergence_study(double gamma, std::span<const double> epsilons, const ConvergenceOptions& options) {
  const GammaParams p = derive_params(gamma);
  if (!(p.R > std::numbers::pi / 2 && p.R < std::numbers::pi)) {
    throw DomainError("convergence study requires gamma in (gamma_1, gamma_2)");
  }
  if (epsilons.empty()) throw DomainError("convergence study needs at least one epsilon");
  for (std::size_t i = 1; i < epsilons.size(); ++i) {
    if (!(epsilons[i] < epsilons[i - 1])) throw DomainError("epsilons must be strictly decreasing");
  }

  ConvergenceReport rep;
  rep.gamma = gamma;
  rep.d = p.d;
  rep.lambda1_exact = lambda1(p);
  rep.fgr_limit = fgr_limit_analytic(p);
  const Mollifier bump = Mollifier::standard_bump();
  for (const double eps : epsilons) {
    auto model = std::make_shared<const PotentialModel>(build_mollified(gamma, eps, bump));
    const LinearizedPotential W = linearize(make_kink(model));
    const DiscreteOperator op = discretize(W, options.L, options.h);
    const auto eig = eigs_below_edge(op);
    if (eig.size() < 2) {
      std::ostringstream msg;
      msg << "no antisymmetric eigenvalue below the edge at epsilon=" << eps;
      throw NumericalError(msg.str());
    }
    ConvergenceRow row{};
    row.epsilon = eps;
    row.lambda1_fd = eig[1];
    row.lambda1 = refine_odd_eigenvalue(W, eig[1]);
    row.w_norm = W.perturbation_l2_norm();
    row.delta = W.support_pad();
    row.fgr_numeric = fgr_integral_numeric(W, row.lambda1).value;
    rep.rows.push_back(row);
  }

  rep.lambda1_converging = true;
  rep.w_norm_decreasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i - 1];
    const auto& b = rep.rows[i];
    if (!(std::abs(b.lambda1 - rep.lambda1_exact) < std::abs(a.lambda1 - rep.lambda1_exact))) {
      rep.lambda1_converging = false;
    }
    if (!(b.w_norm < a.w_norm)) rep.w_norm_decreasing = false;
  }
  rep.eps0 = 0.0;
  for (auto it = rep.rows.rbegin(); it != rep.rows.rend(); ++it) {
    if (!(4.0 * it->lambda1 > rep.d)) break;
    rep.eps0 = it->epsilon;
  }
  return rep;
}

OracleCheck oracle_check(const SpectralReport& report, double L, double h) {
  auto model = std::make_shared<const PotentialModel>(PotentialModel::exact(report.params));
  const LinearizedPotential W = linearize(make_kink(model));
  const DiscreteOperator op = discretize(W, L, h);
  OracleCheck out;
  out.L = op.L;
  out.h = op.h;
  out.eigenvalues = eigs_below_edge(op);
  std::vector<double> analytic;
  for (const auto& m : report.modes) {
    if (m.lambda < op.edge - 10.0 * op.h) analytic.push_back(m.lambda);
  }
  out.counts_match = analytic.size() == out.eigenvalues.size();
  out.max_abs_diff = out.counts_match ? 0.0 : std::numeric_limits<double>::infinity();
  if (out.counts_match) {
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      out.max_abs_diff = std::max(out.max_abs_diff, std::abs(analytic[i] - out.eigenvalues[i]));
    }
  }
  return out;
}

}  // namespace kinkspec

namespace kinkspec {

MollifiedCheck mollified_check(double gamma, double epsilon, double L, double h) {
  const GammaParams p = derive_params(gamma);
  if (!(p.R > std::numbers::pi / 2 && p.R < std::numbers::pi)) {
    throw DomainError("mollified certificate requires gamma in (gamma_1, gamma_2)");
  }
  auto model = std::make_shared<const PotentialModel>(build_mollified(gamma, epsilon, Mollifier::standard_bump()));
  const LinearizedPotential W = linearize(make_kink(model));
  MollifiedCheck out;
  out.epsilon = epsilon;
  out.deviation_constant = model->deviation_constant();
  out.eigenvalues = eigs_below_edge(discretize(W, L, h));
  out.w_norm = W.perturbation_l2_norm();
  out.delta = W.support_pad();
  out.fgr_limit = fgr_limit_analytic(p);
  out.resonance_indicator = resonance_indicator(W, L);
  out.u2 = std::abs(out.resonance_indicator) > kResonanceThreshold;
  if (out.eigenvalues.size() >= 2) {
    out.lambda1 = refine_odd_eigenvalue(W, out.eigenvalues[1]);
    out.ratio = 4.0 * out.lambda1 / p.d;
    out.u3 = out.eigenvalues.size() == 2 && out.ratio > 1.0;
    out.fgr_numeric = fgr_integral_numeric(W, out.lambda1).value;
    out.u4 = out.u3 && std::abs(out.fgr_numeric) > kFgrThreshold;
  }
  return out;
}

}  // namespace kinkspec
