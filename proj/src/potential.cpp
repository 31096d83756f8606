#include "kinkspec/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kinkspec/errors.hpp"
#include "kinkspec/numerics.hpp"

namespace kinkspec {

namespace {

constexpr const char* kPotentialSchema = "kinkspec.potential/1";

double parity_sign(int order) { return (order % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

GammaParams derive_params(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    std::ostringstream msg;
    msg << "gamma must lie in (0,1), got " << gamma;
    throw DomainError(msg.str());
  }
  GammaParams p;
  p.gamma = gamma;
  p.b = 1.0 / gamma;
  p.d = 1.0 / (1.0 - gamma);
  const double root = std::sqrt(gamma);
  const double arc = std::asin(root);
  p.C = root;
  p.q = root * arc;
  p.A = (gamma - 1.0) * std::exp(std::sqrt(gamma / (1.0 - gamma)) * arc);
  p.R = arc / std::sqrt(1.0 - gamma);
  return p;
}

double circle_radius(double gamma) { return std::asin(std::sqrt(gamma)) / std::sqrt(1.0 - gamma); }

double u0(const GammaParams& p, double psi, int order) {
  const double a = std::abs(psi);
  if (a < p.gamma) {
    switch (order) {
      case 0: return 0.5 - 0.5 * p.b * psi * psi;
      case 1: return -p.b * psi;
      case 2: return -p.b;
      default: return 0.0;
    }
  }
  const double well = psi > 0 ? 1.0 : -1.0;
  switch (order) {
    case 0: return 0.5 * p.d * (psi - well) * (psi - well);
    case 1: return p.d * (psi - well);
    case 2: return p.d;
    default: return 0.0;
  }
}

// ---------------------------------------------------------------- Mollifier

Mollifier Mollifier::standard_bump() {
  return Mollifier([](double u) { return std::exp(-1.0 / (1.0 - u * u)); }, "bump exp(-1/(1-u^2))");
}

Mollifier::Mollifier(std::function<double(double)> shape, std::string name)
    : shape_(std::move(shape)), name_(std::move(name)) {
  for (int i = 0; i <= 64; ++i) {
    const double u = -1.0 + (i + 0.5) / 32.5;
    const double v = shape_(u);
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("mollifier must be nonnegative and finite on (-1,1)");
    const double mirror = shape_(-u);
    if (std::abs(v - mirror) > 1e-12 * std::max(1.0, std::abs(v))) throw DomainError("mollifier must be even");
  }
  norm_ = numerics::integrate([this](double u) { return shape_(u); }, -1.0, 1.0, 1e-15);
  if (!(norm_ > 0.0)) throw DomainError("mollifier must have positive mass");
  m2_ = numerics::integrate([this](double u) { return u * u * shape_(u); }, -1.0, 1.0, 1e-15) / norm_;
}

double Mollifier::operator()(double u) const {
  if (u <= -1.0 || u >= 1.0) return 0.0;
  return shape_(u) / norm_;
}

std::array<double, 3> Mollifier::incomplete_moments(double t) const {
  if (t <= -1.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, m2_};
  std::array<double, 3> m{};
  for (int k = 0; k < 3; ++k) {
    m[k] = numerics::integrate([this, k](double u) { return std::pow(u, k) * (*this)(u); }, -1.0, t, 1e-15);
  }
  return m;
}

std::vector<std::array<double, 3>> Mollifier::incomplete_moments(const std::vector<double>& ts) const {
  // Accumulates over consecutive pieces; each piece is short and smooth.
  std::vector<std::array<double, 3>> out;
  out.reserve(ts.size());
  std::array<double, 3> acc{};
  double prev = -1.0;
  double last = -std::numeric_limits<double>::infinity();
  for (double t : ts) {
    if (t < last) throw DomainError("incomplete_moments: abscissae must be ascending");
    const double hi = std::min(t, 1.0);
    if (hi > prev) {
      for (int k = 0; k < 3; ++k) {
        acc[k] += numerics::integrate([this, k](double u) { return std::pow(u, k) * (*this)(u); }, prev, hi, 1e-14, 8);
      }
      prev = hi;
    }
    last = t;
    out.push_back(t >= 1.0 ? std::array<double, 3>{1.0, 0.0, m2_} : acc);
  }
  return out;
}

// ----------------------------------------------------------- PotentialModel

PotentialModel PotentialModel::exact(const GammaParams& params) {
  PotentialModel m;
  m.kind_ = PotentialKind::exact;
  m.params_ = params;
  return m;
}

double PotentialModel::eval(double psi, int order) const { return eval_flagged(psi, order).value; }

PotentialValue PotentialModel::eval_flagged(double psi, int order) const {
  if (order < 0 || order > 3) {
    std::ostringstream msg;
    msg << "derivative order must be in 0..3, got " << order;
    throw DomainError(msg.str());
  }
  if (kind_ == PotentialKind::exact) {
    const bool on_junction = std::abs(psi) == params_.gamma;
    return {eval_exact(psi, order), order == 3 && on_junction};
  }
  const double a = std::abs(psi);
  const double g = params_.gamma;
  double value;
  if (a >= g + epsilon_) {
    value = u0(params_, psi, order);
  } else if (a <= g - epsilon_) {
    value = u0(params_, psi, order) - (order == 0 ? mu_ + nu_ : 0.0);
  } else {
    value = eval_blend(a, order);
    if (psi < 0) value *= parity_sign(order);
  }
  return {value, false};
}

double PotentialModel::eval_exact(double psi, int order) const {
  // On |psi| = gamma the outer branch is used; it agrees with the inner one
  // for orders 0 and 1.
  if (std::abs(psi) == params_.gamma) {
    if (order == 2) return params_.d;
    if (order == 3) return 0.0;
  }
  return u0(params_, psi, order);
}

double PotentialModel::eval_blend(double abs_psi, int order) const {
  const auto n = static_cast<long>(table_.size());
  const double pos = (abs_psi - table_start_) / step_;
  long k = static_cast<long>(std::floor(pos));
  k = std::clamp(k, 1L, n - 3);
  const double t = pos - static_cast<double>(k);
  const auto& a = table_[k].u;
  const auto& b = table_[k + 1].u;
  switch (order) {
    case 0: return numerics::hermite5(t, step_, a[0], a[1], a[2], b[0], b[1], b[2]).value;
    case 1: return numerics::hermite5(t, step_, a[1], a[2], a[3], b[1], b[2], b[3]).value;
    case 2: {
      // U'' is nondecreasing for psi > 0; keep the interpolant inside the cell range.
      const double v = numerics::hermite3(t, step_, a[2], a[3], b[2], b[3]).first;
      return std::clamp(v, std::min(a[2], b[2]), std::max(a[2], b[2]));
    }
    default: {
      // Cubic Lagrange through nodes k-1 .. k+2, clipped at 0 where it
      // undershoots next to the edges of the kernel support.
      const double y0 = table_[k - 1].u[3], y1 = a[3], y2 = b[3], y3 = table_[k + 2].u[3];
      const double tp1 = t + 1, tm1 = t - 1, tm2 = t - 2;
      return std::max(0.0, -y0 * t * tm1 * tm2 / 6.0 + y1 * tp1 * tm1 * tm2 / 2.0 - y2 * tp1 * t * tm2 / 2.0 +
                               y3 * tp1 * t * tm1 / 6.0);
    }
  }
}

PotentialModel build_mollified(double gamma, double epsilon, const Mollifier& mollifier, double grid_step) {
  const GammaParams p = derive_params(gamma);
  const double limit = 0.5 * std::min(gamma, 1.0 - gamma);
  if (!(epsilon > 0.0 && epsilon < limit)) {
    std::ostringstream msg;
    msg << "epsilon must lie in (0, min(gamma,1-gamma)/2) = (0, " << limit << "), got " << epsilon;
    throw DomainError(msg.str());
  }
  if (grid_step <= 0.0) grid_step = epsilon / 64.0;
  if (grid_step > epsilon / 8.0) throw DomainError("mollifier grid step must not exceed epsilon/8");

  PotentialModel m;
  m.kind_ = PotentialKind::mollified;
  m.params_ = p;
  m.epsilon_ = epsilon;
  m.m2_ = mollifier.second_moment();
  m.mollifier_name_ = mollifier.name();
  m.mu_ = 0.5 * p.d * epsilon * epsilon * m.m2_;
  m.nu_ = 0.5 * p.b * epsilon * epsilon * m.m2_;

  const int half = static_cast<int>(std::ceil(2.0 * epsilon / grid_step));
  m.step_ = grid_step;
  m.table_start_ = gamma - half * grid_step;
  m.table_.reserve(2 * half + 1);

  const double b = p.b, d = p.d, m2 = m.m2_, eps = epsilon;
  std::vector<double> ts;
  for (int k = -half; k <= half; ++k) ts.push_back(k * grid_step / eps);
  const auto moments = mollifier.incomplete_moments(ts);
  for (int k = -half; k <= half; ++k) {
    const double psi = gamma + k * grid_step;
    const double t = ts[k + half];
    const auto [M0, M1, M2] = moments[k + half];
    BlendNode node{psi, {}};
    node.u[0] = 0.5 * d * ((psi - 1) * (psi - 1) * M0 - 2 * eps * (psi - 1) * M1 + eps * eps * M2) +
                0.5 * (1 - M0) - 0.5 * b * (psi * psi * (1 - M0) + 2 * eps * psi * M1 + eps * eps * (m2 - M2)) -
                m.mu_;
    node.u[1] = d * (psi - 1) * M0 - b * psi * (1 - M0) - (b + d) * eps * M1;
    node.u[2] = -b + (b + d) * M0;
    node.u[3] = (b + d) * mollifier(t) / eps;
    m.table_.push_back(node);
  }

  // Self-checks: agreement with the analytic branches at the table ends,
  // sign of U''' and positivity in the blend zone.
  const auto& first = m.table_.front();
  const auto& last = m.table_.back();
  for (int order = 0; order < 3; ++order) {
    const double lo = u0(p, first.psi, order) - (order == 0 ? m.mu_ + m.nu_ : 0.0);
    const double hi = u0(p, last.psi, order);
    if (std::abs(first.u[order] - lo) > 1e-11 || std::abs(last.u[order] - hi) > 1e-11) {
      throw NumericalError("mollified table does not match the quadratic branches at the blend-zone ends");
    }
  }
  double sup_dev = m.mu_ + m.nu_;
  for (const auto& node : m.table_) {
    if (node.u[3] < -1e-12) throw NumericalError("mollified U''' changed sign on psi > 0");
    if (!(node.u[0] > 0.0)) throw NumericalError("mollified potential is not positive in the blend zone");
    sup_dev = std::max(sup_dev, std::abs(node.u[0] - u0(p, node.psi, 0)));
  }
  m.deviation_constant_ = sup_dev / eps;
  return m;
}

nlohmann::json PotentialModel::to_json() const {
  nlohmann::json doc;
  doc["schema"] = kPotentialSchema;
  doc["kind"] = kind_ == PotentialKind::exact ? "exact" : "mollified";
  doc["gamma"] = params_.gamma;
  doc["epsilon"] = epsilon_;
  doc["mu_eps"] = mu_;
  doc["nu_eps"] = nu_;
  doc["mollifier"] = mollifier_name_;
  doc["m2"] = m2_;
  doc["deviation_constant"] = deviation_constant_;
  doc["grid_step"] = step_;
  auto grid = nlohmann::json::array();
  for (const auto& node : table_) grid.push_back({node.psi, node.u[0], node.u[1], node.u[2], node.u[3]});
  doc["grid"] = std::move(grid);
  return doc;
}

PotentialModel PotentialModel::from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("schema").get<std::string>() != kPotentialSchema) {
      throw DomainError("unsupported potential schema " + doc.at("schema").get<std::string>());
    }
    const GammaParams p = derive_params(doc.at("gamma").get<double>());
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "exact") return exact(p);
    if (kind != "mollified") throw DomainError("unknown potential kind " + kind);
    PotentialModel m;
    m.kind_ = PotentialKind::mollified;
    m.params_ = p;
    m.epsilon_ = doc.at("epsilon").get<double>();
    m.mu_ = doc.at("mu_eps").get<double>();
    m.nu_ = doc.at("nu_eps").get<double>();
    m.mollifier_name_ = doc.at("mollifier").get<std::string>();
    m.m2_ = doc.at("m2").get<double>();
    m.deviation_constant_ = doc.at("deviation_constant").get<double>();
    m.step_ = doc.at("grid_step").get<double>();
    for (const auto& row : doc.at("grid")) {
      m.table_.push_back({row.at(0).get<double>(),
                          {row.at(1).get<double>(), row.at(2).get<double>(), row.at(3).get<double>(),
                           row.at(4).get<double>()}});
    }
    if (m.table_.size() < 8) throw DomainError("potential grid too short");
    m.table_start_ = m.table_.front().psi;
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed potential document: ") + e.what());
  }
}

}  // namespace kinkspec
