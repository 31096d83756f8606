#pragma once

// Piecewise-parabolic double-well potential U0(psi; gamma) and its
// mollified smooth approximations U_eps.

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace kinkspec {

/// Constants of the C^1 piecewise-parabolic family for one value of gamma.
struct GammaParams {
  double gamma = 0;  ///< junction abscissa in psi, 0 < gamma < 1
  double b = 0;      ///< inner-well curvature, 1/gamma
  double d = 0;      ///< outer-well curvature, 1/(1-gamma); mass squared and continuum edge
  double q = 0;      ///< kink abscissa where s0(q) = gamma
  double C = 0;      ///< inner kink amplitude sqrt(gamma)
  double A = 0;      ///< outer kink coefficient (negative)
  double R = 0;      ///< radius of the (xi, eta) circle, q*sqrt(b+d)
};

/// Throws DomainError unless 0 < gamma < 1.
GammaParams derive_params(double gamma);

/// Radius of the spectral circle as a function of gamma alone.
double circle_radius(double gamma);

/// Even nonnegative kernel supported in [-1, 1], normalised to unit mass.
class Mollifier {
 public:
  /// exp(-1/(1-u^2)) on (-1, 1).
  static Mollifier standard_bump();

  /// `shape` is sampled only on (-1, 1); it is normalised here. Throws
  /// DomainError if it is negative, odd-asymmetric or has zero mass.
  Mollifier(std::function<double(double)> shape, std::string name);

  double operator()(double u) const;
  double second_moment() const { return m2_; }
  const std::string& name() const { return name_; }

  /// {int_{-1}^t h, int_{-1}^t u h, int_{-1}^t u^2 h}.
  std::array<double, 3> incomplete_moments(double t) const;
  /// Same for ascending abscissae, accumulated piece by piece.
  std::vector<std::array<double, 3>> incomplete_moments(const std::vector<double>& ts) const;

 private:
  std::function<double(double)> shape_;
  std::string name_;
  double norm_ = 1;
  double m2_ = 0;
};

enum class PotentialKind { exact, mollified };

/// Samples of U_eps and its first three derivatives at one psi node.
struct BlendNode {
  double psi;
  std::array<double, 4> u;
};

struct PotentialValue {
  double value;
  /// True when the requested derivative is a Dirac mass (U0''' at |psi| = gamma).
  bool distributional;
};

/// Immutable evaluatable potential. The mollified variant stores a table on
/// the positive blend zone [gamma - 2 eps, gamma + 2 eps] and is extended
/// by parity; elsewhere it is evaluated from the quadratic branches.
class PotentialModel {
 public:
  static PotentialModel exact(const GammaParams& params);

  PotentialKind kind() const { return kind_; }
  const GammaParams& params() const { return params_; }
  double epsilon() const { return epsilon_; }
  double mu_eps() const { return mu_; }
  double nu_eps() const { return nu_; }
  /// Measured sup |U_eps - U0| / eps (0 for the exact model).
  double deviation_constant() const { return deviation_constant_; }
  double mollifier_second_moment() const { return m2_; }
  const std::string& mollifier_name() const { return mollifier_name_; }
  const std::vector<BlendNode>& table() const { return table_; }
  double grid_step() const { return step_; }

  /// U, U', U'' or U''' at psi. Throws DomainError for order outside 0..3.
  double eval(double psi, int order) const;
  PotentialValue eval_flagged(double psi, int order) const;

  /// Versioned JSON document, enough to rebuild the model without the mollifier.
  nlohmann::json to_json() const;
  static PotentialModel from_json(const nlohmann::json& doc);

 private:
  friend PotentialModel build_mollified(double, double, const Mollifier&, double);

  PotentialModel() = default;
  double eval_exact(double psi, int order) const;
  double eval_blend(double abs_psi, int order) const;

  PotentialKind kind_ = PotentialKind::exact;
  GammaParams params_{};
  double epsilon_ = 0;
  double mu_ = 0;
  double nu_ = 0;
  double deviation_constant_ = 0;
  double m2_ = 0;
  std::string mollifier_name_;
  double step_ = 0;
  double table_start_ = 0;
  std::vector<BlendNode> table_;
};

/// Mollified model U_eps = h_eps * U0 - mu_eps. Requires
/// 0 < epsilon < min(gamma, 1-gamma)/2; `grid_step` <= 0 selects eps/64.
PotentialModel build_mollified(double gamma, double epsilon, const Mollifier& mollifier,
                               double grid_step = 0);

/// Piecewise-parabolic U0 evaluated directly from params.
double u0(const GammaParams& p, double psi, int order = 0);

}  // namespace kinkspec
