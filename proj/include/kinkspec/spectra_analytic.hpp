#pragma once

// Closed-form spectral theory of H0 = -d^2/dx^2 + W0 for the
// piecewise-parabolic potential: eigenvalues from the circle system
// xi^2 + eta^2 = R^2, resonance parameters gamma_k, and the checks of the
// stability conditions U1-U4.

#include <optional>
#include <string>
#include <vector>

#include "kinkspec/potential.hpp"

namespace kinkspec {

enum class Parity { antisymmetric, symmetric };

const char* to_string(Parity p);

/// One discrete eigenvalue of H0.
struct EigenMode {
  double lambda = 0;
  Parity parity = Parity::symmetric;
  double xi = 0;     ///< beta * q
  double eta = 0;    ///< alpha * q
  double alpha = 0;  ///< outer decay rate sqrt(d - lambda)
  double beta = 0;   ///< inner wavenumber sqrt(b + lambda)
  double coefA = 0;  ///< outer amplitude (unit L^2 norm)
  double coefB = 0;  ///< inner amplitude (unit L^2 norm)
};

/// Circle intersections with eta below this are edge resonances, not eigenvalues.
inline constexpr double kEdgeEta = 1e-9;

std::vector<EigenMode> antisym_modes(const GammaParams& p);
std::vector<EigenMode> sym_modes(const GammaParams& p);
/// Both parities, sorted by lambda.
std::vector<EigenMode> all_modes(const GammaParams& p);

/// Resonance parameter gamma_k with R(gamma_k) = k pi / 2. Throws DomainError for k < 1.
double gamma_k(int k);

/// First antisymmetric eigenvalue together with its circle coordinate.
struct Lambda1 {
  double lambda;
  double xi;  ///< in (pi/2, pi), solves xi / sin(xi) = R
};

/// Valid for gamma in (gamma_1, gamma_3]; DomainError otherwise.
Lambda1 lambda1_solution(const GammaParams& p);
double lambda1(const GammaParams& p);

struct U1Check {
  bool holds = true;
  std::string k_note;
  std::string smoothness_note;
};

struct U2Check {
  bool holds = false;
  int nearest_k = 0;
  double nearest_gamma_k = 0;
  double distance = 0;
};

struct U3Check {
  bool holds = false;
  double lambda1 = 0;
  double xi = 0;
  double cos2_test = 0;  ///< 4 cos^2 xi, compared against 3 gamma
  double ratio = 0;      ///< 4 lambda1 / d, compared against 1
};

struct U4Check {
  bool holds = false;
  std::optional<double> fgr_value;
  std::optional<double> distance_to_gamma_star;
  std::string note;
};

/// U2: edge point is not a resonance, i.e. min_k |gamma - gamma_k| > tol.
U2Check check_U2(const GammaParams& p, double tol);

/// U3 inequality 4 lambda1 > d in both equivalent forms. DomainError outside (gamma_1, gamma_2).
U3Check check_U3(const GammaParams& p);

/// Upper end of the gamma interval on which 4 lambda1 > d holds (about 0.9215).
double solve_u3_bound();

/// sin(q sqrt(b + 4 lambda1)), the value of the odd continuum solution at the
/// jump (up to positive factors). U4 holds iff it is nonzero. DomainError
/// outside (gamma_1, gamma_2).
double fgr_value_analytic(const GammaParams& p);

struct GammaStar {
  double gamma;
  double xi;
  double theta;
  double xi_at_gamma2;
  double theta1_at_xi_gamma2;
  double theta2_at_xi_gamma2;
};

/// Unique zero of the FGR value on (gamma_1, gamma_2), found in the (xi, theta)
/// plane as the crossing of theta1(xi) = sqrt((4 xi^2 - pi^2)/3) and theta2(xi)
/// defined by sin(xi)/xi = cos(theta)/theta.
GammaStar solve_gamma_star();

/// Normalised eigenfunction and its derivative.
double eigenfunction_eval(const EigenMode& mode, const GammaParams& p, double x);
double eigenfunction_derivative(const EigenMode& mode, const GammaParams& p, double x);

struct CertifyOptions {
  double resonance_tol = 1e-5;  ///< gamma band around each gamma_k counted as resonant
  double fgr_tol = 1e-5;        ///< gamma band around gamma_* where U4 fails
};

struct SpectralReport {
  double gamma = 0;
  GammaParams params;
  std::vector<EigenMode> modes;
  U1Check u1;
  U2Check u2;
  U3Check u3;
  U4Check u4;
  std::string provenance = "exact";
  bool all_hold() const { return u1.holds && u2.holds && u3.holds && u4.holds; }
};

SpectralReport certify(double gamma, const CertifyOptions& options = {});

}  // namespace kinkspec
