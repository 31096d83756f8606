#pragma once

// Finite-difference and ODE oracles for H = -d^2/dx^2 + W(x), independent
// of the circle-system formulas in spectra_analytic.

#include <span>
#include <string>
#include <vector>

#include "kinkspec/linearized.hpp"
#include "kinkspec/spectra_analytic.hpp"

namespace kinkspec {

/// Symmetric tridiagonal matrix of -D2 + W on interior nodes of [-L, L]
/// with Dirichlet ends. Nodes sit on the lattice x = (j + offset) h chosen
/// so that +-q fall midway between neighbouring nodes.
struct DiscreteOperator {
  double L = 0;    ///< Dirichlet boundary position (a lattice point)
  double h = 0;    ///< grid step after jump alignment
  double x0 = 0;   ///< first interior node
  std::vector<double> diag;
  double offdiag = 0;  ///< -1/h^2
  double edge = 0;     ///< continuum threshold d
  bool adjusted = false;
  std::string note;

  std::size_t size() const { return diag.size(); }
  double node(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
};

/// Requires L > 4q and 0 < h <= 0.01. h is reduced to 2q / ceil(2q/h) when
/// needed for jump alignment, and L is rounded to the lattice.
DiscreteOperator discretize(const LinearizedPotential& W, double L, double h);

/// Number of eigenvalues strictly below `shift` (Sturm sequence / LDL^T inertia).
std::size_t sturm_count(const DiscreteOperator& op, double shift);

/// Eigenvalues below edge - margin (margin < 0 selects 10 h), ascending,
/// each bisected to `tol`.
std::vector<double> eigs_below_edge(const DiscreteOperator& op, double margin = -1, double tol = 1e-10);

/// Unit-norm (discrete l2) eigenvector for an eigenvalue, by inverse iteration.
std::vector<double> eigenvector(const DiscreteOperator& op, double lambda);

/// Edge-resonance indicator: integrates u'' = (W - d) u from x = -L with
/// u = 1, u' = 0 to x = +L and returns u'(L) / max(1, |u(L)|). Vanishes iff
/// lambda = d carries a bounded solution.
double resonance_indicator(const LinearizedPotential& W, double L, double max_step = 1e-3);

/// Solution of -phi'' + W phi = lam phi with phi(0) = 0, phi'(0) = 1 (odd),
/// or phi(0) = 1, phi'(0) = 0 (even), sampled at x_grid.
std::vector<double> continuum_solution(const LinearizedPotential& W, double lam, std::span<const double> x_grid,
                                       Parity parity = Parity::antisymmetric, double max_step = 2.5e-4);
inline std::vector<double> continuum_odd_solution(const LinearizedPotential& W, double lam,
                                                  std::span<const double> x_grid) {
  return continuum_solution(W, lam, x_grid, Parity::antisymmetric);
}

/// Odd bound state refined by shooting from an initial estimate (for
/// example a finite-difference eigenvalue) within +-`window`.
double refine_odd_eigenvalue(const LinearizedPotential& W, double guess, double window = 0.05);

struct FgrIntegral {
  double value;  ///< full-line integral
  double left;   ///< contribution from x < 0
  double right;  ///< contribution from x > 0
};

/// int U'''(s(x)) phi_{4 lam1}(x) phi_{lam1}(x)^2 dx for a mollified kink,
/// with phi_{lam1} the unit-L^2 odd eigenfunction and phi_{4 lam1} the
/// continuum solution normalised by phi'(0) = 1 (or an even solution when
/// `continuum_parity` is symmetric, which must integrate to zero).
FgrIntegral fgr_integral_numeric(const LinearizedPotential& W, double lam1,
                                 Parity continuum_parity = Parity::antisymmetric);

/// epsilon -> 0 limit 2 (b + d) phi_{4 lam1}(q) phi_{lam1}(q)^2 / s0'(q) with
/// the same normalisations, from closed forms.
double fgr_limit_analytic(const GammaParams& p);

struct ConvergenceRow {
  double epsilon;
  double lambda1_fd;  ///< finite-difference eigenvalue
  double lambda1;     ///< shooting-refined eigenvalue of H_eps
  double w_norm;      ///< ||W_eps - W0||_{L^2}
  double delta;       ///< support pad of W_eps - W0
  double fgr_numeric;
};

struct ConvergenceReport {
  double gamma = 0;
  double lambda1_exact = 0;
  double d = 0;
  double fgr_limit = 0;
  std::vector<ConvergenceRow> rows;
  /// Largest tested epsilon below which every tested epsilon has 4 lambda1(eps) > d
  /// (0 if none).
  double eps0 = 0;
  bool lambda1_converging = false;  ///< |lambda1(eps) - lambda1| decreases along the list
  bool w_norm_decreasing = false;
};

struct ConvergenceOptions {
  double L = 30;
  double h = 0.005;
};

/// DomainError unless gamma in (gamma_1, gamma_2) and epsilons strictly decreasing.
ConvergenceReport convergence_study(double gamma, std::span<const double> epsilons,
                                    const ConvergenceOptions& options = {});

/// Finite-difference cross-check of an analytic report.
struct OracleCheck {
  double L = 0;
  double h = 0;
  std::vector<double> eigenvalues;
  double max_abs_diff = 0;  ///< vs. analytic modes (infinite if the counts differ)
  bool counts_match = false;
};

OracleCheck oracle_check(const SpectralReport& report, double L = 30, double h = 0.005);

}  // namespace kinkspec

namespace kinkspec {

/// Numeric certificate of U2-U4 for a mollified potential U_eps.
struct MollifiedCheck {
  double epsilon = 0;
  double deviation_constant = 0;  ///< measured sup |U_eps - U0| / eps
  std::vector<double> eigenvalues;  ///< finite-difference, below d - 10h
  double lambda1 = 0;               ///< shooting-refined odd eigenvalue
  double ratio = 0;                 ///< 4 lambda1 / d
  double resonance_indicator = 0;
  double fgr_numeric = 0;
  double fgr_limit = 0;  ///< epsilon -> 0 value from closed forms
  double w_norm = 0;
  double delta = 0;
  bool u2 = false;
  bool u3 = false;
  bool u4 = false;
};

inline constexpr double kResonanceThreshold = 1e-3;  ///< |indicator| at or below counts as resonant
inline constexpr double kFgrThreshold = 1e-6;        ///< |FGR integral| at or below counts as vanishing

/// DomainError unless gamma in (gamma_1, gamma_2) and epsilon admissible.
MollifiedCheck mollified_check(double gamma, double epsilon, double L = 30, double h = 0.005);

}  // namespace kinkspec
