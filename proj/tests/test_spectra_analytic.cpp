#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kinkspec/errors.hpp"
#include "kinkspec/kink.hpp"
#include "kinkspec/spectra_analytic.hpp"

using namespace kinkspec;

namespace {
constexpr double kPi = std::numbers::pi;

// Independent 30-digit mpmath oracle (findroot on R(gamma) = k pi / 2 and
// on xi - R sin xi = 0).
constexpr double kGammaK[] = {0.646436992752027, 0.857895873829090, 0.924728385116697, 0.953585341299499,
                              0.968562987814424};
constexpr double kLambda1At075 = 3.27821458648731;
constexpr double kXiAt075 = 1.94752307742631;
constexpr double kAlpha = 0.921485426267345;
constexpr double kGammaStar = 0.705503354705557;

std::size_t expected_antisym(double R) {
  // 0 for R <= pi/2, then one more per pi
  return R <= kPi / 2 ? 0 : static_cast<std::size_t>(std::floor((R - kPi / 2) / kPi)) + 1;
}
std::size_t expected_sym(double R) { return static_cast<std::size_t>(std::floor(R / kPi)) + 1; }
}  // namespace

TEST_CASE("gamma_k against the oracle and reference values") {
  for (int k = 1; k <= 5; ++k) {
    const double g = gamma_k(k);
    CHECK(g == doctest::Approx(kGammaK[k - 1]).epsilon(1e-13));
    CHECK(std::abs(circle_radius(g) - k * kPi / 2) <= 1e-12);
  }
  CHECK(std::abs(gamma_k(1) - 0.64643) < 1e-4);
  CHECK(std::abs(gamma_k(2) - 0.8579) < 1e-4);
  CHECK(std::abs(gamma_k(3) - 0.92472) < 1e-4);
  CHECK(std::abs(gamma_k(4) - 0.95359) < 1e-4);
  CHECK(std::abs(gamma_k(5) - 0.96856) < 1e-4);
  CHECK(gamma_k(40) == doctest::Approx(0.999394431222216).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_k(0), DomainError);
}

TEST_CASE("mode lists at reference gammas") {
  CHECK(antisym_modes(derive_params(0.5)).empty());
  CHECK(antisym_modes(derive_params(0.6)).empty());
  const auto p = derive_params(0.75);
  const auto odd = antisym_modes(p);
  REQUIRE(odd.size() == 1);
  CHECK(odd[0].xi == doctest::Approx(kXiAt075).epsilon(1e-13));
  CHECK(odd[0].lambda == doctest::Approx(kLambda1At075).epsilon(1e-13));
  const auto even = sym_modes(p);
  REQUIRE(even.size() == 1);
  CHECK(std::abs(even[0].lambda) < 1e-12);
  CHECK(even[0].xi == doctest::Approx(std::asin(std::sqrt(0.75))).epsilon(1e-13));
  CHECK(even[0].eta == doctest::Approx(std::sqrt(p.d) * p.q).epsilon(1e-13));
  const auto all = all_modes(p);
  REQUIRE(all.size() == 2);
  CHECK(all[0].parity == Parity::symmetric);
  CHECK(all[1].parity == Parity::antisymmetric);
  const auto low = all_modes(derive_params(0.6));
  REQUIRE(low.size() == 1);
  CHECK(std::abs(low[0].lambda) < 1e-12);
}

TEST_CASE("circle-system residuals and the mode-count staircase") {
  for (double g = 0.01; g < gamma_k(5); g += 0.0023) {
    const auto p = derive_params(g);
    const auto odd = antisym_modes(p);
    const auto even = sym_modes(p);
    // Skip the immediate neighbourhood of a gamma_k where eta is below the edge threshold.
    bool near_resonance = false;
    for (int k = 1; k <= 5; ++k) near_resonance |= std::abs(g - gamma_k(k)) < 1e-6;
    if (!near_resonance) {
      CHECK(odd.size() == expected_antisym(p.R));
      CHECK(even.size() == expected_sym(p.R));
    }
    bool has_zero = false;
    for (const auto* list : {&odd, &even}) {
      for (const auto& m : *list) {
        CHECK(std::abs(m.xi * m.xi + m.eta * m.eta - p.R * p.R) <= 1e-12 * std::max(1.0, p.R * p.R));
        if (m.parity == Parity::antisymmetric) {
          CHECK(std::abs(m.eta * std::sin(m.xi) + m.xi * std::cos(m.xi)) <= 1e-12 * std::max(1.0, p.R));
        } else {
          CHECK(std::abs(m.eta * std::cos(m.xi) - m.xi * std::sin(m.xi)) <= 1e-12 * std::max(1.0, p.R));
        }
        CHECK(m.eta > 0);
        CHECK(m.lambda >= -1e-12);
        CHECK(m.lambda <= p.d);
        CHECK(m.lambda == doctest::Approx(m.xi * m.xi / (p.q * p.q) - p.b).epsilon(1e-10).scale(p.d));
        CHECK(m.lambda == doctest::Approx(p.d - m.eta * m.eta / (p.q * p.q)).epsilon(1e-10).scale(p.d));
        const double trig = m.parity == Parity::antisymmetric ? std::sin(m.xi) : std::cos(m.xi);
        CHECK(m.coefA * std::exp(-m.eta) == doctest::Approx(m.coefB * trig).epsilon(1e-12));
        has_zero |= std::abs(m.lambda) < 1e-10;
      }
    }
    CHECK(has_zero);
  }
}

TEST_CASE("lambda1 closed form and its validity interval") {
  const auto p = derive_params(0.75);
  const auto sol = lambda1_solution(p);
  CHECK(sol.lambda == doctest::Approx(kLambda1At075).epsilon(1e-13));
  CHECK(std::abs(sol.lambda - antisym_modes(p)[0].lambda) <= 1e-12);
  // both forms
  CHECK(std::abs(sol.lambda - (sol.xi * sol.xi / (p.q * p.q) - p.b)) <= 1e-12);
  CHECK(lambda1(derive_params(0.70)) == doctest::Approx(3.14164916994565).epsilon(1e-12));
  CHECK(lambda1(derive_params(0.85)) == doctest::Approx(3.29197727502543).epsilon(1e-12));
  CHECK(lambda1(derive_params(gamma_k(1) + 1e-9)) == doctest::Approx(derive_params(gamma_k(1)).d).epsilon(1e-4));
  CHECK_THROWS_AS(lambda1(derive_params(0.6)), DomainError);
  CHECK_THROWS_AS(lambda1(derive_params(0.95)), DomainError);
  CHECK_NOTHROW(lambda1(derive_params(gamma_k(3))));
  // continuity on (gamma_1, gamma_3]
  double prev = lambda1(derive_params(gamma_k(1) + 1e-6));
  for (double g = gamma_k(1) + 1e-6 + 1e-4; g <= gamma_k(3); g += 1e-4) {
    const double l = lambda1(derive_params(g));
    CHECK(std::abs(l - prev) < 0.05);
    prev = l;
  }
}

TEST_CASE("U2 distance to the resonance set") {
  const auto u = check_U2(derive_params(0.75), 1e-6);
  CHECK(u.holds);
  CHECK(u.nearest_k == 1);
  CHECK(u.distance == doctest::Approx(0.75 - kGammaK[0]).epsilon(1e-12));
  CHECK_FALSE(check_U2(derive_params(gamma_k(1)), 1e-6).holds);
  CHECK_FALSE(check_U2(derive_params(gamma_k(2)), 1e-6).holds);
  for (double g = gamma_k(1) + 1e-3; g < gamma_k(2) - 1e-3; g += 0.002) CHECK(check_U2(derive_params(g), 1e-6).holds);
}

TEST_CASE("U3 on (gamma_1, gamma_2)") {
  const auto u = check_U3(derive_params(0.75));
  CHECK(u.holds);
  CHECK(u.cos2_test == doctest::Approx(0.541339060134515).epsilon(1e-12));
  CHECK(u.ratio == doctest::Approx(kLambda1At075).epsilon(1e-13));
  const double g1 = gamma_k(1), g2 = gamma_k(2);
  for (int i = 1; i <= 50; ++i) {
    const double g = g1 + (g2 - g1) * i / 51.0;
    const auto c = check_U3(derive_params(g));
    CHECK(c.holds);
    CHECK((c.cos2_test < 3 * g) == (c.ratio > 1));
  }
  CHECK_THROWS_AS(check_U3(derive_params(0.6)), DomainError);
  CHECK_THROWS_AS(check_U3(derive_params(0.9)), DomainError);
}

TEST_CASE("U3 bound alpha") {
  const double a = solve_u3_bound();
  CHECK(a == doctest::Approx(kAlpha).epsilon(1e-12));
  CHECK(std::abs(a - 0.921485) < 1e-4);
  CHECK(a > gamma_k(2));
  const double lhs = std::asin(std::sqrt(a)) / std::sqrt(1 - a);
  const double rhs = 2 * (kPi - std::acos(std::sqrt(3 * a) / 2)) / std::sqrt(4 - 3 * a);
  CHECK(std::abs(lhs - rhs) <= 1e-10);
}

TEST_CASE("FGR value and the exceptional gamma") {
  CHECK(fgr_value_analytic(derive_params(0.70)) == doctest::Approx(0.0393071103063436).epsilon(1e-10));
  CHECK(fgr_value_analytic(derive_params(0.75)) == doctest::Approx(-0.300641219286537).epsilon(1e-12));
  CHECK(fgr_value_analytic(derive_params(0.85)) == doctest::Approx(-0.816103705326169).epsilon(1e-12));
  CHECK(fgr_value_analytic(derive_params(0.70)) * fgr_value_analytic(derive_params(0.85)) < 0);
  CHECK_THROWS_AS(fgr_value_analytic(derive_params(0.5)), DomainError);

  const auto gs = solve_gamma_star();
  CHECK(gs.gamma == doctest::Approx(kGammaStar).epsilon(1e-12));
  CHECK(std::abs(fgr_value_analytic(derive_params(gs.gamma))) <= 1e-6);
  const auto p = derive_params(gs.gamma);
  CHECK(std::sqrt(1 + 4 * gs.gamma * lambda1(p)) * std::asin(std::sqrt(gs.gamma)) == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(std::abs(gs.xi_at_gamma2 - 2.3137) < 1e-4);
  CHECK(std::abs(gs.theta1_at_xi_gamma2 - 1.9616) < 1e-4);
  CHECK(std::abs(gs.theta2_at_xi_gamma2 - 1.1843) < 1e-4);
  CHECK(4 * gs.xi * gs.xi - 3 * gs.theta * gs.theta == doctest::Approx(kPi * kPi).epsilon(1e-12));

  // exactly one sign change on (gamma_1, gamma_2)
  int changes = 0;
  double prev = fgr_value_analytic(derive_params(gamma_k(1) + 1e-6));
  for (double g = gamma_k(1) + 1e-3; g < gamma_k(2); g += 1e-3) {
    const double v = fgr_value_analytic(derive_params(g));
    if ((v > 0) != (prev > 0)) ++changes;
    prev = v;
  }
  CHECK(changes == 1);
}

TEST_CASE("eigenfunctions") {
  const auto p = derive_params(0.75);
  const auto modes = all_modes(p);
  const auto& ground = modes[0];
  const auto& odd = modes[1];
  const double ratio0 = eigenfunction_eval(ground, p, 0.0) / kink_exact_derivative(p, 0.0);
  for (double x = -5; x <= 5; x += 0.0173) {
    CHECK(eigenfunction_eval(ground, p, x) / kink_exact_derivative(p, x) == doctest::Approx(ratio0).epsilon(1e-10));
    CHECK(eigenfunction_eval(odd, p, -x) == doctest::Approx(-eigenfunction_eval(odd, p, x)).epsilon(1e-14));
    if (std::abs(x) > p.q) {
      CHECK(std::abs(eigenfunction_eval(odd, p, x)) <= std::abs(odd.coefA) * std::exp(-odd.alpha * std::abs(x)) * (1 + 1e-14));
    }
  }
  CHECK(eigenfunction_eval(odd, p, 0.0) == 0.0);
  CHECK(std::abs(eigenfunction_eval(odd, p, p.q) - 0.644139737024345) < 1e-12);
  for (const auto& m : modes) {
    const double lo = std::nextafter(p.q, 0.0), hi = std::nextafter(p.q, 2.0);
    CHECK(std::abs(eigenfunction_eval(m, p, lo) - eigenfunction_eval(m, p, hi)) <= 1e-12);
    CHECK(std::abs(eigenfunction_derivative(m, p, lo) - eigenfunction_derivative(m, p, hi)) <= 1e-12);
    // unit L2 norm by trapezoid on a fine grid
    double norm = 0;
    const double dx = 1e-4;
    for (double x = -20; x <= 20; x += dx) norm += std::pow(eigenfunction_eval(m, p, x), 2) * dx;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("certify") {
  const auto r = certify(0.75);
  CHECK(r.all_hold());
  REQUIRE(r.modes.size() == 2);
  CHECK(std::abs(r.modes[1].lambda - 3.28) < 0.01);
  CHECK(r.provenance == "exact");
  CHECK_FALSE(r.u1.smoothness_note.empty());

  const auto low = certify(0.60);
  CHECK(low.modes.size() == 1);
  CHECK_FALSE(low.u3.holds);
  CHECK_FALSE(low.u4.holds);

  const auto at_star = certify(solve_gamma_star().gamma);
  CHECK_FALSE(at_star.u4.holds);
  CHECK(at_star.u2.holds);
  CHECK(at_star.u3.holds);

  const auto at_g1 = certify(gamma_k(1));
  CHECK_FALSE(at_g1.u2.holds);

  for (double g = 0.65; g < 0.855; g += 0.01) {
    if (std::abs(g - kGammaStar) < 1e-3) continue;
    CHECK(certify(g).all_hold());
  }
}
