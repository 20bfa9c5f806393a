#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "levymult/error.hpp"
#include "levymult/symbol.hpp"

using namespace levymult;

namespace {

constexpr double kPi = std::numbers::pi;

Complex at(const MultiplierSymbol& m, double a, double b) {
  const double xi[] = {a, b};
  return m(xi);
}

LevyMeasure line_pm1() { return DiscreteLevyMeasure::symmetrized(1, {{{1.0}, 1.0}}); }

}  // namespace

TEST_SUITE("symbol") {
  TEST_CASE("truncated stable with axis indicator reproduces the power symbol") {
    const auto m = MultiplierSymbol::general(TruncatedStableMeasure::axis_stable(2, 1.0, 1e-6),
                                             JumpModulator::axis_indicator(1));
    CHECK(std::abs(at(m, 1.0, 1.0) - 0.5) < 1e-6);
    CHECK(std::abs(at(m, 2.0, 0.0) - 1.0) < 1e-6);
  }

  TEST_CASE("zero of Psi gives 0 by convention") {
    const auto m = MultiplierSymbol::general(line_pm1(), JumpModulator::constant(1.0));
    const double xi[] = {2.0 * kPi};
    CHECK(m(xi) == Complex(0.0, 0.0));
    const double zero[] = {0.0};
    CHECK(m(zero) == Complex(0.0, 0.0));
    const auto f = MultiplierSymbol::finite_time(line_pm1(), JumpModulator::constant(1.0), -1.0);
    CHECK(f(xi) == Complex(0.0, 0.0));
  }

  TEST_CASE("finite-time symbol at xi = pi") {
    const auto f = MultiplierSymbol::finite_time(line_pm1(), JumpModulator::constant(1.0), -1.0);
    const double xi[] = {kPi};
    CHECK(f(xi).real() == doctest::Approx(1.0 - std::exp(-8.0)).epsilon(1e-15));
    CHECK(f(xi).imag() == 0.0);
    CHECK_THROWS_AS(MultiplierSymbol::finite_time(line_pm1(), JumpModulator::constant(1.0), 0.0), InvalidInput);
  }

  TEST_CASE("finite-time symbol vanishes as s -> 0 and converges to M as s -> -inf") {
    const LevyMeasure m = DiscreteLevyMeasure::symmetrized(2, {{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 0.5}});
    const auto phi = JumpModulator(JumpModulator::PerAxis{{1.0, -0.5}});
    const auto M = MultiplierSymbol::general(m, phi);
    double prev = std::numeric_limits<double>::infinity();
    double far = 0.0;
    for (int k = 0; k <= 8; ++k) {
      const auto ms = MultiplierSymbol::finite_time(m, phi, -std::ldexp(1.0, k));
      double sup = 0.0;
      far = 0.0;
      for (double a = -3.0; a <= 3.0; a += 0.37) {
        for (double b = -3.0; b <= 3.0; b += 0.41) {
          const double d = std::abs(ms(std::array{a, b}) - M(std::array{a, b}));
          sup = std::max(sup, d);
          if (char_exponent(m, std::array{a, b}) <= -0.1) far = std::max(far, d);
        }
      }
      CHECK(sup <= prev + 1e-15);
      prev = sup;
    }
    CHECK(far < 1e-6);
    const auto tiny = MultiplierSymbol::finite_time(m, phi, -1e-12);
    CHECK(std::abs(at(tiny, 1.0, 2.0)) < 1e-11);
  }

  TEST_CASE("general symbol is bounded and equals c for constant phi") {
    const LevyMeasure m = DiscreteLevyMeasure::symmetrized(2, {{{1.0, 0.0}, 1.0}, {{1.0, 1.0}, 0.3}});
    const Complex c(0.3, -0.4);
    const auto M = MultiplierSymbol::general(m, JumpModulator::constant(c));
    const auto S = MultiplierSymbol::general(m, JumpModulator(JumpModulator::SignPattern{{1, 1, -1, -1}}));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-10.0, 10.0);
    for (int i = 0; i < 300; ++i) {
      const double a = U(rng);
      const double b = U(rng);
      const double xi[] = {a, b};
      if (char_exponent(m, xi) != 0.0 && std::abs(char_exponent(m, xi)) > 1e-10) {
        CHECK(std::abs(M(xi) - c) < 1e-12);
      }
      CHECK(std::abs(S(xi)) <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("power symbol values") {
    CHECK(eval_power(1.0, 1, std::array{1.0, 1.0}) == 0.5);
    CHECK(eval_power(2.0, 1, std::array{3.0, 4.0}) == doctest::Approx(9.0 / 25.0).epsilon(1e-15));
    CHECK(eval_power(1.5, 1, std::array{0.0, 0.0}) == 0.0);
  }

  TEST_CASE("power symbol tends to the Riesz magnitude as alpha -> 2") {
    const auto r = MultiplierSymbol::riesz2(1, 2);
    double prev = 1.0;
    for (double alpha : {1.5, 1.9, 1.99, 1.999}) {
      const auto p = MultiplierSymbol::power(alpha, 1, 2);
      double sup = 0.0;
      for (double a = -4.0; a <= 4.0; a += 0.25) {
        for (double b = -4.0; b <= 4.0; b += 0.25) {
          if (a == 0.0 && b == 0.0) continue;
          sup = std::max(sup, std::abs(at(p, a, b) + at(r, a, b)));
        }
      }
      CHECK(sup < prev);
      prev = sup;
    }
  }

  TEST_CASE("Riesz family values") {
    CHECK(at(MultiplierSymbol::riesz2(1, 2), 3.0, 4.0).real() == doctest::Approx(-9.0 / 25.0));
    CHECK(at(MultiplierSymbol::riesz_pair(1, 2, 2), 3.0, 4.0).real() == doctest::Approx(-24.0 / 25.0));
    CHECK(at(MultiplierSymbol::riesz_combo({1.0, 1.0}), 0.3, -7.0).real() == doctest::Approx(-1.0));
    CHECK(at(MultiplierSymbol::beurling_ahlfors(), 1.0, 0.0) == Complex(1.0, 0.0));
    CHECK(at(MultiplierSymbol::riesz2(1, 2), 0.0, 0.0) == Complex(0.0, 0.0));
    const auto r1 = MultiplierSymbol::first_order_riesz(1, 2);
    CHECK(std::abs(at(r1, 3.0, 4.0) - Complex(0.0, 0.6)) < 1e-15);
    CHECK_THROWS_AS(MultiplierSymbol::riesz_combo({1.0, 1.5}), InvalidInput);
    CHECK_THROWS_AS(MultiplierSymbol::riesz2(0, 2), InvalidInput);
  }

  TEST_CASE("Beurling-Ahlfors decomposition on a grid") {
    const auto B = MultiplierSymbol::beurling_ahlfors();
    const auto r1 = MultiplierSymbol::riesz2(1, 2);
    const auto r2 = MultiplierSymbol::riesz2(2, 2);
    const auto r12 = MultiplierSymbol::riesz_pair(1, 2, 2);  // 2 R_1 R_2
    for (double a = -3.0; a <= 3.0; a += 0.5) {
      for (double b = -3.0; b <= 3.0; b += 0.5) {
        if (a == 0.0 && b == 0.0) continue;
        const Complex rhs = -at(r1, a, b) + at(r2, a, b) + Complex(0.0, 1.0) * at(r12, a, b);
        CHECK(std::abs(at(B, a, b) - rhs) < 1e-14);
      }
    }
  }

  TEST_CASE("gradient of the power symbol against central differences") {
    const auto g = power_symbol_gradient(1.0, 1, std::array{1.0, 1.0});
    CHECK(g[0] == doctest::Approx(0.25).epsilon(1e-15));
    for (double alpha : {0.4, 1.0, 1.7}) {
      for (auto [a, b] : {std::pair{0.7, 1.3}, std::pair{-2.0, 0.5}, std::pair{1.1, -0.9}}) {
        const auto gr = power_symbol_gradient(alpha, 1, std::array{a, b});
        const double h = 1e-5;
        const double d1 = (eval_power(alpha, 1, std::array{a + h, b}) - eval_power(alpha, 1, std::array{a - h, b})) / (2 * h);
        const double d2 = (eval_power(alpha, 1, std::array{a, b + h}) - eval_power(alpha, 1, std::array{a, b - h})) / (2 * h);
        CHECK(gr[0] == doctest::Approx(d1).epsilon(1e-8));
        CHECK(gr[1] == doctest::Approx(d2).epsilon(1e-8));
      }
      const auto p = power_symbol_gradient(alpha, 1, std::array{0.6, 1.0});
      const auto m = power_symbol_gradient(alpha, 1, std::array{-0.6, 1.0});
      CHECK(p[0] == doctest::Approx(-m[0]).epsilon(1e-15));
    }
    CHECK_THROWS_AS(power_symbol_gradient(1.0, 1, std::array{0.0, 1.0}), SingularPoint);
  }

  TEST_CASE("gradient energy diverges exactly below alpha = 1/2") {
    std::vector<double> e04;
    std::vector<double> e06;
    for (double cutoff : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
      e04.push_back(power_gradient_energy(0.4, cutoff));
      e06.push_back(power_gradient_energy(0.6, cutoff));
    }
    for (std::size_t k = e04.size() - 2; k + 1 < e04.size(); ++k) {
      const double r04 = (e04[k + 1] - e04[k]) / (e04[k] - e04[k - 1]);
      const double r06 = (e06[k + 1] - e06[k]) / (e06[k] - e06[k - 1]);
      CHECK(r04 == doctest::Approx(std::pow(100.0, 1.0 - 2 * 0.4)).epsilon(0.02));
      CHECK(r06 == doctest::Approx(std::pow(100.0, 1.0 - 2 * 0.6)).epsilon(0.02));
    }
  }

  TEST_CASE("directional limit at a zero of Psi depends on the direction") {
    const LevyMeasure m = DiscreteLevyMeasure::symmetrized(2, {{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}});
    const auto M = MultiplierSymbol::general(m, JumpModulator::axis_indicator(1));
    const double xi[] = {0.0, 0.0};
    const double e1[] = {1.0, 0.0};
    const double d[] = {1.0, 1.0};
    CHECK(directional_limit(M, xi, e1).real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(directional_limit(M, xi, d).real() == doctest::Approx(0.5).epsilon(1e-8));
  }

  TEST_CASE("product and constant kinds") {
    const auto p = MultiplierSymbol::product({MultiplierSymbol::riesz2(1, 2), MultiplierSymbol::riesz2(1, 2)});
    CHECK(at(p, 3.0, 4.0).real() == doctest::Approx(81.0 / 625.0));
    const auto c = MultiplierSymbol::constant(0.5);
    CHECK(at(c, 0.0, 0.0) == Complex(0.5, 0.0));
    CHECK(c.dimension() == 0);
    CHECK(MultiplierSymbol::power(1.0, 1, 2).label() == "power(alpha=1,j=1,d=2)");
  }
}
