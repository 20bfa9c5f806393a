#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "levymult/error.hpp"
#include "levymult/kernel.hpp"
#include "levymult/transform.hpp"

using namespace levymult;

namespace {

constexpr double kPi = std::numbers::pi;

// int_0^inf (d/dt p_t(x)) p_t(y) dt by tanh-sinh on [0, m] and exp-sinh on [m, inf).
double oracle(double x, double y) {
  auto f = [&](double t) { return cauchy_density_dt(t, x) * cauchy_density(t, y); };
  const double m = std::max(std::abs(x), std::abs(y));
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  return ts.integrate(f, 0.0, m) + es.integrate(f, m, std::numeric_limits<double>::infinity());
}

double rel_l2(const GridFunction& a, const GridFunction& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

GridFunction smooth_bump(std::size_t n) {
  const double L = 2 * kPi;
  return GridFunction::sample(2, {n, n}, {L, L}, [&](double x, double y) {
    const double dx = x - kPi;
    const double dy = y - kPi;
    return Complex(std::exp(-(dx * dx + 0.5 * dy * dy)) * (1.0 + 0.3 * std::cos(dx)));
  });
}

}  // namespace

TEST_SUITE("kernel") {
  TEST_CASE("Cauchy density values") {
    CHECK(cauchy_density(1.0, 0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    CHECK(cauchy_density_dt(2.0, 2.0) == 0.0);
    CHECK(cauchy_density(2.0, 3.0) == doctest::Approx(cauchy_density(1.0, 1.5) / 2.0).epsilon(1e-15));
    const double h = 1e-5;
    for (auto [t, x] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.3}}) {
      const double fd = (cauchy_density(t + h, x) - cauchy_density(t - h, x)) / (2 * h);
      CHECK(cauchy_density_dt(t, x) == doctest::Approx(fd).epsilon(1e-8));
    }
    boost::math::quadrature::tanh_sinh<double> ts;
    const double mass = 2.0 * ts.integrate([](double x) { return cauchy_density(1.0, x); }, 0.0, 1e4);
    CHECK(std::abs(mass - (1.0 - 2.0 / (kPi * 1e4))) < 1e-8);
    CHECK(std::abs(mass - 1.0) < 1e-4);
    CHECK_THROWS_AS(cauchy_density(0.0, 1.0), InvalidInput);
  }

  TEST_CASE("K(1,2) closed form and both quadrature routes") {
    const double expected = (3.0 - 5.0 * std::log(2.0)) / (9.0 * kPi * kPi);
    CHECK(kernel_closed_form(1.0, 2.0) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(kernel_numeric(1.0, 2.0) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(oracle(1.0, 2.0) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(kernel_closed_form(2.0, 4.0) == doctest::Approx(expected / 4.0).epsilon(1e-14));
  }

  TEST_CASE("K(1, 0.5) is positive and matches the integral") {
    const double expected = (-0.75 + 1.25 * std::log(2.0)) / (kPi * kPi * 0.5625);
    CHECK(expected > 0.0);
    CHECK(kernel_closed_form(1.0, 0.5) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(kernel_numeric(1.0, 0.5) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(kernel_closed_form(1.0, 2.0) < 0.0);
    CHECK(kernel_closed_form(2.0, 1.0) > 0.0);
  }

  TEST_CASE("closed form against the independent oracle on a log grid") {
    double worst = 0.0;
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 12; ++j) {
        const double x = 0.05 * std::pow(400.0, i / 11.0) * 1.01;
        const double y = 0.05 * std::pow(400.0, j / 11.0);
        const double k = kernel_closed_form(x, y);
        worst = std::max(worst, std::abs(k - oracle(x, y)) / std::abs(k));
      }
    }
    CHECK(worst < 1e-8);
  }

  TEST_CASE("antisymmetry, sign symmetry and homogeneity") {
    for (auto [x, y] : {std::pair{1.0, 2.0}, std::pair{0.3, 0.7}, std::pair{5.0, 0.2}}) {
      const double k = kernel_closed_form(x, y);
      CHECK(kernel_closed_form(y, x) == doctest::Approx(-k).epsilon(1e-14));
      CHECK(kernel_closed_form(-x, y) == k);
      CHECK(kernel_closed_form(x, -y) == k);
      for (double h : {2.0, 10.0, 1.0 / 3.0}) {
        CHECK(std::abs(kernel_closed_form(h * x, h * y) * h * h - k) <= 1e-12 * std::abs(k));
      }
      CHECK(kernel_numeric(3 * x, 3 * y) == doctest::Approx(kernel_numeric(x, y) / 9.0).epsilon(1e-8));
    }
  }

  TEST_CASE("diagonal vanishing with slope -1/(6 pi^2)") {
    CHECK(kernel_closed_form(1.0, 1.0) == 0.0);
    double prev = 1.0;
    for (int e = 1; e <= 6; ++e) {
      const double h = std::pow(10.0, -e);
      const double ratio = kernel_closed_form(1.0, 1.0 + h) / (-h / (6 * kPi * kPi));
      CHECK(std::abs(ratio - 1.0) < prev);
      prev = std::abs(ratio - 1.0);
    }
    CHECK(prev < 1e-5);
  }

  TEST_CASE("axes and origin") {
    CHECK(kernel_closed_form(1.0, 0.0) == std::numeric_limits<double>::infinity());
    CHECK(kernel_closed_form(0.0, 1.0) == -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(kernel_closed_form(0.0, 0.0), SingularPoint);
  }

  TEST_CASE("truncated kernel: degenerate window, additivity and convergence") {
    CHECK(kernel_truncated(0.5, 0.5, 1.0, 2.0) == 0.0);
    CHECK_THROWS_AS(kernel_truncated(1.0, 0.5, 1.0, 2.0), InvalidInput);
    const double a = kernel_truncated(0.1, 3.0, 1.0, 2.0, 1e-14);
    const double b = kernel_truncated(0.1, 1.0, 1.0, 2.0, 1e-14) + kernel_truncated(1.0, 3.0, 1.0, 2.0, 1e-14);
    CHECK(std::abs(a - b) <= 2e-14);
    const double k = kernel_closed_form(1.0, 2.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int e = 1; e <= 5; ++e) {
      const double w = std::pow(10.0, e);
      const double err = std::abs(kernel_truncated(1.0 / w, w, 1.0, 2.0) - k);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-9);
  }

  TEST_CASE("annular cancellation") {
    for (auto [a, b] : {std::pair{0.5, 2.0}, std::pair{1.0, 10.0}}) {
      const auto r = annulus_integral(a, b);
      CHECK(std::abs(r.value) <= std::max(1e-12, 10 * r.error));
      CHECK(std::abs(r.angular) < 1e-12);
    }
  }

  TEST_CASE("principal-value convolution against the spectral multiplier") {
    const auto sym = MultiplierSymbol::power(1.0, 1, 2);
    double prev = 1.0;
    for (std::size_t n : {64u, 128u}) {
      const auto f = smooth_bump(n);
      const double h = 2 * kPi / n;
      const double err = rel_l2(singular_integral_apply(f, 2 * h), apply_multiplier(f, sym));
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 5e-2);
  }

  TEST_CASE("the two axis kernels sum to f minus a uniform average plus the excluded disc") {
    const std::size_t n = 64;
    const auto f = smooth_bump(n);
    const double h = 2 * kPi / n;
    const double rho = 2 * h;
    const auto a = singular_integral_apply(f, rho, 1);
    const auto b = singular_integral_apply(f, rho, 2);
    Complex mean = 0.0;
    for (const auto& v : f.samples()) mean += v;
    mean /= static_cast<double>(f.size());
    const double cell = 1.0 / static_cast<double>(n * n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Complex disc = 0.0;
        for (int di = -2; di <= 2; ++di) {
          for (int dj = -2; dj <= 2; ++dj) {
            if (std::hypot(di, dj) >= 2.0) continue;
            disc += f.at((i + n - di) % n, (j + n - dj) % n);
          }
        }
        const Complex expected = f.at(i, j) - mean + cell * disc;
        worst = std::max(worst, std::abs(a.at(i, j) + b.at(i, j) - expected));
      }
    }
    CHECK(worst < 1e-8);
  }

  TEST_CASE("pv edge cases") {
    const auto z = GridFunction::zeros(2, {32, 32}, {1.0, 1.0});
    const auto r = pv_convolve(z, 0.1);
    for (const auto& v : r.samples()) CHECK(v == Complex(0.0, 0.0));
    CHECK_THROWS_AS(pv_convolve(z, 0.01), InvalidInput);
    CHECK_THROWS_AS(pv_convolve(GridFunction::zeros(1, {32, 1}, {1.0, 1.0}), 0.1), InvalidInput);
  }
}
