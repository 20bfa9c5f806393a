#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "levymult/corpus.hpp"
#include "levymult/error.hpp"
#include "levymult/fft.hpp"
#include "levymult/grid_function.hpp"
#include "levymult/transform.hpp"

using namespace levymult;

namespace {

constexpr double kPi = std::numbers::pi;

GridFunction random_grid(std::size_t d, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N;
  return GridFunction::sample(d, {n, d == 2 ? n : 1}, {2 * kPi, d == 2 ? 2 * kPi : 1.0},
                              [&](double, double) { return Complex(N(rng), N(rng)); });
}

double rel_l2(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

// Naive O(N^2) DFT in the same sign convention.
std::vector<Complex> naive_dft(const GridFunction& f) {
  const std::size_t n0 = f.sizes()[0];
  const std::size_t n1 = f.dimension() == 2 ? f.sizes()[1] : 1;
  std::vector<Complex> out(n0 * n1);
  for (std::size_t k0 = 0; k0 < n0; ++k0) {
    for (std::size_t k1 = 0; k1 < n1; ++k1) {
      Complex s{};
      for (std::size_t i = 0; i < n0; ++i) {
        for (std::size_t j = 0; j < n1; ++j) {
          const double ph = -2 * kPi * (static_cast<double>(k0 * i) / n0 + static_cast<double>(k1 * j) / n1);
          s += f.at(i, j) * std::polar(1.0, ph);
        }
      }
      out[k0 * n1 + k1] = s;
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("grid_fft") {
  TEST_CASE("forward transform matches a naive DFT") {
    for (std::size_t d : {1u, 2u}) {
      const auto f = random_grid(d, 16, 5 + d);
      auto data = f.samples();
      fft::forward(data, d, f.sizes());
      CHECK(rel_l2(data, naive_dft(f)) < 1e-13);
    }
  }

  TEST_CASE("inverse of forward is the identity") {
    const auto f = random_grid(2, 64, 9);
    auto data = f.samples();
    fft::forward(data, 2, f.sizes());
    fft::inverse(data, 2, f.sizes());
    CHECK(rel_l2(data, f.samples()) < 1e-12);
    fft::Plan fw(2, f.sizes(), true);
    fft::Plan bw(2, f.sizes(), false);
    auto d2 = f.samples();
    fw.execute(d2);
    bw.execute(d2);
    CHECK(rel_l2(d2, f.samples()) < 1e-12);
  }

  TEST_CASE("LMGF round trip is bitwise") {
    const auto f = random_grid(2, 8, 1);
    std::stringstream ss;
    write_grid(ss, f);
    const auto g = read_grid(ss);
    CHECK(g.same_shape(f));
    CHECK(g.samples() == f.samples());
    std::stringstream bad("LMGX");
    CHECK_THROWS_AS(read_grid(bad), InvalidInput);
  }

  TEST_CASE("CSV export has one row per sample") {
    const auto f = random_grid(1, 8, 2);
    std::ostringstream out;
    write_grid_csv(out, f);
    const std::string s = out.str();
    CHECK(s.rfind("x_1,re,im\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 9);
  }

  TEST_CASE("shape validation") {
    CHECK_THROWS_AS(GridFunction::zeros(2, {12, 16}, {1.0, 1.0}), InvalidInput);
    CHECK_THROWS_AS(GridFunction::zeros(3, {16, 16}, {1.0, 1.0}), InvalidInput);
    CHECK_THROWS_AS(GridFunction::zeros(1, {16, 1}, {0.0, 1.0}), InvalidInput);
  }
}

TEST_SUITE("transform") {
  TEST_CASE("p* arithmetic") {
    CHECK(PStar(4.0).bound() == doctest::Approx(3.0));
    CHECK(PStar(4.0 / 3.0).bound() == doctest::Approx(3.0));
    CHECK(PStar(2.0).bound() == 1.0);
    CHECK(PStar(3.0).p_star == 3.0);
    CHECK(PStar(1.5).q == doctest::Approx(3.0));
  }

  TEST_CASE("lp norm examples") {
    const auto one = GridFunction::sample(1, {64, 1}, {1.0, 1.0}, [](double, double) { return Complex(1.0); });
    CHECK(lp_norm(one, 3.0) == doctest::Approx(1.0).epsilon(1e-15));
    const auto half = GridFunction::sample(1, {64, 1}, {1.0, 1.0}, [](double x, double) { return Complex(x < 0.5 ? 1.0 : 0.0); });
    CHECK(lp_norm(half, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    const auto s = GridFunction::sample(1, {1024, 1}, {2 * kPi, 1.0}, [](double x, double) { return Complex(std::sin(x)); });
    CHECK(std::abs(lp_norm(s, 2.0) - std::sqrt(kPi)) < 1e-6);
    CHECK_THROWS_AS(lp_norm(s, 0.5), InvalidInput);
  }

  TEST_CASE("constant symbol returns the input exactly") {
    const auto f = random_grid(2, 16, 3);
    const auto g = apply_multiplier(f, MultiplierSymbol::constant(1.0));
    CHECK(g.samples() == f.samples());
    const LevyMeasure m = DiscreteLevyMeasure::symmetrized(2, {{{2 * kPi / 16, 0.0}, 1.0}});
    const auto h = apply_multiplier(f, MultiplierSymbol::general(m, JumpModulator::constant(1.0)));
    Complex mean{};
    for (const auto& v : h.samples()) mean += v;
    CHECK(std::abs(mean) < 1e-10);
  }

  TEST_CASE("riesz2 in d = 1 negates a sine") {
    const auto f = GridFunction::sample(1, {64, 1}, {1.0, 1.0}, [](double x, double) { return Complex(std::sin(2 * kPi * x)); });
    const auto g = apply_multiplier(f, MultiplierSymbol::riesz2(1, 1));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(g[i] + f[i]) < 1e-12);
  }

  TEST_CASE("power alpha = 1 halves a diagonal product of cosines") {
    const double L = 2 * kPi;
    const auto f = GridFunction::sample(2, {32, 32}, {L, L}, [&](double x, double y) {
      return Complex(std::cos(2 * kPi * x / L) * std::cos(2 * kPi * y / L));
    });
    const auto g = apply_multiplier(f, MultiplierSymbol::power(1.0, 1, 2));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(g[i] - 0.5 * f[i]) < 1e-13);
  }

  TEST_CASE("apply matches direct circular convolution with the inverse-DFT kernel") {
    const auto f = random_grid(2, 8, 4);
    const auto sym = MultiplierSymbol::riesz_pair(1, 2, 2);
    const auto table = symbol_table(sym, f);
    std::vector<Complex> kernel = table;
    fft::inverse(kernel, 2, f.sizes());
    std::vector<Complex> direct(f.size());
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) {
        Complex s{};
        for (std::size_t a = 0; a < 8; ++a) {
          for (std::size_t b = 0; b < 8; ++b) s += kernel[((i - a + 8) % 8) * 8 + (j - b + 8) % 8] * f.at(a, b);
        }
        direct[i * 8 + j] = s;
      }
    }
    CHECK(rel_l2(apply_multiplier(f, sym).samples(), direct) < 1e-13);
  }

  TEST_CASE("linearity, commutation and pointwise products") {
    const auto f = random_grid(2, 32, 6);
    const auto g = random_grid(2, 32, 7);
    const auto r = MultiplierSymbol::riesz2(1, 2);
    const auto p = MultiplierSymbol::power(0.7, 2, 2);
    std::vector<Complex> sum(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) sum[i] = 2.0 * f[i] - Complex(0, 1) * g[i];
    const GridFunction fg(2, f.sizes(), f.lengths(), sum);
    const auto lhs = apply_multiplier(fg, r).samples();
    const auto a = apply_multiplier(f, r);
    const auto b = apply_multiplier(g, r);
    std::vector<Complex> rhs(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = 2.0 * a[i] - Complex(0, 1) * b[i];
    CHECK(rel_l2(lhs, rhs) < 1e-12);
    CHECK(rel_l2(apply_multiplier(apply_multiplier(f, r), p).samples(),
                 apply_multiplier(apply_multiplier(f, p), r).samples()) < 1e-12);
    CHECK(rel_l2(apply_multiplier(apply_multiplier(f, r), r).samples(),
                 apply_multiplier(f, MultiplierSymbol::product({r, r})).samples()) < 1e-12);
  }

  TEST_CASE("Plancherel bound and real-input reality") {
    const auto corpus = build_corpus({2, 64, 2 * kPi, 12, 3, false});
    const auto sym = MultiplierSymbol::power(1.3, 1, 2);
    for (const auto& m : corpus) {
      const auto g = apply_multiplier(m.function, sym);
      CHECK(lp_norm(g, 2.0) <= lp_norm(m.function, 2.0) * (1.0 + 1e-12));
      double im = 0.0;
      for (const auto& v : g.samples()) im = std::max(im, std::abs(v.imag()));
      CHECK(im <= 1e-10 * lp_norm(g, 2.0));
    }
  }

  TEST_CASE("dimension mismatch is rejected") {
    const auto f = random_grid(1, 16, 8);
    CHECK_THROWS_AS(apply_multiplier(f, MultiplierSymbol::beurling_ahlfors()), InvalidInput);
    CHECK_THROWS_AS(apply_multiplier(f, MultiplierSymbol::constant(1.0, 2)), InvalidInput);
  }

  TEST_CASE("norm-ratio sweep on a small corpus") {
    const auto corpus = build_corpus({2, 64, 2 * kPi, 12, 1, false});
    const auto rows = norm_ratio_sweep(MultiplierSymbol::riesz2(1, 2), corpus, {4.0 / 3.0, 2.0, 3.0, 4.0});
    for (const auto& r : rows) {
      CHECK_FALSE(r.violation);
      CHECK(r.max_ratio > 0.0);
    }
    CHECK(rows[1].p_star_minus_1 == 1.0);
    CHECK(rows[1].max_ratio <= 1.0 + 1e-12);
    CHECK(rows[2].max_ratio <= 2.0);
    std::vector<CorpusMember> zero{{"zero", GridFunction::zeros(2, {16, 16}, {1.0, 1.0})}};
    CHECK_THROWS_AS(norm_ratio_sweep(MultiplierSymbol::riesz2(1, 2), zero, {2.0}), InvalidInput);
    CHECK_THROWS_AS(norm_ratio_sweep(MultiplierSymbol::riesz2(1, 2), {}, {2.0}), InvalidInput);
  }

  TEST_CASE("Holder pairing stays under the ratio bound") {
    const auto corpus = build_corpus({2, 64, 2 * kPi, 8, 2, false});
    const auto sym = MultiplierSymbol::riesz_combo({1.0, -0.5});
    for (double p : {1.5, 3.0}) {
      const double q = p / (p - 1.0);
      for (std::size_t i = 0; i + 1 < corpus.size(); ++i) {
        const auto& f = corpus[i].function;
        const auto& g = corpus[i + 1].function;
        const auto mf = apply_multiplier(f, sym);
        Complex pair{};
        for (std::size_t k = 0; k < f.size(); ++k) pair += mf[k] * g[k];
        pair *= f.cell_volume();
        CHECK(std::abs(pair) <= PStar(p).bound() * lp_norm(f, p) * lp_norm(g, q));
      }
    }
  }
}

TEST_SUITE("corpus") {
  TEST_CASE("deterministic, sized and labelled") {
    const CorpusConfig c{2, 32, 2 * kPi, 14, 9, false};
    const auto a = build_corpus(c);
    const auto b = build_corpus(c);
    REQUIRE(a.size() == 14);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].id == b[i].id);
      CHECK(a[i].function.samples() == b[i].function.samples());
    }
    CHECK(a[0].id == "gaussian-00");
    CHECK_THROWS_AS(build_corpus({2, 32, 2 * kPi, 0, 1, false}), InvalidInput);
  }

  TEST_CASE("narrow bumps have the analytic L1 norm") {
    const double L = 2 * kPi;
    const auto g = gaussian_bump(2, 256, L, {1.0, 2.0}, 0.2);
    CHECK(lp_norm(g, 1.0) == doctest::Approx(2 * kPi * 0.04).epsilon(0.01));
    const double w = 0.5;
    const auto c = cosine_bump(2, 256, L, {3.0, 3.0}, w);
    // int_0^w (1 + cos(pi r / w)) / 2 * 2 pi r dr = pi w^2 (1/2 - 2/pi^2)
    CHECK(lp_norm(c, 1.0) == doctest::Approx(kPi * w * w * (0.5 - 2.0 / (kPi * kPi))).epsilon(0.01));
  }
}
