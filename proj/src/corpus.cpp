#include "levymult/corpus.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "levymult/error.hpp"

namespace levymult {

namespace {

constexpr double kPi = std::numbers::pi;

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x636f7270u};
    rng_.seed(seq);
  }
  double operator()() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }
  double operator()(double a, double b) { return a + (b - a) * (*this)(); }
  int integer(int lo, int hi) { return lo + static_cast<int>((*this)() * (hi - lo + 1)); }

 private:
  std::mt19937_64 rng_;
};

double wrap(double dx, double length) { return dx - length * std::round(dx / length); }

double periodic_distance_sq(double x, double y, std::array<double, 2> c, std::size_t d, double length) {
  const double a = wrap(x - c[0], length);
  const double b = d == 2 ? wrap(y - c[1], length) : 0.0;
  return a * a + b * b;
}

std::array<std::size_t, 2> sizes_for(std::size_t d, std::size_t n) { return {n, d == 2 ? n : 1}; }

std::string make_id(const char* kind, std::size_t index) {
  std::string num = std::to_string(index);
  if (num.size() < 2) num = "0" + num;
  return std::string(kind) + "-" + num;
}

}  // namespace

GridFunction gaussian_bump(std::size_t d, std::size_t n, double length, std::array<double, 2> center,
                           double sigma) {
  return GridFunction::sample(d, sizes_for(d, n), {length, length}, [&](double x, double y) {
    return GridFunction::Complex(std::exp(-periodic_distance_sq(x, y, center, d, length) / (2.0 * sigma * sigma)));
  });
}

GridFunction cosine_bump(std::size_t d, std::size_t n, double length, std::array<double, 2> center, double width) {
  return GridFunction::sample(d, sizes_for(d, n), {length, length}, [&](double x, double y) {
    const double r = std::sqrt(periodic_distance_sq(x, y, center, d, length));
    return GridFunction::Complex(r < width ? 0.5 * (1.0 + std::cos(kPi * r / width)) : 0.0);
  });
}

std::vector<CorpusMember> build_corpus(const CorpusConfig& config) {
  const std::size_t d = config.dimension;
  if (d != 1 && d != 2) throw InvalidInput("corpus: dimension must be 1 or 2");
  if (config.count == 0) throw InvalidInput("corpus: count must be positive");
  const double L = config.length;
  const auto sizes = sizes_for(d, config.n);
  const std::array<double, 2> lengths{L, L};
  Uniform u(config.seed);
  std::vector<CorpusMember> out;
  const std::size_t kinds = config.smooth_only ? 3 : 6;
  for (std::size_t i = 0; i < config.count; ++i) {
    const std::array<double, 2> c{u(0.0, L), u(0.0, L)};
    switch (i % kinds) {
      case 0:
        out.push_back({make_id("gaussian", i), gaussian_bump(d, config.n, L, c, u(0.03, 0.08) * L)});
        break;
      case 1:
        out.push_back({make_id("cosine_bump", i), cosine_bump(d, config.n, L, c, u(0.05, 0.2) * L)});
        break;
      case 2: {
        const int terms = u.integer(2, 5);
        std::vector<std::array<double, 5>> modes;  // k1, k2, re, im, unused
        for (int t = 0; t < terms; ++t) {
          modes.push_back({static_cast<double>(u.integer(-6, 6)), static_cast<double>(d == 2 ? u.integer(-6, 6) : 0),
                           u(-1.0, 1.0), u(-1.0, 1.0), 0.0});
        }
        // Real part only, so real symbols keep the member real.
        out.push_back({make_id("trig_poly", i), GridFunction::sample(d, sizes, lengths, [&](double x, double y) {
                         double v = 0.0;
                         for (const auto& m : modes) {
                           const double ph = 2.0 * kPi * (m[0] * x + m[1] * y) / L;
                           v += m[2] * std::cos(ph) - m[3] * std::sin(ph);
                         }
                         return GridFunction::Complex(v);
                       })});
        break;
      }
      case 3: {
        const double a = u(0.05, 0.3) * L;
        const double b = u(0.05, 0.3) * L;
        out.push_back({make_id("box", i), GridFunction::sample(d, sizes, lengths, [&](double x, double y) {
                         const bool in = std::abs(wrap(x - c[0], L)) < a && (d == 1 || std::abs(wrap(y - c[1], L)) < b);
                         return GridFunction::Complex(in ? 1.0 : 0.0);
                       })});
        break;
      }
      case 4: {
        const double r = u(0.05, 0.3) * L;
        out.push_back({make_id("disk", i), GridFunction::sample(d, sizes, lengths, [&](double x, double y) {
                         return GridFunction::Complex(periodic_distance_sq(x, y, c, d, L) < r * r ? 1.0 : 0.0);
                       })});
        break;
      }
      default: {
        const double k1 = u.integer(1, 8);
        const double k2 = u.integer(1, 8);
        const double p1 = u(0.0, 2.0 * kPi);
        const double p2 = u(0.0, 2.0 * kPi);
        out.push_back({make_id("sign_pattern", i), GridFunction::sample(d, sizes, lengths, [&](double x, double y) {
                         const double s1 = std::cos(2.0 * kPi * k1 * x / L + p1) >= 0.0 ? 1.0 : -1.0;
                         const double s2 = d == 2 ? (std::cos(2.0 * kPi * k2 * y / L + p2) >= 0.0 ? 1.0 : -1.0) : 1.0;
                         return GridFunction::Complex(s1 * s2);
                       })});
        break;
      }
    }
  }
  return out;
}

}  // namespace levymult
