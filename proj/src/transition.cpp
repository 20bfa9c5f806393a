#include "levymult/transition.hpp"

#include <algorithm>
#include <cmath>

#include "levymult/error.hpp"

namespace levymult {

namespace {

std::size_t box_index(LatticePoint p, std::array<std::int64_t, 2> radius, std::size_t dimension) {
  const std::int64_t width = dimension == 2 ? 2 * radius[1] + 1 : 1;
  const std::int64_t j = dimension == 2 ? p[1] + radius[1] : 0;
  return static_cast<std::size_t>((p[0] + radius[0]) * width + j);
}

bool inside(LatticePoint p, std::array<std::int64_t, 2> radius, std::size_t dimension) {
  if (std::abs(p[0]) > radius[0]) return false;
  if (dimension == 2 && std::abs(p[1]) > radius[1]) return false;
  return true;
}

std::size_t box_size(std::array<std::int64_t, 2> radius, std::size_t dimension) {
  return static_cast<std::size_t>((2 * radius[0] + 1) * (dimension == 2 ? 2 * radius[1] + 1 : 1));
}

}  // namespace

LatticeAtoms lattice_atoms(const DiscreteLevyMeasure& measure, std::span<const double> scale) {
  LatticeAtoms out;
  out.dimension = measure.dimension();
  for (std::size_t k = 0; k < out.dimension; ++k) {
    out.scale[k] = scale.empty() ? 1.0 : scale[k];
    if (!(out.scale[k] > 0.0) || !std::isfinite(out.scale[k])) {
      throw InvalidInput("lattice scale must be positive and finite");
    }
  }
  if (!scale.empty() && scale.size() != out.dimension) throw InvalidInput("lattice scale has wrong dimension");
  for (const auto& a : measure.atoms()) {
    LatticePoint p{0, 0};
    for (std::size_t k = 0; k < out.dimension; ++k) {
      const double r = a.location[k] / out.scale[k];
      const double n = std::round(r);
      if (std::abs(r - n) > 1e-9 * std::max(1.0, std::abs(r))) {
        throw UnsupportedMeasure("atom is not on the lattice; transition measures need lattice-supported nu");
      }
      p[k] = static_cast<std::int64_t>(n);
    }
    out.offsets.push_back(p);
    out.weights.push_back(a.weight);
    out.total_mass += a.weight;
  }
  return out;
}

TransitionMeasure::TransitionMeasure(std::size_t dimension, std::array<double, 2> scale,
                                     std::array<std::int64_t, 2> radius, double time, int n_max,
                                     double tail_bound, std::vector<double> weights)
    : dimension_(dimension),
      scale_(scale),
      radius_(radius),
      time_(time),
      n_max_(n_max),
      tail_bound_(tail_bound),
      weights_(std::move(weights)) {
  if (dimension_ == 1) radius_[1] = 0;
  if (weights_.size() != box_size(radius_, dimension_)) {
    throw InvalidInput("TransitionMeasure: weight array does not match the lattice box");
  }
}

double TransitionMeasure::at(LatticePoint p) const {
  if (dimension_ == 1) p[1] = 0;
  if (!inside(p, radius_, dimension_)) return 0.0;
  return weights_[box_index(p, radius_, dimension_)];
}

double TransitionMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

TransitionMeasure transition_measure(const LatticeAtoms& atoms, double t, double tol, double guard) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("transition_measure: t must be finite and >= 0");
  if (!(tol > 0.0)) throw InvalidInput("transition_measure: tolerance must be positive");
  const double lambda = t * atoms.total_mass;
  if (lambda > guard) throw InvalidInput("transition_measure: t|nu| exceeds the guard");
  const std::size_t d = atoms.dimension;

  // Poisson weights and their upper tails.
  std::vector<double> poisson{std::exp(-lambda)};
  for (int n = 1;; ++n) {
    const double next = poisson.back() * lambda / n;
    poisson.push_back(next);
    if (n > lambda && next < 1e-300) break;
    if (n > lambda && next < tol * 1e-6) break;
  }
  std::vector<double> upper_tail(poisson.size() + 1, 0.0);  // upper_tail[n] = sum_{k >= n}
  for (std::size_t n = poisson.size(); n-- > 0;) upper_tail[n] = upper_tail[n + 1] + poisson[n];
  int n_max = 0;
  while (upper_tail[n_max + 1] >= tol) ++n_max;
  const double tail = upper_tail[n_max + 1];

  std::array<std::int64_t, 2> reach{0, 0};
  for (const auto& o : atoms.offsets) {
    for (std::size_t k = 0; k < d; ++k) reach[k] = std::max(reach[k], std::abs(o[k]));
  }
  std::array<std::int64_t, 2> radius{reach[0] * n_max, d == 2 ? reach[1] * n_max : 0};

  std::vector<double> result(box_size(radius, d), 0.0);
  std::vector<double> power(result.size(), 0.0);  // nu-tilde^{*n}
  std::vector<double> next(result.size(), 0.0);
  power[box_index({0, 0}, radius, d)] = 1.0;
  std::array<std::int64_t, 2> support{0, 0};  // current radius of nu-tilde^{*n}

  for (int n = 0;; ++n) {
    const double pw = poisson[n];
    for (std::int64_t i = -support[0]; i <= support[0]; ++i) {
      for (std::int64_t j = -support[1]; j <= support[1]; ++j) {
        const std::size_t idx = box_index({i, j}, radius, d);
        result[idx] += pw * power[idx];
      }
    }
    if (n == n_max) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::int64_t i = -support[0]; i <= support[0]; ++i) {
      for (std::int64_t j = -support[1]; j <= support[1]; ++j) {
        const double w = power[box_index({i, j}, radius, d)];
        if (w == 0.0) continue;
        for (std::size_t a = 0; a < atoms.offsets.size(); ++a) {
          const LatticePoint q{i + atoms.offsets[a][0], d == 2 ? j + atoms.offsets[a][1] : 0};
          next[box_index(q, radius, d)] += w * atoms.weights[a] / atoms.total_mass;
        }
      }
    }
    std::swap(power, next);
    support[0] += reach[0];
    if (d == 2) support[1] += reach[1];
  }
  return TransitionMeasure(d, atoms.scale, radius, t, n_max, tail, std::move(result));
}

TransitionMeasure transition_measure(const DiscreteLevyMeasure& measure, double t, double tol,
                                     std::span<const double> scale, double guard) {
  return transition_measure(lattice_atoms(measure, scale), t, tol, guard);
}

TransitionMeasure convolve(const TransitionMeasure& a, const TransitionMeasure& b) {
  if (a.dimension() != b.dimension() || a.scale() != b.scale()) {
    throw InvalidInput("convolve: transition measures live on different lattices");
  }
  const std::size_t d = a.dimension();
  std::array<std::int64_t, 2> radius{a.radius()[0] + b.radius()[0],
                                     d == 2 ? a.radius()[1] + b.radius()[1] : 0};
  std::vector<double> out(box_size(radius, d), 0.0);
  a.for_each([&](LatticePoint p, double wa) {
    b.for_each([&](LatticePoint q, double wb) {
      out[box_index({p[0] + q[0], p[1] + q[1]}, radius, d)] += wa * wb;
    });
  });
  return TransitionMeasure(d, a.scale(), radius, a.time() + b.time(), a.n_max() + b.n_max(),
                           a.tail_bound() + b.tail_bound(), std::move(out));
}

LevyKhinchinComparison levy_khinchin_check(const DiscreteLevyMeasure& measure, double t,
                                           std::span<const double> xi, double tol,
                                           std::span<const double> scale) {
  const auto p = transition_measure(measure, t, tol, scale);
  if (xi.size() != p.dimension()) throw InvalidInput("levy_khinchin_check: dimension mismatch");
  std::complex<double> lhs{0.0, 0.0};
  p.for_each([&](LatticePoint z, double w) {
    double phase = 0.0;
    for (std::size_t k = 0; k < p.dimension(); ++k) phase += xi[k] * static_cast<double>(z[k]) * p.scale()[k];
    lhs += w * std::polar(1.0, phase);
  });
  return {lhs, std::exp(t * char_exponent(measure, xi)), p.tail_bound()};
}

}  // namespace levymult
