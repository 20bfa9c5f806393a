#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "levymult/levy_measure.hpp"

namespace levymult {

/// Integer lattice coordinates; the second entry is unused in d = 1.
using LatticePoint = std::array<std::int64_t, 2>;

/// Atoms of a discrete measure expressed on the lattice h_1 Z x h_2 Z.
struct LatticeAtoms {
  std::size_t dimension = 1;
  std::array<double, 2> scale{1.0, 1.0};
  std::vector<LatticePoint> offsets;
  std::vector<double> weights;  // nu({z}), not normalized
  double total_mass = 0.0;
};

/// Throws UnsupportedMeasure when an atom is not an integer multiple of the scale.
LatticeAtoms lattice_atoms(const DiscreteLevyMeasure& measure, std::span<const double> scale);

/// Truncated p_t = e^{-t|nu|} sum_{n <= n_max} t^n/n! nu^{*n} on the lattice.
/// Stored densely on the box [-R_1, R_1] x [-R_2, R_2].
class TransitionMeasure {
 public:
  TransitionMeasure(std::size_t dimension, std::array<double, 2> scale, std::array<std::int64_t, 2> radius,
                    double time, int n_max, double tail_bound, std::vector<double> weights);

  std::size_t dimension() const noexcept { return dimension_; }
  std::array<double, 2> scale() const noexcept { return scale_; }
  std::array<std::int64_t, 2> radius() const noexcept { return radius_; }
  double time() const noexcept { return time_; }
  int n_max() const noexcept { return n_max_; }
  /// Poisson mass dropped by the truncation, P(N > n_max).
  double tail_bound() const noexcept { return tail_bound_; }

  double at(LatticePoint p) const;
  double total_mass() const;

  /// Calls fn(point, weight) for every stored point with nonzero weight.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    const std::int64_t r0 = radius_[0];
    const std::int64_t r1 = dimension_ == 2 ? radius_[1] : 0;
    std::size_t idx = 0;
    for (std::int64_t i = -r0; i <= r0; ++i) {
      for (std::int64_t j = -r1; j <= r1; ++j, ++idx) {
        if (weights_[idx] != 0.0) fn(LatticePoint{i, j}, weights_[idx]);
      }
    }
  }

  const std::vector<double>& dense_weights() const noexcept { return weights_; }

 private:
  std::size_t dimension_;
  std::array<double, 2> scale_;
  std::array<std::int64_t, 2> radius_;
  double time_;
  int n_max_;
  double tail_bound_;
  std::vector<double> weights_;
};

inline constexpr double kTransitionTolerance = 1e-12;
inline constexpr double kTransitionGuard = 50.0;  // max t |nu|

/// n_max is the smallest n with P(Poisson(t|nu|) > n) < tol.
TransitionMeasure transition_measure(const DiscreteLevyMeasure& measure, double t,
                                     double tol = kTransitionTolerance,
                                     std::span<const double> scale = {},
                                     double guard = kTransitionGuard);

TransitionMeasure transition_measure(const LatticeAtoms& atoms, double t, double tol = kTransitionTolerance,
                                     double guard = kTransitionGuard);

/// Lattice convolution; the result carries time t1 + t2 and the summed tail bounds.
TransitionMeasure convolve(const TransitionMeasure& a, const TransitionMeasure& b);

struct LevyKhinchinComparison {
  std::complex<double> lhs;  // sum_z e^{i xi.z} p_t(z)
  double rhs;                // e^{t Psi(xi)}
  double tail_bound;
};

LevyKhinchinComparison levy_khinchin_check(const DiscreteLevyMeasure& measure, double t,
                                           std::span<const double> xi, double tol = kTransitionTolerance,
                                           std::span<const double> scale = {});

}  // namespace levymult
