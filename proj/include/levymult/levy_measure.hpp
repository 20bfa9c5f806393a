#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace levymult {

using Vector = std::vector<double>;

struct Atom {
  Vector location;
  double weight = 0.0;
};

/// Finite symmetric Levy measure nu = sum_i w_i delta_{z_i}.
///
/// Invariants checked at construction: no atom at the origin, every atom
/// (z, w) has a mirror (-z, w), positive finite weights, dimension 1 or 2.
class DiscreteLevyMeasure {
 public:
  DiscreteLevyMeasure(std::size_t dimension, std::vector<Atom> atoms);

  /// nu = sum over a list of half-atoms, each mirrored automatically.
  static DiscreteLevyMeasure symmetrized(std::size_t dimension, const std::vector<Atom>& half);

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  double total_mass() const noexcept { return total_mass_; }

  /// Index of the atom at -z for atom i.
  std::size_t mirror(std::size_t i) const { return mirror_.at(i); }

  std::optional<std::size_t> find_atom(std::span<const double> location) const;

 private:
  std::size_t dimension_;
  std::vector<Atom> atoms_;
  std::vector<std::size_t> mirror_;
  double total_mass_ = 0.0;
};

struct AngularAtom {
  Vector direction;  // unit vector
  double weight = 0.0;
};

/// V(dr dtheta) = r^{-1-alpha} dr mu(dtheta) restricted to epsilon < r < outer_radius.
/// epsilon == 0 is the untruncated measure; outer_radius may be +infinity.
class TruncatedStableMeasure {
 public:
  TruncatedStableMeasure(double alpha, double epsilon, double outer_radius,
                         std::vector<AngularAtom> angular_atoms);

  /// Standard mu: unit mass at +-e_j for every axis j.
  static TruncatedStableMeasure axis_stable(std::size_t dimension, double alpha, double epsilon,
                                            double outer_radius = std::numeric_limits<double>::infinity());

  double alpha() const noexcept { return alpha_; }
  double epsilon() const noexcept { return epsilon_; }
  double outer_radius() const noexcept { return outer_radius_; }
  const std::vector<AngularAtom>& angular_atoms() const noexcept { return angular_atoms_; }
  std::size_t dimension() const noexcept { return dimension_; }

  /// Index of the angular atom at -theta for angular atom i.
  std::size_t mirror(std::size_t i) const { return mirror_.at(i); }

  /// Total mass of the truncated measure, or the angular mass when epsilon == 0.
  double mass_scale() const noexcept { return mass_scale_; }

  /// int_epsilon^R (cos(k r) - 1) r^{-1-alpha} dr.
  double radial_integral(double k) const;

 private:
  double alpha_;
  double epsilon_;
  double outer_radius_;
  std::vector<AngularAtom> angular_atoms_;
  std::vector<std::size_t> mirror_;
  std::size_t dimension_;
  double mass_scale_ = 0.0;
  double unit_tail_ = 0.0;  // int_1^inf (cos u - 1) u^{-1-alpha} du, cached
};

using LevyMeasure = std::variant<DiscreteLevyMeasure, TruncatedStableMeasure>;

std::size_t dimension_of(const LevyMeasure& measure);
double mass_scale_of(const LevyMeasure& measure);

/// Default absolute tolerance of the radial quadrature.
inline constexpr double kRadialTolerance = 1e-10;

/// Psi(xi) = int (cos xi.z - 1) nu(dz). Exact finite sum for discrete
/// measures, radial quadrature for truncated-stable ones.
double char_exponent(const LevyMeasure& measure, std::span<const double> xi);
double char_exponent(const DiscreteLevyMeasure& measure, std::span<const double> xi);
double char_exponent(const TruncatedStableMeasure& measure, std::span<const double> xi);

/// c_alpha = -pi / (2 sin(pi alpha / 2) Gamma(1 + alpha)).
double stable_constant(double alpha);

/// c_alpha * sum_theta w_theta |xi.theta|^alpha, the exponent of the
/// untruncated stable measure.
double char_exponent_stable_closed_form(double alpha, std::span<const double> xi,
                                        const std::vector<AngularAtom>& angular_atoms);

/// c_alpha * (|xi_1|^alpha + ... + |xi_d|^alpha), the axis-sum form. For the
/// standard two-atoms-per-axis mu this is exactly half of the closed form.
double axis_sum_form(double alpha, std::span<const double> xi);

/// int_a^b (cos u - 1) u^{-1-alpha} du for 0 <= a <= b <= infinity.
double radial_unit_integral(double alpha, double a, double b);

/// Empty when the support spans R^d; otherwise a human-readable note that the
/// measure is concentrated on a proper subspace.
std::optional<std::string> support_diagnostic(const LevyMeasure& measure);

}  // namespace levymult
