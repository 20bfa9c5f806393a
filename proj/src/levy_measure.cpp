#include "levymult/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>


#include "levymult/detail/quadrature.hpp"
#include "levymult/error.hpp"

namespace levymult {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAsymptoticStart = 200.0;  // tail of int cos(u) u^{-beta} handled by IBP beyond this
constexpr double kLocationTolerance = 1e-12;
constexpr double kPanelTolerance = 1e-15;  // absolute, per pi-panel of the oscillatory part

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool same_point(std::span<const double> a, std::span<const double> b, double scale) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > kLocationTolerance * std::max(1.0, scale)) return false;
  }
  return true;
}

bool mirrored(std::span<const double> a, std::span<const double> b, double scale) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] + b[i]) > kLocationTolerance * std::max(1.0, scale)) return false;
  }
  return true;
}

void check_finite(std::span<const double> xi) {
  for (double x : xi) {
    if (!std::isfinite(x)) throw InvalidInput("char_exponent: non-finite frequency component");
  }
}

// Pairs every entry with its mirror; throws when a mirror with equal weight is missing.
template <typename Points, typename GetPoint, typename GetWeight>
std::vector<std::size_t> pair_mirrors(const Points& pts, GetPoint point, GetWeight weight,
                                      const char* what) {
  std::vector<std::size_t> mirror(pts.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto pi = point(pts[i]);
    const double scale = norm2(pi);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (mirrored(pi, point(pts[j]), scale) &&
          std::abs(weight(pts[i]) - weight(pts[j])) <= 1e-12 * std::max(1.0, weight(pts[i]))) {
        mirror[i] = j;
        break;
      }
    }
    if (mirror[i] == pts.size()) {
      std::ostringstream msg;
      msg << what << ": entry " << i << " has no mirror with equal weight (measure must be symmetric)";
      throw InvalidInput(msg.str());
    }
  }
  return mirror;
}

// int_0^x (cos u - 1) u^{-1-alpha} du for 0 <= x <= 1, by term-wise integration of the cosine series.
double small_series(double alpha, double x) {
  if (x <= 0.0) return 0.0;
  double sum = 0.0;
  double x2 = x * x;
  double power = std::pow(x, 2.0 - alpha);  // x^{2k - alpha}
  double factorial = 2.0;                   // (2k)!
  for (int k = 1; k <= 30; ++k) {
    const double term = power / (factorial * (2.0 * k - alpha));
    sum += (k % 2 == 1) ? -term : term;
    if (term < 1e-18 * std::abs(sum)) break;
    power *= x2;
    factorial *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
  }
  return sum;
}

// Antiderivative of cos(u) u^{-beta} valid for large u (asymptotic IBP series).
double cosine_power_antiderivative(double beta, double x) {
  double sum = 0.0;
  double coeff = 1.0;  // (beta)_n / x^n
  const double s = std::sin(x);
  const double c = std::cos(x);
  for (int n = 0; n <= 12; ++n) {
    double trig = 0.0;
    switch (n % 4) {
      case 0: trig = s; break;
      case 1: trig = -c; break;
      case 2: trig = -s; break;
      case 3: trig = c; break;
    }
    sum += coeff * trig;
    coeff *= (beta + n) / x;
  }
  return sum * std::pow(x, -beta);
}

// int_a^b cos(u) u^{-beta} du with 1 <= a < b <= infinity; panels split at multiples of pi.
double cosine_power_integral(double beta, double a, double b) {
  if (b <= a) return 0.0;
  double total = 0.0;
  const double lo_end = std::min(b, kAsymptoticStart);
  if (a < lo_end) {
    auto integrand = [beta](double u) { return std::cos(u) * std::pow(u, -beta); };
    double left = a;
    double panel = std::floor(a / kPi) + 1.0;
    while (left < lo_end) {
      double right = panel * kPi;
      panel += 1.0;
      if (right <= left) continue;
      right = std::min(right, lo_end);
      total += detail::adaptive_gauss_kronrod<15>(integrand, left, right, kPanelTolerance, 12).value;
      left = right;
    }
  }
  if (b > kAsymptoticStart) {
    const double start = std::max(a, kAsymptoticStart);
    const double upper = std::isinf(b) ? 0.0 : cosine_power_antiderivative(beta, b);
    total += upper - cosine_power_antiderivative(beta, start);
  }
  return total;
}

double power_integral(double alpha, double a, double b) {
  // int_a^b u^{-1-alpha} du, a > 0
  const double hi = std::isinf(b) ? 0.0 : std::pow(b, -alpha);
  return (std::pow(a, -alpha) - hi) / alpha;
}

}  // namespace

DiscreteLevyMeasure::DiscreteLevyMeasure(std::size_t dimension, std::vector<Atom> atoms)
    : dimension_(dimension), atoms_(std::move(atoms)) {
  if (dimension_ != 1 && dimension_ != 2) {
    throw InvalidInput("DiscreteLevyMeasure: dimension must be 1 or 2");
  }
  if (atoms_.empty()) throw InvalidInput("DiscreteLevyMeasure: no atoms");
  for (const auto& a : atoms_) {
    if (a.location.size() != dimension_) {
      throw InvalidInput("DiscreteLevyMeasure: atom location has wrong dimension");
    }
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw InvalidInput("DiscreteLevyMeasure: weights must be positive and finite");
    }
    bool origin = true;
    for (double x : a.location) {
      if (!std::isfinite(x)) throw InvalidInput("DiscreteLevyMeasure: non-finite atom location");
      if (x != 0.0) origin = false;
    }
    if (origin) throw InvalidInput("DiscreteLevyMeasure: atom at the origin");
    total_mass_ += a.weight;
  }
  mirror_ = pair_mirrors(
      atoms_, [](const Atom& a) { return std::span<const double>(a.location); },
      [](const Atom& a) { return a.weight; }, "DiscreteLevyMeasure");
}

DiscreteLevyMeasure DiscreteLevyMeasure::symmetrized(std::size_t dimension,
                                                     const std::vector<Atom>& half) {
  std::vector<Atom> atoms;
  atoms.reserve(2 * half.size());
  for (const auto& a : half) {
    atoms.push_back(a);
    Atom m = a;
    for (double& x : m.location) x = -x;
    atoms.push_back(std::move(m));
  }
  return DiscreteLevyMeasure(dimension, std::move(atoms));
}

std::optional<std::size_t> DiscreteLevyMeasure::find_atom(std::span<const double> location) const {
  if (location.size() != dimension_) return std::nullopt;
  const double scale = norm2(location);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (same_point(atoms_[i].location, location, scale)) return i;
  }
  return std::nullopt;
}

TruncatedStableMeasure::TruncatedStableMeasure(double alpha, double epsilon, double outer_radius,
                                               std::vector<AngularAtom> angular_atoms)
    : alpha_(alpha),
      epsilon_(epsilon),
      outer_radius_(outer_radius),
      angular_atoms_(std::move(angular_atoms)) {
  if (!(alpha_ > 0.0 && alpha_ < 2.0)) throw InvalidInput("TruncatedStableMeasure: alpha must lie in (0,2)");
  if (!(epsilon_ >= 0.0) || !std::isfinite(epsilon_)) {
    throw InvalidInput("TruncatedStableMeasure: epsilon must be finite and >= 0");
  }
  if (!(outer_radius_ > epsilon_)) throw InvalidInput("TruncatedStableMeasure: outer_radius must exceed epsilon");
  if (angular_atoms_.empty()) throw InvalidInput("TruncatedStableMeasure: no angular atoms");
  dimension_ = angular_atoms_.front().direction.size();
  if (dimension_ == 0) throw InvalidInput("TruncatedStableMeasure: empty direction vector");
  double angular_mass = 0.0;
  for (const auto& a : angular_atoms_) {
    if (a.direction.size() != dimension_) {
      throw InvalidInput("TruncatedStableMeasure: inconsistent direction dimensions");
    }
    if (std::abs(norm2(a.direction) - 1.0) > 1e-12) {
      throw InvalidInput("TruncatedStableMeasure: directions must be unit vectors");
    }
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw InvalidInput("TruncatedStableMeasure: angular weights must be positive and finite");
    }
    angular_mass += a.weight;
  }
  mirror_ = pair_mirrors(
      angular_atoms_, [](const AngularAtom& a) { return std::span<const double>(a.direction); },
      [](const AngularAtom& a) { return a.weight; }, "TruncatedStableMeasure");
  if (epsilon_ > 0.0) {
    mass_scale_ = angular_mass * power_integral(alpha_, epsilon_, outer_radius_);
  } else {
    mass_scale_ = angular_mass;
  }
  unit_tail_ = cosine_power_integral(1.0 + alpha_, 1.0, std::numeric_limits<double>::infinity()) -
               power_integral(alpha_, 1.0, std::numeric_limits<double>::infinity());
}

TruncatedStableMeasure TruncatedStableMeasure::axis_stable(std::size_t dimension, double alpha,
                                                           double epsilon, double outer_radius) {
  std::vector<AngularAtom> atoms;
  for (std::size_t j = 0; j < dimension; ++j) {
    Vector e(dimension, 0.0);
    e[j] = 1.0;
    atoms.push_back({e, 1.0});
    e[j] = -1.0;
    atoms.push_back({e, 1.0});
  }
  return TruncatedStableMeasure(alpha, epsilon, outer_radius, std::move(atoms));
}

double TruncatedStableMeasure::radial_integral(double k) const {
  k = std::abs(k);
  if (k == 0.0) return 0.0;
  const double a = k * epsilon_;
  const double b = k * outer_radius_;
  double unit;
  if (std::isinf(b) && a <= 1.0) {
    unit = small_series(alpha_, 1.0) - small_series(alpha_, a) + unit_tail_;
  } else {
    unit = radial_unit_integral(alpha_, a, b);
  }
  return std::pow(k, alpha_) * unit;
}

double radial_unit_integral(double alpha, double a, double b) {
  if (!(a >= 0.0) || !(b >= a)) throw InvalidInput("radial_unit_integral: need 0 <= a <= b");
  double total = 0.0;
  if (a < 1.0) total += small_series(alpha, std::min(b, 1.0)) - small_series(alpha, a);
  if (b > 1.0) {
    const double lo = std::max(a, 1.0);
    total += cosine_power_integral(1.0 + alpha, lo, b) - power_integral(alpha, lo, b);
  }
  return total;
}

std::size_t dimension_of(const LevyMeasure& measure) {
  return std::visit([](const auto& m) { return m.dimension(); }, measure);
}

double mass_scale_of(const LevyMeasure& measure) {
  return std::visit(
      [](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, DiscreteLevyMeasure>) {
          return m.total_mass();
        } else {
          return m.mass_scale();
        }
      },
      measure);
}

double char_exponent(const DiscreteLevyMeasure& measure, std::span<const double> xi) {
  check_finite(xi);
  if (xi.size() != measure.dimension()) throw InvalidInput("char_exponent: dimension mismatch");
  double sum = 0.0;
  for (const auto& a : measure.atoms()) sum += a.weight * (std::cos(dot(xi, a.location)) - 1.0);
  return sum;
}

double char_exponent(const TruncatedStableMeasure& measure, std::span<const double> xi) {
  check_finite(xi);
  if (xi.size() != measure.dimension()) throw InvalidInput("char_exponent: dimension mismatch");
  double sum = 0.0;
  // Mirror pairs share the radial integral (cos is even).
  const auto& atoms = measure.angular_atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::size_t m = measure.mirror(i);
    if (m < i) continue;
    const double w = (m == i) ? atoms[i].weight : atoms[i].weight + atoms[m].weight;
    sum += w * measure.radial_integral(dot(xi, atoms[i].direction));
  }
  return sum;
}

double char_exponent(const LevyMeasure& measure, std::span<const double> xi) {
  return std::visit([&](const auto& m) { return char_exponent(m, xi); }, measure);
}

double stable_constant(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw InvalidInput("stable_constant: alpha must lie in (0,2)");
  return -kPi / (2.0 * std::sin(kPi * alpha / 2.0) * std::tgamma(1.0 + alpha));
}

double char_exponent_stable_closed_form(double alpha, std::span<const double> xi,
                                        const std::vector<AngularAtom>& angular_atoms) {
  const double c = stable_constant(alpha);
  check_finite(xi);
  double sum = 0.0;
  for (const auto& a : angular_atoms) {
    if (a.direction.size() != xi.size()) throw InvalidInput("closed form: dimension mismatch");
    sum += a.weight * std::pow(std::abs(dot(xi, a.direction)), alpha);
  }
  return c * sum;
}

double axis_sum_form(double alpha, std::span<const double> xi) {
  const double c = stable_constant(alpha);
  double sum = 0.0;
  for (double x : xi) sum += std::pow(std::abs(x), alpha);
  return c * sum;
}

std::optional<std::string> support_diagnostic(const LevyMeasure& measure) {
  std::vector<Vector> points;
  std::size_t d = dimension_of(measure);
  std::visit(
      [&](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, DiscreteLevyMeasure>) {
          for (const auto& a : m.atoms()) points.push_back(a.location);
        } else {
          for (const auto& a : m.angular_atoms()) points.push_back(a.direction);
        }
      },
      measure);
  // Gram-Schmidt rank.
  std::vector<Vector> basis;
  for (auto p : points) {
    for (const auto& b : basis) {
      const double c = dot(p, b);
      for (std::size_t i = 0; i < d; ++i) p[i] -= c * b[i];
    }
    const double n = norm2(p);
    if (n > 1e-9) {
      for (double& x : p) x /= n;
      basis.push_back(std::move(p));
    }
  }
  if (basis.size() == d) return std::nullopt;
  std::ostringstream msg;
  msg << "measure support spans a " << basis.size() << "-dimensional subspace of R^" << d
      << " (degenerate); symbols remain evaluable but vanish-denominator sets are larger";
  return msg.str();
}

}  // namespace levymult
