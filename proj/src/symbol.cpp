#include "levymult/symbol.hpp"

#include <cmath>
#include <sstream>


#include "levymult/detail/quadrature.hpp"
#include "levymult/error.hpp"

namespace levymult {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

void check_xi(std::span<const double> xi, std::size_t d, const char* what) {
  for (double x : xi) {
    if (!std::isfinite(x)) throw InvalidInput(std::string(what) + ": non-finite frequency component");
  }
  if (d != 0 && xi.size() != d) throw InvalidInput(std::string(what) + ": frequency has the wrong dimension");
}

void check_axis(std::size_t j, std::size_t d, const char* what) {
  if (d == 0) throw InvalidInput(std::string(what) + ": dimension must be positive");
  if (j == 0 || j > d) throw InvalidInput(std::string(what) + ": axis out of range (axes are 1-based)");
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

GeneralSymbol::GeneralSymbol(LevyMeasure measure, JumpModulator modulator, double zero_threshold)
    : measure_(std::move(measure)), modulator_(std::move(modulator)), zero_threshold_(zero_threshold) {
  phi_ = modulator_.on_atoms(measure_);
}

GeneralSymbol::Parts GeneralSymbol::parts(std::span<const double> xi) const {
  check_xi(xi, dimension(), "general symbol");
  Parts out{{0.0, 0.0}, 0.0};
  std::visit(overloaded{
                 [&](const DiscreteLevyMeasure& m) {
                   const auto& atoms = m.atoms();
                   for (std::size_t i = 0; i < atoms.size(); ++i) {
                     const double c = atoms[i].weight * (std::cos(dot(xi, atoms[i].location)) - 1.0);
                     out.numerator += c * phi_[i];
                     out.denominator += c;
                   }
                 },
                 [&](const TruncatedStableMeasure& m) {
                   const auto& atoms = m.angular_atoms();
                   for (std::size_t i = 0; i < atoms.size(); ++i) {
                     const std::size_t k = m.mirror(i);
                     if (k < i) continue;
                     const double w = (k == i) ? atoms[i].weight : atoms[i].weight + atoms[k].weight;
                     const double c = w * m.radial_integral(dot(xi, atoms[i].direction));
                     out.numerator += c * phi_[i];
                     out.denominator += c;
                   }
                 },
             },
             measure_);
  return out;
}

bool GeneralSymbol::is_psi_zero(double psi) const {
  return std::abs(psi) < zero_threshold_ * mass_scale_of(measure_);
}

Complex GeneralSymbol::operator()(std::span<const double> xi) const {
  const auto p = parts(xi);
  if (is_psi_zero(p.denominator)) return {0.0, 0.0};
  return p.numerator / p.denominator;
}

MultiplierSymbol::MultiplierSymbol(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const General&) {},
                 [](const FiniteTime& f) {
                   if (!(f.s < 0.0) || !std::isfinite(f.s)) throw InvalidInput("finite_time symbol: need s < 0");
                 },
                 [](const Power& p) {
                   if (!(p.alpha > 0.0 && p.alpha <= 2.0)) throw InvalidInput("power symbol: alpha must lie in (0,2]");
                   check_axis(p.j, p.d, "power symbol");
                 },
                 [](const Riesz2& r) { check_axis(r.j, r.d, "riesz2 symbol"); },
                 [](const RieszPair& r) {
                   check_axis(r.j, r.d, "riesz_pair symbol");
                   check_axis(r.k, r.d, "riesz_pair symbol");
                 },
                 [](const RieszCombo& r) {
                   if (r.coefficients.empty()) throw InvalidInput("riesz_combo symbol: no coefficients");
                   for (double a : r.coefficients) {
                     if (!(std::abs(a) <= 1.0)) throw InvalidInput("riesz_combo symbol: need |a_j| <= 1");
                   }
                 },
                 [](const BeurlingAhlfors&) {},
                 [](const FirstOrderRiesz& r) { check_axis(r.j, r.d, "first_order_riesz symbol"); },
                 [](const Constant& c) {
                   if (!std::isfinite(c.value.real()) || !std::isfinite(c.value.imag())) {
                     throw InvalidInput("constant symbol: value must be finite");
                   }
                 },
                 [](const Product& p) {
                   if (p.factors.empty()) throw InvalidInput("product symbol: no factors");
                   std::size_t d = 0;
                   for (const auto& f : p.factors) {
                     const std::size_t fd = f.dimension();
                     if (fd != 0 && d != 0 && fd != d) throw InvalidInput("product symbol: factor dimensions differ");
                     if (fd != 0) d = fd;
                   }
                 },
             },
             kind_);
}

MultiplierSymbol MultiplierSymbol::general(LevyMeasure measure, JumpModulator modulator) {
  return MultiplierSymbol(General{GeneralSymbol(std::move(measure), std::move(modulator))});
}
MultiplierSymbol MultiplierSymbol::finite_time(LevyMeasure measure, JumpModulator modulator, double s) {
  return MultiplierSymbol(FiniteTime{GeneralSymbol(std::move(measure), std::move(modulator)), s});
}
MultiplierSymbol MultiplierSymbol::power(double alpha, std::size_t j, std::size_t d) {
  return MultiplierSymbol(Power{alpha, j, d});
}
MultiplierSymbol MultiplierSymbol::riesz2(std::size_t j, std::size_t d) { return MultiplierSymbol(Riesz2{j, d}); }
MultiplierSymbol MultiplierSymbol::riesz_pair(std::size_t j, std::size_t k, std::size_t d) {
  return MultiplierSymbol(RieszPair{j, k, d});
}
MultiplierSymbol MultiplierSymbol::riesz_combo(std::vector<double> coefficients) {
  return MultiplierSymbol(RieszCombo{std::move(coefficients)});
}
MultiplierSymbol MultiplierSymbol::beurling_ahlfors() { return MultiplierSymbol(BeurlingAhlfors{}); }
MultiplierSymbol MultiplierSymbol::first_order_riesz(std::size_t j, std::size_t d) {
  return MultiplierSymbol(FirstOrderRiesz{j, d});
}
MultiplierSymbol MultiplierSymbol::constant(Complex value, std::size_t d) {
  return MultiplierSymbol(Constant{value, d});
}
MultiplierSymbol MultiplierSymbol::product(std::vector<MultiplierSymbol> factors) {
  return MultiplierSymbol(Product{std::move(factors)});
}

std::size_t MultiplierSymbol::dimension() const {
  return std::visit(overloaded{
                        [](const General& g) { return g.symbol.dimension(); },
                        [](const FiniteTime& f) { return f.symbol.dimension(); },
                        [](const Power& p) { return p.d; },
                        [](const Riesz2& r) { return r.d; },
                        [](const RieszPair& r) { return r.d; },
                        [](const RieszCombo& r) { return r.coefficients.size(); },
                        [](const BeurlingAhlfors&) { return std::size_t{2}; },
                        [](const FirstOrderRiesz& r) { return r.d; },
                        [](const Constant& c) { return c.d; },
                        [](const Product& p) {
                          std::size_t d = 0;
                          for (const auto& f : p.factors) d = std::max(d, f.dimension());
                          return d;
                        },
                    },
                    kind_);
}

Complex MultiplierSymbol::operator()(std::span<const double> xi) const {
  check_xi(xi, dimension(), "symbol");
  return std::visit(
      overloaded{
          [&](const General& g) { return g.symbol(xi); },
          [&](const FiniteTime& f) {
            const auto p = f.symbol.parts(xi);
            if (f.symbol.is_psi_zero(p.denominator)) return Complex{0.0, 0.0};
            return -std::expm1(2.0 * std::abs(f.s) * p.denominator) * (p.numerator / p.denominator);
          },
          [&](const Power& p) { return Complex(eval_power(p.alpha, p.j, xi)); },
          [&](const Riesz2& r) {
            const double n = norm_sq(xi);
            return n == 0.0 ? Complex{} : Complex(-xi[r.j - 1] * xi[r.j - 1] / n);
          },
          [&](const RieszPair& r) {
            const double n = norm_sq(xi);
            return n == 0.0 ? Complex{} : Complex(-2.0 * xi[r.j - 1] * xi[r.k - 1] / n);
          },
          [&](const RieszCombo& r) {
            const double n = norm_sq(xi);
            if (n == 0.0) return Complex{};
            double s = 0.0;
            for (std::size_t j = 0; j < xi.size(); ++j) s += r.coefficients[j] * xi[j] * xi[j];
            return Complex(-s / n);
          },
          [&](const BeurlingAhlfors&) {
            const Complex z(xi[0], xi[1]);
            if (z == Complex{}) return Complex{};
            return std::conj(z) / z;
          },
          [&](const FirstOrderRiesz& r) {
            const double n = norm_sq(xi);
            return n == 0.0 ? Complex{} : Complex(0.0, xi[r.j - 1] / std::sqrt(n));
          },
          [&](const Constant& c) { return c.value; },
          [&](const Product& p) {
            Complex v{1.0, 0.0};
            for (const auto& f : p.factors) v *= f(xi);
            return v;
          },
      },
      kind_);
}

std::string MultiplierSymbol::label() const {
  return std::visit(
      overloaded{
          [](const General&) { return std::string("general"); },
          [](const FiniteTime& f) { return "finite_time(s=" + fmt(f.s) + ")"; },
          [](const Power& p) {
            return "power(alpha=" + fmt(p.alpha) + ",j=" + std::to_string(p.j) + ",d=" + std::to_string(p.d) + ")";
          },
          [](const Riesz2& r) { return "riesz2(j=" + std::to_string(r.j) + ",d=" + std::to_string(r.d) + ")"; },
          [](const RieszPair& r) {
            return "riesz_pair(j=" + std::to_string(r.j) + ",k=" + std::to_string(r.k) + ",d=" + std::to_string(r.d) +
                   ")";
          },
          [](const RieszCombo& r) {
            std::string s = "riesz_combo(";
            for (std::size_t i = 0; i < r.coefficients.size(); ++i) s += (i ? "," : "") + fmt(r.coefficients[i]);
            return s + ")";
          },
          [](const BeurlingAhlfors&) { return std::string("beurling_ahlfors"); },
          [](const FirstOrderRiesz& r) {
            return "first_order_riesz(j=" + std::to_string(r.j) + ",d=" + std::to_string(r.d) + ")";
          },
          [](const Constant& c) { return "constant(" + fmt(c.value.real()) + "," + fmt(c.value.imag()) + ")"; },
          [](const Product& p) {
            std::string s = "product(";
            for (std::size_t i = 0; i < p.factors.size(); ++i) s += (i ? "*" : "") + p.factors[i].label();
            return s + ")";
          },
      },
      kind_);
}

Complex eval_general(const LevyMeasure& measure, const JumpModulator& modulator, std::span<const double> xi) {
  return GeneralSymbol(measure, modulator)(xi);
}

Complex eval_finite_time(const LevyMeasure& measure, const JumpModulator& modulator, double s,
                         std::span<const double> xi) {
  return MultiplierSymbol::finite_time(measure, modulator, s)(xi);
}

double eval_power(double alpha, std::size_t j, std::span<const double> xi) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidInput("eval_power: alpha must lie in (0,2]");
  check_axis(j, xi.size(), "eval_power");
  double denom = 0.0;
  for (double x : xi) denom += std::pow(std::abs(x), alpha);
  if (denom == 0.0) return 0.0;
  return std::pow(std::abs(xi[j - 1]), alpha) / denom;
}

std::array<double, 2> power_symbol_gradient(double alpha, std::size_t j, std::span<const double> xi) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidInput("power_symbol_gradient: alpha must lie in (0,2]");
  if (xi.size() != 2) throw InvalidInput("power_symbol_gradient: only d = 2 is supported");
  check_axis(j, 2, "power_symbol_gradient");
  if (xi[0] == 0.0 || xi[1] == 0.0) throw SingularPoint("power_symbol_gradient: not differentiable on the axes");
  const std::size_t jj = j - 1;
  const std::size_t o = 1 - jj;
  const double a = std::pow(std::abs(xi[jj]), alpha);
  const double b = std::pow(std::abs(xi[o]), alpha);
  const double s2 = (a + b) * (a + b);
  std::array<double, 2> g{};
  g[jj] = alpha * a / xi[jj] * b / s2;  // alpha |x|^{alpha-1} sgn(x) = alpha |x|^alpha / x
  g[o] = -alpha * b / xi[o] * a / s2;
  return g;
}

double power_gradient_energy(double alpha, double cutoff) {
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw InvalidInput("power_gradient_energy: cutoff must lie in (0,1)");
  // x = e^s; |d_1 M(x,1)|^2 dx = alpha^2 x^{2 alpha - 1} / (1 + x^alpha)^4 ds.
  auto f = [alpha](double s) {
    const double x = std::exp(s);
    const double xa = std::pow(x, alpha);
    const double d = 1.0 + xa;
    return alpha * alpha * std::pow(x, 2.0 * alpha - 1.0) / (d * d * d * d);
  };
  const double lo = std::log(cutoff);
  double total = 0.0;
  // Unit panels in log scale keep each piece well resolved.
  for (double a = lo; a < 0.0; a += 1.0) {
    const double b = std::min(a + 1.0, 0.0);
    total += detail::adaptive_gauss_kronrod(f, a, b, 1e-15 * (1.0 + std::abs(total)), 20).value;
  }
  return total;
}

Complex directional_limit(const MultiplierSymbol& symbol, std::span<const double> xi, std::span<const double> eta,
                          double r0, int levels) {
  if (xi.size() != eta.size()) throw InvalidInput("directional_limit: xi and eta differ in dimension");
  if (!(r0 > 0.0) || levels < 1) throw InvalidInput("directional_limit: need r0 > 0 and levels >= 1");
  std::vector<std::vector<Complex>> table(levels);
  std::vector<double> point(xi.size());
  for (int k = 0; k < levels; ++k) {
    const double r = r0 * std::ldexp(1.0, -k);
    for (std::size_t i = 0; i < xi.size(); ++i) point[i] = xi[i] + r * eta[i];
    table[k].push_back(symbol(point));
    for (int m = 1; m <= k; ++m) {
      const double f = std::ldexp(1.0, m);
      table[k].push_back((f * table[k][m - 1] - table[k - 1][m - 1]) / (f - 1.0));
    }
  }
  return table.back().back();
}

}  // namespace levymult
