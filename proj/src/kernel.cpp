#include "levymult/kernel.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "levymult/detail/quadrature.hpp"
#include "levymult/error.hpp"
#include "levymult/fft.hpp"

namespace levymult {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
constexpr double kPanelTolerance = 1e-16;
constexpr double kAutoTolerance = 1e-13;  // relative to the L1 norm of the integrand

// Integral of the (d/dt p_t(x)) p_t(y) integrand over [lo, hi], hi may be +inf.
double time_integral(double x, double y, double lo, double hi, double tol, const char* what) {
  auto g = [x, y](double t) { return cauchy_density_dt(t, x) * cauchy_density(t, y); };
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  const double top = 4.0 * std::max(ax, ay);
  // K scales like 1/max(|x|,|y|)^2; panel tolerances follow.
  const double hi_scale = 1.0 / (kPi2 * std::max(ax, ay) * std::max(ax, ay));
  std::vector<double> cuts{lo};
  for (double c : {std::min(ax, ay), std::max(ax, ay), top}) {
    if (c > cuts.back() && c < hi) cuts.push_back(c);
  }
  double total = 0.0;
  double error = 0.0;
  double l1_total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto r = detail::adaptive_gauss_kronrod(g, cuts[i], cuts[i + 1], kPanelTolerance * hi_scale);
    total += r.value;
    error += r.error;
    l1_total += r.l1;
  }
  const double start = cuts.back();
  if (hi > start) {
    if (std::isinf(hi)) {
      // t = 1/s on (0, 1/start].
      auto tail = [&g](double s) { return s == 0.0 ? 0.0 : g(1.0 / s) / (s * s); };
      const auto r = detail::adaptive_gauss_kronrod(tail, 0.0, 1.0 / start, kPanelTolerance * hi_scale);
      total += r.value;
      error += r.error;
      l1_total += r.l1;
    } else {
      const auto r = detail::adaptive_gauss_kronrod(g, start, hi, kPanelTolerance * hi_scale);
      total += r.value;
      error += r.error;
      l1_total += r.l1;
    }
  }
  if (tol <= 0.0) tol = kAutoTolerance * std::max(l1_total, std::numeric_limits<double>::min());
  if (!(error <= tol)) throw ConvergenceFailure(std::string(what) + ": tolerance not reached", total, error);
  return total;
}

// Wrapped Cauchy distribution on a circle of circumference `period`: the mass
// in [0, y] (unwrapped, so it grows by 1 per period) and its t-derivative.
struct WrappedCauchy {
  double A;   // coth(pi t / period)
  double dA;  // dA/dt
  double period;

  WrappedCauchy(double t, double period_) : period(period_) {
    const double z = kPi * t / period;
    const double sh = std::sinh(z);
    A = std::cosh(z) / sh;
    dA = -(kPi / period) / (sh * sh);
  }

  // Returns (F(y), dF/dt(y)).
  std::pair<double, double> at(double y) const {
    const double theta = 2.0 * kPi * y / period;
    const double k = std::floor((theta + kPi) / (2.0 * kPi));
    const double tp = theta - 2.0 * kPi * k;
    const double s = std::sin(tp / 2.0);
    const double c = std::cos(tp / 2.0);
    const double F = k + std::atan2(A * s, c) / kPi;
    const double dF = dA * s * c / (c * c + A * A * s * s) / kPi;
    return {F, dF};
  }
};

}  // namespace

double cauchy_density(double t, double x) {
  if (!(t > 0.0)) throw InvalidInput("cauchy_density: t must be positive");
  return t / (kPi * (t * t + x * x));
}

double cauchy_density_dt(double t, double x) {
  if (!(t > 0.0)) throw InvalidInput("cauchy_density_dt: t must be positive");
  const double s = t * t + x * x;
  return (x * x - t * t) / (kPi * s * s);
}

double kernel_closed_form(double x, double y) {
  const double a = std::abs(x);
  const double b = std::abs(y);
  if (a == 0.0 && b == 0.0) throw SingularPoint("kernel_closed_form: undefined at the origin");
  if (b == 0.0) return std::numeric_limits<double>::infinity();
  if (a == 0.0) return -std::numeric_limits<double>::infinity();
  const double u = std::log(b / a);
  if (u == 0.0) return 0.0;
  if (std::abs(u) < 1.0) {
    // (sinh u - u cosh u) / (2 pi^2 a^2 e^u sinh^2 u), numerator as a series.
    const double u2 = u * u;
    double term = 1.0;  // u^{2k-2} / (2k+1)!, starting at k = 1
    double fact = 6.0;
    double series = 0.0;
    for (int k = 1; k <= 14; ++k) {
      series += 2.0 * k * term / fact;
      term *= u2;
      fact *= (2.0 * k + 2.0) * (2.0 * k + 3.0);
    }
    const double r = u / std::sinh(u);
    return -series * u * r * r / (2.0 * kPi2 * a * a * std::exp(u));
  }
  if (u > 0.0) {
    const double e = std::exp(-2.0 * u);
    const double d = -std::expm1(-2.0 * u);
    return ((1.0 - u) - e * (1.0 + u)) / (kPi2 * b * b * d * d);
  }
  const double v = -u;
  const double e = std::exp(-2.0 * v);
  const double d = -std::expm1(-2.0 * v);
  return ((v - 1.0) + e * (1.0 + v)) / (kPi2 * a * a * d * d);
}

double kernel_numeric(double x, double y, double tol) {
  if (x == 0.0 && y == 0.0) throw SingularPoint("kernel_numeric: undefined at the origin");
  if (y == 0.0) return std::numeric_limits<double>::infinity();
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  return time_integral(x, y, 0.0, std::numeric_limits<double>::infinity(), tol, "kernel_numeric");
}

double kernel_truncated(double eps, double T, double x, double y, double tol) {
  if (!(eps > 0.0)) throw InvalidInput("kernel_truncated: eps must be positive");
  if (eps > T) throw InvalidInput("kernel_truncated: need eps <= T");
  if (eps == T) return 0.0;
  return time_integral(x, y, eps, T, tol, "kernel_truncated");
}

std::vector<double> pv_cell_weights(std::size_t n, double eps, double T) {
  if (n < 8 || n % 2 != 0) throw InvalidInput("pv_cell_weights: period must be even and at least 8");
  if (!(eps >= 0.0) || !(T > eps)) throw InvalidInput("pv_cell_weights: need 0 <= eps < T");
  const std::size_t m = n / 2 + 1;
  std::vector<double> w(m * m, 0.0);
  std::vector<double> Q(m);
  std::vector<double> P(m);
  // Integrate in s = log t; the integrand decays like t for t -> 0 and like
  // exp(-2 pi t / n) for t -> inf.
  const double s_lo = eps > 0.0 ? std::log(eps) : -30.0;
  const double s_hi = std::min(std::log(8.0 * static_cast<double>(n)), std::log(T));
  if (!(s_hi > s_lo)) return w;
  using GL = boost::math::quadrature::gauss<double, 20>;
  const auto& nodes = GL::abscissa();
  const auto& weights = GL::weights();
  const int panels = static_cast<int>(std::ceil((s_hi - s_lo) / 0.5));
  const double hs = (s_hi - s_lo) / panels;
  auto accumulate = [&](double s, double quad_weight) {
    const double t = std::exp(s);
    const WrappedCauchy wc(t, static_cast<double>(n));
    auto lo = wc.at(-0.5);
    for (std::size_t k = 0; k < m; ++k) {
      const auto hi = wc.at(static_cast<double>(k) + 0.5);
      P[k] = hi.first - lo.first;
      Q[k] = hi.second - lo.second;
      lo = hi;
    }
    const double f = quad_weight * t;
    for (std::size_t i = 0; i < m; ++i) {
      const double qi = Q[i] * f;
      double* row = &w[i * m];
      for (std::size_t j = 0; j < m; ++j) row[j] += qi * P[j];
    }
  };
  for (int p = 0; p < panels; ++p) {
    const double mid = s_lo + (p + 0.5) * hs;
    const double half = 0.5 * hs;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (nodes[k] == 0.0) {
        accumulate(mid, half * weights[k]);
      } else {
        accumulate(mid - half * nodes[k], half * weights[k]);
        accumulate(mid + half * nodes[k], half * weights[k]);
      }
    }
  }
  return w;
}

GridFunction pv_convolve(const GridFunction& f, double rho, const PvKernel& kernel) {
  if (f.dimension() != 2) throw InvalidInput("pv_convolve: needs a two-dimensional grid");
  if (f.sizes()[0] != f.sizes()[1] || f.lengths()[0] != f.lengths()[1]) {
    throw InvalidInput("pv_convolve: needs a square grid");
  }
  if (kernel.axis != 1 && kernel.axis != 2) throw InvalidInput("pv_convolve: axis must be 1 or 2");
  const std::size_t n = f.sizes()[0];
  const double h = f.spacing(0);
  if (!(rho >= h * (1.0 - 1e-12))) throw InvalidInput("pv_convolve: cutoff smaller than a grid cell");
  const auto quad = pv_cell_weights(n, kernel.eps / h, kernel.T / h);
  const std::size_t m = n / 2 + 1;
  const double rho_cells = rho / h;
  std::vector<std::complex<double>> kern(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto si = GridFunction::signed_index(i, n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto sj = GridFunction::signed_index(j, n);
      if (std::hypot(static_cast<double>(si), static_cast<double>(sj)) < rho_cells) continue;
      std::size_t a = static_cast<std::size_t>(std::abs(si));
      std::size_t b = static_cast<std::size_t>(std::abs(sj));
      if (kernel.axis == 2) std::swap(a, b);
      kern[i * n + j] = quad[a * m + b];
    }
  }
  fft::forward(kern, 2, f.sizes());
  std::vector<std::complex<double>> data = f.samples();
  fft::forward(data, 2, f.sizes());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= kern[i];
  fft::inverse(data, 2, f.sizes());
  return GridFunction(2, f.sizes(), f.lengths(), std::move(data));
}

GridFunction singular_integral_apply(const GridFunction& f, double rho, std::size_t axis) {
  GridFunction pv = pv_convolve(f, rho, PvKernel{axis});
  for (std::size_t i = 0; i < pv.size(); ++i) pv[i] = 0.5 * f[i] - pv[i];
  return pv;
}

AnnulusIntegral annulus_integral(double a, double b) {
  if (!(a > 0.0 && b > a)) throw InvalidInput("annulus_integral: need 0 < a < b");
  boost::math::quadrature::tanh_sinh<double> ts;
  auto g = [](double theta) { return kernel_closed_form(std::cos(theta), std::sin(theta)); };
  double e1 = 0.0;
  double e2 = 0.0;
  double l1a = 0.0;
  double l1b = 0.0;
  const double q1 = ts.integrate(g, 0.0, kPi / 4.0, 1e-14, &e1, &l1a);
  const double q2 = ts.integrate(g, kPi / 4.0, kPi / 2.0, 1e-14, &e2, &l1b);
  const double angular = 4.0 * (q1 + q2);
  const double scale = std::log(b / a);
  return {angular, angular * scale, 4.0 * (e1 + e2) * scale};
}

}  // namespace levymult
