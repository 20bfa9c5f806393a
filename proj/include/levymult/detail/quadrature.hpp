#pragma once

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace levymult::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // absolute
  double l1 = 0.0;
};

/// Adaptive bisection over Boost's fixed Gauss-Kronrod rule. A panel is
/// accepted once |K - G| (scaled to the panel) is within its share of
/// abs_tol or within rounding of its own value.
template <unsigned Points = 31, typename F>
QuadratureResult adaptive_gauss_kronrod(F&& f, double a, double b, double abs_tol, unsigned max_depth = 30) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, Points>;
  QuadratureResult out;
  if (!(b > a)) return out;
  struct Panel {
    double a, b, tol;
    unsigned depth;
  };
  Panel stack[64];
  int top = 0;
  stack[top++] = {a, b, abs_tol, 0};
  while (top > 0) {
    const Panel p = stack[--top];
    double err = 0.0;
    double l1 = 0.0;
    const double v = Rule::integrate(f, p.a, p.b, 0, 0.0, &err, &l1);
    // Boost reports the non-adaptive error on the reference interval [-1, 1].
    err *= 0.5 * (p.b - p.a);
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() * l1;
    if (err <= p.tol || err <= floor || p.depth >= max_depth || top >= 62) {
      out.value += v;
      out.error += err;
      out.l1 += l1;
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    stack[top++] = {mid, p.b, 0.5 * p.tol, p.depth + 1};
    stack[top++] = {p.a, mid, 0.5 * p.tol, p.depth + 1};
  }
  return out;
}

}  // namespace levymult::detail
