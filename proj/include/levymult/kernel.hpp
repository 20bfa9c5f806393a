#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "levymult/grid_function.hpp"

namespace levymult {

/// Cauchy density p_t(x) = t / (pi (t^2 + x^2)).
double cauchy_density(double t, double x);
/// d/dt p_t(x) = (x^2 - t^2) / (pi (t^2 + x^2)^2).
double cauchy_density_dt(double t, double x);

/// K(x, y) = (-x^2 + y^2 + x^2 log|x/y| - y^2 log|y/x|) / (pi^2 (x^2 - y^2)^2).
///
/// Evaluated through u = log(|y|/|x|) with a series for |u| < 1, so the
/// diagonal value 0 comes out without cancellation. K is log-singular on the
/// axes: +inf on y = 0 and -inf on x = 0. Throws SingularPoint at (0, 0).
double kernel_closed_form(double x, double y);

/// int_0^inf (d/dt p_t(x)) p_t(y) dt by adaptive Gauss-Kronrod, split at |x|
/// and |y|, with the tail mapped by t = 1/s. Throws ConvergenceFailure when
/// the summed error estimate exceeds tol (absolute). tol <= 0 selects
/// 1e-13 times the L1 norm of the integrand.
double kernel_numeric(double x, double y, double tol = 0.0);

/// int_eps^T (d/dt p_t(x)) p_t(y) dt; zero when eps == T.
double kernel_truncated(double eps, double T, double x, double y, double tol = 0.0);

/// Which kernel a principal-value convolution uses. axis = 1 is K(x_1, x_2);
/// axis = 2 is the swapped kernel K(x_2, x_1). A finite window (eps, T)
/// selects the truncated kernel.
struct PvKernel {
  std::size_t axis = 1;
  double eps = 0.0;
  double T = std::numeric_limits<double>::infinity();
};

/// Cell integrals of the periodized kernel on the unit lattice of period n,
/// for cells m = (m_1, m_2) with 0 <= m_k <= n/2, row-major with stride
/// n/2 + 1. Homogeneity makes them independent of the grid spacing; eps and T
/// are in lattice units here.
std::vector<double> pv_cell_weights(std::size_t n, double eps = 0.0,
                                    double T = std::numeric_limits<double>::infinity());

/// Discrete principal-value convolution of f with K on a square periodic grid,
/// excluding the cells whose centers lie within rho of the origin. Throws
/// InvalidInput when rho is below one grid cell.
GridFunction pv_convolve(const GridFunction& f, double rho, const PvKernel& kernel = {});

/// f/2 - pv(K * f): the multiplier |xi_j| / (|xi_1| + |xi_2|) in spatial form.
GridFunction singular_integral_apply(const GridFunction& f, double rho, std::size_t axis = 1);

struct AnnulusIntegral {
  double angular;   // int_0^{2 pi} K(cos theta, sin theta) d theta
  double value;     // integral of K over a < |z| < b
  double error;     // quadrature error estimate of value
};

/// Integral of K over the annulus a < |(x, y)| < b.
AnnulusIntegral annulus_integral(double a, double b);

}  // namespace levymult
