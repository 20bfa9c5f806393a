#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "levymult/grid_function.hpp"
#include "levymult/levy_measure.hpp"
#include "levymult/modulator.hpp"
#include "levymult/transition.hpp"

namespace levymult {

using Complex = std::complex<double>;

/// The periodic lattice (Z / N_1) x (Z / N_2) with spacing L_k / N_k, taken
/// from a GridFunction.
struct Torus {
  std::size_t dimension = 1;
  std::array<std::size_t, 2> sizes{1, 1};
  std::array<double, 2> lengths{1.0, 1.0};

  static Torus of(const GridFunction& f);
  std::size_t size() const { return sizes[0] * (dimension == 2 ? sizes[1] : 1); }
  std::array<double, 2> spacing() const;
  /// Row-major index of p, wrapped periodically.
  std::size_t index(LatticePoint p) const;
};

/// Jump times S_1 < S_2 < ... in (s, u] and the atom index of each jump.
struct PoissonPath {
  double s = 0.0;
  double u = 0.0;
  std::vector<double> times;
  std::vector<std::size_t> atoms;
  std::uint64_t seed = 0;

  std::size_t jump_count() const { return times.size(); }
};

/// Seed of path `index` in an ensemble with master seed `master`.
std::uint64_t path_seed(std::uint64_t master, std::uint64_t index);

/// Exponential gaps with mean 1/|nu|, jumps drawn from nu / |nu|.
PoissonPath sample_path(const DiscreteLevyMeasure& measure, double s, double u, std::uint64_t seed);

/// X_{s,t} in lattice units, or the left limit X_{s,t-}.
LatticePoint path_position(const PoissonPath& path, const LatticeAtoms& atoms, double t, bool left_limit = false);

/// Parabolic extension v -> P_{v,u} f on a torus together with the
/// compensator of the transformed martingale.
class Semigroup {
 public:
  virtual ~Semigroup() = default;

  virtual const Torus& torus() const = 0;
  virtual double terminal_time() const = 0;

  /// P_{v,u} f(y), v <= u.
  virtual Complex value(double v, LatticePoint y) const = 0;

  /// int_a^b sum_z w(z) [P_{v,u} f(y + z) - P_{v,u} f(y)] dv with w = nu * phi.
  virtual Complex compensator(double a, double b, LatticePoint y) const = 0;
};

/// Exact semigroup on the torus through the discrete Fourier transform; the
/// compensator is integrated in closed form mode by mode.
class SpectralSemigroup final : public Semigroup {
 public:
  /// weights[a] = nu({z_a}) phi(z_a) for every atom of `atoms`.
  SpectralSemigroup(const LatticeAtoms& atoms, std::vector<Complex> weights, const GridFunction& f, double u);

  const Torus& torus() const override { return torus_; }
  double terminal_time() const override { return u_; }
  Complex value(double v, LatticePoint y) const override;
  Complex compensator(double a, double b, LatticePoint y) const override;

  /// Unnormalized DFT of f.
  const std::vector<Complex>& f_hat() const { return f_hat_; }
  /// Psi at every lattice frequency.
  const std::vector<double>& psi() const { return psi_; }
  /// sum_z w(z) (e^{i xi.z} - 1) at every lattice frequency.
  const std::vector<Complex>& psi_weighted() const { return psi_w_; }
  Complex weight_sum() const { return weight_sum_; }

  /// e^{2 pi i k.y / N} for mode index m.
  Complex phase(std::size_t mode, LatticePoint y) const;

  /// int_a^b e^{(u - v) Psi_m} dv.
  double time_factor(std::size_t mode, double a, double b) const;

 private:
  Torus torus_;
  double u_;
  std::vector<Complex> f_hat_;
  std::vector<double> psi_;
  std::vector<Complex> psi_w_;
  Complex weight_sum_{};
  std::vector<std::array<std::int64_t, 2>> modes_;  // signed frequency index per mode
  std::vector<std::vector<Complex>> roots_;          // e^{2 pi i j / N_k}
};

/// Semigroup built from truncated transition measures p_t wrapped onto the
/// torus. The compensator uses Gauss-Legendre in v, eight nodes per unit time
/// doubled until two successive estimates agree to quadrature_tol.
class ConvolutionSemigroup final : public Semigroup {
 public:
  ConvolutionSemigroup(const LatticeAtoms& atoms, std::vector<Complex> weights, const GridFunction& f, double u,
                       double transition_tol = kTransitionTolerance, double quadrature_tol = 1e-9);

  const Torus& torus() const override { return torus_; }
  double terminal_time() const override { return u_; }
  Complex value(double v, LatticePoint y) const override;
  Complex compensator(double a, double b, LatticePoint y) const override;

 private:
  Complex integrand(double v, LatticePoint y) const;

  LatticeAtoms atoms_;
  std::vector<Complex> weights_;
  Torus torus_;
  std::vector<Complex> f_;
  double u_;
  double transition_tol_;
  double quadrature_tol_;
};

/// nu({z}) phi(z) per atom; throws when phi is undefined on an atom.
std::vector<Complex> jump_weights(const DiscreteLevyMeasure& measure, const JumpModulator& modulator);

/// Lattice atoms of `measure` on the spacing of the torus.
LatticeAtoms torus_atoms(const DiscreteLevyMeasure& measure, const Torus& torus);

struct MartingaleSample {
  double t = 0.0;
  Complex G;        // P_{t,u} f(x + X_{s,t})
  Complex F;        // transformed martingale
  double GG = 0.0;  // [G,G]_t
  double FF = 0.0;  // [F,F]_t
  double D = 0.0;   // [G,G]_t - [F,F]_t accumulated from its increments
};

struct MartingalePair {
  LatticePoint x{0, 0};
  double s = 0.0;
  double u = 0.0;
  std::vector<MartingaleSample> trajectory;   // at s, after every jump, and at u
  std::vector<MartingaleSample> checkpoints;  // at the requested times
  std::size_t subordination_violations = 0;   // steps where D decreased or went negative
};

/// G and F along one path started at x. phi_on_atoms[a] is phi at atom a.
MartingalePair evolve_martingales(const PoissonPath& path, LatticePoint x, const Semigroup& field,
                                  const LatticeAtoms& atoms, const std::vector<Complex>& phi_on_atoms,
                                  std::span<const double> checkpoints = {});

struct Scenario {
  std::string id;
  DiscreteLevyMeasure measure;
  JumpModulator modulator;
  GridFunction f;
  LatticePoint x{0, 0};
  double s = 0.0;
  double u = 1.0;
  std::vector<double> checkpoints;  // strictly inside (s, u)
  std::size_t n_paths = 100000;
  std::uint64_t seed = 1;
};

/// Per-path samples of an ensemble, at times s, the checkpoints, and u.
struct Ensemble {
  std::string scenario_id;
  std::size_t n_paths = 0;
  std::vector<double> times;
  std::vector<std::vector<Complex>> F;  // [time][path]
  std::vector<std::vector<Complex>> G;
  std::vector<double> FF_u;
  std::vector<double> GG_u;
  std::vector<std::uint32_t> jump_counts;
  std::size_t subordination_violations = 0;
  std::size_t increments_checked = 0;
  /// max |F_t - (G_t - G_s)| over paths and times; meaningful for phi == 1.
  double identity_gap = 0.0;
};

/// Simulates scenario.n_paths paths; results do not depend on `workers`.
Ensemble run_ensemble(const Scenario& scenario, unsigned workers = 0);

struct MeanEstimate {
  Complex mean;
  double stderr_re = 0.0;
  double stderr_im = 0.0;

  /// |Re| and |Im| within k standard errors (plus rounding slack).
  bool within(double k, double slack = 1e-12) const;
};

MeanEstimate estimate_mean(const std::vector<Complex>& samples);
MeanEstimate estimate_mean(const std::vector<double>& samples);

struct MartingaleReport {
  double t1 = 0.0;
  double t2 = 0.0;
  MeanEstimate dF;  // E[F_{t2} - F_{t1}]
  MeanEstimate dG;  // E[G_{t2} - G_{t1}]
  bool pass = false;
};

/// Checks E[F_{t2} - F_{t1}] = 0 and E[G_{t2} - G_{t1}] = 0 within 3 standard
/// errors. t1 and t2 must be among the ensemble's times.
MartingaleReport martingale_property_check(const Ensemble& ensemble, double t1, double t2);

struct BurkholderRow {
  double p = 0.0;
  double lhs = 0.0;  // E|F_u|^p
  double lhs_stderr = 0.0;
  double rhs = 0.0;  // (p* - 1)^p E|G_u|^p
  double rhs_stderr = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool pass = false;    // lhs <= rhs + 3 sqrt(lhs_stderr^2 + rhs_stderr^2)
};

std::vector<BurkholderRow> burkholder_bound_check(const Ensemble& ensemble, const std::vector<double>& p_list);

/// Bounded test functional F(v, y, w) for the Levy system identity; y and w
/// are the positions just before and after a jump, in physical units.
struct Functional {
  enum class Kind {
    constant,             // c
    jump_indicator,       // 1{w - y = z0}
    jump_coordinate,      // (w - y)_axis
    time_weighted,        // ((v - s) / (t - s)) (w - y)_axis^2
    position_cosine,      // cos(xi . y)
    endpoint_indicator,   // 1{|w|_inf <= radius}
    position_coordinate,  // y_axis; unbounded, rejected by levy_system_check
  };
  Kind kind = Kind::constant;
  double value = 1.0;
  Vector point;  // z0 or xi
  std::size_t axis = 1;
  double radius = 0.0;

  std::string name() const;
  /// sup |F| over the reachable (v, y, w); +inf when unbounded.
  double bound(const DiscreteLevyMeasure& measure) const;
  double operator()(double v, std::span<const double> y, std::span<const double> w, double s, double t) const;
};

/// The shipped functional library for a measure.
std::vector<Functional> standard_functionals(const DiscreteLevyMeasure& measure);

struct LevySystemRow {
  std::string functional;
  double lhs = 0.0;  // MC mean of sum over jumps
  double lhs_stderr = 0.0;
  double rhs = 0.0;  // time quadrature against p_{v-s} and nu
  double rhs_error = 0.0;
  bool pass = false;  // |lhs - rhs| <= 3 stderr
};

/// E sum_{s<S_i<=t} F(S_i, X_{S_i-}, X_{S_i}) = E int_s^t int F(v, X_{v-}, X_{v-} + z) nu(dz) dv.
/// Throws InvalidInput for unbounded functionals.
std::vector<LevySystemRow> levy_system_check(const DiscreteLevyMeasure& measure,
                                             const std::vector<Functional>& functionals, double s, double t,
                                             std::size_t n_paths, std::uint64_t seed, unsigned workers = 0,
                                             std::span<const double> lattice_scale = {});

struct ExchangeabilityRow {
  std::size_t n = 0;        // conditioning jump count
  std::size_t samples = 0;  // pooled jump times
  double ks_statistic = 0.0;
  double critical = 0.0;  // 1.628 / sqrt(samples), the asymptotic 1% level
  bool pass = false;
};

/// Given N(s,t) = n, the normalized jump times are i.i.d. uniform; checked by
/// Kolmogorov-Smirnov for each n in n_values.
std::vector<ExchangeabilityRow> exchangeability_check(const DiscreteLevyMeasure& measure, double s, double t,
                                                      std::size_t n_paths, std::uint64_t seed,
                                                      const std::vector<std::size_t>& n_values, unsigned workers = 0);

struct ProjectionResult {
  std::vector<Complex> h_mc;     // E F_u(y - X_{s,u}) per lattice point y
  std::vector<double> h_stderr;  // per lattice point
  std::vector<Complex> h_spec;   // inverse DFT of m_s * DFT(f)
  double error_l2 = 0.0;         // ||h_mc - h_spec||_2 (lattice sum)
  double stderr_l2 = 0.0;        // ||h_stderr||_2
  double spec_l2 = 0.0;          // ||h_spec||_2
  bool pass = false;             // error_l2 <= 5 stderr_l2 (+ rounding)
};

/// Largest |nu| |s| accepted by projection_identity_check.
inline constexpr double kProjectionWindowGuard = 20.0;

/// Window (s, 0] with t = u = 0: recovers h with hat h = m_s hat f.
ProjectionResult projection_identity_check(const DiscreteLevyMeasure& measure, const JumpModulator& modulator,
                                           const GridFunction& f, double s, std::size_t n_paths,
                                           std::uint64_t seed, unsigned workers = 0);

struct L1MassResult {
  MeanEstimate estimate;  // sum_x E|F|_t(x) h^d
  double expected = 0.0;  // 4 (t - s) |nu| ||f||_1
  bool pass = false;      // within 3 standard errors
};

/// Requires |phi| == 1 on every atom.
L1MassResult l1_mass_check(const DiscreteLevyMeasure& measure, const JumpModulator& modulator,
                           const GridFunction& f, double s, double t, double u, std::size_t n_paths,
                           std::uint64_t seed, unsigned workers = 0);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace levymult
