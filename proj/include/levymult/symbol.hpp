#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "levymult/levy_measure.hpp"
#include "levymult/modulator.hpp"

namespace levymult {

using Complex = std::complex<double>;

/// Denominators |Psi(xi)| below this multiple of the measure's mass scale
/// are treated as zero and the symbol takes the value 0.
inline constexpr double kZeroThreshold = 1e-13;

/// The general symbol M(xi) = int (cos xi.z - 1) phi(z) V(dz) / int (cos xi.z - 1) V(dz).
///
/// Holds the measure together with phi already evaluated on its atoms, so the
/// symmetry and |phi| <= 1 checks happen once at construction.
class GeneralSymbol {
 public:
  GeneralSymbol(LevyMeasure measure, JumpModulator modulator, double zero_threshold = kZeroThreshold);

  const LevyMeasure& measure() const noexcept { return measure_; }
  const JumpModulator& modulator() const noexcept { return modulator_; }
  std::size_t dimension() const { return dimension_of(measure_); }

  struct Parts {
    Complex numerator;   // Psi_phi(xi)
    double denominator;  // Psi(xi)
  };
  /// Both integrals, sharing one radial quadrature per direction for stable measures.
  Parts parts(std::span<const double> xi) const;

  /// M(xi), with M = 0 where |Psi| is below the zero threshold.
  Complex operator()(std::span<const double> xi) const;

  /// True when the denominator is treated as zero at xi.
  bool is_psi_zero(double psi) const;

 private:
  LevyMeasure measure_;
  JumpModulator modulator_;
  std::vector<Complex> phi_;  // phi on atoms / angular atoms
  double zero_threshold_;
};

/// One of the symbol families. Axis numbers are 1-based.
class MultiplierSymbol {
 public:
  struct General {
    GeneralSymbol symbol;
  };
  /// m_s(xi) = (1 - e^{2|s| Psi(xi)}) M(xi), s < 0.
  struct FiniteTime {
    GeneralSymbol symbol;
    double s;
  };
  /// |xi_j|^alpha / (|xi_1|^alpha + ... + |xi_d|^alpha).
  struct Power {
    double alpha;
    std::size_t j;
    std::size_t d;
  };
  /// -xi_j^2 / |xi|^2.
  struct Riesz2 {
    std::size_t j;
    std::size_t d;
  };
  /// -2 xi_j xi_k / |xi|^2 (the symbol of 2 R_j R_k).
  struct RieszPair {
    std::size_t j;
    std::size_t k;
    std::size_t d;
  };
  /// -sum_j a_j xi_j^2 / |xi|^2.
  struct RieszCombo {
    std::vector<double> coefficients;
  };
  /// (xi_1 - i xi_2) / (xi_1 + i xi_2), d = 2.
  struct BeurlingAhlfors {};
  /// i xi_j / |xi|; reference only.
  struct FirstOrderRiesz {
    std::size_t j;
    std::size_t d;
  };
  /// M == c everywhere, including xi = 0; dimension 0 means any dimension.
  struct Constant {
    Complex value;
    std::size_t d = 0;
  };
  /// Pointwise product of factors.
  struct Product {
    std::vector<MultiplierSymbol> factors;
  };

  using Kind = std::variant<General, FiniteTime, Power, Riesz2, RieszPair, RieszCombo, BeurlingAhlfors,
                            FirstOrderRiesz, Constant, Product>;

  explicit MultiplierSymbol(Kind kind);

  static MultiplierSymbol general(LevyMeasure measure, JumpModulator modulator);
  static MultiplierSymbol finite_time(LevyMeasure measure, JumpModulator modulator, double s);
  static MultiplierSymbol power(double alpha, std::size_t j, std::size_t d);
  static MultiplierSymbol riesz2(std::size_t j, std::size_t d);
  static MultiplierSymbol riesz_pair(std::size_t j, std::size_t k, std::size_t d);
  static MultiplierSymbol riesz_combo(std::vector<double> coefficients);
  static MultiplierSymbol beurling_ahlfors();
  static MultiplierSymbol first_order_riesz(std::size_t j, std::size_t d);
  static MultiplierSymbol constant(Complex value, std::size_t d = 0);
  static MultiplierSymbol product(std::vector<MultiplierSymbol> factors);

  const Kind& kind() const noexcept { return kind_; }

  /// Dimension the symbol acts in; 0 when it acts in any dimension.
  std::size_t dimension() const;

  Complex operator()(std::span<const double> xi) const;
  Complex evaluate(std::span<const double> xi) const { return (*this)(xi); }

  /// Short label used in reports, e.g. "power(alpha=1,j=1,d=2)".
  std::string label() const;

 private:
  Kind kind_;
};

Complex eval_general(const LevyMeasure& measure, const JumpModulator& modulator, std::span<const double> xi);
Complex eval_finite_time(const LevyMeasure& measure, const JumpModulator& modulator, double s,
                         std::span<const double> xi);
double eval_power(double alpha, std::size_t j, std::span<const double> xi);

/// Closed-form gradient of the power symbol in d = 2; throws SingularPoint on
/// the coordinate axes.
std::array<double, 2> power_symbol_gradient(double alpha, std::size_t j, std::span<const double> xi);

/// int_cutoff^1 |d M / d xi_1 (xi_1, 1)|^2 d xi_1 for the d = 2, j = 1 power
/// symbol; diverges as cutoff -> 0 exactly when alpha < 1/2.
double power_gradient_energy(double alpha, double cutoff);

/// Richardson-extrapolated lim_{r -> 0+} M(xi + r eta). Diagnostic only; the
/// limit at a zero of Psi generally depends on eta.
Complex directional_limit(const MultiplierSymbol& symbol, std::span<const double> xi,
                          std::span<const double> eta, double r0 = 1e-2, int levels = 6);

}  // namespace levymult
