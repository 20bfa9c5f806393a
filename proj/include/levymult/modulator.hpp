#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "levymult/levy_measure.hpp"

namespace levymult {

/// Bounded symmetric jump weight phi, |phi| <= 1, phi(-z) = phi(z).
///
/// For truncated-stable measures phi is radially constant and is evaluated on
/// the angular atoms. Axis numbers are 1-based.
class JumpModulator {
 public:
  struct Constant {
    std::complex<double> value;
  };
  /// 1 on the j-th coordinate axis minus the origin, 0 elsewhere.
  struct AxisIndicator {
    std::size_t axis;
  };
  /// a_j on the j-th axis, 0 off the axes.
  struct PerAxis {
    std::vector<double> coefficients;
  };
  /// One value per atom (discrete) or angular atom (stable), in atom order.
  struct SignPattern {
    std::vector<double> signs;
  };
  struct Table {
    std::vector<std::pair<Vector, std::complex<double>>> entries;
  };
  using Kind = std::variant<Constant, AxisIndicator, PerAxis, SignPattern, Table>;

  explicit JumpModulator(Kind kind);

  static JumpModulator constant(std::complex<double> c) { return JumpModulator(Constant{c}); }
  static JumpModulator axis_indicator(std::size_t axis) { return JumpModulator(AxisIndicator{axis}); }

  const Kind& kind() const noexcept { return kind_; }

  /// phi at location z; atom_index is required by SignPattern.
  std::complex<double> value(std::span<const double> z, std::optional<std::size_t> atom_index) const;

  /// phi on every atom of the measure (angular atoms for stable measures).
  /// Throws InvalidInput when phi is undefined on an atom or not symmetric.
  std::vector<std::complex<double>> on_atoms(const LevyMeasure& measure) const;

 private:
  Kind kind_;
};

}  // namespace levymult
