#include "levymult/modulator.hpp"

#include <cmath>
#include <sstream>

#include "levymult/error.hpp"

namespace levymult {

namespace {

void check_bound(std::complex<double> v, const char* what) {
  // Exact comparison: |phi|^2 <= 1 must hold in floating point so that the
  // quadratic-variation increments |dG|^2 (1 - |phi|^2) stay nonnegative.
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::norm(v) > 1.0) {
    std::ostringstream msg;
    msg << what << ": |phi| must not exceed 1 (got " << std::abs(v) << ")";
    throw InvalidInput(msg.str());
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

JumpModulator::JumpModulator(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const Constant& c) { check_bound(c.value, "constant modulator"); },
                 [](const AxisIndicator& a) {
                   if (a.axis == 0) throw InvalidInput("axis_indicator: axis numbers are 1-based");
                 },
                 [](const PerAxis& p) {
                   if (p.coefficients.empty()) throw InvalidInput("per_axis: no coefficients");
                   for (double a : p.coefficients) check_bound(a, "per_axis modulator");
                 },
                 [](const SignPattern& s) {
                   if (s.signs.empty()) throw InvalidInput("sign_pattern: no entries");
                   for (double a : s.signs) check_bound(a, "sign_pattern modulator");
                 },
                 [](const Table& t) {
                   if (t.entries.empty()) throw InvalidInput("table modulator: no entries");
                   for (const auto& [z, v] : t.entries) check_bound(v, "table modulator");
                 },
             },
             kind_);
}

std::complex<double> JumpModulator::value(std::span<const double> z,
                                          std::optional<std::size_t> atom_index) const {
  auto on_axis = [&](std::size_t axis0) {
    if (axis0 >= z.size() || z[axis0] == 0.0) return false;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (k != axis0 && std::abs(z[k]) > 1e-12 * std::abs(z[axis0])) return false;
    }
    return true;
  };
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [&](const AxisIndicator& a) { return std::complex<double>(on_axis(a.axis - 1) ? 1.0 : 0.0); },
          [&](const PerAxis& p) {
            for (std::size_t j = 0; j < p.coefficients.size(); ++j) {
              if (on_axis(j)) return std::complex<double>(p.coefficients[j]);
            }
            return std::complex<double>(0.0);
          },
          [&](const SignPattern& s) {
            if (!atom_index || *atom_index >= s.signs.size()) {
              throw InvalidInput("sign_pattern modulator: atom index out of range");
            }
            return std::complex<double>(s.signs[*atom_index]);
          },
          [&](const Table& t) {
            for (const auto& [loc, v] : t.entries) {
              if (loc.size() != z.size()) continue;
              bool match = true;
              for (std::size_t k = 0; k < z.size(); ++k) {
                if (std::abs(loc[k] - z[k]) > 1e-12 * std::max(1.0, std::abs(z[k]))) match = false;
              }
              if (match) return v;
            }
            throw InvalidInput("table modulator: phi undefined on an atom of the measure");
          },
      },
      kind_);
}

std::vector<std::complex<double>> JumpModulator::on_atoms(const LevyMeasure& measure) const {
  std::vector<std::complex<double>> values;
  std::vector<std::size_t> mirror;
  std::visit(
      [&](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, DiscreteLevyMeasure>) {
          const auto& atoms = m.atoms();
          if (const auto* s = std::get_if<SignPattern>(&kind_); s && s->signs.size() != atoms.size()) {
            throw InvalidInput("sign_pattern modulator: entry count differs from atom count");
          }
          for (std::size_t i = 0; i < atoms.size(); ++i) {
            values.push_back(value(atoms[i].location, i));
            mirror.push_back(m.mirror(i));
          }
        } else {
          const auto& atoms = m.angular_atoms();
          if (const auto* s = std::get_if<SignPattern>(&kind_); s && s->signs.size() != atoms.size()) {
            throw InvalidInput("sign_pattern modulator: entry count differs from angular atom count");
          }
          for (std::size_t i = 0; i < atoms.size(); ++i) {
            values.push_back(value(atoms[i].direction, i));
            mirror.push_back(m.mirror(i));
          }
        }
      },
      measure);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto a = values[i];
    const auto b = values[mirror[i]];
    if (std::abs(a - b) > 1e-14) {
      if (std::abs(a + b) <= 1e-14) {
        throw InvalidInput("modulator is antisymmetric (phi(-z) = -phi(z)); its symbol is identically zero");
      }
      throw InvalidInput("modulator is not symmetric: phi(-z) != phi(z)");
    }
  }
  return values;
}

}  // namespace levymult
