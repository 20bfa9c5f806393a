#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace levymult {

/// Complex samples on the periodic grid [0, L_1) x [0, L_2), row-major
/// (axis 1 is the slow index). Sizes are powers of two, at least 8.
class GridFunction {
 public:
  using Complex = std::complex<double>;

  GridFunction(std::size_t dimension, std::array<std::size_t, 2> sizes, std::array<double, 2> lengths,
               std::vector<Complex> samples);

  /// All-zero grid.
  static GridFunction zeros(std::size_t dimension, std::array<std::size_t, 2> sizes, std::array<double, 2> lengths);

  /// Samples fn at the grid points x_i = i L / N.
  static GridFunction sample(std::size_t dimension, std::array<std::size_t, 2> sizes, std::array<double, 2> lengths,
                             const std::function<Complex(double, double)>& fn);

  std::size_t dimension() const noexcept { return dimension_; }
  std::array<std::size_t, 2> sizes() const noexcept { return sizes_; }
  std::array<double, 2> lengths() const noexcept { return lengths_; }
  std::size_t size() const noexcept { return samples_.size(); }

  /// Grid spacing L_k / N_k.
  double spacing(std::size_t axis) const { return lengths_[axis] / static_cast<double>(sizes_[axis]); }
  /// h_1 (d = 1) or h_1 h_2 (d = 2).
  double cell_volume() const;

  /// Angular frequency 2 pi k~ / L of index k, k~ the signed alias in [-N/2, N/2).
  double frequency(std::size_t axis, std::size_t k) const;
  static std::ptrdiff_t signed_index(std::size_t k, std::size_t n);

  Complex& operator[](std::size_t i) { return samples_[i]; }
  const Complex& operator[](std::size_t i) const { return samples_[i]; }
  Complex& at(std::size_t i, std::size_t j) { return samples_[i * row_stride() + j]; }
  const Complex& at(std::size_t i, std::size_t j) const { return samples_[i * row_stride() + j]; }

  const std::vector<Complex>& samples() const noexcept { return samples_; }
  std::vector<Complex>& samples() noexcept { return samples_; }

  bool same_shape(const GridFunction& other) const;

 private:
  std::size_t row_stride() const { return dimension_ == 2 ? sizes_[1] : 1; }

  std::size_t dimension_;
  std::array<std::size_t, 2> sizes_;
  std::array<double, 2> lengths_;
  std::vector<Complex> samples_;
};

/// Binary format: "LMGF", u32 version, u32 d, u32 N per axis, f64 L per axis,
/// then interleaved re/im f64, all little-endian.
inline constexpr std::uint32_t kGridFormatVersion = 1;

void write_grid(std::ostream& out, const GridFunction& f);
GridFunction read_grid(std::istream& in);
void write_grid_file(const std::string& path, const GridFunction& f);
GridFunction read_grid_file(const std::string& path);

/// CSV with columns x_1[,x_2],re,im.
void write_grid_csv(std::ostream& out, const GridFunction& f);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

}  // namespace levymult
