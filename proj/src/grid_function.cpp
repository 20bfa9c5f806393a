#include "levymult/grid_function.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>

#include "levymult/error.hpp"

namespace levymult {

namespace {

static_assert(std::endian::native == std::endian::little, "binary grid I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InvalidInput("grid file truncated");
  return v;
}

}  // namespace

GridFunction::GridFunction(std::size_t dimension, std::array<std::size_t, 2> sizes, std::array<double, 2> lengths,
                           std::vector<Complex> samples)
    : dimension_(dimension), sizes_(sizes), lengths_(lengths), samples_(std::move(samples)) {
  if (dimension_ != 1 && dimension_ != 2) throw InvalidInput("GridFunction: dimension must be 1 or 2");
  if (dimension_ == 1) {
    sizes_[1] = 1;
    lengths_[1] = 1.0;
  }
  std::size_t total = 1;
  for (std::size_t k = 0; k < dimension_; ++k) {
    if (sizes_[k] < 8 || !std::has_single_bit(sizes_[k])) {
      throw InvalidInput("GridFunction: sizes must be powers of two and at least 8");
    }
    if (!(lengths_[k] > 0.0) || !std::isfinite(lengths_[k])) {
      throw InvalidInput("GridFunction: period must be positive and finite");
    }
    total *= sizes_[k];
  }
  if (samples_.size() != total) throw InvalidInput("GridFunction: sample count does not match sizes");
  for (const auto& v : samples_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InvalidInput("GridFunction: non-finite sample");
  }
}

GridFunction GridFunction::zeros(std::size_t dimension, std::array<std::size_t, 2> sizes,
                                 std::array<double, 2> lengths) {
  const std::size_t total = sizes[0] * (dimension == 2 ? sizes[1] : 1);
  return GridFunction(dimension, sizes, lengths, std::vector<Complex>(total));
}

GridFunction GridFunction::sample(std::size_t dimension, std::array<std::size_t, 2> sizes,
                                  std::array<double, 2> lengths, const std::function<Complex(double, double)>& fn) {
  GridFunction g = zeros(dimension, sizes, lengths);
  const std::size_t n1 = g.sizes_[1];
  for (std::size_t i = 0; i < g.sizes_[0]; ++i) {
    const double x = static_cast<double>(i) * g.spacing(0);
    for (std::size_t j = 0; j < n1; ++j) {
      const double y = dimension == 2 ? static_cast<double>(j) * g.spacing(1) : 0.0;
      g.samples_[i * n1 + j] = fn(x, y);
    }
  }
  return g;
}

double GridFunction::cell_volume() const {
  return dimension_ == 2 ? spacing(0) * spacing(1) : spacing(0);
}

std::ptrdiff_t GridFunction::signed_index(std::size_t k, std::size_t n) {
  const auto kk = static_cast<std::ptrdiff_t>(k);
  return k < n / 2 ? kk : kk - static_cast<std::ptrdiff_t>(n);
}

double GridFunction::frequency(std::size_t axis, std::size_t k) const {
  return 2.0 * std::numbers::pi * static_cast<double>(signed_index(k, sizes_[axis])) / lengths_[axis];
}

bool GridFunction::same_shape(const GridFunction& other) const {
  return dimension_ == other.dimension_ && sizes_ == other.sizes_ && lengths_ == other.lengths_;
}

void write_grid(std::ostream& out, const GridFunction& f) {
  out.write("LMGF", 4);
  put<std::uint32_t>(out, kGridFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.dimension()));
  for (std::size_t k = 0; k < f.dimension(); ++k) put<std::uint32_t>(out, static_cast<std::uint32_t>(f.sizes()[k]));
  for (std::size_t k = 0; k < f.dimension(); ++k) put<double>(out, f.lengths()[k]);
  for (const auto& v : f.samples()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
}

GridFunction read_grid(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "LMGF", 4) != 0) throw InvalidInput("not an LMGF grid file");
  const auto version = get<std::uint32_t>(in);
  if (version != kGridFormatVersion) throw InvalidInput("unsupported LMGF version");
  const auto d = get<std::uint32_t>(in);
  if (d != 1 && d != 2) throw InvalidInput("LMGF: dimension must be 1 or 2");
  std::array<std::size_t, 2> sizes{1, 1};
  std::array<double, 2> lengths{1.0, 1.0};
  for (std::size_t k = 0; k < d; ++k) sizes[k] = get<std::uint32_t>(in);
  for (std::size_t k = 0; k < d; ++k) lengths[k] = get<double>(in);
  if (sizes[0] > (1u << 16) || sizes[1] > (1u << 16)) throw InvalidInput("LMGF: grid too large");
  std::vector<GridFunction::Complex> samples(sizes[0] * (d == 2 ? sizes[1] : 1));
  for (auto& v : samples) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    v = {re, im};
  }
  return GridFunction(d, sizes, lengths, std::move(samples));
}

void write_grid_file(const std::string& path, const GridFunction& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path + " for writing");
  write_grid(out, f);
}

GridFunction read_grid_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  return read_grid(in);
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void write_grid_csv(std::ostream& out, const GridFunction& f) {
  out << (f.dimension() == 2 ? "x_1,x_2,re,im\n" : "x_1,re,im\n");
  const std::size_t n1 = f.dimension() == 2 ? f.sizes()[1] : 1;
  for (std::size_t i = 0; i < f.sizes()[0]; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      out << format_double(static_cast<double>(i) * f.spacing(0)) << ',';
      if (f.dimension() == 2) out << format_double(static_cast<double>(j) * f.spacing(1)) << ',';
      const auto v = f[i * n1 + j];
      out << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
}

}  // namespace levymult
