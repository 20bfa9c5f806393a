#include "levymult/fft.hpp"

#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "levymult/error.hpp"

namespace levymult::fft {

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void transform(std::vector<std::complex<double>>& data, std::size_t dimension, std::array<std::size_t, 2> sizes,
               int sign) {
  const std::size_t n = dimension == 2 ? sizes[0] * sizes[1] : sizes[0];
  if (data.size() != n) throw InvalidInput("fft: data size does not match grid sizes");
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (buf == nullptr) throw std::bad_alloc();
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = dimension == 2 ? fftw_plan_dft_2d(static_cast<int>(sizes[0]), static_cast<int>(sizes[1]), buf, buf, sign,
                                             FFTW_ESTIMATE)
                          : fftw_plan_dft_1d(static_cast<int>(sizes[0]), buf, buf, sign, FFTW_ESTIMATE);
  }
  std::memcpy(buf, data.data(), sizeof(fftw_complex) * n);
  fftw_execute(plan);
  std::memcpy(static_cast<void*>(data.data()), buf, sizeof(fftw_complex) * n);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
}

}  // namespace

Plan::Plan(std::size_t dimension, std::array<std::size_t, 2> sizes, bool forward)
    : n_(dimension == 2 ? sizes[0] * sizes[1] : sizes[0]), forward_(forward) {
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_));
  if (buf == nullptr) throw std::bad_alloc();
  buffer_ = buf;
  const int sign = forward ? FFTW_FORWARD : FFTW_BACKWARD;
  std::lock_guard lock(planner_mutex());
  plan_ = dimension == 2 ? fftw_plan_dft_2d(static_cast<int>(sizes[0]), static_cast<int>(sizes[1]), buf, buf, sign,
                                            FFTW_ESTIMATE)
                         : fftw_plan_dft_1d(static_cast<int>(sizes[0]), buf, buf, sign, FFTW_ESTIMATE);
}

Plan::~Plan() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(buffer_);
}

void Plan::execute(std::vector<std::complex<double>>& data) {
  if (data.size() != n_) throw InvalidInput("fft::Plan: data size does not match the plan");
  std::memcpy(buffer_, data.data(), sizeof(fftw_complex) * n_);
  fftw_execute(static_cast<fftw_plan>(plan_));
  std::memcpy(static_cast<void*>(data.data()), buffer_, sizeof(fftw_complex) * n_);
  if (!forward_) {
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : data) v *= scale;
  }
}

void forward(std::vector<std::complex<double>>& data, std::size_t dimension, std::array<std::size_t, 2> sizes) {
  transform(data, dimension, sizes, FFTW_FORWARD);
}

void inverse(std::vector<std::complex<double>>& data, std::size_t dimension, std::array<std::size_t, 2> sizes) {
  transform(data, dimension, sizes, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

}  // namespace levymult::fft
