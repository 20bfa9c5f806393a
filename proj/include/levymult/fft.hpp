#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace levymult::fft {

/// Unnormalized forward DFT, sum_n x_n e^{-2 pi i k n / N}, over 1 or 2 axes in
/// row-major order. Backed by FFTW.
void forward(std::vector<std::complex<double>>& data, std::size_t dimension, std::array<std::size_t, 2> sizes);

/// Inverse DFT including the 1/N normalization, so inverse(forward(x)) == x.
void inverse(std::vector<std::complex<double>>& data, std::size_t dimension, std::array<std::size_t, 2> sizes);

/// Reusable transform of a fixed shape. Not safe to share across threads;
/// give each worker its own plan.
class Plan {
 public:
  Plan(std::size_t dimension, std::array<std::size_t, 2> sizes, bool forward);
  ~Plan();
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  /// In-place transform; the inverse direction includes the 1/N factor.
  void execute(std::vector<std::complex<double>>& data);

 private:
  std::size_t n_;
  bool forward_;
  void* buffer_;
  void* plan_;
};

}  // namespace levymult::fft
