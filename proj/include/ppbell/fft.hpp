#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace ppbell {

using cplx = std::complex<double>;

/// In-place complex DFT of a fixed length. Plans are shared between
/// instances of the same length; transforms may run concurrently.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }
  /// X_k = sum_j x_j exp(-2 pi i j k / n)
  void forward(std::span<cplx> data) const;
  /// Inverse of forward, including the 1/n factor.
  void inverse(std::span<cplx> data) const;

  /// Angular frequency of bin k for sample spacing dt, in FFT order.
  static double angular_frequency(std::size_t k, std::size_t n, double dt);

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace ppbell
