#include "ppbell/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "ppbell/error.hpp"

namespace ppbell {

namespace {

struct PlanPair {
  fftw_plan fwd;
  fftw_plan inv;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// Plans live for the whole process; FFTW planning is not thread safe.
PlanPair plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(plan_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> scratch(n);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair pp{fftw_plan_dft_1d(len, p, p, FFTW_FORWARD, flags), fftw_plan_dft_1d(len, p, p, FFTW_BACKWARD, flags)};
  if (pp.fwd == nullptr || pp.inv == nullptr) throw NumericalError("FFTW failed to create a plan");
  cache.emplace(n, pp);
  return pp;
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw ConfigError("FFT length must be positive");
  const PlanPair pp = plans_for(n);
  forward_plan_ = pp.fwd;
  inverse_plan_ = pp.inv;
}

void Fft::forward(std::span<cplx> data) const {
  if (data.size() != n_) throw ConfigError("FFT length mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), p, p);
}

void Fft::inverse(std::span<cplx> data) const {
  if (data.size() != n_) throw ConfigError("FFT length mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), p, p);
  const double s = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v *= s;
}

double Fft::angular_frequency(std::size_t k, std::size_t n, double dt) {
  const auto kk = static_cast<double>(k);
  const auto nn = static_cast<double>(n);
  const double m = k < (n + 1) / 2 ? kk : kk - nn;
  return 2.0 * std::numbers::pi * m / (nn * dt);
}

}  // namespace ppbell
