#include "ppbell/accumulator.hpp"

#include <cmath>
#include <string>

#include "ppbell/error.hpp"

namespace ppbell {

MomentAccumulator::MomentAccumulator(std::size_t channels, std::size_t batch_size, std::uint64_t first_batch)
    : channels_(channels), batch_size_(batch_size), next_index_(first_batch) {
  if (channels == 0) throw EstimatorError("accumulator needs at least one channel");
  if (batch_size == 0) throw EstimatorError("accumulator batch size must be positive");
  open_.sums.assign(channels_, cplx{});
}

void MomentAccumulator::push(std::span<const cplx> values) {
  if (values.size() != channels_) throw EstimatorError("accumulator: channel count mismatch");
  for (std::size_t c = 0; c < channels_; ++c) open_.sums[c] += values[c];
  if (++open_.count == batch_size_) flush();
}

void MomentAccumulator::flush() {
  if (open_.count == 0) return;
  add_batch(next_index_++, open_.count, open_.sums);
  open_.count = 0;
  open_.sums.assign(channels_, cplx{});
}

void MomentAccumulator::add_batch(std::uint64_t index, std::uint64_t count, std::span<const cplx> sums) {
  if (sums.size() != channels_) throw EstimatorError("accumulator: channel count mismatch");
  if (count == 0) return;
  auto [it, inserted] = batches_.try_emplace(index);
  if (!inserted) throw EstimatorError("accumulator: duplicate batch index " + std::to_string(index));
  it->second.count = count;
  it->second.sums.assign(sums.begin(), sums.end());
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.channels_ != channels_) throw EstimatorError("accumulator merge: channel count mismatch");
  for (const auto& [index, batch] : other.batches_) add_batch(index, batch.count, batch.sums);
}

std::uint64_t MomentAccumulator::count() const {
  std::uint64_t n = 0;
  for (const auto& [_, b] : batches_) n += b.count;
  return n;
}

void MomentAccumulator::require_batches() const {
  if (batches_.empty()) throw EstimatorError("empty sample set");
  if (batches_.size() < 2) {
    throw EstimatorError("standard error needs at least 2 batches, have " + std::to_string(batches_.size()));
  }
}

cplx MomentAccumulator::mean(std::size_t channel) const {
  if (batches_.empty()) throw EstimatorError("empty sample set");
  cplx sum{};
  std::uint64_t n = 0;
  for (const auto& [_, b] : batches_) {
    sum += b.sums.at(channel);
    n += b.count;
  }
  return sum / static_cast<double>(n);
}

Estimate MomentAccumulator::estimate(std::size_t channel) const {
  require_batches();
  const std::uint64_t n = count();
  const cplx m = mean(channel);
  const double nb = static_cast<double>(batches_.size());
  double vr = 0.0, vi = 0.0;
  for (const auto& [_, b] : batches_) {
    const double w = static_cast<double>(b.count) / static_cast<double>(n);
    const cplx dev = b.sums[channel] / static_cast<double>(b.count) - m;
    vr += w * w * dev.real() * dev.real();
    vi += w * w * dev.imag() * dev.imag();
  }
  const double f = nb / (nb - 1.0);
  return {m, std::sqrt(f * vr), std::sqrt(f * vi), n};
}

Estimate MomentAccumulator::ratio(std::size_t num, std::size_t den) const {
  require_batches();
  const std::uint64_t n = count();
  const cplx x = mean(num);
  const cplx y = mean(den);
  if (y.real() == 0.0) throw UnstableDenominator("ratio: denominator mean is exactly zero");
  const double r_re = x.real() / y.real();
  const cplx r = x / y;
  const double nb = static_cast<double>(batches_.size());
  double vr = 0.0, vi = 0.0;
  for (const auto& [_, b] : batches_) {
    const double w = static_cast<double>(b.count) / static_cast<double>(n);
    const double inv = 1.0 / static_cast<double>(b.count);
    const cplx xb = b.sums[num] * inv;
    const cplx yb = b.sums[den] * inv;
    // influence of this batch, linearized around the means
    const double z_re = (xb.real() - r_re * yb.real()) / y.real();
    const cplx z = (xb - r * yb) / y;
    vr += w * w * z_re * z_re;
    vi += w * w * z.imag() * z.imag();
  }
  const double f = nb / (nb - 1.0);
  return {cplx{r_re, r.imag()}, std::sqrt(f * vr), std::sqrt(f * vi), n};
}

double stderr_batch(const MomentAccumulator& acc, std::size_t channel) {
  return acc.estimate(channel).std_error;
}

}  // namespace ppbell
