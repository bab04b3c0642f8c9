#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace ppbell {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultBatchSize = 1024;

/// Mean of a complex quasi-observable with separate standard errors for its
/// real and imaginary parts.
struct Estimate {
  cplx value{};
  double std_error = 0.0;       ///< standard error of value.real()
  double imag_std_error = 0.0;  ///< standard error of value.imag()
  std::uint64_t n = 0;
};

/// Streaming accumulator of complex per-sample values on several channels.
///
/// Samples are grouped into batches keyed by a global batch index. Errors come
/// from the scatter of batch means. Batches from different workers merge by
/// key, and every reduction walks the batches in key order, so results do not
/// depend on how work was split or in which order accumulators were merged.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t channels, std::size_t batch_size = kDefaultBatchSize,
                             std::uint64_t first_batch = 0);

  /// Adds one sample (one value per channel). A batch closes after batch_size samples.
  void push(std::span<const cplx> values);
  /// Closes a partially filled open batch.
  void flush();

  /// Inserts a complete batch given its per-channel sums.
  void add_batch(std::uint64_t index, std::uint64_t count, std::span<const cplx> sums);

  /// Union of batches; throws EstimatorError if both hold the same batch index.
  void merge(const MomentAccumulator& other);

  std::size_t channels() const { return channels_; }
  std::size_t batch_size() const { return batch_size_; }
  std::size_t batch_count() const { return batches_.size(); }
  std::uint64_t count() const;

  cplx mean(std::size_t channel) const;
  /// Batch-means standard error of the mean; needs at least two batches.
  Estimate estimate(std::size_t channel) const;
  /// Re mean(num) / Re mean(den), with Im(mean(num) / mean(den)) as the
  /// imaginary residual. Errors are first order and include the
  /// numerator-denominator covariance.
  Estimate ratio(std::size_t num, std::size_t den) const;

 private:
  struct Batch {
    std::uint64_t count = 0;
    std::vector<cplx> sums;
  };
  void require_batches() const;

  std::size_t channels_;
  std::size_t batch_size_;
  std::uint64_t next_index_;
  Batch open_;
  std::map<std::uint64_t, Batch> batches_;
};

/// Standard error of the mean (real part) of a streamed accumulator channel.
double stderr_batch(const MomentAccumulator& acc, std::size_t channel = 0);

}  // namespace ppbell
