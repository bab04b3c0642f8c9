#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ppbell/accumulator.hpp"
#include "ppbell/phase_point.hpp"
#include "ppbell/static_sampler.hpp"

namespace ppbell {

/// Polarizer settings theta, theta' (site A) and phi, phi' (site B).
struct AngleSet {
  double theta = 0.0;
  double phi = std::numbers::pi / 8;
  double theta_p = std::numbers::pi / 4;
  double phi_p = 3 * std::numbers::pi / 8;

  /// theta, phi, theta', phi' increasing in steps of phi_rel from 0.
  static AngleSet sequential(double phi_rel) { return {0.0, phi_rel, 2 * phi_rel, 3 * phi_rel}; }
};

enum class StatisticKind { Chd, Ch, Chsh, ChshPostselected };
std::string_view statistic_name(StatisticKind kind);

enum class Side { A, B };

/// Local-realist bound on the normalized statistics. The CHD form printed in
/// the literature carries "<= 0"; the CH derivation with cancelling marginals
/// gives 1, which is the default here.
inline constexpr double kDefaultLhvBound = 1.0;
inline constexpr double kPrintedChdBound = 0.0;

/// Denominators must exceed this many of their own standard errors.
inline constexpr double kDenominatorSigmas = 5.0;

struct BellStatistic {
  StatisticKind kind = StatisticKind::Chd;
  double value = 0.0;
  double std_error = 0.0;
  double imag_residual = 0.0;
  double imag_std_error = 0.0;
  std::uint64_t n_samples = 0;
  AngleSet angles{};
  int pairs = 1;
  double lhv_bound = kDefaultLhvBound;

  bool violates() const { return value > lhv_bound; }
  /// |imag_residual| within `sigmas` imaginary standard errors (plus a round-off floor).
  bool imag_consistent(double sigmas = 3.0) const {
    return std::abs(imag_residual) <= sigmas * imag_std_error + 1e-12;
  }
};

// Per-sample kernels. Their ensemble means are the quantum expectation values.

/// Single-photon coincidence kernel for outcome `pattern` at settings (theta, phi).
cplx joint_weight(const PhasePoint& p, double theta, double phi, Outcome pattern);
/// One photon in the "+" output at `side`, nothing in "-", other side unobserved.
cplx marginal_weight(const PhasePoint& p, Side side, double angle);
/// Spin-product kernel P++ + P-- - P+- - P-+.
cplx correlation_weight(const PhasePoint& p, double theta, double phi);
/// 1 - exp(-total quasi number): kernel of the projector excluding joint vacuum.
cplx postselection_weight(const PhasePoint& p);

/// Photon counts (gamma+, gamma-, delta+, delta-) at the polarizer outputs.
using CountPattern = std::array<int, kModes>;

/// Kernel of the projector onto exactly `counts` photons in the rotated modes
/// of `observed`; unobserved modes are traced out. Event selection, where a
/// site reports "+" only for one photon in each output, is counts {1, 1, ...}.
cplx photon_count_weight(const PhasePoint& p, double theta, double phi, const CountPattern& counts,
                         const ModeSet& observed = ModeSet::all());

/// Per-sample channels of one normalized statistic:
/// value = Re<numerator> / Re<denominator>, optionally with both divided by
/// the post-selection norm <postselection>.
struct StatisticSample {
  cplx numerator{};
  cplx denominator{};
  cplx postselection{};
};

/// A Bell statistic as a function of phase-space samples.
class StatisticProbe {
 public:
  static constexpr std::size_t kChannels = 3;

  /// S_CHD with I = J = N at relative angle phi_rel (theta = 0).
  static StatisticProbe chd(PairCount n, double phi_rel, double lhv_bound = kDefaultLhvBound);
  static StatisticProbe ch(const AngleSet& angles, bool postselect = false);
  static StatisticProbe chsh(const AngleSet& angles, bool postselect);

  StatisticSample operator()(const PhasePoint& p) const;

  /// Reads the probe's three channels starting at `first_channel`.
  BellStatistic finish(const MomentAccumulator& acc, std::size_t first_channel = 0) const;

  StatisticKind kind() const { return kind_; }
  const AngleSet& angles() const { return angles_; }
  double phi_rel() const { return phi_rel_; }
  bool postselect() const { return postselect_; }

 private:
  StatisticKind kind_ = StatisticKind::Chd;
  AngleSet angles_{};
  double phi_rel_ = 0.0;
  int pairs_ = 1;
  bool postselect_ = false;
  double lhv_bound_ = kDefaultLhvBound;
};

/// Several probes evaluated over the same ensemble, batch by batch.
class ProbeSet {
 public:
  explicit ProbeSet(std::vector<StatisticProbe> probes);

  /// Accumulates one batch of samples under the global key `batch_index`.
  void add_batch(std::uint64_t batch_index, std::span<const PhasePoint> samples);
  void merge(const ProbeSet& other) { acc_.merge(other.acc_); }

  std::size_t size() const { return probes_.size(); }
  const StatisticProbe& probe(std::size_t i) const { return probes_[i]; }
  BellStatistic result(std::size_t i) const { return probes_[i].finish(acc_, i * StatisticProbe::kChannels); }
  std::vector<BellStatistic> results() const;
  const MomentAccumulator& accumulator() const { return acc_; }

 private:
  std::vector<StatisticProbe> probes_;
  MomentAccumulator acc_;
};

// Whole-ensemble estimators. Samples are grouped into batches of
// `batch_size` consecutive points for the error estimate.

/// (G(phi), G(inf)) with G(phi) = <(g+^+ g+)^I (d+^+ d+)^J> at theta = 0 and
/// G(inf) = <(g+^+ g+)^I (b1^+ b1 + b2^+ b2)^J>.
std::pair<Estimate, Estimate> correlator_g(std::span<const PhasePoint> samples, int i, int j, double phi_rel,
                                           std::size_t batch_size = kDefaultBatchSize);

BellStatistic s_chd(std::span<const PhasePoint> samples, PairCount n, double phi_rel,
                    double lhv_bound = kDefaultLhvBound, std::size_t batch_size = kDefaultBatchSize);

Estimate prob_joint(std::span<const PhasePoint> samples, double theta, double phi, Outcome pattern,
                    std::size_t batch_size = kDefaultBatchSize);

Estimate prob_marginal(std::span<const PhasePoint> samples, Side side, double angle,
                       std::size_t batch_size = kDefaultBatchSize);

BellStatistic s_ch(std::span<const PhasePoint> samples, const AngleSet& angles, bool postselect = false,
                   std::size_t batch_size = kDefaultBatchSize);

/// E(theta, phi); with `postselect` every probability is divided by <1 - exp(-n)>.
Estimate correlation_E(std::span<const PhasePoint> samples, double theta, double phi, bool postselect,
                       std::size_t batch_size = kDefaultBatchSize);

BellStatistic s_chsh(std::span<const PhasePoint> samples, const AngleSet& angles, bool postselect,
                     std::size_t batch_size = kDefaultBatchSize);

}  // namespace ppbell
