#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "ppbell/estimators.hpp"
#include "ppbell/output.hpp"
#include "ppbell/sde.hpp"
#include "ppbell/waveguide.hpp"

namespace ppbell {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitUnstable = 3;
inline constexpr int kExitImagResidual = 4;

/// Smallest ensemble that still yields two error batches.
inline constexpr std::uint64_t kMinSamples = 2 * kDefaultBatchSize;

struct RunOptions {
  unsigned workers = 0;  ///< 0: PPBELL_WORKERS or hardware concurrency
};

struct RunResult {
  CsvTable table;
  std::vector<std::string> notes;     ///< summary lines for the console
  std::vector<std::string> warnings;  ///< also echoed into the manifest
  /// Rows whose imaginary residual exceeds 3 of its standard errors.
  std::vector<std::string> imag_violations;
  std::string manifest_body;  ///< JSON without the output reference
  bool checks_passed = true;  ///< reduction, loss and selftest checks

  int exit_code() const {
    if (!imag_violations.empty()) return kExitImagResidual;
    return checks_passed ? kExitOk : kExitFailure;
  }
  std::string csv(const std::string& manifest_ref) const { return table.render(manifest_ref); }
  /// Manifest JSON naming the CSV file it accompanies.
  std::string manifest(const std::string& csv_name) const;
};

struct StaticChdConfig {
  int pairs = 1;
  std::vector<double> phis;     ///< empty: k pi/64, k = 0..16
  std::uint64_t n_samples = 0;  ///< 0: 2^18 for one pair, 2^24 otherwise
  std::uint64_t seed = 1;
  double lhv_bound = kDefaultLhvBound;

  void validate() const;
  std::vector<double> effective_phis() const;
  std::uint64_t effective_samples() const;
};

enum class DynamicStatistic { Chd, Ch, Chsh };
enum class SweepKind { Tau, Phi };

struct DynamicRunConfig {
  DynamicStatistic statistic = DynamicStatistic::Ch;
  bool postselect = false;
  SweepKind sweep = SweepKind::Tau;
  std::vector<double> taus;  ///< empty: 0.01, 0.02, ..., 0.25
  std::vector<double> phis;  ///< empty: k pi/32, k = 0..16
  double tau = 0.1;          ///< fixed tau of a phi sweep
  double phi = std::numbers::pi / 8;  ///< S_CHD angle of a tau sweep
  AngleSet angles{};                  ///< CH/CHSH settings of a tau sweep
  int pairs = 1;
  double lhv_bound = kDefaultLhvBound;
  double kappa_e = 1.0;
  double dt = 2e-4;
  std::uint64_t n_traj = 1ULL << 18;
  std::uint64_t seed = 1;

  void validate() const;
  std::vector<double> effective_taus() const;
  std::vector<double> effective_phis() const;
  SdeConfig sde_config() const;
};

std::string_view dynamic_statistic_name(DynamicStatistic s);

RunResult run_static_chd(const StaticChdConfig& cfg, const RunOptions& opts = {});
RunResult run_dynamic(const DynamicRunConfig& cfg, const RunOptions& opts = {});
/// Field moments and Bell statistics at the probe point for each record z.
/// Adds "reduction check" and "loss check" summaries when they apply.
RunResult run_waveguide(const WaveguideConfig& cfg, const RunOptions& opts = {});

struct SelftestConfig {
  std::uint64_t n_samples = 1ULL << 16;
  std::uint64_t n_traj = 1ULL << 14;
  std::uint64_t seed = 1;
};

/// Oracle cross-checks: closed forms against the Fock evaluator, and small
/// stochastic runs against both.
RunResult run_selftest(const SelftestConfig& cfg, const RunOptions& opts = {});

}  // namespace ppbell
