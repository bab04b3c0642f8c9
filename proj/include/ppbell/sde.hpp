#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ppbell/phase_point.hpp"
#include "ppbell/random.hpp"

namespace ppbell {

/// Dimensionless-time limits: runs beyond kWarnTau draw a warning (sampling
/// error grows), runs beyond kMaxTau are rejected.
inline constexpr double kWarnTau = 0.5;
inline constexpr double kMaxTau = 1.0;

/// Fixed-point sweeps per semi-implicit midpoint step.
inline constexpr int kMidpointIterations = 4;

/// Trajectories per chunk; a chunk is also one batch for error estimation.
inline constexpr std::size_t kChunkSize = 1024;

struct SdeConfig {
  double kappa_e = 1.0;  ///< coupling kappa*E, 1/time
  double dt = 2e-4;
  double t_end = 0.1;
  std::uint64_t n_traj = 1ULL << 18;
  std::uint64_t seed = 1;
  std::vector<double> record_times{0.1};  ///< sorted, within [0, t_end]

  /// Throws ConfigError on any violated invariant.
  void validate() const;
  std::vector<std::string> warnings() const;

  std::uint64_t total_steps() const;
  /// Step index for each record time (nearest grid point).
  std::vector<std::uint64_t> record_steps() const;
};

/// Wiener increments for one step. Only <dW_i dW_j*> and <dW+_i dW+_j*> are
/// nonzero (= dt delta_ij).
struct NoiseDraw {
  cplx dW1{};
  cplx dW2{};
  cplx dW1p{};
  cplx dW2p{};
};

NoiseDraw draw_noise(double dt, Engine& rng);

/// Noise generator that keeps its Gaussian state between draws.
class NoiseSource {
 public:
  explicit NoiseSource(Engine rng) : rng_(std::move(rng)) {}
  NoiseDraw next(double dt);

 private:
  Engine rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

/// Deterministic part of the parametric down-conversion equations.
PhasePoint drift(const PhasePoint& state, double kappa_e);

/// One semi-implicit midpoint (central difference) step.
PhasePoint step(const PhasePoint& state, const SdeConfig& cfg, const NoiseDraw& noise);

/// Output of one chunk of consecutive trajectories.
struct TrajectoryChunk {
  std::uint64_t index = 0;       ///< chunk index
  std::uint64_t first_traj = 0;  ///< global index of the first trajectory
  /// records[r] holds the state of every surviving trajectory at record_times[r].
  std::vector<std::vector<PhasePoint>> records;
  std::uint64_t failed = 0;
};

TrajectoryChunk simulate_chunk(const SdeConfig& cfg, std::uint64_t chunk_index,
                               std::size_t chunk_size = kChunkSize);

/// Called once per chunk, possibly from several workers at once.
using ChunkSink = std::function<void(const TrajectoryChunk& chunk, unsigned worker)>;

/// Streams every chunk to `sink`. Returns the number of failed trajectories.
std::uint64_t simulate_chunks(const SdeConfig& cfg, const ChunkSink& sink, unsigned workers = 0,
                              std::size_t chunk_size = kChunkSize);

struct Ensemble {
  std::vector<double> times;                     ///< actual grid times of each record
  std::vector<std::vector<PhasePoint>> points;   ///< [record][trajectory]
  std::uint64_t failed = 0;
};

/// Materialized trajectory set, ordered by trajectory index.
Ensemble simulate(const SdeConfig& cfg, unsigned workers = 0);

}  // namespace ppbell
