#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ppbell/phase_point.hpp"
#include "ppbell/random.hpp"

namespace ppbell {

/// Number of photon pairs N in the cooperative Bell state. 1 <= N <= 16.
class PairCount {
 public:
  static constexpr int kMax = 16;
  explicit PairCount(int n);
  int value() const { return n_; }
  friend bool operator==(PairCount, PairCount) = default;

 private:
  int n_;
};

using Vec2c = std::array<cplx, 2>;

/// Sum variables mu of one sample: A = (mu_A1, mu_A2), B = (mu_B1, mu_B2).
struct MuPair {
  Vec2c a{};
  Vec2c b{};
};

/// Difference variables nu: independent Gaussians, variance 1/2 per real coordinate.
struct DeltaPair {
  Vec2c a{};
  Vec2c b{};
};

/// Uniform direction on the unit 3-sphere in R^4 (normalized Gaussian 4-vector).
std::array<double, 4> sample_direction(Engine& rng);

/// |A|^2 ~ Gamma(shape N + 2, scale 1).
double sample_radius_sq(PairCount n, Engine& rng);

/// Draw from |A|^{2N} exp(-|A|^2) / (pi^2 (N+1)!) over two complex components.
Vec2c sample_tilde_p(PairCount n, Engine& rng);

/// Bilinear product A1*B1 + A2*B2 (no conjugation).
cplx bilinear(const Vec2c& a, const Vec2c& b);

/// |A.B|^{2N} / (|A|^{2N} |B|^{2N}); nullopt when either vector is exactly zero.
std::optional<double> acceptance_probability(const Vec2c& a, const Vec2c& b, PairCount n);

/// One von Neumann accept/reject decision. nullopt asks the caller to resample.
std::optional<bool> accept(const Vec2c& a, const Vec2c& b, PairCount n, Engine& rng);

/// Maximum proposals per accepted sample before giving up.
inline constexpr std::uint64_t kMaxProposals = 1'000'000;

/// Reassembles a phase-space point from sum and difference variables:
/// alpha = mu + nu and alpha_plus = conj(mu - nu).
PhasePoint assemble_point(const MuPair& mu, const DeltaPair& nu);

DeltaPair sample_delta_pair(Engine& rng);

/// Exact sampler of the canonical positive-P distribution of the N-pair Bell
/// state. Tracks proposal statistics.
class BellStateSampler {
 public:
  BellStateSampler(PairCount n, Engine rng);

  PhasePoint next();
  MuPair next_mu();

  std::uint64_t proposals() const { return proposals_; }
  std::uint64_t accepted() const { return accepted_; }
  PairCount pairs() const { return n_; }

 private:
  PairCount n_;
  Engine rng_;
  std::uint64_t proposals_ = 0;
  std::uint64_t accepted_ = 0;
};

PhasePoint sample_bell_point(PairCount n, Engine& rng);

/// Samples of batch `batch_index` drawn from its own substream of `seed`.
std::vector<PhasePoint> sample_batch(PairCount n, std::uint64_t seed, std::uint64_t batch_index,
                                     std::size_t count);

}  // namespace ppbell
