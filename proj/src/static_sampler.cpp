#include "ppbell/static_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ppbell/error.hpp"

namespace ppbell {

PairCount::PairCount(int n) : n_(n) {
  if (n < 1 || n > kMax) {
    throw ConfigError("pair count N=" + std::to_string(n) + " outside [1, " + std::to_string(kMax) + "]");
  }
}

std::array<double, 4> sample_direction(Engine& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    std::array<double, 4> v{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
    if (norm == 0.0) continue;
    for (double& x : v) x /= norm;
    return v;
  }
}

double sample_radius_sq(PairCount n, Engine& rng) {
  std::gamma_distribution<double> gamma(n.value() + 2.0, 1.0);
  return gamma(rng);
}

Vec2c sample_tilde_p(PairCount n, Engine& rng) {
  const double r = std::sqrt(sample_radius_sq(n, rng));
  const auto d = sample_direction(rng);
  return {cplx{r * d[0], r * d[1]}, cplx{r * d[2], r * d[3]}};
}

cplx bilinear(const Vec2c& a, const Vec2c& b) { return a[0] * b[0] + a[1] * b[1]; }

std::optional<double> acceptance_probability(const Vec2c& a, const Vec2c& b, PairCount n) {
  const double na = std::norm(a[0]) + std::norm(a[1]);
  const double nb = std::norm(b[0]) + std::norm(b[1]);
  if (na == 0.0 || nb == 0.0) return std::nullopt;
  // Cauchy-Schwarz bounds the base by 1; clamp the last ulp of round-off.
  const double base = std::min(1.0, std::norm(bilinear(a, b)) / (na * nb));
  double p = 1.0;
  for (int k = 0; k < n.value(); ++k) p *= base;
  return p;
}

std::optional<bool> accept(const Vec2c& a, const Vec2c& b, PairCount n, Engine& rng) {
  const auto p = acceptance_probability(a, b, n);
  if (!p) return std::nullopt;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  return uniform(rng) < *p;
}

DeltaPair sample_delta_pair(Engine& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  DeltaPair nu;
  for (auto* v : {&nu.a, &nu.b}) {
    for (cplx& z : *v) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z = {re, im};
    }
  }
  return nu;
}

PhasePoint assemble_point(const MuPair& mu, const DeltaPair& nu) {
  const std::array<cplx, kModes> m{mu.a[0], mu.a[1], mu.b[0], mu.b[1]};
  const std::array<cplx, kModes> d{nu.a[0], nu.a[1], nu.b[0], nu.b[1]};
  PhasePoint p;
  for (std::size_t i = 0; i < kModes; ++i) {
    p.alpha[i] = m[i] + d[i];
    p.alpha_plus[i] = std::conj(m[i] - d[i]);
  }
  return p;
}

namespace {

MuPair draw_mu(PairCount n, Engine& rng, std::uint64_t& proposals) {
  for (std::uint64_t tries = 0; tries < kMaxProposals; ++tries) {
    MuPair mu{sample_tilde_p(n, rng), sample_tilde_p(n, rng)};
    const auto ok = accept(mu.a, mu.b, n, rng);
    if (!ok) continue;  // zero-norm proposal, measure zero
    ++proposals;
    if (*ok) return mu;
  }
  throw SamplerError("Bell-state sampler: no acceptance after " + std::to_string(kMaxProposals) +
                     " proposals (N=" + std::to_string(n.value()) + ")");
}

}  // namespace

BellStateSampler::BellStateSampler(PairCount n, Engine rng) : n_(n), rng_(std::move(rng)) {}

MuPair BellStateSampler::next_mu() {
  MuPair mu = draw_mu(n_, rng_, proposals_);
  ++accepted_;
  return mu;
}

PhasePoint BellStateSampler::next() {
  const MuPair mu = next_mu();
  return assemble_point(mu, sample_delta_pair(rng_));
}

PhasePoint sample_bell_point(PairCount n, Engine& rng) {
  std::uint64_t proposals = 0;
  const MuPair mu = draw_mu(n, rng, proposals);
  return assemble_point(mu, sample_delta_pair(rng));
}

std::vector<PhasePoint> sample_batch(PairCount n, std::uint64_t seed, std::uint64_t batch_index,
                                     std::size_t count) {
  BellStateSampler sampler(n, substream(seed, StreamDomain::Static, batch_index));
  std::vector<PhasePoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.next());
  return out;
}

}  // namespace ppbell
