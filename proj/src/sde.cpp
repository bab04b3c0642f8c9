#include "ppbell/sde.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "ppbell/error.hpp"
#include "ppbell/parallel.hpp"

namespace ppbell {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// x_mid = x0 + (drift(x_mid) dt + noise)/2, iterated; returns 2 x_mid - x0.
PhasePoint midpoint_step(const PhasePoint& x0, double kappa_e, double dt, double noise_scale,
                         const NoiseDraw& w) {
  const std::array<cplx, kModes> na{noise_scale * w.dW1, noise_scale * w.dW2,
                                    noise_scale * std::conj(w.dW1), noise_scale * std::conj(w.dW2)};
  const std::array<cplx, kModes> np{noise_scale * w.dW1p, noise_scale * w.dW2p,
                                    noise_scale * std::conj(w.dW1p), noise_scale * std::conj(w.dW2p)};
  const double h = 0.5 * kappa_e * dt;
  PhasePoint mid = x0;
  for (int it = 0; it < kMidpointIterations; ++it) {
    PhasePoint next;
    // alpha_i couples to beta_i^+, beta_i to alpha_i^+ (and the mirror for the + variables)
    for (std::size_t i = 0; i < 2; ++i) {
      next.alpha[i] = x0.alpha[i] + h * mid.alpha_plus[i + 2] + 0.5 * na[i];
      next.alpha[i + 2] = x0.alpha[i + 2] + h * mid.alpha_plus[i] + 0.5 * na[i + 2];
      next.alpha_plus[i] = x0.alpha_plus[i] + h * mid.alpha[i + 2] + 0.5 * np[i];
      next.alpha_plus[i + 2] = x0.alpha_plus[i + 2] + h * mid.alpha[i] + 0.5 * np[i + 2];
    }
    mid = next;
  }
  PhasePoint out;
  for (std::size_t i = 0; i < kModes; ++i) {
    out.alpha[i] = 2.0 * mid.alpha[i] - x0.alpha[i];
    out.alpha_plus[i] = 2.0 * mid.alpha_plus[i] - x0.alpha_plus[i];
  }
  return out;
}

}  // namespace

void SdeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sde: dt must be > 0, got " + fmt(dt));
  if (!(kappa_e > 0.0) || !std::isfinite(kappa_e)) {
    throw ConfigError("sde: kappa_e must be > 0, got " + fmt(kappa_e));
  }
  if (!(t_end >= dt)) throw ConfigError("sde: t_end must be >= dt, got t_end=" + fmt(t_end));
  if (kappa_e * t_end > kMaxTau * (1.0 + 1e-12)) {
    throw ConfigError("sde: kappa_e * t_end = " + fmt(kappa_e * t_end) + " exceeds the cap tau <= " +
                      fmt(kMaxTau));
  }
  if (n_traj == 0) throw ConfigError("sde: n_traj must be positive");
  if (record_times.empty()) throw ConfigError("sde: record_times must not be empty");
  if (!std::is_sorted(record_times.begin(), record_times.end())) {
    throw ConfigError("sde: record_times must be sorted ascending");
  }
  const double slack = 0.5 * dt;
  if (record_times.front() < 0.0 || record_times.back() > t_end + slack) {
    throw ConfigError("sde: record_times must lie in [0, t_end]");
  }
}

std::vector<std::string> SdeConfig::warnings() const {
  std::vector<std::string> out;
  if (kappa_e * t_end > kWarnTau) {
    out.push_back("tau = " + fmt(kappa_e * t_end) + " > " + fmt(kWarnTau) +
                  ": positive-P sampling error grows quickly in this regime");
  }
  return out;
}

std::uint64_t SdeConfig::total_steps() const {
  return static_cast<std::uint64_t>(std::llround(t_end / dt));
}

std::vector<std::uint64_t> SdeConfig::record_steps() const {
  std::vector<std::uint64_t> steps;
  steps.reserve(record_times.size());
  const std::uint64_t last = total_steps();
  for (double t : record_times) {
    steps.push_back(std::min(last, static_cast<std::uint64_t>(std::llround(t / dt))));
  }
  return steps;
}

NoiseDraw NoiseSource::next(double dt) {
  const double s = std::sqrt(0.5 * dt);
  NoiseDraw w;
  for (cplx* z : {&w.dW1, &w.dW2, &w.dW1p, &w.dW2p}) {
    const double re = gauss_(rng_);
    const double im = gauss_(rng_);
    *z = {s * re, s * im};
  }
  return w;
}

NoiseDraw draw_noise(double dt, Engine& rng) {
  if (!(dt > 0.0)) throw ConfigError("draw_noise: dt must be > 0");
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double s = std::sqrt(0.5 * dt);
  NoiseDraw w;
  for (cplx* z : {&w.dW1, &w.dW2, &w.dW1p, &w.dW2p}) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    *z = {s * re, s * im};
  }
  return w;
}

PhasePoint drift(const PhasePoint& s, double kappa_e) {
  PhasePoint d;
  for (std::size_t i = 0; i < 2; ++i) {
    d.alpha[i] = kappa_e * s.alpha_plus[i + 2];
    d.alpha[i + 2] = kappa_e * s.alpha_plus[i];
    d.alpha_plus[i] = kappa_e * s.alpha[i + 2];
    d.alpha_plus[i + 2] = kappa_e * s.alpha[i];
  }
  return d;
}

PhasePoint step(const PhasePoint& state, const SdeConfig& cfg, const NoiseDraw& noise) {
  require_finite(state, "sde step");
  return midpoint_step(state, cfg.kappa_e, cfg.dt, std::sqrt(cfg.kappa_e), noise);
}

TrajectoryChunk simulate_chunk(const SdeConfig& cfg, std::uint64_t chunk_index, std::size_t chunk_size) {
  const std::uint64_t first = chunk_index * chunk_size;
  const std::uint64_t count = first >= cfg.n_traj ? 0 : std::min<std::uint64_t>(chunk_size, cfg.n_traj - first);
  const auto steps = cfg.record_steps();
  const std::uint64_t n_steps = cfg.total_steps();
  const double noise_scale = std::sqrt(cfg.kappa_e);

  TrajectoryChunk chunk;
  chunk.index = chunk_index;
  chunk.first_traj = first;
  chunk.records.assign(steps.size(), {});
  for (auto& r : chunk.records) r.reserve(count);

  std::vector<PhasePoint> snapshot(steps.size());
  for (std::uint64_t t = 0; t < count; ++t) {
    NoiseSource noise(substream(cfg.seed, StreamDomain::Sde, first + t));
    PhasePoint x;  // vacuum: point mass at the origin
    std::size_t next_record = 0;
    auto record = [&](std::uint64_t k) {
      while (next_record < steps.size() && steps[next_record] == k) snapshot[next_record++] = x;
    };
    record(0);
    bool ok = true;
    for (std::uint64_t k = 1; k <= n_steps; ++k) {
      x = midpoint_step(x, cfg.kappa_e, cfg.dt, noise_scale, noise.next(cfg.dt));
      if (!x.is_finite()) {
        ok = false;
        break;
      }
      record(k);
    }
    if (!ok) {
      ++chunk.failed;
      continue;
    }
    for (std::size_t r = 0; r < steps.size(); ++r) chunk.records[r].push_back(snapshot[r]);
  }
  return chunk;
}

std::uint64_t simulate_chunks(const SdeConfig& cfg, const ChunkSink& sink, unsigned workers,
                              std::size_t chunk_size) {
  cfg.validate();
  if (chunk_size == 0) throw ConfigError("sde: chunk size must be positive");
  const std::uint64_t n_chunks = (cfg.n_traj + chunk_size - 1) / chunk_size;
  std::mutex m;
  std::uint64_t failed = 0;
  parallel_for(n_chunks, workers, [&](std::uint64_t c, unsigned worker) {
    TrajectoryChunk chunk = simulate_chunk(cfg, c, chunk_size);
    sink(chunk, worker);
    std::lock_guard lock(m);
    failed += chunk.failed;
  });
  return failed;
}

Ensemble simulate(const SdeConfig& cfg, unsigned workers) {
  cfg.validate();
  const auto steps = cfg.record_steps();
  Ensemble ens;
  for (auto k : steps) ens.times.push_back(static_cast<double>(k) * cfg.dt);

  std::vector<TrajectoryChunk> chunks((cfg.n_traj + kChunkSize - 1) / kChunkSize);
  ens.failed = simulate_chunks(
      cfg, [&](const TrajectoryChunk& c, unsigned) { chunks[c.index] = c; }, workers);

  ens.points.assign(steps.size(), {});
  for (std::size_t r = 0; r < steps.size(); ++r) {
    ens.points[r].reserve(cfg.n_traj);
    for (const auto& c : chunks) {
      ens.points[r].insert(ens.points[r].end(), c.records[r].begin(), c.records[r].end());
    }
  }
  return ens;
}

}  // namespace ppbell
