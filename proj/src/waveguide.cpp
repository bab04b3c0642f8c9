#include "ppbell/waveguide.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>

#include "ppbell/error.hpp"
#include "ppbell/fft.hpp"
#include "ppbell/parallel.hpp"
#include "ppbell/sde.hpp"

namespace ppbell {

namespace {

constexpr std::array<std::string_view, kFields> kFieldNames{"Psi", "Phi1a", "Phi2a", "Phi1b", "Phi2b"};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool finite_real(double v) { return std::isfinite(v); }

// principal root, flagged when it lands on the opposite branch of the previous one
bool track_root(cplx value, cplx& prev) {
  const cplx r = std::sqrt(value);
  const bool jump = prev != cplx{} && std::abs(r - prev) > std::abs(r + prev);
  prev = r;
  return !jump;
}

}  // namespace

std::string_view field_name(Field f) { return kFieldNames[static_cast<std::size_t>(f)]; }

FieldState::FieldState(std::size_t n, double w) : n_t(n), window(w) {
  for (auto& f : field) f.assign(n_t, cplx{});
  for (auto& f : field_plus) f.assign(n_t, cplx{});
}

double FieldState::time(std::size_t j) const {
  return (static_cast<double>(j) - 0.5 * static_cast<double>(n_t)) * dt();
}

bool FieldState::is_finite() const {
  for (std::size_t f = 0; f < kFields; ++f) {
    for (std::size_t j = 0; j < n_t; ++j) {
      if (!finite(field[f][j]) || !finite(field_plus[f][j])) return false;
    }
  }
  return true;
}

void WaveguideConfig::validate() const {
  for (double v : {k2, k2_p, gamma_loss, gamma_p, z_end, dz, window, pump_width, seed_width, kappa.real(),
                   kappa.imag(), pump_amplitude.real(), pump_amplitude.imag(), seed_amplitude.real(),
                   seed_amplitude.imag()}) {
    if (!finite_real(v)) throw ConfigError("waveguide: parameters must be finite");
  }
  if (!(dz > 0.0)) throw ConfigError("waveguide: dz must be > 0, got " + fmt(dz));
  if (!(z_end >= dz)) throw ConfigError("waveguide: z_end must be >= dz");
  if (n_t == 0 || !std::has_single_bit(n_t)) {
    throw ConfigError("waveguide: n_t must be a power of two, got " + std::to_string(n_t));
  }
  if (!(window > 0.0)) throw ConfigError("waveguide: window must be > 0");
  if (gamma_loss < 0.0 || gamma_p < 0.0) throw ConfigError("waveguide: loss rates must be >= 0");
  if (n_traj == 0) throw ConfigError("waveguide: n_traj must be positive");
  if (probe_index >= n_t) throw ConfigError("waveguide: probe_index must be < n_t");
  if (pump_profile == PumpProfile::Gaussian && !(pump_width > 0.0)) {
    throw ConfigError("waveguide: Gaussian pump needs pump_width > 0");
  }
  if (seed_width < 0.0) throw ConfigError("waveguide: seed_width must be >= 0");
  if (record_z.empty()) throw ConfigError("waveguide: record_z must not be empty");
  if (!std::is_sorted(record_z.begin(), record_z.end())) {
    throw ConfigError("waveguide: record_z must be sorted ascending");
  }
  if (record_z.front() < 0.0 || record_z.back() > z_end + 0.5 * dz) {
    throw ConfigError("waveguide: record_z must lie in [0, z_end]");
  }
}

std::vector<std::string> WaveguideConfig::warnings() const {
  std::vector<std::string> out;
  const double tau = std::abs(reduction_coupling()) * z_end;
  if (tau > kWarnTau) {
    out.push_back("|kappa Psi| z_end = " + fmt(tau) + " > " + fmt(kWarnTau) +
                  ": positive-P sampling error grows quickly in this regime");
  }
  return out;
}

std::uint64_t WaveguideConfig::total_steps() const { return static_cast<std::uint64_t>(std::llround(z_end / dz)); }

std::vector<std::uint64_t> WaveguideConfig::record_steps() const {
  std::vector<std::uint64_t> out;
  const std::uint64_t last = total_steps();
  for (double z : record_z) out.push_back(std::min(last, static_cast<std::uint64_t>(std::llround(z / dz))));
  return out;
}

bool WaveguideConfig::is_reduction() const {
  return n_t == 1 && freeze_pump && pump_profile == PumpProfile::Constant && k2 == 0.0 && k2_p == 0.0 &&
         gamma_loss == 0.0 && gamma_p == 0.0 && seed_amplitude == cplx{};
}

FieldState initial_state(const WaveguideConfig& cfg) {
  FieldState s(cfg.n_t, cfg.window);
  for (std::size_t j = 0; j < cfg.n_t; ++j) {
    const double t = s.time(j);
    cplx pump = cfg.pump_amplitude;
    if (cfg.pump_profile == PumpProfile::Gaussian) pump *= std::exp(-t * t / (2.0 * cfg.pump_width * cfg.pump_width));
    s.at(Field::Pump)[j] = pump;
    s.plus(Field::Pump)[j] = std::conj(pump);
    cplx seed = cfg.seed_amplitude;
    if (cfg.seed_width > 0.0) seed *= std::exp(-t * t / (2.0 * cfg.seed_width * cfg.seed_width));
    s.at(Field::A1)[j] = seed;
    s.plus(Field::A1)[j] = std::conj(seed);
  }
  return s;
}

WaveguideNoise draw_waveguide_noise(const WaveguideConfig& cfg, Engine& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double s = std::sqrt(0.5 * cfg.dz / (cfg.window / static_cast<double>(cfg.n_t)));
  WaveguideNoise w;
  for (auto* v : {&w.dZ[0], &w.dZ[1], &w.dZ_plus[0], &w.dZ_plus[1]}) v->resize(cfg.n_t);
  for (std::size_t j = 0; j < cfg.n_t; ++j) {
    for (auto* v : {&w.dZ[0], &w.dZ[1], &w.dZ_plus[0], &w.dZ_plus[1]}) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      (*v)[j] = {s * re, s * im};
    }
  }
  return w;
}

LinearPropagator::LinearPropagator(const WaveguideConfig& cfg, double h)
    : n_t_(cfg.n_t),
      spectral_(cfg.n_t > 1 && (cfg.k2 != 0.0 || cfg.k2_p != 0.0)),
      pump_fixed_(cfg.freeze_pump || (cfg.k2_p == 0.0 && cfg.gamma_p == 0.0)),
      signal_fixed_(cfg.k2 == 0.0 && cfg.gamma_loss == 0.0) {
  const std::size_t n = spectral_ ? n_t_ : 1;
  const double grid_dt = cfg.window / static_cast<double>(cfg.n_t);
  mult_.resize(n);
  mult_plus_.resize(n);
  mult_p_.resize(n);
  mult_p_plus_.resize(n);
  const cplx i{0.0, 1.0};
  for (std::size_t k = 0; k < n; ++k) {
    const double w = spectral_ ? Fft::angular_frequency(k, n_t_, grid_dt) : 0.0;
    const double w2 = w * w;
    mult_[k] = std::exp((0.5 * i * cfg.k2 * w2 - cfg.gamma_loss) * h);
    mult_plus_[k] = std::exp((-0.5 * i * cfg.k2 * w2 - cfg.gamma_loss) * h);
    if (cfg.freeze_pump) {
      mult_p_[k] = mult_p_plus_[k] = 1.0;
    } else {
      mult_p_[k] = std::exp((0.5 * i * cfg.k2_p * w2 - cfg.gamma_p) * h);
      mult_p_plus_[k] = std::exp((-0.5 * i * cfg.k2_p * w2 - cfg.gamma_p) * h);
    }
  }
}

void LinearPropagator::apply(FieldState& s) const {
  auto scale = [&](std::vector<cplx>& v, const std::vector<cplx>& m) {
    if (!spectral_) {
      if (m[0] != cplx{1.0, 0.0}) {
        for (auto& x : v) x *= m[0];
      }
      return;
    }
    const Fft fft(n_t_);
    fft.forward(v);
    for (std::size_t k = 0; k < n_t_; ++k) v[k] *= m[k];
    fft.inverse(v);
  };
  for (std::size_t f = 0; f < kFields; ++f) {
    const bool pump = f == static_cast<std::size_t>(Field::Pump);
    if (pump ? pump_fixed_ : signal_fixed_) continue;
    scale(s.field[f], pump ? mult_p_ : mult_);
    scale(s.field_plus[f], pump ? mult_p_plus_ : mult_plus_);
  }
}

bool local_step(LocalState& x, const WaveguideConfig& cfg, const std::array<cplx, 4>& noise, cplx& root,
                cplx& root_plus) {
  const cplx kc = std::conj(cfg.kappa);
  const double dz = cfg.dz;
  const LocalState x0 = x;
  LocalState mid = x0;
  cplx r{}, rp{};
  for (int it = 0; it < kMidpointIterations; ++it) {
    const cplx kpsi = kc * mid[0];
    const cplx kpsi_p = cfg.kappa * mid[kFields];
    r = std::sqrt(kpsi);
    rp = std::sqrt(kpsi_p);
    LocalState next = x0;
    for (std::size_t i = 0; i < 2; ++i) {
      const std::size_t a = 1 + i;
      const std::size_t b = 3 + i;
      next[a] += 0.5 * (kpsi * mid[kFields + b] * dz + r * noise[i]);
      next[b] += 0.5 * (kpsi * mid[kFields + a] * dz + r * std::conj(noise[i]));
      next[kFields + a] += 0.5 * (kpsi_p * mid[b] * dz + rp * noise[2 + i]);
      next[kFields + b] += 0.5 * (kpsi_p * mid[a] * dz + rp * std::conj(noise[2 + i]));
    }
    if (!cfg.freeze_pump) {
      next[0] -= 0.5 * cfg.kappa * (mid[1] * mid[3] + mid[2] * mid[4]) * dz;
      next[kFields] -= 0.5 * kc * (mid[kFields + 1] * mid[kFields + 3] + mid[kFields + 2] * mid[kFields + 4]) * dz;
    }
    mid = next;
  }
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = 2.0 * mid[k] - x0[k];
  const bool ok_a = track_root(r * r, root);
  const bool ok_b = track_root(rp * rp, root_plus);
  return ok_a && ok_b;
}

namespace {

StepStatus split_step_with(FieldState& s, const WaveguideConfig& cfg, const WaveguideNoise& noise,
                           BranchTracker& br, const LinearPropagator& half) {
  if (br.root.size() != s.n_t) {
    br.root.assign(s.n_t, cplx{});
    br.root_plus.assign(s.n_t, cplx{});
    for (std::size_t j = 0; j < s.n_t; ++j) {
      br.root[j] = std::sqrt(std::conj(cfg.kappa) * s.at(Field::Pump)[j]);
      br.root_plus[j] = std::sqrt(cfg.kappa * s.plus(Field::Pump)[j]);
    }
  }
  half.apply(s);
  bool branch_ok = true;
  for (std::size_t j = 0; j < s.n_t; ++j) {
    LocalState x;
    for (std::size_t f = 0; f < kFields; ++f) {
      x[f] = s.field[f][j];
      x[kFields + f] = s.field_plus[f][j];
    }
    const std::array<cplx, 4> w{noise.dZ[0][j], noise.dZ[1][j], noise.dZ_plus[0][j], noise.dZ_plus[1][j]};
    branch_ok = local_step(x, cfg, w, br.root[j], br.root_plus[j]) && branch_ok;
    for (std::size_t f = 0; f < kFields; ++f) {
      s.field[f][j] = x[f];
      s.field_plus[f][j] = x[kFields + f];
    }
  }
  half.apply(s);
  s.z += cfg.dz;
  if (!s.is_finite()) return StepStatus::NonFinite;
  return branch_ok ? StepStatus::Ok : StepStatus::BranchJump;
}

}  // namespace

StepStatus split_step(FieldState& state, const WaveguideConfig& cfg, const WaveguideNoise& noise,
                      BranchTracker& branches) {
  const LinearPropagator half(cfg, 0.5 * cfg.dz);
  return split_step_with(state, cfg, noise, branches, half);
}

PhasePoint output_point(const FieldState& s, std::size_t j) {
  if (j >= s.n_t) throw ConfigError("output_point: grid index out of range");
  PhasePoint p;
  constexpr std::array<Field, kModes> order{Field::A1, Field::A2, Field::B1, Field::B2};
  for (std::size_t m = 0; m < kModes; ++m) {
    p.alpha[m] = s.at(order[m])[j];
    p.alpha_plus[m] = s.plus(order[m])[j];
  }
  return p;
}

WaveguideChunk propagate_chunk(const WaveguideConfig& cfg, std::uint64_t chunk_index, std::size_t chunk_size) {
  const std::uint64_t first = chunk_index * chunk_size;
  const std::uint64_t count = first >= cfg.n_traj ? 0 : std::min<std::uint64_t>(chunk_size, cfg.n_traj - first);
  const auto steps = cfg.record_steps();
  const std::uint64_t n_steps = cfg.total_steps();
  const LinearPropagator half(cfg, 0.5 * cfg.dz);
  const FieldState start = initial_state(cfg);

  WaveguideChunk chunk;
  chunk.index = chunk_index;
  chunk.first_traj = first;
  chunk.records.assign(steps.size(), {});
  std::vector<PhasePoint> snapshot(steps.size());
  for (std::uint64_t t = 0; t < count; ++t) {
    Engine rng = substream(cfg.seed, StreamDomain::Waveguide, first + t);
    FieldState s = start;
    BranchTracker br;
    std::size_t next_record = 0;
    auto record = [&](std::uint64_t k) {
      while (next_record < steps.size() && steps[next_record] == k) {
        snapshot[next_record++] = output_point(s, cfg.probe_index);
      }
    };
    record(0);
    StepStatus status = StepStatus::Ok;
    for (std::uint64_t k = 1; k <= n_steps && status == StepStatus::Ok; ++k) {
      status = split_step_with(s, cfg, draw_waveguide_noise(cfg, rng), br, half);
      if (status == StepStatus::Ok) record(k);
    }
    if (status != StepStatus::Ok) {
      ++chunk.failed;
      if (status == StepStatus::BranchJump) ++chunk.branch_jumps;
      continue;
    }
    for (std::size_t r = 0; r < steps.size(); ++r) chunk.records[r].push_back(snapshot[r]);
  }
  return chunk;
}

FailureCount propagate_chunks(const WaveguideConfig& cfg, const WaveguideSink& sink, unsigned workers,
                              std::size_t chunk_size) {
  cfg.validate();
  if (chunk_size == 0) throw ConfigError("waveguide: chunk size must be positive");
  const std::uint64_t n_chunks = (cfg.n_traj + chunk_size - 1) / chunk_size;
  std::mutex m;
  FailureCount total;
  parallel_for(n_chunks, workers, [&](std::uint64_t c, unsigned worker) {
    WaveguideChunk chunk = propagate_chunk(cfg, c, chunk_size);
    sink(chunk, worker);
    std::lock_guard lock(m);
    total.failed += chunk.failed;
    total.branch_jumps += chunk.branch_jumps;
  });
  return total;
}

WaveguideEnsemble propagate(const WaveguideConfig& cfg, unsigned workers) {
  cfg.validate();
  const auto steps = cfg.record_steps();
  WaveguideEnsemble ens;
  for (auto k : steps) ens.z.push_back(static_cast<double>(k) * cfg.dz);
  constexpr std::size_t chunk_size = 1024;
  std::vector<WaveguideChunk> chunks((cfg.n_traj + chunk_size - 1) / chunk_size);
  ens.failures = propagate_chunks(
      cfg, [&](const WaveguideChunk& c, unsigned) { chunks[c.index] = c; }, workers, chunk_size);
  ens.points.assign(steps.size(), {});
  for (std::size_t r = 0; r < steps.size(); ++r) {
    for (const auto& c : chunks) ens.points[r].insert(ens.points[r].end(), c.records[r].begin(), c.records[r].end());
  }
  return ens;
}

}  // namespace ppbell
