#include "ppbell/runs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "ppbell/error.hpp"
#include "ppbell/oracle.hpp"
#include "ppbell/parallel.hpp"
#include "ppbell/static_sampler.hpp"

namespace ppbell {

using json = nlohmann::ordered_json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

unsigned resolve_workers(const RunOptions& opts) { return opts.workers == 0 ? default_workers() : opts.workers; }

void require_samples(std::uint64_t n, const char* what) {
  if (n < kMinSamples) {
    throw ConfigError(std::string(what) + " must be >= " + std::to_string(kMinSamples) +
                      " (two error batches), got " + std::to_string(n));
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
}

json angles_json(const AngleSet& a) {
  return {{"theta", a.theta}, {"phi", a.phi}, {"theta_p", a.theta_p}, {"phi_p", a.phi_p}};
}

void check_imag(RunResult& res, const std::string& label, double imag, double imag_se) {
  if (std::abs(imag) > 3.0 * imag_se + 1e-12) {
    res.imag_violations.push_back(label + ": |imag_residual| = " + fmt(std::abs(imag)) + " > 3 x " + fmt(imag_se));
  }
}

std::optional<double> fock_oracle(double r, const FockObservable& obs) {
  if (!(r >= 0.0 && r <= kMaxFockSqueezing)) return std::nullopt;
  try {
    return fock_expect(fock_pdc_state(r, std::max(kDefaultFockCutoff, fock_cutoff_for(r))), obs);
  } catch (const NumericalError&) {
    return std::nullopt;
  }
}

double or_nan(std::optional<double> v) { return v ? *v : kNan; }

struct Residuals {
  json items = json::array();
  void add(const std::string& label, double imag, double imag_se) {
    items.push_back({{"row", label}, {"imag_residual", imag}, {"imag_stderr", imag_se}});
  }
};

std::string finish_manifest(const std::string& command, json config, std::uint64_t seed, json counts,
                            const Residuals& residuals, const RunResult& res, double wall) {
  json m;
  m["command"] = command;
  m["version"] = PPBELL_VERSION;
  m["seed"] = seed;
  m["config"] = std::move(config);
  m["samples"] = std::move(counts);
  m["wall_time_s"] = wall;
  m["imag_residuals"] = residuals.items;
  m["warnings"] = res.warnings;
  m["notes"] = res.notes;
  return m.dump();
}

// Merges per-worker probe sets into the first.
ProbeSet merged(std::vector<ProbeSet>& parts) {
  ProbeSet out = parts.front();
  for (std::size_t w = 1; w < parts.size(); ++w) out.merge(parts[w]);
  return out;
}

}  // namespace

std::string RunResult::manifest(const std::string& csv_name) const {
  json m = json::parse(manifest_body.empty() ? "{}" : manifest_body);
  m["output"] = csv_name;
  return m.dump(2) + "\n";
}

// ---- static CHD ----

void StaticChdConfig::validate() const {
  (void)PairCount(pairs);
  for (double p : phis) require_finite(p, "static-chd: phi");
  require_samples(effective_samples(), "static-chd: n_samples");
  require_finite(lhv_bound, "static-chd: lhv_bound");
}

std::vector<double> StaticChdConfig::effective_phis() const {
  if (!phis.empty()) return phis;
  std::vector<double> out;
  for (int k = 0; k <= 16; ++k) out.push_back(k * kPi / 64.0);
  return out;
}

std::uint64_t StaticChdConfig::effective_samples() const {
  if (n_samples != 0) return n_samples;
  return pairs == 1 ? (1ULL << 18) : (1ULL << 24);
}

RunResult run_static_chd(const StaticChdConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const Stopwatch clock;
  const PairCount n(cfg.pairs);
  const auto phis = cfg.effective_phis();
  const std::uint64_t total = cfg.effective_samples();
  const std::uint64_t n_batches = (total + kDefaultBatchSize - 1) / kDefaultBatchSize;

  std::vector<StatisticProbe> probes;
  for (double phi : phis) probes.push_back(StatisticProbe::chd(n, phi, cfg.lhv_bound));
  const unsigned workers = effective_workers(n_batches, resolve_workers(opts));
  std::vector<ProbeSet> parts(workers, ProbeSet(probes));
  parallel_for(n_batches, workers, [&](std::uint64_t b, unsigned w) {
    const std::uint64_t first = b * kDefaultBatchSize;
    const auto count = static_cast<std::size_t>(std::min<std::uint64_t>(kDefaultBatchSize, total - first));
    parts[w].add_batch(b, sample_batch(n, cfg.seed, b, count));
  });
  const ProbeSet all = merged(parts);

  RunResult res;
  res.table.header = {"phi", "S_CHD", "stderr", "imag_residual", "imag_stderr", "n_samples", "s_chd_exact"};
  Residuals residuals;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const BellStatistic s = all.result(i);
    res.table.add_row({phis[i], s.value, s.std_error, s.imag_residual, s.imag_std_error, s.n_samples,
                       s_chd_exact(n, phis[i])});
    const std::string label = "phi=" + format_float(phis[i]);
    residuals.add(label, s.imag_residual, s.imag_std_error);
    check_imag(res, label, s.imag_residual, s.imag_std_error);
  }
  json config = {{"pairs", cfg.pairs},      {"phis", phis},
                 {"n_samples", total},      {"seed", cfg.seed},
                 {"lhv_bound", cfg.lhv_bound}, {"batch_size", kDefaultBatchSize}};
  res.manifest_body = finish_manifest("static-chd", std::move(config), cfg.seed, {{"n_samples", total}},
                                      residuals, res, clock.seconds());
  return res;
}

// ---- dynamic ----

std::string_view dynamic_statistic_name(DynamicStatistic s) {
  switch (s) {
    case DynamicStatistic::Chd: return "chd";
    case DynamicStatistic::Ch: return "ch";
    case DynamicStatistic::Chsh: return "chsh";
  }
  return "?";
}

void DynamicRunConfig::validate() const {
  (void)PairCount(pairs);
  if (statistic == DynamicStatistic::Chd && postselect) {
    throw ConfigError("dynamic-chd: post-selection applies to CH and CHSH only");
  }
  for (double t : effective_taus()) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("dynamic: tau values must be > 0, got " + fmt(t));
  }
  if (sweep == SweepKind::Tau) {
    const auto taus = effective_taus();
    if (!std::is_sorted(taus.begin(), taus.end())) throw ConfigError("dynamic: tau values must be ascending");
  }
  for (double p : effective_phis()) require_finite(p, "dynamic: phi");
  require_finite(phi, "dynamic: phi");
  for (double a : {angles.theta, angles.phi, angles.theta_p, angles.phi_p}) require_finite(a, "dynamic: angles");
  require_finite(lhv_bound, "dynamic: lhv_bound");
  require_samples(n_traj, "dynamic: n_traj");
  sde_config().validate();
}

std::vector<double> DynamicRunConfig::effective_taus() const {
  if (sweep == SweepKind::Phi) return {tau};
  if (!taus.empty()) return taus;
  std::vector<double> out;
  for (int k = 1; k <= 25; ++k) out.push_back(0.01 * k);
  return out;
}

std::vector<double> DynamicRunConfig::effective_phis() const {
  if (sweep == SweepKind::Tau) return {};
  if (!phis.empty()) return phis;
  std::vector<double> out;
  for (int k = 0; k <= 16; ++k) out.push_back(k * kPi / 32.0);
  return out;
}

SdeConfig DynamicRunConfig::sde_config() const {
  SdeConfig s;
  s.kappa_e = kappa_e;
  s.dt = dt;
  s.n_traj = n_traj;
  s.seed = seed;
  s.record_times.clear();
  if (!(kappa_e > 0.0)) return s;  // validate() reports it
  for (double t : effective_taus()) s.record_times.push_back(t / kappa_e);
  s.t_end = s.record_times.empty() ? dt : s.record_times.back();
  return s;
}

namespace {

StatisticProbe dynamic_probe(const DynamicRunConfig& cfg, const AngleSet& angles, double phi_rel) {
  switch (cfg.statistic) {
    case DynamicStatistic::Chd: return StatisticProbe::chd(PairCount(cfg.pairs), phi_rel, cfg.lhv_bound);
    case DynamicStatistic::Ch: return StatisticProbe::ch(angles, cfg.postselect);
    case DynamicStatistic::Chsh: return StatisticProbe::chsh(angles, cfg.postselect);
  }
  throw ConfigError("unknown statistic");
}

FockObservable dynamic_oracle(const DynamicRunConfig& cfg, const AngleSet& angles, double phi_rel) {
  switch (cfg.statistic) {
    case DynamicStatistic::Chd: return fock::ChdStatistic{cfg.pairs, phi_rel};
    case DynamicStatistic::Ch: return fock::ChStatistic{angles, cfg.postselect};
    case DynamicStatistic::Chsh: return fock::ChshStatistic{angles, cfg.postselect};
  }
  throw ConfigError("unknown statistic");
}

/// Probe sets per record time, accumulated over the SDE ensemble.
std::vector<ProbeSet> accumulate_sde(const SdeConfig& sc, const std::vector<std::vector<StatisticProbe>>& probes,
                                     const RunOptions& opts, std::uint64_t& failed) {
  const std::uint64_t n_chunks = (sc.n_traj + kChunkSize - 1) / kChunkSize;
  const unsigned workers = effective_workers(n_chunks, resolve_workers(opts));
  std::vector<std::vector<ProbeSet>> parts(workers);
  for (auto& p : parts) {
    for (const auto& pr : probes) p.emplace_back(pr);
  }
  failed = simulate_chunks(
      sc,
      [&](const TrajectoryChunk& c, unsigned w) {
        for (std::size_t r = 0; r < probes.size(); ++r) parts[w][r].add_batch(c.index, c.records[r]);
      },
      workers);
  std::vector<ProbeSet> out = parts.front();
  for (std::size_t w = 1; w < parts.size(); ++w) {
    for (std::size_t r = 0; r < out.size(); ++r) out[r].merge(parts[w][r]);
  }
  return out;
}

}  // namespace

RunResult run_dynamic(const DynamicRunConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const Stopwatch clock;
  const SdeConfig sc = cfg.sde_config();
  const auto steps = sc.record_steps();
  const auto taus = cfg.effective_taus();
  const auto phis = cfg.effective_phis();
  const bool tau_sweep = cfg.sweep == SweepKind::Tau;

  std::vector<std::vector<StatisticProbe>> probes;
  if (tau_sweep) {
    for (std::size_t r = 0; r < taus.size(); ++r) probes.push_back({dynamic_probe(cfg, cfg.angles, cfg.phi)});
  } else {
    std::vector<StatisticProbe> row;
    for (double p : phis) row.push_back(dynamic_probe(cfg, AngleSet::sequential(p), p));
    probes.push_back(std::move(row));
  }

  RunResult res;
  res.warnings = sc.warnings();
  std::uint64_t failed = 0;
  const auto sets = accumulate_sde(sc, probes, opts, failed);
  if (failed > 0) res.warnings.push_back(std::to_string(failed) + " trajectories failed and were excluded");

  const std::string stat_col = std::string(statistic_name(probes.front().front().kind()));
  res.table.header = {tau_sweep ? "tau" : "phi", stat_col, "stderr", "imag_residual", "imag_stderr", "n_traj",
                      "oracle"};
  Residuals residuals;
  auto emit = [&](double x, double tau, const BellStatistic& s, const FockObservable& obs) {
    res.table.add_row({x, s.value, s.std_error, s.imag_residual, s.imag_std_error, s.n_samples,
                       or_nan(fock_oracle(tau, obs))});
    const std::string label = std::string(tau_sweep ? "tau=" : "phi=") + format_float(x);
    residuals.add(label, s.imag_residual, s.imag_std_error);
    check_imag(res, label, s.imag_residual, s.imag_std_error);
  };
  if (tau_sweep) {
    for (std::size_t r = 0; r < taus.size(); ++r) {
      const double tau = cfg.kappa_e * static_cast<double>(steps[r]) * sc.dt;
      emit(tau, tau, sets[r].result(0), dynamic_oracle(cfg, cfg.angles, cfg.phi));
    }
  } else {
    const double tau = cfg.kappa_e * static_cast<double>(steps[0]) * sc.dt;
    for (std::size_t i = 0; i < phis.size(); ++i) {
      emit(phis[i], tau, sets[0].result(i), dynamic_oracle(cfg, AngleSet::sequential(phis[i]), phis[i]));
    }
  }

  json config = {{"statistic", dynamic_statistic_name(cfg.statistic)},
                 {"postselect", cfg.postselect},
                 {"sweep", tau_sweep ? "tau" : "phi"},
                 {"taus", taus},
                 {"phis", phis},
                 {"phi", cfg.phi},
                 {"angles", angles_json(cfg.angles)},
                 {"pairs", cfg.pairs},
                 {"lhv_bound", cfg.lhv_bound},
                 {"kappa_e", cfg.kappa_e},
                 {"dt", cfg.dt},
                 {"n_traj", cfg.n_traj},
                 {"seed", cfg.seed},
                 {"batch_size", kChunkSize}};
  res.manifest_body = finish_manifest(std::string("dynamic-") + std::string(dynamic_statistic_name(cfg.statistic)),
                                      std::move(config), cfg.seed, {{"n_traj", cfg.n_traj}, {"failed", failed}},
                                      residuals, res, clock.seconds());
  return res;
}

// ---- waveguide ----

namespace {

// Moment channels at the probe point: n_A1, <Phi1a Phi1b>, <Phi1a>.
constexpr std::size_t kMomentChannels = 3;

struct PointStats {
  std::vector<MomentAccumulator> moments;       // per record
  std::vector<std::optional<ProbeSet>> probes;  // per record; empty at z = 0 or without coupling
};

void add_moments(MomentAccumulator& acc, std::uint64_t index, std::span<const PhasePoint> pts) {
  if (pts.empty()) return;
  std::array<cplx, kMomentChannels> sums{};
  for (const auto& p : pts) {
    sums[0] += p.quasi_number(Mode::A1);
    sums[1] += p.amp(Mode::A1) * p.amp(Mode::B1);
    sums[2] += p.amp(Mode::A1);
  }
  acc.add_batch(index, pts.size(), sums);
}

std::vector<StatisticProbe> waveguide_probes() {
  return {StatisticProbe::ch(AngleSet{}, false), StatisticProbe::chsh(AngleSet{}, true)};
}

PointStats make_stats(std::size_t n_records, const std::vector<bool>& with_probes) {
  PointStats s;
  for (std::size_t r = 0; r < n_records; ++r) {
    s.moments.emplace_back(kMomentChannels);
    if (with_probes[r]) {
      s.probes.emplace_back(ProbeSet(waveguide_probes()));
    } else {
      s.probes.emplace_back(std::nullopt);
    }
  }
  return s;
}

void merge_stats(PointStats& into, const PointStats& from) {
  for (std::size_t r = 0; r < into.moments.size(); ++r) {
    into.moments[r].merge(from.moments[r]);
    if (into.probes[r]) into.probes[r]->merge(*from.probes[r]);
  }
}

void add_records(PointStats& s, std::uint64_t index, const std::vector<std::vector<PhasePoint>>& records) {
  for (std::size_t r = 0; r < records.size(); ++r) {
    add_moments(s.moments[r], index, records[r]);
    if (s.probes[r]) s.probes[r]->add_batch(index, records[r]);
  }
}

struct StatRow {
  std::string name;
  Estimate est;
  bool hermitian;
};

std::vector<StatRow> stat_rows(const PointStats& s, std::size_t r) {
  std::vector<StatRow> rows{{"n_A1", s.moments[r].estimate(0), true},
                            {"pair_A1B1", s.moments[r].estimate(1), false},
                            {"amp_A1", s.moments[r].estimate(2), false}};
  if (s.probes[r]) {
    for (const BellStatistic& b : s.probes[r]->results()) {
      rows.push_back({std::string(statistic_name(b.kind)),
                      Estimate{cplx{b.value, b.imag_residual}, b.std_error, b.imag_std_error, b.n_samples}, true});
    }
  }
  return rows;
}

}  // namespace

RunResult run_waveguide(const WaveguideConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  require_samples(cfg.n_traj, "waveguide: n_traj");
  const Stopwatch clock;
  const auto steps = cfg.record_steps();
  const bool coupled = cfg.kappa != cplx{};
  std::vector<bool> with_probes;
  for (auto k : steps) with_probes.push_back(coupled && k > 0);

  constexpr std::size_t chunk_size = 1024;
  const std::uint64_t n_chunks = (cfg.n_traj + chunk_size - 1) / chunk_size;
  const unsigned workers = effective_workers(n_chunks, resolve_workers(opts));
  std::vector<PointStats> parts;
  for (unsigned w = 0; w < workers; ++w) parts.push_back(make_stats(steps.size(), with_probes));
  const FailureCount failures = propagate_chunks(
      cfg, [&](const WaveguideChunk& c, unsigned w) { add_records(parts[w], c.index, c.records); }, workers,
      chunk_size);
  for (unsigned w = 1; w < workers; ++w) merge_stats(parts[0], parts[w]);
  const PointStats& wg = parts[0];

  RunResult res;
  res.warnings = cfg.warnings();
  if (failures.failed > 0) {
    res.warnings.push_back(std::to_string(failures.failed) + " trajectories failed (" +
                           std::to_string(failures.branch_jumps) + " square-root branch jumps) and were excluded");
  }

  const bool reduction = cfg.is_reduction();
  const cplx coupling = cfg.reduction_coupling();
  const bool reduction_real = reduction && coupling.imag() == 0.0 && coupling.real() > 0.0;
  const FieldState start = initial_state(cfg);
  const cplx seed_at_probe = start.at(Field::A1)[cfg.probe_index];

  auto oracle = [&](const std::string& name, double z) -> double {
    if (reduction_real) {
      const double r = coupling.real() * z;
      if (name == "n_A1") return pdc_number_exact(r);
      if (name == "pair_A1B1") return pdc_pair_coherence_exact(r);
      if (name == "amp_A1") return 0.0;
      if (name == "S_CH") return or_nan(fock_oracle(r, fock::ChStatistic{AngleSet{}, false}));
      if (name == "S_CHSH_postselected") return or_nan(fock_oracle(r, fock::ChshStatistic{AngleSet{}, true}));
    }
    if (!coupled && name == "amp_A1" && (cfg.k2 == 0.0 || cfg.seed_width == 0.0)) {
      return (seed_at_probe * std::exp(-cfg.gamma_loss * z)).real();
    }
    if (!coupled && name == "n_A1" && (cfg.k2 == 0.0 || cfg.seed_width == 0.0)) {
      return std::norm(seed_at_probe) * std::exp(-2.0 * cfg.gamma_loss * z);
    }
    return kNan;
  };

  // Four-mode comparison ensemble for the reduction configuration.
  std::optional<PointStats> four_mode;
  if (reduction_real) {
    SdeConfig sc;
    sc.kappa_e = coupling.real();
    sc.dt = cfg.dz;
    sc.t_end = cfg.z_end;
    sc.n_traj = cfg.n_traj;
    sc.seed = cfg.seed;
    sc.record_times = cfg.record_z;
    std::vector<PointStats> sparts;
    for (unsigned w = 0; w < workers; ++w) sparts.push_back(make_stats(steps.size(), with_probes));
    simulate_chunks(
        sc, [&](const TrajectoryChunk& c, unsigned w) { add_records(sparts[w], c.index, c.records); }, workers);
    for (unsigned w = 1; w < workers; ++w) merge_stats(sparts[0], sparts[w]);
    four_mode = std::move(sparts[0]);
  }

  res.table.header = {"z", "statistic", "value", "stderr", "imag_residual", "imag_stderr", "n_traj", "oracle"};
  Residuals residuals;
  bool reduction_ok = true;
  bool loss_ok = true;
  const bool loss_config = !coupled && cfg.gamma_loss > 0.0 && seed_at_probe != cplx{};
  for (std::size_t r = 0; r < steps.size(); ++r) {
    const double z = static_cast<double>(steps[r]) * cfg.dz;
    const auto rows = stat_rows(wg, r);
    std::vector<StatRow> ref_rows;
    if (four_mode) ref_rows = stat_rows(*four_mode, r);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const StatRow& row = rows[i];
      const double expect = oracle(row.name, z);
      res.table.add_row({z, row.name, row.est.value.real(), row.est.std_error, row.est.value.imag(),
                         row.est.imag_std_error, row.est.n, expect});
      const std::string label = "z=" + format_float(z) + " " + row.name;
      if (row.hermitian) {
        residuals.add(label, row.est.value.imag(), row.est.imag_std_error);
        check_imag(res, label, row.est.value.imag(), row.est.imag_std_error);
      }
      if (four_mode) {
        const Estimate& ref = ref_rows[i].est;
        const double diff = std::abs(row.est.value.real() - ref.value.real());
        const double tol = 3.0 * std::hypot(row.est.std_error, ref.std_error);
        if (diff > tol + 1e-12) {
          reduction_ok = false;
          res.notes.push_back("reduction mismatch " + label + ": waveguide " + fmt(row.est.value.real()) +
                              " vs four-mode " + fmt(ref.value.real()) + " (3 SE = " + fmt(tol) + ")");
        }
        if (std::isfinite(expect) && std::abs(row.est.value.real() - expect) > 3.0 * row.est.std_error + 1e-12) {
          reduction_ok = false;
          res.notes.push_back("reduction oracle mismatch " + label + ": " + fmt(row.est.value.real()) + " vs " +
                              fmt(expect));
        }
      }
      if (loss_config && row.name == "amp_A1" && std::isfinite(expect)) {
        const double err = std::abs(row.est.value.real() - expect);
        if (err > 1e-10 * std::max(1.0, std::abs(expect))) {
          loss_ok = false;
          res.notes.push_back("loss mismatch " + label + ": " + fmt(row.est.value.real()) + " vs " + fmt(expect));
        }
      }
    }
  }
  if (reduction) {
    if (!reduction_real) {
      res.notes.push_back("reduction check: FAIL (coupling kappa^* Psi must be real and positive)");
      reduction_ok = false;
    } else {
      res.notes.push_back(std::string("reduction check: ") + (reduction_ok ? "PASS" : "FAIL"));
    }
    res.checks_passed = res.checks_passed && reduction_ok;
  }
  if (loss_config) {
    res.notes.push_back(std::string("loss check: ") + (loss_ok ? "PASS" : "FAIL"));
    res.checks_passed = res.checks_passed && loss_ok;
  }

  json config = {{"k2", cfg.k2},
                 {"k2_p", cfg.k2_p},
                 {"gamma_loss", cfg.gamma_loss},
                 {"gamma_p", cfg.gamma_p},
                 {"kappa", {cfg.kappa.real(), cfg.kappa.imag()}},
                 {"z_end", cfg.z_end},
                 {"dz", cfg.dz},
                 {"n_t", cfg.n_t},
                 {"window", cfg.window},
                 {"seed", cfg.seed},
                 {"n_traj", cfg.n_traj},
                 {"pump_profile", cfg.pump_profile == PumpProfile::Constant ? "constant" : "gaussian"},
                 {"pump_amplitude", {cfg.pump_amplitude.real(), cfg.pump_amplitude.imag()}},
                 {"pump_width", cfg.pump_width},
                 {"freeze_pump", cfg.freeze_pump},
                 {"seed_amplitude", {cfg.seed_amplitude.real(), cfg.seed_amplitude.imag()}},
                 {"seed_width", cfg.seed_width},
                 {"probe_index", cfg.probe_index},
                 {"record_z", cfg.record_z},
                 {"reduction", reduction}};
  res.manifest_body = finish_manifest(
      "waveguide", std::move(config), cfg.seed,
      {{"n_traj", cfg.n_traj}, {"failed", failures.failed}, {"branch_jumps", failures.branch_jumps}}, residuals,
      res, clock.seconds());
  return res;
}

}  // namespace ppbell
