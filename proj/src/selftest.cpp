#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "ppbell/oracle.hpp"
#include "ppbell/runs.hpp"
#include "ppbell/sde.hpp"
#include "ppbell/static_sampler.hpp"
#include "ppbell/waveguide.hpp"

namespace ppbell {

namespace {

constexpr double kPi = std::numbers::pi;

struct Checker {
  RunResult& res;

  void add(const std::string& name, double value, double reference, double tol) {
    const bool ok = std::abs(value - reference) <= tol;
    res.table.add_row({name, value, reference, tol, std::uint64_t{ok ? 1u : 0u}});
    std::ostringstream os;
    os.precision(10);
    os << name << ": " << (ok ? "PASS" : "FAIL") << " (" << value << " vs " << reference << ", tol " << tol << ")";
    res.notes.push_back(os.str());
    res.checks_passed = res.checks_passed && ok;
  }
};

double exact(double r, const FockObservable& obs) { return fock_expect(fock_pdc_state(r), obs).value(); }

}  // namespace

RunResult run_selftest(const SelftestConfig& cfg, const RunOptions& opts) {
  RunResult res;
  res.table.header = {"check", "value", "reference", "tolerance", "pass"};
  Checker c{res};
  const double r = 0.1;
  const AngleSet def{};

  // closed forms against the brute-force Fock evaluator
  c.add("fock_marginal_A_theta0", exact(r, fock::Marginal{Side::A, 0.0}), pdc_marginal_exact(r), 1e-12);
  c.add("fock_marginal_A_theta_pi3", exact(r, fock::Marginal{Side::A, kPi / 3}), pdc_marginal_exact(r), 1e-12);
  c.add("fock_marginal_B_phi_pi8", exact(r, fock::Marginal{Side::B, kPi / 8}), pdc_marginal_exact(r), 1e-12);
  c.add("fock_joint_pp_pi8", exact(r, fock::Joint{0.0, kPi / 8, Outcome::PlusPlus}),
        pdc_joint_exact(r, 0.0, kPi / 8, Outcome::PlusPlus), 1e-12);
  c.add("fock_joint_pm_pi8", exact(r, fock::Joint{0.0, kPi / 8, Outcome::PlusMinus}),
        pdc_joint_exact(r, 0.0, kPi / 8, Outcome::PlusMinus), 1e-12);
  c.add("fock_vacuum", exact(r, fock::Vacuum{}), pdc_vacuum_exact(r), 1e-12);
  c.add("fock_E_postselected_pi8", exact(r, fock::Correlation{0.0, kPi / 8, true}),
        pdc_correlation_exact(r, 0.0, kPi / 8, true).value(), 1e-10);
  c.add("fock_S_CH", exact(r, fock::ChStatistic{def, false}), (std::sqrt(2.0) + 1.0) / 2.0, 1e-10);
  c.add("fock_S_CH_postselected", exact(r, fock::ChStatistic{def, true}), exact(r, fock::ChStatistic{def, false}),
        1e-12);
  c.add("fock_S_CHSH_postselected", exact(r, fock::ChshStatistic{def, true}),
        std::sqrt(2.0) * 2.0 * pdc_marginal_exact(r) / (1.0 - pdc_vacuum_exact(r)), 1e-10);
  c.add("fock_S_CHD_pi8", exact(r, fock::ChdStatistic{1, kPi / 8}), pdc_s_chd_exact(r, kPi / 8), 1e-9);
  c.add("fock_number_A1", exact(r, fock::IntensityMoment{1, 0, 0.0, false}), pdc_number_exact(r), 1e-9);
  for (int n = 1; n <= 3; ++n) {
    c.add("bell_fock_S_CHD_N" + std::to_string(n) + "_pi8",
          fock_expect(fock_bell_state(PairCount(n)), fock::ChdStatistic{n, kPi / 8}).value(),
          s_chd_exact(PairCount(n), kPi / 8), 1e-12);
  }

  // one semi-implicit step: single-point frozen-pump waveguide against the four-mode engine
  {
    WaveguideConfig wc;
    wc.freeze_pump = true;
    wc.kappa = {0.7, 0.0};
    wc.pump_amplitude = {1.3, 0.0};
    SdeConfig sc;
    sc.kappa_e = wc.reduction_coupling().real();
    sc.dt = wc.dz;
    Engine rng = substream(cfg.seed, StreamDomain::Test, 0);
    PhasePoint x;
    LocalState w{};
    w[0] = wc.pump_amplitude;
    w[kFields] = std::conj(wc.pump_amplitude);
    cplx root{}, root_plus{};
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const NoiseDraw nd = draw_noise(sc.dt, rng);
      x = step(x, sc, nd);
      local_step(w, wc, {nd.dW1, nd.dW2, nd.dW1p, nd.dW2p}, root, root_plus);
      for (std::size_t m = 0; m < kModes; ++m) {
        worst = std::max({worst, std::abs(w[1 + m] - x.alpha[m]), std::abs(w[kFields + 1 + m] - x.alpha_plus[m])});
      }
    }
    c.add("waveguide_reduction_step", worst, 0.0, 1e-12);
  }

  // static sampler against the Bell-state formula
  {
    StaticChdConfig sc;
    sc.phis = {kPi / 8};
    sc.n_samples = cfg.n_samples;
    sc.seed = cfg.seed;
    const RunResult s = run_static_chd(sc, opts);
    const double v = s.table.number(0, 1);
    c.add("static_S_CHD_N1_pi8", v, s_chd_exact(PairCount(1), kPi / 8), 3.0 * s.table.number(0, 2));
  }

  // dynamic engine moments against the squeezed-state values
  {
    SdeConfig sc;
    sc.n_traj = cfg.n_traj;
    sc.seed = cfg.seed;
    sc.t_end = r;
    sc.record_times = {r};
    const Ensemble ens = simulate(sc, opts.workers);
    MomentAccumulator acc(2);
    for (const auto& p : ens.points[0]) {
      const std::array<cplx, 2> v{p.quasi_number(Mode::A1), p.amp(Mode::A1) * p.amp(Mode::B1)};
      acc.push(v);
    }
    acc.flush();
    const Estimate n = acc.estimate(0);
    const Estimate m = acc.estimate(1);
    c.add("dynamic_number_A1", n.value.real(), pdc_number_exact(r), 3.0 * n.std_error);
    c.add("dynamic_pair_A1B1", m.value.real(), pdc_pair_coherence_exact(r), 3.0 * m.std_error);
  }

  nlohmann::ordered_json config = {
      {"n_samples", cfg.n_samples}, {"n_traj", cfg.n_traj}, {"seed", cfg.seed}};
  nlohmann::ordered_json m = {{"command", "selftest"}, {"version", PPBELL_VERSION}, {"seed", cfg.seed},
                              {"config", config},      {"notes", res.notes}};
  res.manifest_body = m.dump();
  return res;
}

}  // namespace ppbell
