// ppbell: command-line runner for the static, dynamic and waveguide experiments.

#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ppbell/error.hpp"
#include "ppbell/parallel.hpp"
#include "ppbell/runs.hpp"

using namespace ppbell;

namespace {

struct Common {
  std::string output;
  unsigned workers = 0;
};

int emit(const RunResult& res, const Common& common, const std::string& default_name) {
  const std::string path = common.output.empty() ? default_name : common.output;
  const std::string manifest = manifest_path_for(path);
  const std::string manifest_name = std::filesystem::path(manifest).filename().string();
  write_text_file(path, res.csv(manifest_name));
  write_text_file(manifest, res.manifest(std::filesystem::path(path).filename().string()));
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& n : res.notes) std::cout << n << "\n";
  for (const auto& v : res.imag_violations) std::cerr << "imaginary residual check failed: " << v << "\n";
  std::cout << "wrote " << path << " (" << res.table.rows.size() << " rows) and " << manifest << "\n";
  return res.exit_code();
}

AngleSet angles_from(const std::vector<double>& v) {
  if (v.empty()) return {};
  if (v.size() != 4) throw ConfigError("--angles takes theta,phi,theta',phi'");
  return {v[0], v[1], v[2], v[3]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive-P phase-space simulations of Bell violations"};
  app.set_config("--config", "", "Run config file (sections per subcommand)");
  app.allow_config_extras(CLI::config_extras_mode::ignore);
  app.set_version_flag("--version", std::string(PPBELL_VERSION));
  app.require_subcommand(1);

  Common common;
  app.add_option("-o,--output", common.output, "CSV output path (manifest goes next to it)");
  app.add_option("-j,--workers", common.workers, std::string("Worker threads (default: $") + kWorkersEnv +
                                                      " or hardware concurrency)");

  // static-chd
  StaticChdConfig st;
  auto* static_cmd = app.add_subcommand("static-chd", "S_CHD from exact Bell-state sampling");
  static_cmd->add_option("--pairs", st.pairs, "Photon pairs N")->capture_default_str();
  static_cmd->add_option("--phi", st.phis, "Relative angles (default k pi/64, k=0..16)")->delimiter(',');
  static_cmd->add_option("--samples", st.n_samples, "Samples (default 2^18 for N=1, 2^24 otherwise)");
  static_cmd->add_option("--seed", st.seed)->capture_default_str();
  static_cmd->add_option("--lhv-bound", st.lhv_bound)->capture_default_str();

  // dynamic-*
  struct DynamicCmd {
    DynamicRunConfig cfg;
    std::string sweep = "tau";
    std::vector<double> angles;
    CLI::App* cmd = nullptr;
  };
  std::vector<DynamicCmd> dyn(3);
  const DynamicStatistic kinds[3] = {DynamicStatistic::Chd, DynamicStatistic::Ch, DynamicStatistic::Chsh};
  for (int i = 0; i < 3; ++i) {
    auto& d = dyn[i];
    d.cfg.statistic = kinds[i];
    const std::string name = "dynamic-" + std::string(dynamic_statistic_name(kinds[i]));
    d.cmd = app.add_subcommand(name, "Down-conversion SDE ensemble, " + name.substr(8) + " statistic");
    d.cmd->add_option("--sweep", d.sweep, "tau or phi")->check(CLI::IsMember({"tau", "phi"}))->capture_default_str();
    d.cmd->add_option("--taus", d.cfg.taus, "tau grid of a tau sweep (default 0.01..0.25)")->delimiter(',');
    d.cmd->add_option("--phis", d.cfg.phis, "Relative angles of a phi sweep (default k pi/32, k=0..16)")->delimiter(',');
    d.cmd->add_option("--tau", d.cfg.tau, "tau of a phi sweep")->capture_default_str();
    d.cmd->add_option("--kappa-e", d.cfg.kappa_e)->capture_default_str();
    d.cmd->add_option("--dt", d.cfg.dt)->capture_default_str();
    d.cmd->add_option("--traj", d.cfg.n_traj, "Trajectories")->capture_default_str();
    d.cmd->add_option("--seed", d.cfg.seed)->capture_default_str();
    if (kinds[i] == DynamicStatistic::Chd) {
      d.cmd->add_option("--phi", d.cfg.phi, "Relative angle of a tau sweep")->capture_default_str();
      d.cmd->add_option("--pairs", d.cfg.pairs)->capture_default_str();
      d.cmd->add_option("--lhv-bound", d.cfg.lhv_bound)->capture_default_str();
    } else {
      d.cmd->add_option("--angles", d.angles, "theta,phi,theta',phi' of a tau sweep")->delimiter(',');
      d.cmd->add_flag("--postselect", d.cfg.postselect, "Exclude joint vacuum events");
    }
  }

  // waveguide
  WaveguideConfig wg;
  double kappa_re = 1.0, kappa_im = 0.0, pump_re = 1.0, pump_im = 0.0, seed_re = 0.0, seed_im = 0.0;
  std::string pump_profile = "constant";
  auto* wg_cmd = app.add_subcommand("waveguide", "Stochastic field propagation in a waveguide");
  wg_cmd->add_option("--k2", wg.k2, "Group velocity dispersion k''")->capture_default_str();
  wg_cmd->add_option("--k2-p", wg.k2_p, "Pump dispersion")->capture_default_str();
  wg_cmd->add_option("--gamma", wg.gamma_loss, "Amplitude loss per length")->capture_default_str();
  wg_cmd->add_option("--gamma-p", wg.gamma_p, "Pump amplitude loss per length")->capture_default_str();
  wg_cmd->add_option("--kappa", kappa_re)->capture_default_str();
  wg_cmd->add_option("--kappa-im", kappa_im)->capture_default_str();
  wg_cmd->add_option("--z-end", wg.z_end)->capture_default_str();
  wg_cmd->add_option("--dz", wg.dz)->capture_default_str();
  wg_cmd->add_option("--nt", wg.n_t, "Grid points (power of two)")->capture_default_str();
  wg_cmd->add_option("--window", wg.window, "Grid span in t_v")->capture_default_str();
  wg_cmd->add_option("--traj", wg.n_traj)->capture_default_str();
  wg_cmd->add_option("--seed", wg.seed)->capture_default_str();
  wg_cmd->add_option("--pump-profile", pump_profile)->check(CLI::IsMember({"constant", "gaussian"}))->capture_default_str();
  wg_cmd->add_option("--pump", pump_re, "Pump amplitude")->capture_default_str();
  wg_cmd->add_option("--pump-im", pump_im)->capture_default_str();
  wg_cmd->add_option("--pump-width", wg.pump_width)->capture_default_str();
  wg_cmd->add_flag("--freeze-pump", wg.freeze_pump, "No depletion, dispersion or loss of the pump");
  wg_cmd->add_option("--seed-amplitude", seed_re, "Coherent amplitude in Phi_1^a")->capture_default_str();
  wg_cmd->add_option("--seed-amplitude-im", seed_im)->capture_default_str();
  wg_cmd->add_option("--seed-width", wg.seed_width, "Gaussian seed width (0: uniform)")->capture_default_str();
  wg_cmd->add_option("--probe-index", wg.probe_index)->capture_default_str();
  wg_cmd->add_option("--record-z", wg.record_z, "Output planes (default z_end)")->delimiter(',');

  // selftest
  SelftestConfig selftest;
  auto* self_cmd = app.add_subcommand("selftest", "Oracle equivalence checks");
  self_cmd->add_option("--samples", selftest.n_samples)->capture_default_str();
  self_cmd->add_option("--traj", selftest.n_traj)->capture_default_str();
  self_cmd->add_option("--seed", selftest.seed)->capture_default_str();

  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    RunOptions opts;
    opts.workers = common.workers == 0 ? default_workers() : common.workers;
    if (static_cmd->parsed()) return emit(run_static_chd(st, opts), common, "static-chd.csv");
    for (auto& d : dyn) {
      if (!d.cmd->parsed()) continue;
      d.cfg.sweep = d.sweep == "phi" ? SweepKind::Phi : SweepKind::Tau;
      d.cfg.angles = angles_from(d.angles);
      return emit(run_dynamic(d.cfg, opts), common, d.cmd->get_name() + ".csv");
    }
    if (wg_cmd->parsed()) {
      wg.kappa = {kappa_re, kappa_im};
      wg.pump_amplitude = {pump_re, pump_im};
      wg.seed_amplitude = {seed_re, seed_im};
      wg.pump_profile = pump_profile == "gaussian" ? PumpProfile::Gaussian : PumpProfile::Constant;
      if (wg_cmd->count("--record-z") == 0) wg.record_z = {wg.z_end};
      return emit(run_waveguide(wg, opts), common, "waveguide.csv");
    }
    if (self_cmd->parsed()) return emit(run_selftest(selftest, opts), common, "selftest.csv");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const EstimatorError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnstableDenominator& e) {
    std::cerr << "unstable denominator: " << e.what() << "\n";
    return kExitUnstable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
