#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>

#include "ppbell/error.hpp"
#include "ppbell/estimators.hpp"
#include "ppbell/oracle.hpp"
#include "ppbell/runs.hpp"
#include "ppbell/sde.hpp"
#include "ppbell/static_sampler.hpp"

namespace py = pybind11;
using namespace ppbell;

namespace {

constexpr double kPi = std::numbers::pi;

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

// (n, 2, 4): [:, 0] amplitudes, [:, 1] conjugate-role amplitudes
CArray to_array(const std::vector<PhasePoint>& pts) {
  CArray out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}, static_cast<py::ssize_t>(kModes)});
  auto a = out.mutable_unchecked<3>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    for (std::size_t m = 0; m < kModes; ++m) {
      a(i, 0, m) = pts[i].alpha[m];
      a(i, 1, m) = pts[i].alpha_plus[m];
    }
  }
  return out;
}

std::vector<PhasePoint> from_array(const CArray& arr) {
  if (arr.ndim() != 3 || arr.shape(1) != 2 || arr.shape(2) != static_cast<py::ssize_t>(kModes)) {
    throw py::value_error("samples must have shape (n, 2, 4)");
  }
  auto a = arr.unchecked<3>();
  std::vector<PhasePoint> pts(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    for (std::size_t m = 0; m < kModes; ++m) {
      pts[i].alpha[m] = a(i, 0, m);
      pts[i].alpha_plus[m] = a(i, 1, m);
    }
  }
  return pts;
}

const std::array<double, 4> kDefaultAngles{0.0, std::numbers::pi / 8, std::numbers::pi / 4,
                                             3 * std::numbers::pi / 8};

AngleSet angles_from(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }

py::dict stat_dict(const BellStatistic& s) {
  py::dict d;
  d["statistic"] = std::string(statistic_name(s.kind));
  d["value"] = s.value;
  d["stderr"] = s.std_error;
  d["imag_residual"] = s.imag_residual;
  d["imag_stderr"] = s.imag_std_error;
  d["n_samples"] = s.n_samples;
  d["violates"] = s.violates();
  return d;
}

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  d["value"] = e.value.real();
  d["imag"] = e.value.imag();
  d["stderr"] = e.std_error;
  d["imag_stderr"] = e.imag_std_error;
  d["n_samples"] = e.n;
  return d;
}

py::dict result_dict(const RunResult& r, const std::string& name) {
  py::list rows;
  for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
    py::list row;
    for (const auto& cell : r.table.rows[i]) {
      std::visit([&](const auto& v) { row.append(v); }, cell);
    }
    rows.append(row);
  }
  py::dict d;
  d["header"] = r.table.header;
  d["rows"] = rows;
  d["csv"] = r.csv(name + ".manifest.json");
  d["manifest"] = r.manifest(name);
  d["notes"] = r.notes;
  d["warnings"] = r.warnings;
  d["imag_violations"] = r.imag_violations;
  d["exit_code"] = r.exit_code();
  return d;
}

double fock_value(double r, const FockObservable& obs) {
  const auto v = fock_expect(fock_pdc_state(r, std::max(kDefaultFockCutoff, fock_cutoff_for(r))), obs);
  if (!v) throw py::value_error("degenerate: normalization vanishes");
  return *v;
}

}  // namespace

PYBIND11_MODULE(_ppbell, m) {
  m.doc() = "Positive-P phase-space simulation of Bell violations";
  m.attr("__version__") = PPBELL_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UnstableDenominator>(m, "UnstableDenominator", PyExc_ArithmeticError);
  py::register_exception<EstimatorError>(m, "EstimatorError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<SamplerError>(m, "SamplerError", PyExc_RuntimeError);

  // sampling and dynamics
  m.def(
      "sample_static",
      [](int pairs, std::size_t n, std::uint64_t seed) {
        std::vector<PhasePoint> pts;
        pts.reserve(n);
        for (std::uint64_t b = 0; pts.size() < n; ++b) {
          const std::size_t count = std::min<std::size_t>(kDefaultBatchSize, n - pts.size());
          const auto batch = sample_batch(PairCount(pairs), seed, b, count);
          pts.insert(pts.end(), batch.begin(), batch.end());
        }
        return to_array(pts);
      },
      py::arg("pairs"), py::arg("n"), py::arg("seed") = 1, "Bell-state phase-space samples, shape (n, 2, 4)");

  m.def(
      "simulate",
      [](std::uint64_t n_traj, std::vector<double> record_times, double kappa_e, double dt, std::uint64_t seed,
         unsigned workers) {
        SdeConfig cfg;
        cfg.n_traj = n_traj;
        cfg.kappa_e = kappa_e;
        cfg.dt = dt;
        cfg.seed = seed;
        cfg.record_times = record_times;
        cfg.t_end = record_times.empty() ? dt : record_times.back();
        Ensemble ens;
        {
          py::gil_scoped_release release;
          ens = simulate(cfg, workers);
        }
        py::list records;
        for (const auto& r : ens.points) records.append(to_array(r));
        py::dict d;
        d["times"] = ens.times;
        d["points"] = records;
        d["failed"] = ens.failed;
        return d;
      },
      py::arg("n_traj"), py::arg("record_times"), py::arg("kappa_e") = 1.0, py::arg("dt") = 2e-4,
      py::arg("seed") = 1, py::arg("workers") = 0, "Down-conversion SDE ensemble from vacuum");

  // estimators
  m.def(
      "s_chd", [](const CArray& s, int pairs, double phi) { return stat_dict(s_chd(from_array(s), PairCount(pairs), phi)); },
      py::arg("samples"), py::arg("pairs"), py::arg("phi_rel"));
  m.def(
      "s_ch",
      [](const CArray& s, std::array<double, 4> a, bool ps) { return stat_dict(s_ch(from_array(s), angles_from(a), ps)); },
      py::arg("samples"), py::arg("angles") = kDefaultAngles,
      py::arg("postselect") = false);
  m.def(
      "s_chsh",
      [](const CArray& s, std::array<double, 4> a, bool ps) {
        return stat_dict(s_chsh(from_array(s), angles_from(a), ps));
      },
      py::arg("samples"), py::arg("angles") = kDefaultAngles,
      py::arg("postselect") = true);
  m.def(
      "correlation_E",
      [](const CArray& s, double theta, double phi, bool ps) {
        return estimate_dict(correlation_E(from_array(s), theta, phi, ps));
      },
      py::arg("samples"), py::arg("theta"), py::arg("phi"), py::arg("postselect") = false);
  m.def(
      "prob_marginal",
      [](const CArray& s, const std::string& side, double angle) {
        if (side != "A" && side != "B") throw py::value_error("side must be 'A' or 'B'");
        return estimate_dict(prob_marginal(from_array(s), side == "A" ? Side::A : Side::B, angle));
      },
      py::arg("samples"), py::arg("side"), py::arg("angle"));

  // oracle
  m.def("g_exact", [](int n, double phi) { return g_exact(PairCount(n), phi); }, py::arg("pairs"), py::arg("phi_rel"));
  m.def("s_chd_exact", [](int n, double phi) { return s_chd_exact(PairCount(n), phi); }, py::arg("pairs"),
        py::arg("phi_rel"));
  m.def("pdc_marginal_exact", &pdc_marginal_exact, py::arg("r"));
  m.def("pdc_number_exact", &pdc_number_exact, py::arg("r"));
  m.def("pdc_s_chd_exact", &pdc_s_chd_exact, py::arg("r"), py::arg("phi_rel"));
  m.def(
      "fock_s_ch", [](double r, std::array<double, 4> a, bool ps) { return fock_value(r, fock::ChStatistic{angles_from(a), ps}); },
      py::arg("r"), py::arg("angles") = kDefaultAngles,
      py::arg("postselect") = false);
  m.def(
      "fock_s_chsh",
      [](double r, std::array<double, 4> a, bool ps) { return fock_value(r, fock::ChshStatistic{angles_from(a), ps}); },
      py::arg("r"), py::arg("angles") = kDefaultAngles,
      py::arg("postselect") = true);
  m.def(
      "fock_s_chd", [](double r, int n, double phi) { return fock_value(r, fock::ChdStatistic{n, phi}); }, py::arg("r"),
      py::arg("pairs"), py::arg("phi_rel"));

  // runs
  m.def(
      "run_static_chd",
      [](int pairs, std::vector<double> phis, std::uint64_t n_samples, std::uint64_t seed, unsigned workers) {
        StaticChdConfig cfg;
        cfg.pairs = pairs;
        cfg.phis = std::move(phis);
        cfg.n_samples = n_samples;
        cfg.seed = seed;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_static_chd(cfg, {workers});
        }
        return result_dict(r, "static-chd.csv");
      },
      py::arg("pairs") = 1, py::arg("phis") = std::vector<double>{}, py::arg("n_samples") = 0, py::arg("seed") = 1,
      py::arg("workers") = 0);

  m.def(
      "run_dynamic",
      [](const std::string& statistic, bool postselect, const std::string& sweep, std::vector<double> taus,
         std::vector<double> phis, double tau, std::uint64_t n_traj, std::uint64_t seed, double dt, unsigned workers) {
        DynamicRunConfig cfg;
        if (statistic == "chd") {
          cfg.statistic = DynamicStatistic::Chd;
        } else if (statistic == "ch") {
          cfg.statistic = DynamicStatistic::Ch;
        } else if (statistic == "chsh") {
          cfg.statistic = DynamicStatistic::Chsh;
        } else {
          throw ConfigError("statistic must be chd, ch or chsh");
        }
        if (sweep != "tau" && sweep != "phi") throw ConfigError("sweep must be tau or phi");
        cfg.sweep = sweep == "tau" ? SweepKind::Tau : SweepKind::Phi;
        cfg.postselect = postselect;
        cfg.taus = std::move(taus);
        cfg.phis = std::move(phis);
        cfg.tau = tau;
        cfg.n_traj = n_traj;
        cfg.seed = seed;
        cfg.dt = dt;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_dynamic(cfg, {workers});
        }
        return result_dict(r, "dynamic-" + statistic + ".csv");
      },
      py::arg("statistic") = "ch", py::arg("postselect") = false, py::arg("sweep") = "tau",
      py::arg("taus") = std::vector<double>{}, py::arg("phis") = std::vector<double>{}, py::arg("tau") = 0.1,
      py::arg("n_traj") = 1ULL << 18, py::arg("seed") = 1, py::arg("dt") = 2e-4, py::arg("workers") = 0);

  m.def(
      "run_waveguide",
      [](std::uint64_t n_traj, double z_end, double dz, double kappa, double pump, bool freeze_pump, double k2,
         double gamma, double seed_amplitude, std::size_t n_t, double window, std::uint64_t seed, unsigned workers) {
        WaveguideConfig cfg;
        cfg.n_traj = n_traj;
        cfg.z_end = z_end;
        cfg.dz = dz;
        cfg.kappa = kappa;
        cfg.pump_amplitude = pump;
        cfg.freeze_pump = freeze_pump;
        cfg.k2 = k2;
        cfg.gamma_loss = gamma;
        cfg.seed_amplitude = seed_amplitude;
        cfg.n_t = n_t;
        cfg.window = window;
        cfg.seed = seed;
        cfg.record_z = {z_end};
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_waveguide(cfg, {workers});
        }
        return result_dict(r, "waveguide.csv");
      },
      py::arg("n_traj") = 1ULL << 16, py::arg("z_end") = 0.1, py::arg("dz") = 2e-4, py::arg("kappa") = 1.0,
      py::arg("pump") = 1.0, py::arg("freeze_pump") = true, py::arg("k2") = 0.0, py::arg("gamma") = 0.0,
      py::arg("seed_amplitude") = 0.0, py::arg("n_t") = 1, py::arg("window") = 1.0, py::arg("seed") = 1,
      py::arg("workers") = 0);

  m.def(
      "run_selftest",
      [](std::uint64_t n_samples, std::uint64_t n_traj, std::uint64_t seed, unsigned workers) {
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_selftest({n_samples, n_traj, seed}, {workers});
        }
        return result_dict(r, "selftest.csv");
      },
      py::arg("n_samples") = 1ULL << 16, py::arg("n_traj") = 1ULL << 14, py::arg("seed") = 1, py::arg("workers") = 0);
}
