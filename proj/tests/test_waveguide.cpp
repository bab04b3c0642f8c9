#include <cmath>
#include <numbers>

#include "doctest.h"

#include "ppbell/error.hpp"
#include "ppbell/fft.hpp"
#include "ppbell/sde.hpp"
#include "ppbell/waveguide.hpp"

using namespace ppbell;

namespace {

constexpr double kPi = std::numbers::pi;

WaveguideConfig pulse_config() {
  WaveguideConfig c;
  c.kappa = 0.0;
  c.n_t = 512;
  c.window = 4.0;
  c.k2 = 0.2;
  c.dz = 1e-3;
  c.z_end = 0.1;
  c.record_z = {0.1};
  c.seed_amplitude = 1.0;
  c.seed_width = 0.2;
  return c;
}

// solution of [d/dz + i k''/2 d^2/dt^2] A = 0 for A(0, t) = exp(-t^2 / (2 T0^2))
cplx gaussian_pulse(double t, double z, double k2, double t0) {
  const cplx q = t0 * t0 - cplx{0.0, 1.0} * k2 * z;
  return t0 / std::sqrt(q) * std::exp(-t * t / (2.0 * q));
}

std::vector<double> power_spectrum(std::vector<cplx> v) {
  Fft(v.size()).forward(v);
  std::vector<double> p(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) p[k] = std::norm(v[k]);
  return p;
}

void run_steps(FieldState& s, const WaveguideConfig& c, std::uint64_t seed) {
  Engine rng = substream(seed, StreamDomain::Test, 0);
  BranchTracker br;
  for (std::uint64_t k = 0; k < c.total_steps(); ++k) {
    REQUIRE(split_step(s, c, draw_waveguide_noise(c, rng), br) == StepStatus::Ok);
  }
}

}  // namespace

TEST_SUITE("waveguide") {
  TEST_CASE("fft round trip and frequencies") {
    std::vector<cplx> v(16);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = {std::sin(0.3 * j), std::cos(1.7 * j)};
    const auto orig = v;
    const Fft f(16);
    f.forward(v);
    cplx dc{};
    for (auto x : orig) dc += x;
    CHECK(std::abs(v[0] - dc) < 1e-13);
    f.inverse(v);
    for (std::size_t j = 0; j < v.size(); ++j) CHECK(std::abs(v[j] - orig[j]) < 1e-14);
    CHECK(Fft::angular_frequency(1, 8, 0.5) == doctest::Approx(2 * kPi / 4.0));
    CHECK(Fft::angular_frequency(7, 8, 0.5) == doctest::Approx(-2 * kPi / 4.0));
  }

  TEST_CASE("config validation") {
    WaveguideConfig c;
    CHECK_NOTHROW(c.validate());
    c.n_t = 12;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = WaveguideConfig{};
    c.probe_index = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = WaveguideConfig{};
    c.gamma_loss = -1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = WaveguideConfig{};
    c.record_z = {0.2};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = WaveguideConfig{};
    c.freeze_pump = true;
    CHECK(c.is_reduction());
    c.k2 = 0.1;
    CHECK_FALSE(c.is_reduction());
  }

  TEST_CASE("no coupling, loss or dispersion leaves every field unchanged") {
    WaveguideConfig c = pulse_config();
    c.k2 = 0.0;
    c.seed_amplitude = {0.3, -0.2};
    c.pump_profile = PumpProfile::Gaussian;
    FieldState s = initial_state(c);
    const FieldState start = s;
    c.z_end = 0.01;
    run_steps(s, c, 1);
    for (std::size_t f = 0; f < kFields; ++f) {
      CHECK(s.field[f] == start.field[f]);
      CHECK(s.field_plus[f] == start.field_plus[f]);
    }
  }

  TEST_CASE("dispersive Gaussian pulse follows the analytic solution") {
    const WaveguideConfig c = pulse_config();
    FieldState s = initial_state(c);
    const auto p0 = power_spectrum(s.at(Field::A1));
    run_steps(s, c, 2);
    const double z = c.dz * static_cast<double>(c.total_steps());
    double worst = 0, worst_plus = 0;
    for (std::size_t j = 0; j < c.n_t; ++j) {
      const cplx a = gaussian_pulse(s.time(j), z, c.k2, c.seed_width);
      worst = std::max(worst, std::abs(s.at(Field::A1)[j] - a));
      worst_plus = std::max(worst_plus, std::abs(s.plus(Field::A1)[j] - std::conj(a)));
    }
    CHECK(worst < 1e-10);
    CHECK(worst_plus < 1e-10);
    const auto p1 = power_spectrum(s.at(Field::A1));
    double peak = 0, dev = 0;
    for (std::size_t k = 0; k < p0.size(); ++k) {
      peak = std::max(peak, p0[k]);
      dev = std::max(dev, std::abs(p1[k] - p0[k]));
    }
    CHECK(dev / peak < 1e-10);
  }

  TEST_CASE("pump dispersion applies only when the pump evolves") {
    WaveguideConfig c = pulse_config();
    c.k2 = 0.0;
    c.k2_p = 0.3;
    c.seed_amplitude = 0.0;
    c.pump_profile = PumpProfile::Gaussian;
    c.pump_width = 0.25;
    c.z_end = 0.05;
    c.freeze_pump = true;
    FieldState frozen = initial_state(c);
    const auto start = frozen.at(Field::Pump);
    run_steps(frozen, c, 3);
    for (std::size_t j = 0; j < c.n_t; ++j) CHECK(std::abs(frozen.at(Field::Pump)[j] - start[j]) < 1e-15);

    c.freeze_pump = false;
    FieldState moving = initial_state(c);
    run_steps(moving, c, 3);
    double worst = 0;
    for (std::size_t j = 0; j < c.n_t; ++j) {
      worst = std::max(worst, std::abs(moving.at(Field::Pump)[j] - gaussian_pulse(moving.time(j), 0.05, c.k2_p, 0.25)));
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("linear loss decays the seeded amplitude exponentially") {
    WaveguideConfig c;
    c.kappa = 0.0;
    c.gamma_loss = 2.0;
    c.seed_amplitude = {0.8, 0.3};
    c.z_end = 0.1;
    FieldState s = initial_state(c);
    run_steps(s, c, 4);
    const cplx expect = c.seed_amplitude * std::exp(-2.0 * 0.1);
    CHECK(std::abs(s.at(Field::A1)[0] - expect) < 1e-12 * std::abs(expect));
    CHECK(std::abs(s.plus(Field::A1)[0] - std::conj(expect)) < 1e-12 * std::abs(expect));
  }

  TEST_CASE("single frozen point repeats the four-mode step") {
    WaveguideConfig wc;
    wc.freeze_pump = true;
    wc.kappa = 0.8;
    wc.pump_amplitude = 1.25;
    SdeConfig sc;
    sc.kappa_e = wc.reduction_coupling().real();
    sc.dt = wc.dz;
    Engine rng = substream(8, StreamDomain::Test, 0);
    PhasePoint x;
    LocalState w{};
    w[0] = wc.pump_amplitude;
    w[kFields] = std::conj(wc.pump_amplitude);
    cplx root{}, root_plus{};
    for (int k = 0; k < 300; ++k) {
      const NoiseDraw nd = draw_noise(sc.dt, rng);
      x = step(x, sc, nd);
      REQUIRE(local_step(w, wc, {nd.dW1, nd.dW2, nd.dW1p, nd.dW2p}, root, root_plus));
    }
    for (std::size_t m = 0; m < kModes; ++m) {
      CHECK(std::abs(w[1 + m] - x.alpha[m]) < 1e-12);
      CHECK(std::abs(w[kFields + 1 + m] - x.alpha_plus[m]) < 1e-12);
    }
    const PhasePoint out = [&] {
      FieldState s(1, 1.0);
      for (std::size_t f = 0; f < kFields; ++f) {
        s.field[f][0] = w[f];
        s.field_plus[f][0] = w[kFields + f];
      }
      return output_point(s, 0);
    }();
    CHECK(out.alpha == std::array<cplx, 4>{w[1], w[2], w[3], w[4]});
  }

  TEST_CASE("opposite square-root branch is reported") {
    WaveguideConfig c;
    c.pump_amplitude = -1.0;
    LocalState w{};
    w[0] = -1.0;
    w[kFields] = -1.0;
    cplx root = -std::sqrt(cplx{-1.0, 0.0});
    cplx root_plus{};
    CHECK_FALSE(local_step(w, c, {}, root, root_plus));
    CHECK(local_step(w, c, {}, root, root_plus));
  }

  TEST_CASE("reduction ensemble reproduces the squeezed-state number") {
    WaveguideConfig c;
    c.freeze_pump = true;
    c.n_traj = 1 << 14;
    c.z_end = 0.1;
    c.record_z = {0.1};
    const WaveguideEnsemble e = propagate(c, 2);
    CHECK(e.failures.failed == 0);
    REQUIRE(e.points.size() == 1);
    double s = 0, s2 = 0;
    for (const auto& p : e.points[0]) {
      const double v = p.quasi_number(Mode::A1).real();
      s += v;
      s2 += v * v;
    }
    const double n = static_cast<double>(e.points[0].size());
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(mean - std::sinh(0.1) * std::sinh(0.1)) < 3 * se);
  }

  TEST_CASE("propagation is independent of the worker count") {
    WaveguideConfig c = pulse_config();
    c.kappa = 0.5;
    c.n_t = 8;
    c.window = 1.0;
    c.n_traj = 40;
    c.z_end = 0.01;
    c.record_z = {0.005, 0.01};
    const auto a = propagate(c, 1);
    const auto b = propagate(c, 3);
    CHECK(a.points == b.points);
  }
}
