#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ppbell/phase_point.hpp"
#include "ppbell/random.hpp"

namespace ppbell {

/// The five stochastic fields; each also has a conjugate-role partner.
enum class Field : std::size_t { Pump = 0, A1 = 1, A2 = 2, B1 = 3, B2 = 4 };
inline constexpr std::size_t kFields = 5;

std::string_view field_name(Field f);

/// All ten fields on a moving-frame time grid of n_t points spanning `window`.
struct FieldState {
  std::size_t n_t = 1;
  double window = 1.0;
  double z = 0.0;
  std::array<std::vector<cplx>, kFields> field;
  std::array<std::vector<cplx>, kFields> field_plus;

  FieldState(std::size_t n_t = 1, double window = 1.0);

  std::vector<cplx>& at(Field f) { return field[static_cast<std::size_t>(f)]; }
  std::vector<cplx>& plus(Field f) { return field_plus[static_cast<std::size_t>(f)]; }
  const std::vector<cplx>& at(Field f) const { return field[static_cast<std::size_t>(f)]; }
  const std::vector<cplx>& plus(Field f) const { return field_plus[static_cast<std::size_t>(f)]; }

  double dt() const { return window / static_cast<double>(n_t); }
  /// Grid time of point j, centred on the window.
  double time(std::size_t j) const;
  bool is_finite() const;
};

enum class PumpProfile { Constant, Gaussian };

struct WaveguideConfig {
  double k2 = 0.0;          ///< signal/idler group velocity dispersion k''
  double k2_p = 0.0;        ///< pump dispersion
  double gamma_loss = 0.0;  ///< amplitude loss per length, down-converted fields
  double gamma_p = 0.0;     ///< amplitude loss per length, pump
  cplx kappa{1.0, 0.0};     ///< nonlinear coupling
  double z_end = 0.1;
  double dz = 2e-4;
  std::size_t n_t = 1;  ///< grid points, a power of two
  double window = 1.0;  ///< grid span in t_v
  std::uint64_t seed = 1;
  std::uint64_t n_traj = 1ULL << 16;

  PumpProfile pump_profile = PumpProfile::Constant;
  cplx pump_amplitude{1.0, 0.0};
  double pump_width = 0.1;  ///< Gaussian T0: exp(-t^2 / (2 T0^2))
  bool freeze_pump = false;

  /// Coherent amplitude injected into Phi_1^a (and its partner); zero width means uniform.
  cplx seed_amplitude{0.0, 0.0};
  double seed_width = 0.0;

  std::size_t probe_index = 0;  ///< grid point handed to the estimators
  std::vector<double> record_z{0.1};

  void validate() const;
  std::vector<std::string> warnings() const;
  std::uint64_t total_steps() const;
  std::vector<std::uint64_t> record_steps() const;

  /// One grid point, frozen constant pump, no dispersion, loss or seed: the
  /// four-mode equations with z as time.
  bool is_reduction() const;
  /// kappa^* Psi of the reduction configuration (the four-mode kappa E).
  cplx reduction_coupling() const { return std::conj(kappa) * pump_amplitude; }
};

/// Vacuum down-converted fields, coherent pump (and optional seed) on the grid.
FieldState initial_state(const WaveguideConfig& cfg);

/// Noise increments per grid point: <dZ dZ*> = dz / dt_grid, one per spatial index i.
struct WaveguideNoise {
  std::array<std::vector<cplx>, 2> dZ;
  std::array<std::vector<cplx>, 2> dZ_plus;
};

WaveguideNoise draw_waveguide_noise(const WaveguideConfig& cfg, Engine& rng);

/// Square roots of the noise coefficients from the previous step, for branch tracking.
struct BranchTracker {
  std::vector<cplx> root;
  std::vector<cplx> root_plus;
};

enum class StepStatus { Ok, BranchJump, NonFinite };

/// Exact linear propagation over distance h in the Fourier domain.
class LinearPropagator {
 public:
  LinearPropagator(const WaveguideConfig& cfg, double h);
  void apply(FieldState& s) const;

 private:
  std::size_t n_t_;
  bool spectral_;
  bool pump_fixed_;    ///< frozen or free of dispersion and loss
  bool signal_fixed_;
  std::vector<cplx> mult_, mult_plus_, mult_p_, mult_p_plus_;
};

/// Values of all ten fields at one grid point: [0..4] fields, [5..9] partners.
using LocalState = std::array<cplx, 2 * kFields>;

/// Midpoint step of the local coupling at one grid point. `noise` holds
/// (dZ1, dZ2, dZ1+, dZ2+). Returns false on a square-root branch jump.
bool local_step(LocalState& x, const WaveguideConfig& cfg, const std::array<cplx, 4>& noise, cplx& root,
                cplx& root_plus);

/// Linear half step, local midpoint step, linear half step.
StepStatus split_step(FieldState& state, const WaveguideConfig& cfg, const WaveguideNoise& noise,
                      BranchTracker& branches);

/// Polarizing-beam-splitter relabeling at the output plane:
/// (Phi_1^a, Phi_2^a, Phi_1^b, Phi_2^b) become the site modes (A1, A2, B1, B2).
PhasePoint output_point(const FieldState& state, std::size_t index);

struct WaveguideChunk {
  std::uint64_t index = 0;
  std::uint64_t first_traj = 0;
  std::vector<std::vector<PhasePoint>> records;  ///< [record][surviving trajectory]
  std::uint64_t failed = 0;
  std::uint64_t branch_jumps = 0;
};

WaveguideChunk propagate_chunk(const WaveguideConfig& cfg, std::uint64_t chunk_index, std::size_t chunk_size);

using WaveguideSink = std::function<void(const WaveguideChunk& chunk, unsigned worker)>;

struct FailureCount {
  std::uint64_t failed = 0;
  std::uint64_t branch_jumps = 0;
};

FailureCount propagate_chunks(const WaveguideConfig& cfg, const WaveguideSink& sink, unsigned workers = 0,
                              std::size_t chunk_size = 1024);

struct WaveguideEnsemble {
  std::vector<double> z;
  std::vector<std::vector<PhasePoint>> points;
  FailureCount failures;
};

WaveguideEnsemble propagate(const WaveguideConfig& cfg, unsigned workers = 0);

}  // namespace ppbell
