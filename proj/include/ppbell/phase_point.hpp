#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace ppbell {

using cplx = std::complex<double>;

/// Mode ordering used by every array and file in the project.
enum class Mode : std::size_t { A1 = 0, A2 = 1, B1 = 2, B2 = 3 };

inline constexpr std::size_t kModes = 4;

/// One positive-P sample: four mode amplitudes and four independent
/// conjugate-role amplitudes. The conjugate-role partner equals the complex
/// conjugate only on the hermitian diagonal.
struct PhasePoint {
  std::array<cplx, kModes> alpha{};
  std::array<cplx, kModes> alpha_plus{};

  cplx& amp(Mode m) { return alpha[static_cast<std::size_t>(m)]; }
  cplx& amp_plus(Mode m) { return alpha_plus[static_cast<std::size_t>(m)]; }
  const cplx& amp(Mode m) const { return alpha[static_cast<std::size_t>(m)]; }
  const cplx& amp_plus(Mode m) const { return alpha_plus[static_cast<std::size_t>(m)]; }

  /// Quasi photon number alpha_plus * alpha of one input mode.
  cplx quasi_number(Mode m) const { return amp_plus(m) * amp(m); }

  /// Sum of quasi photon numbers over all four modes.
  cplx total_quasi_number() const;

  bool is_finite() const;

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Throws NumericalError naming the first non-finite coordinate.
void require_finite(const PhasePoint& point, std::string_view context);

std::string_view mode_name(Mode m);

/// Polarizer output modes: gamma(+/-) at site A, delta(+/-) at site B.
enum class RotatedMode : std::size_t { GammaPlus = 0, GammaMinus = 1, DeltaPlus = 2, DeltaMinus = 3 };

/// Complex quasi-observable n = m_plus * m. Its ensemble mean is a normally
/// ordered photon number; single samples are unrestricted complex numbers.
struct QuasiNumber {
  cplx value{};
};

/// Amplitudes after rotation by polarizer settings theta (site A) and phi (site B).
struct RotatedPoint {
  std::array<cplx, kModes> amp{};
  std::array<cplx, kModes> amp_plus{};
  double theta = 0.0;
  double phi = 0.0;

  const cplx& mode(RotatedMode m) const { return amp[static_cast<std::size_t>(m)]; }
  const cplx& mode_plus(RotatedMode m) const { return amp_plus[static_cast<std::size_t>(m)]; }
  QuasiNumber quasi_intensity(RotatedMode m) const { return {mode_plus(m) * mode(m)}; }
};

/// Non-empty subset of rotated modes.
class ModeSet {
 public:
  ModeSet(std::initializer_list<RotatedMode> modes);
  static ModeSet all();
  static ModeSet side_a();
  static ModeSet side_b();

  bool contains(RotatedMode m) const { return (bits_ >> static_cast<unsigned>(m)) & 1U; }

 private:
  explicit ModeSet(std::uint8_t bits) : bits_(bits) {}
  std::uint8_t bits_ = 0;
};

/// Joint outcome at the two polarizers; the first sign is site A.
enum class Outcome { PlusPlus, PlusMinus, MinusPlus, MinusMinus };

/// Rotates the A modes by theta and the B modes by phi. The conjugate-role
/// partners are rotated with the same real coefficients.
RotatedPoint rotate(const PhasePoint& point, double theta, double phi);

inline constexpr int kMaxQuasiPower = 32;

/// (m_plus)^power * m^power by repeated multiplication.
cplx quasi_intensity_power(const RotatedPoint& rp, RotatedMode mode, int power);

/// exp(-sum of quasi intensities over `modes`): the vacuum-projector kernel.
cplx vacuum_projector_weight(const RotatedPoint& rp, const ModeSet& modes);

/// Single-photon coincidence kernel: the two selected quasi intensities times
/// the full four-mode vacuum kernel.
cplx single_photon_event_weight(const RotatedPoint& rp, Outcome pattern);

}  // namespace ppbell
