#include "ppbell/phase_point.hpp"

#include <cmath>
#include <string>

#include "ppbell/error.hpp"

namespace ppbell {

namespace {

constexpr std::array<std::string_view, kModes> kModeNames{"A1", "A2", "B1", "B2"};

bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::size_t index(RotatedMode m) { return static_cast<std::size_t>(m); }

}  // namespace

cplx PhasePoint::total_quasi_number() const {
  cplx sum{};
  for (std::size_t i = 0; i < kModes; ++i) sum += alpha_plus[i] * alpha[i];
  return sum;
}

bool PhasePoint::is_finite() const {
  for (std::size_t i = 0; i < kModes; ++i) {
    if (!finite(alpha[i]) || !finite(alpha_plus[i])) return false;
  }
  return true;
}

std::string_view mode_name(Mode m) { return kModeNames[static_cast<std::size_t>(m)]; }

void require_finite(const PhasePoint& point, std::string_view context) {
  for (std::size_t i = 0; i < kModes; ++i) {
    for (int plus = 0; plus < 2; ++plus) {
      const cplx& z = plus ? point.alpha_plus[i] : point.alpha[i];
      for (int part = 0; part < 2; ++part) {
        const double v = part ? z.imag() : z.real();
        if (std::isfinite(v)) continue;
        std::string msg(context);
        msg += ": non-finite coordinate ";
        msg += plus ? "alpha_plus[" : "alpha[";
        msg += kModeNames[i];
        msg += part ? "].imag = " : "].real = ";
        msg += std::to_string(v);
        throw NumericalError(msg);
      }
    }
  }
}

ModeSet::ModeSet(std::initializer_list<RotatedMode> modes) {
  for (RotatedMode m : modes) bits_ |= static_cast<std::uint8_t>(1U << static_cast<unsigned>(m));
  if (bits_ == 0) throw ConfigError("ModeSet: subset of rotated modes must be non-empty");
}

ModeSet ModeSet::all() { return ModeSet(std::uint8_t{0b1111}); }
ModeSet ModeSet::side_a() { return ModeSet(std::uint8_t{0b0011}); }
ModeSet ModeSet::side_b() { return ModeSet(std::uint8_t{0b1100}); }

RotatedPoint rotate(const PhasePoint& point, double theta, double phi) {
  require_finite(point, "rotate");
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);

  RotatedPoint rp;
  rp.theta = theta;
  rp.phi = phi;
  auto turn = [&](const std::array<cplx, kModes>& in, std::array<cplx, kModes>& out) {
    out[0] = in[0] * ct + in[1] * st;
    out[1] = -in[0] * st + in[1] * ct;
    out[2] = in[2] * cp + in[3] * sp;
    out[3] = -in[2] * sp + in[3] * cp;
  };
  turn(point.alpha, rp.amp);
  turn(point.alpha_plus, rp.amp_plus);
  return rp;
}

cplx quasi_intensity_power(const RotatedPoint& rp, RotatedMode mode, int power) {
  if (power < 0 || power > kMaxQuasiPower) {
    throw ConfigError("quasi_intensity_power: power " + std::to_string(power) +
                      " outside [0, " + std::to_string(kMaxQuasiPower) + "]");
  }
  const cplx n = rp.quasi_intensity(mode).value;
  cplx result{1.0, 0.0};
  for (int k = 0; k < power; ++k) result *= n;
  return result;
}

cplx vacuum_projector_weight(const RotatedPoint& rp, const ModeSet& modes) {
  cplx exponent{};
  for (std::size_t i = 0; i < kModes; ++i) {
    const auto m = static_cast<RotatedMode>(i);
    if (modes.contains(m)) exponent += rp.quasi_intensity(m).value;
  }
  return std::exp(-exponent);
}

cplx single_photon_event_weight(const RotatedPoint& rp, Outcome pattern) {
  RotatedMode a = RotatedMode::GammaPlus;
  RotatedMode b = RotatedMode::DeltaPlus;
  switch (pattern) {
    case Outcome::PlusPlus: break;
    case Outcome::PlusMinus: b = RotatedMode::DeltaMinus; break;
    case Outcome::MinusPlus: a = RotatedMode::GammaMinus; break;
    case Outcome::MinusMinus:
      a = RotatedMode::GammaMinus;
      b = RotatedMode::DeltaMinus;
      break;
  }
  cplx exponent{};
  for (std::size_t i = 0; i < kModes; ++i) exponent += rp.amp_plus[i] * rp.amp[i];
  return rp.amp[index(a)] * rp.amp_plus[index(a)] * rp.amp[index(b)] * rp.amp_plus[index(b)] *
         std::exp(-exponent);
}

}  // namespace ppbell
