#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "ppbell/estimators.hpp"
#include "ppbell/phase_point.hpp"
#include "ppbell/static_sampler.hpp"

namespace ppbell {

/// Squeezing r = kappa*E*t of each polarization block, x = tanh r.
struct SqueezeParams {
  double r = 0.0;
  double x = 0.0;

  explicit SqueezeParams(double r);
  /// Normalized pair amplitude x^n sqrt(1 - x^2).
  double c(int n) const;
};

/// cos^{2N}(phi): the normalized N-photon correlation of the Bell state.
double g_exact(PairCount n, double phi_rel);
/// (3 g(phi) - g(3 phi)) / 2 for the Bell state.
double s_chd_exact(PairCount n, double phi_rel);

// Closed forms for the down-conversion state at squeezing r.

/// Exclusive one-photon marginal x^2 (1 - x^2)^2, independent of angle.
double pdc_marginal_exact(double r);
/// Exclusive single-pair coincidence; cos^2 or sin^2 of theta - phi times the marginal.
double pdc_joint_exact(double r, double theta, double phi, Outcome pattern);
/// Probability of the joint vacuum, (1 - x^2)^2.
double pdc_vacuum_exact(double r);
/// E(theta, phi) with or without dividing by 1 - P(vacuum); nullopt at r = 0 with post-selection.
std::optional<double> pdc_correlation_exact(double r, double theta, double phi, bool postselect);
/// g_1^1(phi) = <:n_g+ n_d+:>(phi) / <:n_g+ (n_b1 + n_b2):> at theta = 0.
double pdc_g_exact(double r, double phi_rel);
double pdc_s_chd_exact(double r, double phi_rel);
/// <a1^+ a1> = sinh^2 r and <a1 b1> = sinh r cosh r.
double pdc_number_exact(double r);
double pdc_pair_coherence_exact(double r);

inline constexpr int kDefaultFockCutoff = 6;
inline constexpr int kMinFockCutoff = 3;
inline constexpr double kFockTailTolerance = 1e-8;
inline constexpr double kMaxFockSqueezing = 0.5;

/// Real amplitudes on four-mode number states |n_A1, n_A2, n_B1, n_B2>, each
/// occupation in [0, dim). After rotation the indices refer to
/// (gamma+, gamma-, delta+, delta-).
class FockState4 {
 public:
  explicit FockState4(int dim);

  int dim() const { return dim_; }
  double& at(int a1, int a2, int b1, int b2) { return amp_[index(a1, a2, b1, b2)]; }
  double at(int a1, int a2, int b1, int b2) const { return amp_[index(a1, a2, b1, b2)]; }
  double norm_sq() const;
  /// Probability outside the truncated space (zero for exact states).
  double truncation_tail() const { return tail_; }
  void set_truncation_tail(double t) { tail_ = t; }

 private:
  std::size_t index(int a1, int a2, int b1, int b2) const;
  int dim_;
  double tail_ = 0.0;
  std::vector<double> amp_;
};

/// Product of two two-mode squeezed vacua truncated at n_max pairs each.
/// Throws ConfigError outside r in [0, 0.5] or n_max < 3, NumericalError when
/// the discarded probability exceeds kFockTailTolerance.
FockState4 fock_pdc_state(double r, int n_max = kDefaultFockCutoff);
/// Smallest cutoff whose discarded probability is within kFockTailTolerance.
int fock_cutoff_for(double r);
/// Normalized (a1^+ b1^+ + a2^+ b2^+)^N |0>.
FockState4 fock_bell_state(PairCount n);

/// Transforms to the polarizer output basis at settings theta and phi.
FockState4 fock_rotate(const FockState4& state, double theta, double phi);

namespace fock {
struct Joint {
  double theta;
  double phi;
  Outcome pattern;
};
struct Marginal {
  Side side;
  double angle;
};
struct Vacuum {};
/// Exactly `counts` photons in the observed rotated modes, the rest traced out.
struct Counts {
  double theta;
  double phi;
  CountPattern counts;
  std::array<bool, kModes> observed{true, true, true, true};
};
struct Correlation {
  double theta;
  double phi;
  bool postselect;
};
/// <:n_g+^I X^J:> at theta = 0, with X = n_d+ at phi or the total B number when `total_b`.
struct IntensityMoment {
  int i;
  int j;
  double phi;
  bool total_b;
};
struct ChStatistic {
  AngleSet angles;
  bool postselect;
};
struct ChshStatistic {
  AngleSet angles;
  bool postselect;
};
struct ChdStatistic {
  int pairs;
  double phi_rel;
};
}  // namespace fock

using FockObservable = std::variant<fock::Joint, fock::Marginal, fock::Vacuum, fock::Counts, fock::Correlation,
                                    fock::IntensityMoment, fock::ChStatistic, fock::ChshStatistic,
                                    fock::ChdStatistic>;

/// Exact expectation value; nullopt when a normalization vanishes (degenerate).
std::optional<double> fock_expect(const FockState4& state, const FockObservable& obs);

}  // namespace ppbell
