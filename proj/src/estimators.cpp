#include "ppbell/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "ppbell/error.hpp"

namespace ppbell {

namespace {

using RM = RotatedMode;

void require_samples(std::span<const PhasePoint> samples) {
  if (samples.empty()) throw EstimatorError("empty sample set");
}

void require_stable(const Estimate& den, std::string_view what) {
  if (!(den.value.real() > kDenominatorSigmas * den.std_error)) {
    std::ostringstream os;
    os << what << " denominator " << den.value.real() << " is not above " << kDenominatorSigmas
       << " standard errors (" << den.std_error << ")";
    throw UnstableDenominator(os.str());
  }
}

template <class Fn>
MomentAccumulator accumulate(std::span<const PhasePoint> samples, std::size_t channels, std::size_t batch_size,
                             Fn&& fn) {
  require_samples(samples);
  MomentAccumulator acc(channels, batch_size);
  std::vector<cplx> row(channels);
  for (const auto& p : samples) {
    fn(p, row);
    acc.push(row);
  }
  acc.flush();
  return acc;
}

cplx b_total_number(const PhasePoint& p) { return p.quasi_number(Mode::B1) + p.quasi_number(Mode::B2); }

cplx int_power(cplx z, int n) {
  cplx out{1.0, 0.0};
  for (int k = 0; k < n; ++k) out *= z;
  return out;
}

}  // namespace

std::string_view statistic_name(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::Chd: return "S_CHD";
    case StatisticKind::Ch: return "S_CH";
    case StatisticKind::Chsh: return "S_CHSH";
    case StatisticKind::ChshPostselected: return "S_CHSH_postselected";
  }
  return "?";
}

cplx joint_weight(const PhasePoint& p, double theta, double phi, Outcome pattern) {
  return single_photon_event_weight(rotate(p, theta, phi), pattern);
}

cplx marginal_weight(const PhasePoint& p, Side side, double angle) {
  const RotatedPoint rp = rotate(p, angle, angle);
  if (side == Side::A) {
    return vacuum_projector_weight(rp, ModeSet::side_a()) * rp.quasi_intensity(RM::GammaPlus).value;
  }
  return vacuum_projector_weight(rp, ModeSet::side_b()) * rp.quasi_intensity(RM::DeltaPlus).value;
}

cplx correlation_weight(const PhasePoint& p, double theta, double phi) {
  const RotatedPoint rp = rotate(p, theta, phi);
  const cplx vac = vacuum_projector_weight(rp, ModeSet::all());
  const cplx gp = rp.quasi_intensity(RM::GammaPlus).value;
  const cplx gm = rp.quasi_intensity(RM::GammaMinus).value;
  const cplx dp = rp.quasi_intensity(RM::DeltaPlus).value;
  const cplx dm = rp.quasi_intensity(RM::DeltaMinus).value;
  return vac * (gp - gm) * (dp - dm);
}

cplx postselection_weight(const PhasePoint& p) { return 1.0 - std::exp(-p.total_quasi_number()); }

cplx photon_count_weight(const PhasePoint& p, double theta, double phi, const CountPattern& counts,
                         const ModeSet& observed) {
  const RotatedPoint rp = rotate(p, theta, phi);
  cplx w = vacuum_projector_weight(rp, observed);
  for (std::size_t m = 0; m < kModes; ++m) {
    const auto mode = static_cast<RM>(m);
    if (!observed.contains(mode)) continue;
    if (counts[m] < 0) throw ConfigError("photon counts must be >= 0");
    w *= quasi_intensity_power(rp, mode, counts[m]) / std::tgamma(counts[m] + 1.0);
  }
  return w;
}

StatisticProbe StatisticProbe::chd(PairCount n, double phi_rel, double lhv_bound) {
  StatisticProbe pr;
  pr.kind_ = StatisticKind::Chd;
  pr.phi_rel_ = phi_rel;
  pr.angles_ = AngleSet::sequential(phi_rel);
  pr.pairs_ = n.value();
  pr.lhv_bound_ = lhv_bound;
  return pr;
}

StatisticProbe StatisticProbe::ch(const AngleSet& angles, bool postselect) {
  StatisticProbe pr;
  pr.kind_ = StatisticKind::Ch;
  pr.angles_ = angles;
  pr.phi_rel_ = angles.phi - angles.theta;
  pr.postselect_ = postselect;
  return pr;
}

StatisticProbe StatisticProbe::chsh(const AngleSet& angles, bool postselect) {
  StatisticProbe pr;
  pr.kind_ = postselect ? StatisticKind::ChshPostselected : StatisticKind::Chsh;
  pr.angles_ = angles;
  pr.phi_rel_ = angles.phi - angles.theta;
  pr.postselect_ = postselect;
  return pr;
}

StatisticSample StatisticProbe::operator()(const PhasePoint& p) const {
  StatisticSample s;
  s.postselection = postselect_ ? postselection_weight(p) : cplx{1.0, 0.0};
  const AngleSet& a = angles_;
  switch (kind_) {
    case StatisticKind::Chd: {
      const int n = pairs_;
      const cplx ia = int_power(p.quasi_number(Mode::A1), n);
      const RotatedPoint r1 = rotate(p, 0.0, phi_rel_);
      const RotatedPoint r3 = rotate(p, 0.0, 3.0 * phi_rel_);
      const cplx g1 = ia * quasi_intensity_power(r1, RM::DeltaPlus, n);
      const cplx g3 = ia * quasi_intensity_power(r3, RM::DeltaPlus, n);
      s.numerator = 0.5 * (3.0 * g1 - g3);
      s.denominator = ia * int_power(b_total_number(p), n);
      break;
    }
    case StatisticKind::Ch: {
      s.numerator = joint_weight(p, a.theta, a.phi, Outcome::PlusPlus) -
                    joint_weight(p, a.theta, a.phi_p, Outcome::PlusPlus) +
                    joint_weight(p, a.theta_p, a.phi, Outcome::PlusPlus) +
                    joint_weight(p, a.theta_p, a.phi_p, Outcome::PlusPlus);
      s.denominator = marginal_weight(p, Side::A, a.theta_p) + marginal_weight(p, Side::B, a.phi);
      break;
    }
    case StatisticKind::Chsh:
    case StatisticKind::ChshPostselected: {
      s.numerator = 0.5 * (correlation_weight(p, a.theta, a.phi) - correlation_weight(p, a.theta, a.phi_p) +
                           correlation_weight(p, a.theta_p, a.phi) + correlation_weight(p, a.theta_p, a.phi_p));
      s.denominator = {1.0, 0.0};
      break;
    }
  }
  return s;
}

BellStatistic StatisticProbe::finish(const MomentAccumulator& acc, std::size_t c) const {
  BellStatistic out;
  out.kind = kind_;
  out.angles = angles_;
  out.pairs = pairs_;
  out.lhv_bound = lhv_bound_;

  Estimate e;
  if (kind_ == StatisticKind::Chsh || kind_ == StatisticKind::ChshPostselected) {
    if (postselect_) {
      require_stable(acc.estimate(c + 2), statistic_name(kind_));
      e = acc.ratio(c, c + 2);
    } else {
      e = acc.estimate(c);
    }
  } else {
    require_stable(acc.estimate(c + 1), statistic_name(kind_));
    e = acc.ratio(c, c + 1);
    if (postselect_) {
      // both sides normalized to the post-selected ensemble; the norm cancels
      require_stable(acc.estimate(c + 2), "post-selection");
      const double d = acc.mean(c + 2).real();
      e.value = {(acc.mean(c).real() / d) / (acc.mean(c + 1).real() / d), e.value.imag()};
    }
  }
  out.value = e.value.real();
  out.std_error = e.std_error;
  out.imag_residual = e.value.imag();
  out.imag_std_error = e.imag_std_error;
  out.n_samples = e.n;
  return out;
}

ProbeSet::ProbeSet(std::vector<StatisticProbe> probes)
    : probes_(std::move(probes)),
      acc_(std::max<std::size_t>(1, probes_.size()) * StatisticProbe::kChannels) {
  if (probes_.empty()) throw ConfigError("probe set must not be empty");
}

void ProbeSet::add_batch(std::uint64_t batch_index, std::span<const PhasePoint> samples) {
  if (samples.empty()) return;
  std::vector<cplx> sums(acc_.channels());
  for (const auto& p : samples) {
    for (std::size_t i = 0; i < probes_.size(); ++i) {
      const StatisticSample s = probes_[i](p);
      sums[3 * i] += s.numerator;
      sums[3 * i + 1] += s.denominator;
      sums[3 * i + 2] += s.postselection;
    }
  }
  acc_.add_batch(batch_index, samples.size(), sums);
}

std::vector<BellStatistic> ProbeSet::results() const {
  std::vector<BellStatistic> out;
  out.reserve(probes_.size());
  for (std::size_t i = 0; i < probes_.size(); ++i) out.push_back(result(i));
  return out;
}

std::pair<Estimate, Estimate> correlator_g(std::span<const PhasePoint> samples, int i, int j, double phi_rel,
                                           std::size_t batch_size) {
  if (i < 1 || j < 1 || i > kMaxQuasiPower || j > kMaxQuasiPower) {
    throw ConfigError("correlator_g: powers must lie in [1, " + std::to_string(kMaxQuasiPower) + "]");
  }
  auto acc = accumulate(samples, 2, batch_size, [&](const PhasePoint& p, std::vector<cplx>& row) {
    const cplx ia = int_power(p.quasi_number(Mode::A1), i);
    row[0] = ia * quasi_intensity_power(rotate(p, 0.0, phi_rel), RM::DeltaPlus, j);
    row[1] = ia * int_power(b_total_number(p), j);
  });
  return {acc.estimate(0), acc.estimate(1)};
}

namespace {

BellStatistic run_probe(std::span<const PhasePoint> samples, const StatisticProbe& probe, std::size_t batch_size) {
  auto acc = accumulate(samples, StatisticProbe::kChannels, batch_size,
                        [&](const PhasePoint& p, std::vector<cplx>& row) {
                          const StatisticSample s = probe(p);
                          row[0] = s.numerator;
                          row[1] = s.denominator;
                          row[2] = s.postselection;
                        });
  return probe.finish(acc);
}

}  // namespace

BellStatistic s_chd(std::span<const PhasePoint> samples, PairCount n, double phi_rel, double lhv_bound,
                    std::size_t batch_size) {
  return run_probe(samples, StatisticProbe::chd(n, phi_rel, lhv_bound), batch_size);
}

Estimate prob_joint(std::span<const PhasePoint> samples, double theta, double phi, Outcome pattern,
                    std::size_t batch_size) {
  auto acc = accumulate(samples, 1, batch_size, [&](const PhasePoint& p, std::vector<cplx>& row) {
    row[0] = joint_weight(p, theta, phi, pattern);
  });
  return acc.estimate(0);
}

Estimate prob_marginal(std::span<const PhasePoint> samples, Side side, double angle, std::size_t batch_size) {
  auto acc = accumulate(samples, 1, batch_size, [&](const PhasePoint& p, std::vector<cplx>& row) {
    row[0] = marginal_weight(p, side, angle);
  });
  return acc.estimate(0);
}

BellStatistic s_ch(std::span<const PhasePoint> samples, const AngleSet& angles, bool postselect,
                   std::size_t batch_size) {
  return run_probe(samples, StatisticProbe::ch(angles, postselect), batch_size);
}

Estimate correlation_E(std::span<const PhasePoint> samples, double theta, double phi, bool postselect,
                       std::size_t batch_size) {
  auto acc = accumulate(samples, 2, batch_size, [&](const PhasePoint& p, std::vector<cplx>& row) {
    row[0] = correlation_weight(p, theta, phi);
    row[1] = postselect ? postselection_weight(p) : cplx{1.0, 0.0};
  });
  if (!postselect) return acc.estimate(0);
  require_stable(acc.estimate(1), "post-selection");
  return acc.ratio(0, 1);
}

BellStatistic s_chsh(std::span<const PhasePoint> samples, const AngleSet& angles, bool postselect,
                     std::size_t batch_size) {
  return run_probe(samples, StatisticProbe::chsh(angles, postselect), batch_size);
}

}  // namespace ppbell
