#include "ppbell/oracle.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "ppbell/error.hpp"

namespace ppbell {

namespace {

double falling(int n, int k) {
  double out = 1.0;
  for (int m = 0; m < k; ++m) out *= static_cast<double>(n - m);
  return out;
}

double binom(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

double ipow(double b, int e) {
  double out = 1.0;
  for (int k = 0; k < e; ++k) out *= b;
  return out;
}

struct Term {
  int plus;
  double coef;
};

// Output-basis expansion of |n1, n2> under a1^+ = c cp^+ - s cm^+, a2^+ = s cp^+ + c cm^+.
std::vector<Term> side_terms(int n1, int n2, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  std::vector<double> acc(static_cast<std::size_t>(n1 + n2 + 1), 0.0);
  for (int i = 0; i <= n1; ++i) {
    for (int j = 0; j <= n2; ++j) {
      acc[static_cast<std::size_t>(i + j)] +=
          binom(n1, i) * binom(n2, j) * ipow(c, i) * ipow(-s, n1 - i) * ipow(s, j) * ipow(c, n2 - j);
    }
  }
  std::vector<Term> out;
  const double lf = std::lgamma(n1 + 1.0) + std::lgamma(n2 + 1.0);
  for (int kp = 0; kp <= n1 + n2; ++kp) {
    const double a = acc[static_cast<std::size_t>(kp)];
    if (a == 0.0) continue;
    const int km = n1 + n2 - kp;
    out.push_back({kp, a * std::exp(0.5 * (std::lgamma(kp + 1.0) + std::lgamma(km + 1.0) - lf))});
  }
  return out;
}

double prob(const FockState4& s, int a, int b, int c, int d) {
  if (a >= s.dim() || b >= s.dim() || c >= s.dim() || d >= s.dim()) return 0.0;
  const double v = s.at(a, b, c, d);
  return v * v;
}

std::pair<int, int> pattern_indices(Outcome pattern) {
  switch (pattern) {
    case Outcome::PlusPlus: return {0, 0};
    case Outcome::PlusMinus: return {0, 1};
    case Outcome::MinusPlus: return {1, 0};
    case Outcome::MinusMinus: return {1, 1};
  }
  return {0, 0};
}

double joint(const FockState4& s, double theta, double phi, Outcome pattern) {
  const FockState4 r = fock_rotate(s, theta, phi);
  const auto [a, b] = pattern_indices(pattern);
  return prob(r, a == 0 ? 1 : 0, a == 1 ? 1 : 0, b == 0 ? 1 : 0, b == 1 ? 1 : 0);
}

double marginal(const FockState4& s, Side side, double angle) {
  const FockState4 r = fock_rotate(s, angle, angle);
  double p = 0.0;
  for (int u = 0; u < r.dim(); ++u) {
    for (int v = 0; v < r.dim(); ++v) p += side == Side::A ? prob(r, 1, 0, u, v) : prob(r, u, v, 1, 0);
  }
  return p;
}

double vacuum(const FockState4& s) { return prob(s, 0, 0, 0, 0); }

double correlation_raw(const FockState4& s, double theta, double phi) {
  const FockState4 r = fock_rotate(s, theta, phi);
  return prob(r, 1, 0, 1, 0) + prob(r, 0, 1, 0, 1) - prob(r, 1, 0, 0, 1) - prob(r, 0, 1, 1, 0);
}

std::optional<double> postselection_norm(const FockState4& s) {
  const double d = 1.0 - vacuum(s);
  if (!(d > 1e-300)) return std::nullopt;
  return d;
}

double intensity_moment(const FockState4& s, int i, int j, double phi, bool total_b) {
  const FockState4 r = fock_rotate(s, 0.0, phi);
  double m = 0.0;
  const int d = r.dim();
  for (int a = i; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int c = 0; c < d; ++c) {
        for (int e = 0; e < d; ++e) {
          const double p = prob(r, a, b, c, e);
          if (p == 0.0) continue;
          m += p * falling(a, i) * falling(total_b ? c + e : c, j);
        }
      }
    }
  }
  return m;
}

std::optional<double> evaluate(const FockState4& s, const fock::Joint& o) { return joint(s, o.theta, o.phi, o.pattern); }
std::optional<double> evaluate(const FockState4& s, const fock::Marginal& o) { return marginal(s, o.side, o.angle); }
std::optional<double> evaluate(const FockState4& s, const fock::Vacuum&) { return vacuum(s); }

std::optional<double> evaluate(const FockState4& s, const fock::Counts& o) {
  const FockState4 r = fock_rotate(s, o.theta, o.phi);
  double p = 0.0;
  const int d = r.dim();
  std::array<int, kModes> k{};
  for (k[0] = 0; k[0] < d; ++k[0]) {
    for (k[1] = 0; k[1] < d; ++k[1]) {
      for (k[2] = 0; k[2] < d; ++k[2]) {
        for (k[3] = 0; k[3] < d; ++k[3]) {
          bool match = true;
          for (std::size_t m = 0; m < kModes; ++m) match = match && (!o.observed[m] || k[m] == o.counts[m]);
          if (match) p += prob(r, k[0], k[1], k[2], k[3]);
        }
      }
    }
  }
  return p;
}

std::optional<double> evaluate(const FockState4& s, const fock::Correlation& o) {
  const double e = correlation_raw(s, o.theta, o.phi);
  if (!o.postselect) return e;
  const auto d = postselection_norm(s);
  if (!d) return std::nullopt;
  return e / *d;
}

std::optional<double> evaluate(const FockState4& s, const fock::IntensityMoment& o) {
  return intensity_moment(s, o.i, o.j, o.phi, o.total_b);
}

std::optional<double> evaluate(const FockState4& s, const fock::ChStatistic& o) {
  const AngleSet& a = o.angles;
  const double num = joint(s, a.theta, a.phi, Outcome::PlusPlus) - joint(s, a.theta, a.phi_p, Outcome::PlusPlus) +
                     joint(s, a.theta_p, a.phi, Outcome::PlusPlus) + joint(s, a.theta_p, a.phi_p, Outcome::PlusPlus);
  const double den = marginal(s, Side::A, a.theta_p) + marginal(s, Side::B, a.phi);
  if (o.postselect) {
    const auto d = postselection_norm(s);
    if (!d) return std::nullopt;
    if (!(den / *d > 0.0)) return std::nullopt;
    return (num / *d) / (den / *d);
  }
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

std::optional<double> evaluate(const FockState4& s, const fock::ChshStatistic& o) {
  const AngleSet& a = o.angles;
  const double sum = correlation_raw(s, a.theta, a.phi) - correlation_raw(s, a.theta, a.phi_p) +
                     correlation_raw(s, a.theta_p, a.phi) + correlation_raw(s, a.theta_p, a.phi_p);
  if (!o.postselect) return 0.5 * sum;
  const auto d = postselection_norm(s);
  if (!d) return std::nullopt;
  return 0.5 * sum / *d;
}

std::optional<double> evaluate(const FockState4& s, const fock::ChdStatistic& o) {
  const double ginf = intensity_moment(s, o.pairs, o.pairs, 0.0, true);
  if (!(ginf > 0.0)) return std::nullopt;
  const double g1 = intensity_moment(s, o.pairs, o.pairs, o.phi_rel, false);
  const double g3 = intensity_moment(s, o.pairs, o.pairs, 3.0 * o.phi_rel, false);
  return 0.5 * (3.0 * g1 - g3) / ginf;
}

}  // namespace

SqueezeParams::SqueezeParams(double r_) : r(r_), x(std::tanh(r_)) {
  if (!(r_ >= 0.0) || !std::isfinite(r_)) throw ConfigError("squeezing r must be finite and >= 0");
}

double SqueezeParams::c(int n) const { return ipow(x, n) * std::sqrt(1.0 - x * x); }

double g_exact(PairCount n, double phi_rel) { return ipow(std::cos(phi_rel), 2 * n.value()); }

double s_chd_exact(PairCount n, double phi_rel) {
  return 0.5 * (3.0 * g_exact(n, phi_rel) - g_exact(n, 3.0 * phi_rel));
}

double pdc_marginal_exact(double r) {
  const double x2 = ipow(SqueezeParams(r).x, 2);
  return x2 * (1.0 - x2) * (1.0 - x2);
}

double pdc_joint_exact(double r, double theta, double phi, Outcome pattern) {
  const double c = std::cos(theta - phi);
  const double s = std::sin(theta - phi);
  const bool same = pattern == Outcome::PlusPlus || pattern == Outcome::MinusMinus;
  return pdc_marginal_exact(r) * (same ? c * c : s * s);
}

double pdc_vacuum_exact(double r) {
  const double x2 = ipow(SqueezeParams(r).x, 2);
  return (1.0 - x2) * (1.0 - x2);
}

std::optional<double> pdc_correlation_exact(double r, double theta, double phi, bool postselect) {
  const double e = 2.0 * pdc_marginal_exact(r) * std::cos(2.0 * (theta - phi));
  if (!postselect) return e;
  const double d = 1.0 - pdc_vacuum_exact(r);
  if (!(d > 0.0)) return std::nullopt;
  return e / d;
}

double pdc_g_exact(double r, double phi_rel) {
  const double x2 = ipow(SqueezeParams(r).x, 2);
  const double c = std::cos(phi_rel);
  return (x2 + c * c) / (2.0 * x2 + 1.0);
}

double pdc_s_chd_exact(double r, double phi_rel) {
  return 0.5 * (3.0 * pdc_g_exact(r, phi_rel) - pdc_g_exact(r, 3.0 * phi_rel));
}

double pdc_number_exact(double r) { return ipow(std::sinh(r), 2); }
double pdc_pair_coherence_exact(double r) { return std::sinh(r) * std::cosh(r); }

FockState4::FockState4(int dim) : dim_(dim) {
  if (dim < 1) throw ConfigError("Fock state dimension must be positive");
  const auto d = static_cast<std::size_t>(dim);
  amp_.assign(d * d * d * d, 0.0);
}

std::size_t FockState4::index(int a1, int a2, int b1, int b2) const {
  const auto d = static_cast<std::size_t>(dim_);
  return ((static_cast<std::size_t>(a1) * d + static_cast<std::size_t>(a2)) * d + static_cast<std::size_t>(b1)) * d +
         static_cast<std::size_t>(b2);
}

double FockState4::norm_sq() const {
  double s = 0.0;
  for (double a : amp_) s += a * a;
  return s;
}

int fock_cutoff_for(double r) {
  const SqueezeParams p(r);
  for (int n = kMinFockCutoff; n < 64; ++n) {
    const double kept = 1.0 - ipow(p.x, 2 * (n + 1));
    if (1.0 - kept * kept <= kFockTailTolerance) return n;
  }
  throw NumericalError("no Fock cutoff below 64 meets the truncation tolerance");
}

FockState4 fock_pdc_state(double r, int n_max) {
  if (!(r >= 0.0 && r <= kMaxFockSqueezing)) {
    std::ostringstream os;
    os << "Fock oracle needs 0 <= r <= " << kMaxFockSqueezing << ", got " << r;
    throw ConfigError(os.str());
  }
  if (n_max < kMinFockCutoff) throw ConfigError("Fock cutoff must be >= " + std::to_string(kMinFockCutoff));
  const SqueezeParams p(r);
  const double kept = 1.0 - ipow(p.x, 2 * (n_max + 1));
  const double tail = 1.0 - kept * kept;
  if (tail > kFockTailTolerance) {
    std::ostringstream os;
    os << "Fock truncation tail " << tail << " at r=" << r << ", n_max=" << n_max << " exceeds "
       << kFockTailTolerance;
    throw NumericalError(os.str());
  }
  FockState4 s(n_max + 1);
  for (int n1 = 0; n1 <= n_max; ++n1) {
    for (int n2 = 0; n2 <= n_max; ++n2) s.at(n1, n2, n1, n2) = p.c(n1) * p.c(n2);
  }
  s.set_truncation_tail(tail);
  return s;
}

FockState4 fock_bell_state(PairCount n) {
  const int N = n.value();
  FockState4 s(N + 1);
  const double a = 1.0 / std::sqrt(static_cast<double>(N + 1));
  for (int k = 0; k <= N; ++k) s.at(k, N - k, k, N - k) = a;
  return s;
}

FockState4 fock_rotate(const FockState4& state, double theta, double phi) {
  const int d = state.dim();
  FockState4 out(2 * d - 1);
  for (int a1 = 0; a1 < d; ++a1) {
    for (int a2 = 0; a2 < d; ++a2) {
      std::vector<Term> ta;
      bool have_a = false;
      for (int b1 = 0; b1 < d; ++b1) {
        for (int b2 = 0; b2 < d; ++b2) {
          const double v = state.at(a1, a2, b1, b2);
          if (v == 0.0) continue;
          if (!have_a) {
            ta = side_terms(a1, a2, theta);
            have_a = true;
          }
          const auto tb = side_terms(b1, b2, phi);
          for (const auto& x : ta) {
            for (const auto& y : tb) {
              out.at(x.plus, a1 + a2 - x.plus, y.plus, b1 + b2 - y.plus) += v * x.coef * y.coef;
            }
          }
        }
      }
    }
  }
  out.set_truncation_tail(state.truncation_tail());
  return out;
}

std::optional<double> fock_expect(const FockState4& state, const FockObservable& obs) {
  return std::visit([&](const auto& o) { return evaluate(state, o); }, obs);
}

}  // namespace ppbell
