#include <cmath>
#include <numbers>

#include "doctest.h"

#include "ppbell/error.hpp"
#include "ppbell/oracle.hpp"

using namespace ppbell;

namespace {

constexpr double kPi = std::numbers::pi;

double ev(const FockState4& s, const FockObservable& o) { return fock_expect(s, o).value(); }

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("Bell-state closed forms") {
    CHECK(g_exact(PairCount(1), kPi / 8) == doctest::Approx(std::pow(std::cos(kPi / 8), 2)));
    CHECK(s_chd_exact(PairCount(1), kPi / 8) == doctest::Approx((1 + std::sqrt(2.0)) / 2).epsilon(1e-14));
    CHECK(s_chd_exact(PairCount(2), kPi / 8) == doctest::Approx(1.082107).epsilon(1e-6));
    CHECK(s_chd_exact(PairCount(3), 0.0) == doctest::Approx(1.0));
  }

  TEST_CASE("squeezed-state closed forms") {
    const double r = 0.2, x = std::tanh(r);
    CHECK(pdc_marginal_exact(r) == doctest::Approx(x * x * std::pow(1 - x * x, 2)));
    CHECK(pdc_vacuum_exact(r) == doctest::Approx(std::pow(1 - x * x, 2)));
    CHECK(pdc_joint_exact(r, 0.1, 0.4, Outcome::PlusPlus) ==
          doctest::Approx(pdc_marginal_exact(r) * std::pow(std::cos(0.3), 2)));
    CHECK(pdc_number_exact(r) == doctest::Approx(std::sinh(r) * std::sinh(r)));
    CHECK(pdc_pair_coherence_exact(r) == doctest::Approx(std::sinh(r) * std::cosh(r)));
    CHECK_FALSE(pdc_correlation_exact(0.0, 0.0, 0.3, true).has_value());
    CHECK(pdc_correlation_exact(0.0, 0.0, 0.3, false).value() == 0.0);
  }

  TEST_CASE("truncated norm equals the analytic partial sum") {
    for (double r : {0.05, 0.1, 0.25, 0.5}) {
      const SqueezeParams sp(r);
      for (int n_max : {3, 6, 9}) {
        double norm1 = 0;
        for (int n = 0; n <= n_max; ++n) norm1 += sp.c(n) * sp.c(n);
        CHECK(norm1 == doctest::Approx(1 - std::pow(sp.x, 2 * (n_max + 1))).epsilon(1e-12));
      }
    }
    const FockState4 s = fock_pdc_state(0.25, 6);
    const double block = 1 - std::pow(std::tanh(0.25), 14);
    CHECK(s.norm_sq() == doctest::Approx(block * block).epsilon(1e-12));
    CHECK(s.truncation_tail() == doctest::Approx(1 - block * block).epsilon(1e-6));
  }

  TEST_CASE("cutoff guards") {
    CHECK_THROWS_AS(fock_pdc_state(0.6), ConfigError);
    CHECK_THROWS_AS(fock_pdc_state(-0.1), ConfigError);
    CHECK_THROWS_AS(fock_pdc_state(0.1, 2), ConfigError);
    // n_max = 3 leaves about x^8 of each block outside the space
    CHECK_THROWS_AS(fock_pdc_state(0.25, 3), NumericalError);
    CHECK(fock_cutoff_for(0.01) == kMinFockCutoff);
    const int c = fock_cutoff_for(0.25);
    CHECK_NOTHROW(fock_pdc_state(0.25, c));
    CHECK_THROWS_AS(fock_pdc_state(0.25, c - 1), NumericalError);
  }

  TEST_CASE("rotation preserves the norm") {
    const FockState4 s = fock_pdc_state(0.2);
    const FockState4 t = fock_rotate(s, 0.7, -0.3);
    CHECK(t.norm_sq() == doctest::Approx(s.norm_sq()).epsilon(1e-12));
    const FockState4 b = fock_bell_state(PairCount(2));
    CHECK(fock_rotate(b, 1.0, 2.0).norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("Fock evaluator reproduces the closed forms") {
    const double r = 0.15;
    const FockState4 s = fock_pdc_state(r);
    for (double th : {0.0, 0.3}) {
      for (double ph : {0.1, kPi / 8, 1.2}) {
        for (Outcome o : {Outcome::PlusPlus, Outcome::PlusMinus, Outcome::MinusPlus, Outcome::MinusMinus}) {
          CHECK(ev(s, fock::Joint{th, ph, o}) == doctest::Approx(pdc_joint_exact(r, th, ph, o)).epsilon(1e-9));
        }
        CHECK(ev(s, fock::Correlation{th, ph, true}) ==
              doctest::Approx(pdc_correlation_exact(r, th, ph, true).value()).epsilon(1e-9));
      }
    }
    CHECK(ev(s, fock::Marginal{Side::A, 0.4}) == doctest::Approx(pdc_marginal_exact(r)).epsilon(1e-9));
    CHECK(ev(s, fock::Vacuum{}) == doctest::Approx(pdc_vacuum_exact(r)).epsilon(1e-9));
    CHECK(ev(s, fock::IntensityMoment{1, 0, 0.0, false}) == doctest::Approx(pdc_number_exact(r)).epsilon(1e-8));
    CHECK(ev(s, fock::ChdStatistic{1, kPi / 8}) == doctest::Approx(pdc_s_chd_exact(r, kPi / 8)).epsilon(1e-8));
  }

  TEST_CASE("dynamic normalized correlation tends to cos^2 at small squeezing") {
    const FockState4 s = fock_pdc_state(1e-4);
    for (double phi : {0.2, kPi / 8, 1.0}) {
      const double num = ev(s, fock::IntensityMoment{1, 1, phi, false});
      const double den = ev(s, fock::IntensityMoment{1, 1, phi, true});
      CHECK(num / den == doctest::Approx(std::pow(std::cos(phi), 2)).epsilon(1e-7));
      CHECK(pdc_g_exact(1e-4, phi) == doctest::Approx(std::pow(std::cos(phi), 2)).epsilon(1e-7));
    }
  }

  TEST_CASE("CH at default angles is (sqrt2+1)/2 for every squeezing") {
    for (double r : {0.02, 0.1, 0.25}) {
      const FockState4 s = fock_pdc_state(r, fock_cutoff_for(r));
      CHECK(ev(s, fock::ChStatistic{AngleSet{}, false}) == doctest::Approx((std::sqrt(2.0) + 1) / 2).epsilon(1e-9));
      CHECK(ev(s, fock::ChStatistic{AngleSet{}, true}) == doctest::Approx((std::sqrt(2.0) + 1) / 2).epsilon(1e-9));
    }
  }

  TEST_CASE("event selection counts") {
    const FockState4 b = fock_bell_state(PairCount(1));
    // one pair: one photon per site, correlated polarization
    const double p = ev(b, fock::Counts{0.0, 0.0, {1, 0, 1, 0}});
    CHECK(p == doctest::Approx(0.5));
    CHECK(ev(b, fock::Counts{0.0, 0.0, {1, 0, 0, 1}}) == doctest::Approx(0.0));
    const FockState4 b2 = fock_bell_state(PairCount(2));
    double total = 0;
    for (int a = 0; a <= 2; ++a) total += ev(b2, fock::Counts{0.3, 0.3, {a, 2 - a, 0, 0}, {true, true, false, false}});
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("degenerate normalization at zero squeezing") {
    const FockState4 s = fock_pdc_state(0.0);
    CHECK_FALSE(fock_expect(s, fock::Correlation{0.0, 0.3, true}).has_value());
    CHECK_FALSE(fock_expect(s, fock::ChStatistic{AngleSet{}, false}).has_value());
    CHECK(ev(s, fock::Vacuum{}) == doctest::Approx(1.0));
  }
}
