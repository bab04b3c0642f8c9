#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "ppbell/error.hpp"
#include "ppbell/estimators.hpp"
#include "ppbell/static_sampler.hpp"

using namespace ppbell;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<PhasePoint> samples(int n, std::size_t count, std::uint64_t seed) {
  std::vector<PhasePoint> out;
  for (std::uint64_t b = 0; out.size() < count; ++b) {
    auto batch = sample_batch(PairCount(n), seed, b, kDefaultBatchSize);
    out.insert(out.end(), batch.begin(), batch.end());
  }
  return out;
}

}  // namespace

TEST_SUITE("static_sampler") {
  TEST_CASE("pair count guard") {
    CHECK_THROWS_AS(PairCount(0), ConfigError);
    CHECK_THROWS_AS(PairCount(17), ConfigError);
    CHECK(PairCount(16).value() == 16);
  }

  TEST_CASE("directions are unit vectors with isotropic second moments") {
    Engine rng = substream(3, StreamDomain::Test, 0);
    const int n = 200000;
    std::array<double, 4> m2{};
    for (int k = 0; k < n; ++k) {
      const auto d = sample_direction(rng);
      double s = 0;
      for (double x : d) s += x * x;
      CHECK(std::abs(std::sqrt(s) - 1.0) <= 1e-14);
      for (int i = 0; i < 4; ++i) m2[i] += d[i] * d[i] / n;
    }
    // squared component ~ Beta(1/2, 3/2): mean 1/4, variance 1/16
    const double se = 0.25 / std::sqrt(double(n));
    for (double v : m2) CHECK(std::abs(v - 0.25) < 4 * se);
  }

  TEST_CASE("radius follows Gamma(N+2)") {
    for (int n : {1, 2, 3}) {
      Engine rng = substream(3, StreamDomain::Test, 10 + n);
      const int count = 200000;
      double s = 0, s2 = 0;
      for (int k = 0; k < count; ++k) {
        const double r = sample_radius_sq(PairCount(n), rng);
        s += r;
        s2 += r * r;
      }
      const double mean = s / count;
      const double var = s2 / count - mean * mean;
      const double shape = n + 2;
      CHECK(std::abs(mean - shape) < 4 * std::sqrt(shape / count));
      CHECK(std::abs(var - shape) < 0.05 * shape);
    }
  }

  TEST_CASE("bilinear product is unconjugated") {
    const Vec2c a{cplx{0, 1}, cplx{1, 0}};
    const Vec2c b{cplx{0, 1}, cplx{2, 0}};
    CHECK(bilinear(a, b) == cplx{1, 0});
    const auto p = acceptance_probability(a, b, PairCount(1));
    REQUIRE(p.has_value());
    CHECK(*p == doctest::Approx(1.0 / 10.0));
    CHECK_FALSE(acceptance_probability(Vec2c{}, b, PairCount(1)).has_value());
    // A = B = (1, i): the bilinear product vanishes, the conjugated one would not
    const Vec2c c{cplx{1, 0}, cplx{0, 1}};
    CHECK(acceptance_probability(c, c, PairCount(1)).value() == 0.0);
  }

  TEST_CASE("acceptance rate is 1/(N+1)") {
    for (int n : {1, 2, 3}) {
      BellStateSampler s(PairCount(n), substream(9, StreamDomain::Test, n));
      while (s.proposals() < 200000) s.next_mu();
      const double rate = double(s.accepted()) / double(s.proposals());
      const double p = 1.0 / (n + 1);
      CHECK(std::abs(rate - p) < 3 * std::sqrt(p * (1 - p) / double(s.proposals())) + 1.0 / s.proposals());
    }
  }

  TEST_CASE("difference variables are uncorrelated with sum variables") {
    Engine rng = substream(5, StreamDomain::Test, 0);
    BellStateSampler s(PairCount(1), substream(5, StreamDomain::Test, 1));
    const int n = 50000;
    std::vector<double> mu(n), nu(n);
    for (int k = 0; k < n; ++k) {
      mu[k] = s.next_mu().a[0].real();
      nu[k] = sample_delta_pair(rng).b[1].imag();
    }
    double mm = 0, mn = 0;
    for (int k = 0; k < n; ++k) {
      mm += mu[k] / n;
      mn += nu[k] / n;
    }
    double cov = 0, vm = 0, vn = 0;
    for (int k = 0; k < n; ++k) {
      cov += (mu[k] - mm) * (nu[k] - mn) / n;
      vm += (mu[k] - mm) * (mu[k] - mm) / n;
      vn += (nu[k] - mn) * (nu[k] - mn) / n;
    }
    CHECK(std::abs(cov) < 3 * std::sqrt(vm * vn / n));
    CHECK(vn == doctest::Approx(0.5).epsilon(0.03));
  }

  TEST_CASE("assembly from sum and difference variables") {
    MuPair mu{{cplx{1, 2}, cplx{0, 1}}, {cplx{-1, 0}, cplx{3, 3}}};
    DeltaPair nu{{cplx{0.5, 0}, cplx{0, 0}}, {cplx{0, -1}, cplx{1, 0}}};
    const PhasePoint p = assemble_point(mu, nu);
    CHECK(p.alpha[0] == cplx{1.5, 2});
    CHECK(p.alpha_plus[0] == std::conj(cplx{0.5, 2}));
    CHECK(p.alpha[3] == cplx{4, 3});
    CHECK(p.alpha_plus[2] == std::conj(cplx{-1, 1}));
  }

  TEST_CASE("identical seeds give identical samples") {
    const auto a = sample_batch(PairCount(2), 11, 3, 257);
    const auto b = sample_batch(PairCount(2), 11, 3, 257);
    CHECK(a == b);
    CHECK_FALSE(a == sample_batch(PairCount(2), 11, 4, 257));
  }

  TEST_CASE("normalized correlation matches cos^{2N}") {
    struct Case {
      int n;
      std::size_t count;
    };
    for (Case c : {Case{1, 1u << 18}, Case{2, 1u << 20}}) {
      const auto pts = samples(c.n, c.count, 21);
      for (double phi : {0.0, kPi / 8, kPi / 4, 3 * kPi / 8}) {
        const auto [num, den] = correlator_g(pts, c.n, c.n, phi);
        const double g = num.value.real() / den.value.real();
        const double rel = std::hypot(num.std_error / num.value.real(), den.std_error / den.value.real());
        CAPTURE(c.n);
        CAPTURE(phi);
        CHECK(std::abs(g - std::pow(std::cos(phi), 2 * c.n)) < 3 * std::abs(g) * rel);
      }
    }
  }
}
