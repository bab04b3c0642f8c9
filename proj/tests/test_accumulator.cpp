#include <cmath>
#include <random>

#include "doctest.h"

#include "ppbell/accumulator.hpp"
#include "ppbell/error.hpp"
#include "ppbell/random.hpp"

using namespace ppbell;

namespace {

MomentAccumulator filled(std::uint64_t first_batch, int batches, std::uint64_t seed) {
  MomentAccumulator acc(2, 64, first_batch);
  Engine rng = substream(seed, StreamDomain::Test, first_batch);
  std::normal_distribution<double> g(1.0, 2.0);
  for (int k = 0; k < batches * 64; ++k) {
    const double x = g(rng);
    const std::array<cplx, 2> v{cplx{x, 0.1 * g(rng)}, cplx{3.0 + 0.5 * x, 0.0}};
    acc.push(v);
  }
  return acc;
}

}  // namespace

TEST_SUITE("accumulator") {
  TEST_CASE("merge is order independent") {
    const auto a = filled(0, 10, 1);
    const auto b = filled(10, 7, 2);
    const auto c = filled(17, 5, 3);
    MomentAccumulator ab = a;
    ab.merge(b);
    ab.merge(c);
    MomentAccumulator cb = c;
    cb.merge(b);
    cb.merge(a);
    MomentAccumulator bc = b;
    bc.merge(c);
    MomentAccumulator a_bc = a;
    a_bc.merge(bc);
    for (std::size_t ch = 0; ch < 2; ++ch) {
      CHECK(ab.mean(ch) == cb.mean(ch));
      CHECK(ab.mean(ch) == a_bc.mean(ch));
      CHECK(ab.estimate(ch).std_error == cb.estimate(ch).std_error);
    }
    CHECK(ab.count() == 22 * 64);
    CHECK(ab.batch_count() == 22);
  }

  TEST_CASE("duplicate batch keys are rejected") {
    MomentAccumulator a = filled(0, 2, 1);
    const MomentAccumulator b = filled(1, 2, 2);
    CHECK_THROWS_AS(a.merge(b), EstimatorError);
  }

  TEST_CASE("standard error of Gaussian data") {
    MomentAccumulator acc(1, 1024);
    Engine rng = substream(4, StreamDomain::Test, 0);
    std::normal_distribution<double> g(0.0, 1.0);
    const int n = 1 << 18;
    for (int k = 0; k < n; ++k) {
      const std::array<cplx, 1> v{cplx{g(rng), 0.0}};
      acc.push(v);
    }
    const Estimate e = acc.estimate(0);
    // batch-means SE with 256 batches is within a few percent of 1/sqrt(n)
    CHECK(e.std_error == doctest::Approx(1.0 / std::sqrt(double(n))).epsilon(0.15));
    CHECK(std::abs(e.value.real()) < 4.0 / std::sqrt(double(n)));
    CHECK(e.n == static_cast<std::uint64_t>(n));
  }

  TEST_CASE("ratio of a channel with itself has zero error") {
    const auto a = filled(0, 8, 5);
    const Estimate r = a.ratio(1, 1);
    CHECK(r.value.real() == doctest::Approx(1.0));
    CHECK(r.std_error < 1e-12);
  }

  TEST_CASE("ratio error follows first-order propagation") {
    const auto a = filled(0, 40, 6);
    const Estimate r = a.ratio(0, 1);
    const cplx x = a.mean(0), y = a.mean(1);
    CHECK(r.value.real() == doctest::Approx(x.real() / y.real()));
    CHECK(r.value.imag() == doctest::Approx((x / y).imag()));
    // channel 1 = 3 + x/2 is perfectly correlated with the real part of channel 0
    const double ex = a.estimate(0).std_error, ey = a.estimate(1).std_error;
    const double rx = x.real(), ry = y.real();
    const double expect = std::abs(rx / ry) * std::abs(ex / rx - ey / ry);
    CHECK(r.std_error == doctest::Approx(expect).epsilon(1e-6));
  }

  TEST_CASE("too few batches") {
    MomentAccumulator acc(1, 16);
    const std::array<cplx, 1> v{cplx{1.0, 0.0}};
    for (int k = 0; k < 16; ++k) acc.push(v);
    CHECK_THROWS_AS(acc.estimate(0), EstimatorError);
    MomentAccumulator empty(1);
    CHECK_THROWS_AS(empty.mean(0), EstimatorError);
  }

  TEST_CASE("partial batches close on flush") {
    MomentAccumulator acc(1, 8);
    const std::array<cplx, 1> v{cplx{2.0, 0.0}};
    for (int k = 0; k < 20; ++k) acc.push(v);
    CHECK(acc.batch_count() == 2);
    acc.flush();
    CHECK(acc.batch_count() == 3);
    CHECK(acc.count() == 20);
    CHECK(acc.mean(0) == cplx{2.0, 0.0});
  }
}
