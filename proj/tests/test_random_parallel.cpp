#include <atomic>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "ppbell/parallel.hpp"
#include "ppbell/random.hpp"

using namespace ppbell;

TEST_SUITE("random_parallel") {
  TEST_CASE("substreams are reproducible and distinct") {
    Engine a = substream(42, StreamDomain::Sde, 5);
    Engine b = substream(42, StreamDomain::Sde, 5);
    CHECK(a() == b());
    std::set<std::uint64_t> first;
    for (std::uint64_t i = 0; i < 1000; ++i) first.insert(substream(42, StreamDomain::Sde, i)());
    for (auto d : {StreamDomain::Static, StreamDomain::Waveguide}) first.insert(substream(42, d, 0)());
    first.insert(substream(43, StreamDomain::Sde, 0)());
    CHECK(first.size() == 1003);
  }

  TEST_CASE("splitmix64 known value") {
    // reference output of the published splitmix64 generator seeded with 0
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  }

  TEST_CASE("parallel_for visits every task once") {
    for (unsigned w : {1u, 2u, 5u}) {
      std::vector<std::atomic<int>> hits(97);
      parallel_for(hits.size(), w, [&](std::uint64_t t, unsigned worker) {
        CHECK(worker < w);
        hits[t]++;
      });
      for (auto& h : hits) CHECK(h.load() == 1);
    }
  }

  TEST_CASE("parallel_for rethrows the lowest failing task") {
    auto body = [](std::uint64_t t, unsigned) {
      if (t == 11 || t == 30) throw std::runtime_error("task " + std::to_string(t));
    };
    for (unsigned w : {1u, 3u}) {
      try {
        parallel_for(40, w, body);
        FAIL("no exception");
      } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "task 11");
      }
    }
  }

  TEST_CASE("effective worker count") {
    CHECK(effective_workers(3, 8) == 3);
    CHECK(effective_workers(100, 4) == 4);
    CHECK(effective_workers(100, 0) >= 1);
  }
}
