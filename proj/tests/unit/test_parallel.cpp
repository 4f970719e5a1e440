#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "eqtri/parallel.hpp"

using namespace eqtri;

TEST_SUITE("parallel") {
  TEST_CASE("every index is visited exactly once") {
    for (const char* threads : {"1", "3", "8"}) {
      ::setenv("EQTRI_THREADS", threads, 1);
      std::vector<int> hits(1001, 0);
      parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
      CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
    ::unsetenv("EQTRI_THREADS");
  }

  TEST_CASE("thread count honours the environment") {
    ::setenv("EQTRI_THREADS", "5", 1);
    CHECK(thread_count() == 5);
    ::setenv("EQTRI_THREADS", "zero", 1);
    CHECK(thread_count() >= 1);
    ::unsetenv("EQTRI_THREADS");
  }

  TEST_CASE("exceptions propagate") {
    ::setenv("EQTRI_THREADS", "4", 1);
    CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                      if (i == 77) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    ::unsetenv("EQTRI_THREADS");
  }

  TEST_CASE("pairwise sum") {
    std::vector<double> v(10000);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(pairwise_sum(v) == 10000.0 * 10001.0 / 2.0);
    CHECK(pairwise_sum({}) == 0.0);
    // Many small terms after a large one keep their contribution.
    std::vector<double> w(1 << 20, 1e-16);
    w[0] = 1.0;
    CHECK(pairwise_sum(w) == doctest::Approx(1.0 + (w.size() - 1) * 1e-16).epsilon(1e-14));
  }
}
