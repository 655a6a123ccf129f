#include "onenorm/parallel.hpp"

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

using namespace onenorm;

TEST_CASE("every index runs exactly once") {
  for (unsigned threads : {1u, 3u, 8u}) {
    set_thread_count(threads);
    CHECK(thread_count() == threads);
    for (std::size_t n : {0u, 1u, 7u, 1000u}) {
      std::vector<int> hits(n, 0);
      parallel_for(n, [&](std::size_t i) { ++hits[i]; });
      CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
  }
  set_thread_count(0);
  CHECK(thread_count() >= 1);
}

TEST_CASE("results do not depend on the thread count") {
  auto run = [](unsigned threads) {
    set_thread_count(threads);
    std::vector<double> out(257);
    parallel_for(out.size(), [&](std::size_t i) { out[i] = std::sqrt(static_cast<double>(i)) / 3.0; });
    return out;
  };
  const auto a = run(1), b = run(5);
  set_thread_count(0);
  CHECK(a == b);
}

TEST_CASE("exceptions propagate to the caller") {
  set_thread_count(4);
  std::atomic<int> ran{0};
  CHECK_THROWS_AS(parallel_for(100,
                               [&](std::size_t i) {
                                 ++ran;
                                 if (i == 37) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  set_thread_count(0);
  CHECK(ran.load() >= 1);
}
