#include "catch_amalgamated.hpp"

#include <atomic>
#include <stdexcept>

#include "trajthermo/numeric.hpp"

using namespace trajthermo;

TEST_CASE("pairwise_sum matches exact sums", "[numeric]") {
  CHECK(pairwise_sum(Vector{}) == 0.0);
  CHECK(pairwise_sum(Vector{3.5}) == 3.5);
  Vector v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  CHECK(pairwise_sum(v) == 499500.0);
  // Pairwise summation keeps the error of many small terms small.
  Vector tiny(1 << 20, 0.1);
  CHECK_THAT(pairwise_sum(tiny), Catch::Matchers::WithinRel(104857.6, 1e-14));
}

TEST_CASE("dot and max_abs", "[numeric]") {
  CHECK(dot(Vector{1, 2, 3}, Vector{4, -5, 6}) == 12.0);
  CHECK(max_abs(Vector{1, -7, 3}) == 7.0);
  CHECK(max_abs(Vector{}) == 0.0);
}

TEST_CASE("parallel_for visits every index once for any thread count", "[numeric]") {
  for (std::size_t threads : {1u, 2u, 3u, 8u}) {
    set_thread_count(threads);
    std::vector<std::atomic<int>> hits(101);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  set_thread_count(0);
}

TEST_CASE("parallel_for rethrows worker exceptions", "[numeric]") {
  set_thread_count(4);
  CHECK_THROWS_AS(parallel_for(50,
                               [](std::size_t i) {
                                 if (i == 37) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  set_thread_count(0);
}
