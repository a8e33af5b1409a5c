#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "vareff/rng.hpp"
#include "vareff/stats.hpp"

using namespace vareff;

TEST_SUITE_BEGIN("rng_stats");

TEST_CASE("seeded streams reproduce and children are independent of draws") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  // Child derivation depends on the creation seed, not on consumption.
  Rng fresh(42);
  Rng consumed(42);
  for (int i = 0; i < 17; ++i) consumed.next_u64();
  CHECK(fresh.child(7).next_u64() == consumed.child(7).next_u64());
  CHECK(fresh.child(7).next_u64() != fresh.child(8).next_u64());
  CHECK(fresh.child(1, 2).next_u64() != fresh.child(2, 1).next_u64());
}

TEST_CASE("below is in range and roughly uniform") {
  Rng rng(7);
  std::vector<int> counts(10, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t v = rng.below(10);
    REQUIRE(v < 10);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (int c : counts) CHECK(std::abs(c - draws / 10) < 500);
}

TEST_CASE("unit stays in [0,1) and normal has unit spread") {
  Rng rng(11);
  double sum = 0.0, sum_sq = 0.0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    const double u = rng.unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(sum / draws) < 0.01);
  CHECK(std::abs(sum_sq / draws - 1.0) < 0.02);
}

TEST_CASE("fisher_yates visits every permutation of three elements") {
  // 6 possible orders; with 6000 shuffles each should appear ~1000 times.
  std::vector<int> histogram(6, 0);
  Rng rng(3);
  for (int trial = 0; trial < 6000; ++trial) {
    std::vector<int> v{0, 1, 2};
    fisher_yates(v, rng);
    const int code = v[0] * 2 + (v[1] > v[2] ? 1 : 0);
    ++histogram[static_cast<std::size_t>(code)];
  }
  for (int count : histogram) CHECK(std::abs(count - 1000) < 150);
}

TEST_CASE("median handles even and odd counts exactly") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK(median({5.0}) == 5.0);
  CHECK(median({1.0, 1.0, 8.0, 8.0}) == 4.5);
}

TEST_CASE("population and sample sd") {
  const std::vector<double> v{1.0, 2.0, 3.0};
  CHECK(population_sd(v) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  CHECK(sample_sd(v) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nearest-rank quantiles") {
  const std::vector<double> sorted{10, 20, 30, 40, 50};
  CHECK(quantile_nearest_rank(sorted, 0.0) == 10);
  CHECK(quantile_nearest_rank(sorted, 0.2) == 10);
  CHECK(quantile_nearest_rank(sorted, 0.21) == 20);
  CHECK(quantile_nearest_rank(sorted, 0.5) == 30);
  CHECK(quantile_nearest_rank(sorted, 1.0) == 50);
}

TEST_CASE("normal distribution helpers agree with tabled values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(normal_two_sided_p(1.959963984540054) == doctest::Approx(0.05).epsilon(1e-9));
  // Quantile and CDF invert each other across the range.
  for (double p : {0.001, 0.01, 0.1, 0.3, 0.7, 0.99, 0.9999})
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
}

TEST_CASE("sample_without_replacement covers the population") {
  Rng rng(5);
  std::vector<std::size_t> picked = sample_without_replacement(10, 10, rng);
  std::sort(picked.begin(), picked.end());
  for (std::size_t i = 0; i < 10; ++i) CHECK(picked[i] == i);

  Rng rng2(5);
  const std::vector<std::size_t> few = sample_without_replacement(1000, 10, rng2);
  CHECK(few.size() == 10);
  std::vector<std::size_t> dedup = few;
  std::sort(dedup.begin(), dedup.end());
  CHECK(std::adjacent_find(dedup.begin(), dedup.end()) == dedup.end());
}

TEST_SUITE_END();
