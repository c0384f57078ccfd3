#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <set>
#include <vector>

#include "ccwb/errors.hpp"
#include "ccwb/parallel.hpp"
#include "ccwb/rational.hpp"
#include "ccwb/rng.hpp"

using namespace ccwb;

TEST_CASE("rational reduces and normalizes signs") {
  CHECK(Rational() == Rational(0));
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational(6, -4).num() == -3);
  CHECK(Rational(6, -4).den() == 2);
  CHECK(Rational(0, 7) == Rational(0, 1));
  CHECK(Rational(10, 5).to_string() == "2");
  CHECK(Rational(10, 4).to_string() == "5/2");
  CHECK_THROWS_AS(Rational(1, 0), parameter_error);
}

TEST_CASE("rational arithmetic is exact") {
  Rational a(1, 6), b(1, 10);
  CHECK(a + b == Rational(4, 15));
  CHECK(a - b == Rational(1, 15));
  CHECK(a * b == Rational(1, 60));
  CHECK(a / b == Rational(5, 3));
  CHECK(-a == Rational(-1, 6));
  CHECK(Rational(-3, 7).abs() == Rational(3, 7));
  CHECK(a.to_double() == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(Rational(1, 3).is_zero() == false);
  CHECK(Rational(0).is_zero());
}

TEST_CASE("rational comparisons use cross multiplication") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(7, 8) > Rational(6, 7));
  CHECK(min(Rational(1, 3), Rational(1, 4)) == Rational(1, 4));
  CHECK(max(Rational(1, 3), Rational(1, 4)) == Rational(1, 3));
}

TEST_CASE("rational pow") {
  CHECK(pow(Rational(2, 3), 5) == Rational(32, 243));
  CHECK(pow(Rational(7, 2), 0) == Rational(1));
  CHECK(pow(Rational(1, 2), 20) == Rational(1, 1 << 20));
}

TEST_CASE("rational overflow is detected, not wrapped") {
  Rational huge(INT64_MAX, 1);
  CHECK_THROWS_AS(huge + Rational(1), std::overflow_error);
  CHECK_THROWS_AS(huge * Rational(2), std::overflow_error);
  // __int128 intermediates keep legitimate large-denominator sums exact.
  Rational x(1, int64_t{1} << 31);
  CHECK(x + x == Rational(1, int64_t{1} << 30));
}

TEST_CASE("mix64 is a deterministic bijection-like finalizer") {
  CHECK(mix64(42) == mix64(42));
  CHECK(mix64(42) != mix64(43));
  CHECK(mix64(1, 2) != mix64(2, 1));
  std::set<uint64_t> outs;
  for (uint64_t i = 0; i < 4096; ++i) outs.insert(mix64(i));
  CHECK(outs.size() == 4096);  // no collisions on a small window
}

TEST_CASE("counter rng streams are reproducible and key-separated") {
  CounterRng a(7), b(7), c(8);
  std::vector<uint64_t> va, vb, vc;
  for (int i = 0; i < 64; ++i) {
    va.push_back(a.next());
    vb.push_back(b.next());
    vc.push_back(c.next());
  }
  CHECK(va == vb);
  CHECK(va != vc);

  CounterRng k1 = CounterRng::keyed({1, 2, 3});
  CounterRng k2 = CounterRng::keyed({1, 2, 3});
  CounterRng k3 = CounterRng::keyed({1, 3, 2});
  CHECK(k1.next() == k2.next());
  CHECK(k1.next() != k3.next());
}

TEST_CASE("counter rng bounded draws stay in range and hit every residue") {
  CounterRng rng(123);
  std::vector<int> hits(10, 0);
  for (int i = 0; i < 10000; ++i) {
    uint64_t v = rng.below(10);
    REQUIRE(v < 10);
    ++hits[v];
  }
  for (int h : hits) CHECK(h > 800);  // roughly uniform
  CHECK(rng.below(1) == 0);
  CHECK(rng.below(0) == 0);
}

TEST_CASE("uniform01 lies in the half-open unit interval") {
  CounterRng rng(5);
  for (int i = 0; i < 1000; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("worker count honors the environment override") {
  setenv("CCWB_WORKERS", "3", 1);
  CHECK(worker_count() == 3);
  setenv("CCWB_WORKERS", "1", 1);
  CHECK(worker_count() == 1);
  setenv("CCWB_WORKERS", "0", 1);
  CHECK_THROWS_AS(worker_count(), parameter_error);
  setenv("CCWB_WORKERS", "many", 1);
  CHECK_THROWS_AS(worker_count(), parameter_error);
  unsetenv("CCWB_WORKERS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("run_tasks covers every index exactly once") {
  for (const char* workers : {"1", "4"}) {
    setenv("CCWB_WORKERS", workers, 1);
    std::vector<std::atomic<int>> seen(257);
    run_tasks(257, [&](int64_t i) { seen[i].fetch_add(1); });
    for (auto& s : seen) CHECK(s.load() == 1);
  }
  unsetenv("CCWB_WORKERS");
}

TEST_CASE("run_tasks propagates the first exception") {
  setenv("CCWB_WORKERS", "4", 1);
  CHECK_THROWS_AS(run_tasks(100,
                            [&](int64_t i) {
                              if (i == 13) throw validation_error("boom");
                            }),
                  validation_error);
  unsetenv("CCWB_WORKERS");
}

TEST_CASE("error taxonomy maps onto standard exception roots") {
  CHECK_THROWS_AS(throw parameter_error("p"), std::invalid_argument);
  CHECK_THROWS_AS(throw io_error("i"), std::runtime_error);
  CHECK_THROWS_AS(throw validation_error("v"), std::logic_error);
}
