#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <variant>

#include "ccwb/bitmatrix.hpp"
#include "ccwb/errors.hpp"
#include "ccwb/protocol.hpp"
#include "ccwb/structure.hpp"
#include "ccwb/zoo.hpp"

using namespace ccwb;

namespace {

BooleanMatrix row_regular(int n, int64_t r, uint64_t seed) {
  ConstructionParams p;
  p.n = n;
  p.r_override = r;
  p.seed = seed;
  return gen_row_regular(p);
}

}  // namespace

TEST_CASE("affine-parity hashes collide on exactly half the draws") {
  const int m = 3;
  for (uint32_t x = 0; x < 8; ++x)
    for (uint32_t y = 0; y < 8; ++y) {
      int collisions = 0;
      for (uint32_t alpha = 0; alpha < 8; ++alpha)
        for (uint32_t beta = 0; beta < 2; ++beta) {
          HashDraw h{alpha, beta};
          collisions += hash_eval(h, x) == hash_eval(h, y);
        }
      CHECK(collisions == (x == y ? 16 : 8));
    }
  (void)m;
}

TEST_CASE("fingerprint plans bit-slice small seed spaces bijectively") {
  FingerprintPlan plan({{2, 2}});  // t=2 draws of 3 bits each
  CHECK(plan.total_bits() == 6);
  CHECK(plan.seed_count() == 64);
  std::set<std::pair<uint64_t, uint64_t>> distinct;
  for (uint64_t seed = 0; seed < 64; ++seed) {
    HashDraw a = plan.draw(seed, 0, 0);
    HashDraw b = plan.draw(seed, 0, 1);
    CHECK(a.alpha < 4);
    CHECK(a.beta < 2);
    distinct.insert({(uint64_t{a.alpha} << 1) | a.beta, (uint64_t{b.alpha} << 1) | b.beta});
  }
  CHECK(distinct.size() == 64);  // the slices enumerate every draw pair
}

TEST_CASE("oversized fingerprint plans fall back to keyed streams") {
  FingerprintPlan plan({{16, 30}, {16, 30}});
  CHECK(plan.total_bits() > 62);
  CHECK(plan.seed_count() == 0);
  HashDraw a = plan.draw(123456789, 1, 7);
  HashDraw b = plan.draw(123456789, 1, 7);
  HashDraw c = plan.draw(123456790, 1, 7);
  CHECK(a.alpha == b.alpha);
  CHECK(a.beta == b.beta);
  CHECK((a.alpha != c.alpha || a.beta != c.beta));
  CHECK_THROWS_AS(plan.draw(0, 2, 0), std::out_of_range);
  CHECK_THROWS_AS(plan.draw(0, 0, 16), parameter_error);
  CHECK_THROWS_AS(FingerprintPlan({{0, 3}}), parameter_error);
  CHECK_THROWS_AS(FingerprintPlan({{1, 31}}), parameter_error);
}

TEST_CASE("equality protocol: cost, exact error, finite seed domains") {
  for (int n : {2, 4, 8}) {
    for (int t : {1, 2, 4}) {
      RandomizedProtocol rp = equality_protocol({n, t});
      CHECK(rp.cost_bound() == t + 1);
      CHECK(rp.alice_domain() == n);
      CHECK(rp.seed_count() > 0);
      ErrorReport rep = error_exact(rp, gen_identity(n));
      CHECK(rep.max_error_exact == Rational(1, int64_t{1} << t));
    }
  }
  CHECK_THROWS_AS(equality_protocol({0, 2}), parameter_error);
  CHECK_THROWS_AS(equality_protocol({4, 0}), parameter_error);
  CHECK_THROWS_AS(equality_protocol({4, 17}), parameter_error);
}

TEST_CASE("equality protocol is one-sided: equal inputs never miss") {
  RandomizedProtocol rp = equality_protocol({8, 4});
  CHECK(rp.seed_count() == (uint64_t{1} << 16));
  for (uint64_t seed = 0; seed < rp.seed_count(); seed += 97) {
    ProtocolTree t = rp.sample(seed);
    for (int i = 0; i < 8; ++i) CHECK(t.run(i, i).output == 1);
  }
}

TEST_CASE("star membership protocols reduce to fingerprint matching") {
  std::vector<int> alice{0, 0, 1};
  std::vector<int> bob{0, 1};
  BooleanMatrix match = star_match_matrix(alice, bob);
  CHECK(match == BooleanMatrix::from_rows({"10", "10", "01"}));

  RandomizedProtocol rp = star_membership_protocol(alice, bob, 3);
  CHECK(rp.cost_bound() == 4);
  ErrorReport rep = error_exact(rp, match);
  CHECK(rep.max_error_exact == Rational(1, 8));  // only 0-entries miss

  // Single-map overload: both parties index the same partition.
  std::vector<int> part{0, 1, 0, 2};
  RandomizedProtocol same = star_membership_protocol(part, 2);
  BooleanMatrix target = star_match_matrix(part, part);
  ErrorReport rep2 = error_exact(same, target);
  CHECK(rep2.max_error_exact == Rational(1, 4));
  CHECK_THROWS_AS(star_membership_protocol({0, -1}, {0}, 2), parameter_error);
}

TEST_CASE("compiled sparse protocols have fixed cost and structure") {
  ForestDecomposition fd = forest_decompose(gen_identity(2));
  CompiledSparseProtocol csp = compile_sparse_protocol(fd, 1);
  CHECK(csp.t_check == 1);
  CHECK(csp.cost() == 8);
  CHECK(csp.protocol.cost_bound() == 8);
  CHECK(csp.n_rows == 2);
  CHECK(csp.n_cols == 2);
  CHECK(decomposition_matrix(fd) == gen_identity(2));
  CHECK(csp.exact_surrogate_matrix() == gen_identity(2));

  CompiledSparseProtocol deep = compile_sparse_protocol(fd, 4);
  CHECK(deep.cost() == 20);
  CHECK_THROWS_AS(compile_sparse_protocol(fd, 0), parameter_error);
}

TEST_CASE("compiled protocol: evaluator agrees with sampled trees everywhere") {
  ForestDecomposition fd = forest_decompose(gen_identity(2));
  CompiledSparseProtocol csp = compile_sparse_protocol(fd, 1);
  REQUIRE(csp.protocol.seed_count() > 0);
  REQUIRE(csp.protocol.seed_count() <= 4096);
  for (uint64_t seed = 0; seed < csp.protocol.seed_count(); ++seed) {
    ProtocolTree t = csp.protocol.sample(seed);
    CHECK(t.depth() <= 8);
    for (int u = 0; u < 2; ++u)
      for (int v = 0; v < 2; ++v) CHECK(t.run(u, v).output == csp.evaluate(u, v, seed));
  }
}

TEST_CASE("compiled protocol: exact one-sided error on the 2x2 identity") {
  ForestDecomposition fd = forest_decompose(gen_identity(2));

  // t_check = 1: each of the four checks misses with probability exactly 1/2,
  // so a 0-entry errs with probability 1 - (1/2)^4 = 15/16.
  CompiledSparseProtocol c1 = compile_sparse_protocol(fd, 1);
  ErrorReport rep = error_exact(c1.protocol, gen_identity(2));
  CHECK(rep.max_error_exact == Rational(15, 16));

  // t_check = 2 pushes the seed space past the tree-enumeration budget; the
  // fast evaluator still enumerates it exactly: 1 - (3/4)^4 = 175/256.
  CompiledSparseProtocol c2 = compile_sparse_protocol(fd, 2);
  uint64_t seeds = c2.protocol.seed_count();
  REQUIRE(seeds == (uint64_t{1} << 22));
  for (auto [u, v] : {std::pair{0, 1}, std::pair{1, 0}}) {
    int64_t wrong = 0;
    for (uint64_t s = 0; s < seeds; ++s) wrong += c2.evaluate(u, v, s);
    CHECK(Rational(wrong, static_cast<int64_t>(seeds)) == Rational(175, 256));
  }
  // 1-entries never miss, for any seed.
  for (uint64_t s = 0; s < seeds; s += 4097) {
    CHECK(c2.evaluate(0, 0, s) == 1);
    CHECK(c2.evaluate(1, 1, s) == 1);
  }
}

TEST_CASE("compiled protocol on structured random input") {
  BooleanMatrix m = row_regular(16, 2, 8);
  auto res = certify(m);
  REQUIRE(std::holds_alternative<Certificate>(res));
  const Certificate& cert = std::get<Certificate>(res);
  CompiledSparseProtocol csp = compile_sparse_protocol(cert.forests, 4);
  CHECK(csp.cost() == 20);
  CHECK(csp.exact_surrogate_matrix() == m);

  // Full sweep: 1-entries answer 1 under every probed seed.
  for (uint64_t s : {uint64_t{1}, uint64_t{999}, uint64_t{123456789}})
    for (int u = 0; u < 16; ++u)
      for (int v = 0; v < 16; ++v)
        if (m.get(u, v)) CHECK(csp.evaluate(u, v, s) == 1);

  // Pooled Monte Carlo over all 0-entries: each has exact error
  // 1-(1-2^-4)^4 ~= 0.2275, so the pooled mean sits well under 0.27.
  int64_t wrong = 0, total = 0;
  for (int u = 0; u < 16; ++u)
    for (int v = 0; v < 16; ++v) {
      if (m.get(u, v)) continue;
      for (int s = 0; s < 100; ++s) {
        wrong += csp.evaluate(u, v, mix64(4242, (static_cast<uint64_t>(u * 16 + v) << 32) | s));
        ++total;
      }
    }
  double pooled = static_cast<double>(wrong) / static_cast<double>(total);
  CHECK(pooled > 0.16);
  CHECK(pooled < 0.29);

  // The sampled-tree path agrees with the evaluator on a seed spot check.
  for (uint64_t s : {uint64_t{3}, uint64_t{77}}) {
    uint64_t seed = csp.protocol.seed_count() ? s % csp.protocol.seed_count() : s;
    ProtocolTree t = csp.protocol.sample(seed);
    for (int u = 0; u < 16; ++u)
      for (int v = 0; v < 16; ++v) CHECK(t.run(u, v).output == csp.evaluate(u, v, seed));
  }
}

TEST_CASE("compiled protocol json trees stay within the declared cost") {
  ForestDecomposition fd = forest_decompose(row_regular(8, 2, 2));
  CompiledSparseProtocol csp = compile_sparse_protocol(fd, 2);
  ProtocolTree t = csp.protocol.sample(csp.protocol.seed_count() ? 5 % csp.protocol.seed_count() : 5);
  CHECK(t.depth() <= csp.cost());
  ProtocolTree back = ProtocolTree::from_json(t.to_json(), 8, 8);
  CHECK(back == t);
}
