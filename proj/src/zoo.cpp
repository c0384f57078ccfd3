#include "ccwb/zoo.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <set>

namespace ccwb {

namespace {

int ceil_log2(int x) { return x <= 1 ? 0 : std::bit_width(static_cast<unsigned>(x - 1)); }

int index_bits(int max_index) { return std::max(1, ceil_log2(max_index + 1)); }

}  // namespace

int hash_eval(const HashDraw& h, uint32_t x) {
  return (std::popcount(h.alpha & x) & 1) ^ static_cast<int>(h.beta);
}

FingerprintPlan::FingerprintPlan(std::vector<CheckShape> checks) : checks_(std::move(checks)) {
  for (const CheckShape& c : checks_) {
    if (c.t < 1 || c.m < 1 || c.m > 30) throw parameter_error("fingerprint check shape out of range");
    offsets_.push_back(total_bits_);
    total_bits_ += c.t * (c.m + 1);
  }
  seed_count_ = total_bits_ <= 62 ? (uint64_t{1} << total_bits_) : 0;
}

HashDraw FingerprintPlan::draw(uint64_t seed, int check, int d) const {
  const CheckShape& shape = checks_.at(check);
  if (d < 0 || d >= shape.t) throw parameter_error("fingerprint draw index out of range");
  HashDraw h;
  if (seed_count_ > 0) {
    int offset = offsets_[check] + d * (shape.m + 1);
    h.alpha = static_cast<uint32_t>((seed >> offset) & ((uint64_t{1} << shape.m) - 1));
    h.beta = static_cast<uint32_t>((seed >> (offset + shape.m)) & 1);
  } else {
    CounterRng rng = CounterRng::keyed({seed, static_cast<uint64_t>(check), static_cast<uint64_t>(d)});
    h.alpha = static_cast<uint32_t>(rng.next() & ((uint64_t{1} << shape.m) - 1));
    h.beta = static_cast<uint32_t>(rng.next() & 1);
  }
  return h;
}

namespace {

// Subtree for one fingerprint check: t Alice levels (one shared membership
// table per level) and Bob's reply node per transcript; on_reply(r) supplies
// the continuation node for reply bit r.
int build_check_subtree(ProtocolTree::Builder& b, const FingerprintPlan& plan, int check, uint64_t seed, int t,
                        const std::vector<int>& alice_index, const std::vector<int>& bob_index,
                        const std::function<int(int)>& on_reply) {
  std::vector<std::vector<uint8_t>> alice_tables(t);
  std::vector<uint32_t> bob_bits(bob_index.size(), 0);  // bit d = Bob's d-th membership bit
  for (int d = 0; d < t; ++d) {
    HashDraw h = plan.draw(seed, check, d);
    auto& table = alice_tables[d];
    table.resize(alice_index.size());
    for (size_t u = 0; u < alice_index.size(); ++u)
      table[u] = static_cast<uint8_t>(hash_eval(h, static_cast<uint32_t>(alice_index[u])));
    for (size_t v = 0; v < bob_index.size(); ++v)
      bob_bits[v] |= static_cast<uint32_t>(hash_eval(h, static_cast<uint32_t>(bob_index[v]))) << d;
  }
  int reply0 = on_reply(0);
  int reply1 = on_reply(1);
  // Build Alice's levels bottom-up over transcripts (bit d of the transcript
  // is the level-d message).
  auto build = [&](auto&& self, int level, uint32_t transcript) -> int {
    if (level == t) {
      std::vector<uint8_t> table(bob_index.size());
      for (size_t v = 0; v < bob_index.size(); ++v) table[v] = bob_bits[v] == transcript;
      return b.add_internal(Player::bob, std::move(table), reply0, reply1);
    }
    int c0 = self(self, level + 1, transcript);
    int c1 = self(self, level + 1, transcript | (uint32_t{1} << level));
    return b.add_internal(Player::alice, alice_tables[level], c0, c1);
  };
  return build(build, 0, 0);
}

RandomizedProtocol fingerprint_match_protocol(std::vector<int> alice_index, std::vector<int> bob_index, int t) {
  if (alice_index.empty() || bob_index.empty()) throw parameter_error("index maps must be nonempty");
  if (t < 1 || t > 16) throw parameter_error("t must be in [1, 16]");
  int max_index = 0;
  for (int x : alice_index) {
    if (x < 0) throw parameter_error("index maps must be non-negative");
    max_index = std::max(max_index, x);
  }
  for (int x : bob_index) {
    if (x < 0) throw parameter_error("index maps must be non-negative");
    max_index = std::max(max_index, x);
  }
  FingerprintPlan plan({{t, index_bits(max_index)}});
  int ad = static_cast<int>(alice_index.size());
  int bd = static_cast<int>(bob_index.size());
  auto a_map = std::make_shared<std::vector<int>>(std::move(alice_index));
  auto b_map = std::make_shared<std::vector<int>>(std::move(bob_index));
  auto sampler = [plan, t, a_map, b_map, ad, bd](uint64_t seed) {
    ProtocolTree::Builder b;
    int leaf0 = b.add_leaf(0);
    int leaf1 = b.add_leaf(1);
    int root = build_check_subtree(b, plan, 0, seed, t, *a_map, *b_map,
                                   [&](int r) { return r == 0 ? leaf0 : leaf1; });
    return std::move(b).finish(ad, bd, root);
  };
  return RandomizedProtocol(ad, bd, t + 1, plan.seed_count(), std::move(sampler));
}

}  // namespace

RandomizedProtocol equality_protocol(const EqualityProtocolParams& params) {
  if (params.domain_size < 1) throw parameter_error("domain_size must be >= 1");
  std::vector<int> identity(params.domain_size);
  for (int i = 0; i < params.domain_size; ++i) identity[i] = i;
  return fingerprint_match_protocol(identity, identity, params.t);
}

RandomizedProtocol star_membership_protocol(const std::vector<int>& alice_index,
                                            const std::vector<int>& bob_index, int t) {
  return fingerprint_match_protocol(alice_index, bob_index, t);
}

RandomizedProtocol star_membership_protocol(const std::vector<int>& partition, int t) {
  return fingerprint_match_protocol(partition, partition, t);
}

BooleanMatrix star_match_matrix(const std::vector<int>& alice_index, const std::vector<int>& bob_index) {
  return BooleanMatrix::build(static_cast<int>(alice_index.size()), static_cast<int>(bob_index.size()),
                              [&](int i, int j) { return alice_index[i] == bob_index[j]; });
}

BooleanMatrix decomposition_matrix(const ForestDecomposition& fd) {
  std::set<MatrixEntry> entries;
  for (const auto* forest : {&fd.forest_1, &fd.forest_2}) entries.insert(forest->begin(), forest->end());
  return BooleanMatrix::build(fd.n_rows, fd.n_cols,
                              [&](int i, int j) { return entries.count(MatrixEntry{i, j}) > 0; });
}

int CompiledSparseProtocol::evaluate(int u, int v, uint64_t seed) const {
  if (u < 0 || u >= n_rows || v < 0 || v >= n_cols) throw parameter_error("input out of domain");
  for (int check = 0; check < 4; ++check) {
    uint32_t a = static_cast<uint32_t>(alice_index[check][u]);
    uint32_t b = static_cast<uint32_t>(bob_index[check][v]);
    if (a == b) return 1;  // all fingerprints match for sure
    bool collide = true;
    for (int d = 0; d < t_check && collide; ++d) {
      HashDraw h = plan.draw(seed, check, d);
      collide = hash_eval(h, a) == hash_eval(h, b);
    }
    if (collide) return 1;
  }
  return 0;
}

BooleanMatrix CompiledSparseProtocol::exact_surrogate_matrix() const {
  return BooleanMatrix::build(n_rows, n_cols, [&](int u, int v) {
    for (int check = 0; check < 4; ++check)
      if (alice_index[check][u] == bob_index[check][v]) return true;
    return false;
  });
}

CompiledSparseProtocol compile_sparse_protocol(const ForestDecomposition& fd, int t_check) {
  if (fd.n_rows < 1 || fd.n_cols < 1) throw parameter_error("decomposition must cover a nonempty matrix");
  if (t_check < 1 || t_check > 16) throw parameter_error("t_check must be in [1, 16]");

  CompiledSparseProtocol cp;
  cp.n_rows = fd.n_rows;
  cp.n_cols = fd.n_cols;
  cp.t_check = t_check;
  auto [u0, u1] = star_decompose(fd.forest_1, fd.n_rows, fd.n_cols);
  auto [u2, u3] = star_decompose(fd.forest_2, fd.n_rows, fd.n_cols);
  cp.star_unions = {std::move(u0), std::move(u1), std::move(u2), std::move(u3)};

  std::vector<FingerprintPlan::CheckShape> shapes;
  for (int check = 0; check < 4; ++check) {
    const StarUnion& su = cp.star_unions[check];
    int stars = static_cast<int>(su.stars.size());
    auto& amap = cp.alice_index[check];
    auto& bmap = cp.bob_index[check];
    amap.resize(fd.n_rows);
    bmap.resize(fd.n_cols);
    int max_index = 0;
    for (int u = 0; u < fd.n_rows; ++u) {
      int s = su.star_of_vertex[u];
      amap[u] = s >= 0 ? s : stars + u;  // unassigned: unique per-vertex sentinel
      max_index = std::max(max_index, amap[u]);
    }
    for (int v = 0; v < fd.n_cols; ++v) {
      int s = su.star_of_vertex[fd.n_rows + v];
      bmap[v] = s >= 0 ? s : stars + fd.n_rows + v;
      max_index = std::max(max_index, bmap[v]);
    }
    shapes.push_back({t_check, index_bits(max_index)});
  }
  cp.plan = FingerprintPlan(std::move(shapes));

  FingerprintPlan plan = cp.plan;
  auto amaps = std::make_shared<std::array<std::vector<int>, 4>>(cp.alice_index);
  auto bmaps = std::make_shared<std::array<std::vector<int>, 4>>(cp.bob_index);
  int nr = fd.n_rows, nc = fd.n_cols, t = t_check;
  auto sampler = [plan, amaps, bmaps, nr, nc, t](uint64_t seed) {
    ProtocolTree::Builder b;
    int leaf0 = b.add_leaf(0);
    int leaf1 = b.add_leaf(1);
    // continuation(check, fired): run checks check..3 with the OR so far.
    std::map<std::pair<int, int>, int> memo;
    auto continuation = [&](auto&& self, int check, int fired) -> int {
      if (check == 4) return fired ? leaf1 : leaf0;
      auto key = std::make_pair(check, fired);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      int idx = build_check_subtree(b, plan, check, seed, t, (*amaps)[check], (*bmaps)[check],
                                    [&](int r) { return self(self, check + 1, fired | r); });
      memo[key] = idx;
      return idx;
    };
    int root = continuation(continuation, 0, 0);
    return std::move(b).finish(nr, nc, root);
  };
  cp.protocol = RandomizedProtocol(nr, nc, 4 * (t_check + 1), plan.seed_count(), std::move(sampler));
  return cp;
}

}  // namespace ccwb
