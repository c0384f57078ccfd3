#pragma once

#include <cstdint>
#include <vector>

#include "ccwb/protocol.hpp"
#include "ccwb/structure.hpp"

namespace ccwb {

// One shared random subset, described by an affine parity test over index
// bits: x is in the subset iff parity(alpha & x) XOR beta = 1.  For any fixed
// pair x != y (below 2^m) the membership bits collide with probability
// exactly 1/2 over a uniform (alpha, beta), which is all the equality
// protocol needs; drawing from this 2^(m+1)-element family instead of all
// 2^(2^m) subsets keeps seed domains small enough to enumerate exactly.
struct HashDraw {
  uint32_t alpha = 0;
  uint32_t beta = 0;
};

int hash_eval(const HashDraw& h, uint32_t x);

// Seed layout for one or more fingerprint checks (check c uses t_c draws of
// m_c + 1 bits each).  When the total bit count fits, the declared seed
// domain is finite ({0,1}^bits, uniform); otherwise draws are derived from a
// 64-bit seed through the counter RNG.
class FingerprintPlan {
 public:
  struct CheckShape {
    int t = 0;  // draws
    int m = 0;  // alpha bits per draw
  };

  FingerprintPlan() = default;
  explicit FingerprintPlan(std::vector<CheckShape> checks);

  uint64_t seed_count() const { return seed_count_; }  // 0 when 64-bit seeded
  int total_bits() const { return total_bits_; }
  HashDraw draw(uint64_t seed, int check, int d) const;

 private:
  std::vector<CheckShape> checks_;
  std::vector<int> offsets_;
  int total_bits_ = 0;
  uint64_t seed_count_ = 0;
};

struct EqualityProtocolParams {
  int domain_size = 0;
  int t = 0;  // fingerprint rounds
};

// Subset-fingerprint equality: for each of t shared random subsets Alice
// sends her input's membership bit; Bob replies 1 iff his input's bits all
// match.  Cost t + 1; computes I_n with one-sided error exactly 2^{-t} on
// unequal inputs.
RandomizedProtocol equality_protocol(const EqualityProtocolParams& params);

// Star-membership: Alice maps her input u to alice_index[u], Bob his to
// bob_index[v], and they run the equality protocol on the mapped indices.
// Computes m[u][v] = [alice_index[u] == bob_index[v]] with one-sided error
// 2^{-t}.  Indices must be non-negative.
RandomizedProtocol star_membership_protocol(const std::vector<int>& alice_index,
                                            const std::vector<int>& bob_index, int t);

// Shared-map convenience: both players' inputs live in [partition.size()).
RandomizedProtocol star_membership_protocol(const std::vector<int>& partition, int t);

// The 0/1 matrix [alice_index[u] == bob_index[v]]: what the protocol above
// computes when fingerprints never collide.
BooleanMatrix star_match_matrix(const std::vector<int>& alice_index, const std::vector<int>& bob_index);

// Constant-cost protocol for a peelable sparse matrix F, compiled from its
// two-forest decomposition: star-decompose each forest into two star unions,
// run one star-membership check per union (always exactly four checks; empty
// unions are padded with all-sentinel maps), and output the OR of the
// replies.  Never errs on 1-entries; errs on 0-entries with probability
// <= 4 * 2^{-t_check}; cost exactly 4 * (t_check + 1) on every input.
struct CompiledSparseProtocol {
  int n_rows = 0;
  int n_cols = 0;
  int t_check = 0;
  std::array<StarUnion, 4> star_unions;
  // Per check: star index or per-vertex sentinel, for Alice's rows and
  // Bob's columns.
  std::array<std::vector<int>, 4> alice_index;
  std::array<std::vector<int>, 4> bob_index;
  FingerprintPlan plan;
  RandomizedProtocol protocol;

  int cost() const { return 4 * (t_check + 1); }

  // Semantic fast path, equal to protocol.sample(seed).run(u, v).output but
  // without building the tree.
  int evaluate(int u, int v, uint64_t seed) const;

  // Fingerprints replaced by full index exchange: the matrix the protocol
  // computes when no collision ever happens (sanity oracle).
  BooleanMatrix exact_surrogate_matrix() const;
};

CompiledSparseProtocol compile_sparse_protocol(const ForestDecomposition& fd, int t_check = 4);

// The matrix a forest decomposition covers (union of both forests' edges).
BooleanMatrix decomposition_matrix(const ForestDecomposition& fd);

}  // namespace ccwb
