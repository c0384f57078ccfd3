#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ccwb/bitmatrix.hpp"
#include "ccwb/rational.hpp"
#include "ccwb/rng.hpp"

namespace ccwb {

enum class Player : uint8_t { alice, bob };

// Deterministic two-party protocol tree.  Internal nodes carry the speaking
// player and a message table over that player's input domain; bit 0 routes to
// the left child, bit 1 to the right.  Leaves carry the output bit.  A
// single-leaf tree (cost 0) is permitted and computes a constant matrix.
//
// Nodes live in an arena and children are indices, so structurally shared
// subtrees are allowed (the semantics are those of the unfolded tree); depth
// and serialization handle sharing via memoization.
class ProtocolTree {
 public:
  struct Node {
    bool is_leaf = true;
    uint8_t out = 0;                // leaves
    Player owner = Player::alice;   // internal nodes
    std::vector<uint8_t> table;     // internal nodes, size = owner's domain
    int32_t child[2] = {-1, -1};    // internal nodes
  };

  struct RunResult {
    int output = 0;
    int cost = 0;
    std::string transcript;  // root-to-leaf bit path, '0'/'1'
  };

  class Builder {
   public:
    int add_leaf(int out);
    int add_internal(Player owner, std::vector<uint8_t> table, int child0, int child1);
    // Finishes with the given root; validates table sizes and child links.
    ProtocolTree finish(int alice_domain, int bob_domain, int root) &&;

   private:
    std::vector<Node> nodes_;
  };

  ProtocolTree() = default;

  static ProtocolTree single_leaf(int alice_domain, int bob_domain, int out);

  int alice_domain() const { return alice_domain_; }
  int bob_domain() const { return bob_domain_; }
  size_t node_count() const { return nodes_.size(); }
  // Read-only arena access (children always precede parents).
  const std::vector<Node>& nodes() const { return nodes_; }
  int32_t root_index() const { return root_; }
  int depth() const;

  RunResult run(int i, int j) const;

  nlohmann::json to_json() const;
  static ProtocolTree from_json(const nlohmann::json& doc, int alice_domain, int bob_domain);

  bool operator==(const ProtocolTree& other) const;  // semantic equality of unfolded trees

 private:
  int alice_domain_ = 0;
  int bob_domain_ = 0;
  int32_t root_ = -1;
  std::vector<Node> nodes_;

  friend class Builder;
};

ProtocolTree::RunResult run_deterministic(const ProtocolTree& tree, int i, int j);

// True iff the tree outputs m[i][j] on every input (full sweep).
bool computes(const ProtocolTree& tree, const BooleanMatrix& m);

// "Alice announces her row index, Bob replies with the entry": cost
// ceil(log2 n_rows) + 1 (or 1 when there is a single row).
ProtocolTree index_protocol(const BooleanMatrix& m);

// Public-coin randomized protocol: a deterministic sampler from seeds to
// protocol trees of depth <= cost_bound.  seed_count > 0 declares a finite
// enumerable seed domain {0, ..., seed_count-1} (uniform); seed_count == 0
// means the domain is the full 64-bit seed space, usable only with Monte
// Carlo estimation.
class RandomizedProtocol {
 public:
  RandomizedProtocol() = default;
  RandomizedProtocol(int alice_domain, int bob_domain, int cost_bound, uint64_t seed_count,
                     std::function<ProtocolTree(uint64_t)> sampler);

  int alice_domain() const { return alice_domain_; }
  int bob_domain() const { return bob_domain_; }
  int cost_bound() const { return cost_bound_; }
  bool finite() const { return seed_count_ > 0; }
  uint64_t seed_count() const { return seed_count_; }

  ProtocolTree sample(uint64_t seed) const;  // seed < seed_count when finite

  // Draws a seed uniformly (from the declared domain) and samples.
  uint64_t draw_seed(CounterRng& rng) const;

 private:
  int alice_domain_ = 0;
  int bob_domain_ = 0;
  int cost_bound_ = 0;
  uint64_t seed_count_ = 0;
  std::function<ProtocolTree(uint64_t)> sampler_;
};

// Point mass on a single deterministic tree.
RandomizedProtocol point_mass(ProtocolTree tree);

struct ErrorReport {
  enum class Method { exact, monte_carlo };
  Method method = Method::exact;
  Rational max_error_exact;              // exact method only
  double max_error = 0.0;                // both methods
  std::pair<int, int> worst_input{0, 0}; // lexicographically smallest maximizer
  int64_t samples_per_input = 0;         // monte_carlo only
  double confidence = 0.0;               // monte_carlo only
  double radius = 0.0;                   // monte_carlo: two-sided Hoeffding radius
};

// Exact per-input error by enumerating the full seed domain; refuses domains
// larger than 2^24 outcomes (use error_monte_carlo instead).
ErrorReport error_exact(const RandomizedProtocol& rp, const BooleanMatrix& m);

// Per-input empirical error from samples_per_input independent seeds per
// input, with a two-sided 99% Hoeffding confidence radius.
ErrorReport error_monte_carlo(const RandomizedProtocol& rp, const BooleanMatrix& m,
                              int64_t samples_per_input, uint64_t seed);

// Runs rp `repetitions` times independently and takes the majority output.
// Both parties see every communicated bit, so the majority is common
// knowledge and costs no extra bit: cost_bound = repetitions * cost(rp).
RandomizedProtocol amplify(const RandomizedProtocol& rp, int repetitions);

// Error map of majority amplification: P[Binomial(reps, eps) > reps/2].
Rational amplified_error(const Rational& eps, int repetitions);

// Protocol for zero_out_row(m, row) from a protocol for m: Alice first
// announces whether her input is the zeroed row; if so both output 0,
// otherwise the original protocol runs.  Cost grows by exactly 1 and no
// input's error increases.
RandomizedProtocol lift_row_zeroing(const RandomizedProtocol& rp, int zeroed_row);

struct DerandomizeResult {
  std::vector<ProtocolTree> trees;
  int attempts_used = 0;
};

// Entrywise majority vote of the given trees compared against m (full sweep).
bool majority_computes(const std::vector<ProtocolTree>& trees, const BooleanMatrix& m);

// Samples t trees i.i.d. from rp and checks majority{pi_1(i,j), ..., pi_t(i,j)}
// = m[i][j] on all inputs; retries up to `attempts` draws of the whole bundle.
// Empty result = failure (t too small for this matrix).
std::optional<DerandomizeResult> derandomize_majority(const BooleanMatrix& m, const RandomizedProtocol& rp,
                                                      int t, int attempts, uint64_t seed);

// The exact set of n x n matrices computable by protocol trees of depth <= c,
// by exhaustive bottom-up tree enumeration with deduplication.  Tiny domains
// only (n <= 4, c <= 3).  Canonical order: lexicographic by row-major bits.
std::vector<BooleanMatrix> enumerate_cost_c_matrices(int n, int c);

// Exact deterministic communication complexity via memoized recursion over
// sub-rectangles: D = 0 on constant rectangles, else 1 + min over speaking
// player and bipartitions of that player's index set of the max over parts.
// Requires n_rows, n_cols <= 8.
int deterministic_cc_exact(const BooleanMatrix& m);

std::string to_string(Player p);

}  // namespace ccwb
