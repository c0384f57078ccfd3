#include "ccwb/protocol.hpp"

#include <algorithm>
#include <bit>
#include <bitset>
#include <cmath>
#include <map>
#include <memory>

#include "ccwb/parallel.hpp"

namespace ccwb {

namespace {

int ceil_log2(int x) { return x <= 1 ? 0 : std::bit_width(static_cast<unsigned>(x - 1)); }

}  // namespace

std::string to_string(Player p) { return p == Player::alice ? "alice" : "bob"; }

// ---------------------------------------------------------------------------
// ProtocolTree

int ProtocolTree::Builder::add_leaf(int out) {
  if (out != 0 && out != 1) throw parameter_error("leaf output must be 0 or 1");
  Node n;
  n.is_leaf = true;
  n.out = static_cast<uint8_t>(out);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int ProtocolTree::Builder::add_internal(Player owner, std::vector<uint8_t> table, int child0, int child1) {
  int size = static_cast<int>(nodes_.size());
  if (child0 < 0 || child0 >= size || child1 < 0 || child1 >= size)
    throw parameter_error("internal node children must already exist");
  for (uint8_t b : table)
    if (b > 1) throw parameter_error("message table entries must be bits");
  Node n;
  n.is_leaf = false;
  n.owner = owner;
  n.table = std::move(table);
  n.child[0] = child0;
  n.child[1] = child1;
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

ProtocolTree ProtocolTree::Builder::finish(int alice_domain, int bob_domain, int root) && {
  if (alice_domain < 1 || bob_domain < 1) throw parameter_error("input domains must be >= 1");
  if (root < 0 || root >= static_cast<int>(nodes_.size())) throw parameter_error("root index out of range");
  for (const Node& n : nodes_) {
    if (n.is_leaf) continue;
    size_t want = static_cast<size_t>(n.owner == Player::alice ? alice_domain : bob_domain);
    if (n.table.size() != want) throw parameter_error("message table size does not match the owner's domain");
  }
  ProtocolTree t;
  t.alice_domain_ = alice_domain;
  t.bob_domain_ = bob_domain;
  t.root_ = root;
  t.nodes_ = std::move(nodes_);
  return t;
}

ProtocolTree ProtocolTree::single_leaf(int alice_domain, int bob_domain, int out) {
  Builder b;
  int leaf = b.add_leaf(out);
  return std::move(b).finish(alice_domain, bob_domain, leaf);
}

int ProtocolTree::depth() const {
  if (root_ < 0) return 0;
  // Children precede parents in the arena, so one forward pass suffices and
  // shared subtrees are measured once.
  std::vector<int> d(nodes_.size(), 0);
  for (size_t idx = 0; idx < nodes_.size(); ++idx) {
    const Node& n = nodes_[idx];
    if (!n.is_leaf) d[idx] = 1 + std::max(d[n.child[0]], d[n.child[1]]);
  }
  return d[root_];
}

ProtocolTree::RunResult ProtocolTree::run(int i, int j) const {
  if (root_ < 0) throw parameter_error("run on an empty tree");
  if (i < 0 || i >= alice_domain_ || j < 0 || j >= bob_domain_) throw parameter_error("input out of domain");
  RunResult res;
  int32_t at = root_;
  while (!nodes_[at].is_leaf) {
    const Node& n = nodes_[at];
    int b = n.table[n.owner == Player::alice ? i : j];
    res.transcript += static_cast<char>('0' + b);
    at = n.child[b];
  }
  res.output = nodes_[at].out;
  res.cost = static_cast<int>(res.transcript.size());
  return res;
}

nlohmann::json ProtocolTree::to_json() const {
  if (root_ < 0) throw parameter_error("serialize on an empty tree");
  // Serialization unfolds shared subtrees; refuse pathological blowups.
  std::vector<int64_t> unfolded(nodes_.size(), 0);
  for (size_t idx = 0; idx < nodes_.size(); ++idx) {
    const Node& n = nodes_[idx];
    unfolded[idx] = n.is_leaf ? 1 : 1 + unfolded[n.child[0]] + unfolded[n.child[1]];
    if (unfolded[idx] > (int64_t{1} << 20)) throw parameter_error("tree too large to serialize");
  }
  std::vector<nlohmann::json> docs(nodes_.size());
  for (size_t idx = 0; idx < nodes_.size(); ++idx) {
    const Node& n = nodes_[idx];
    if (n.is_leaf) {
      docs[idx] = nlohmann::json{{"out", static_cast<int>(n.out)}};
    } else {
      nlohmann::json tab = nlohmann::json::array();
      for (uint8_t b : n.table) tab.push_back(static_cast<int>(b));
      docs[idx] = nlohmann::json{{"owner", to_string(n.owner)},
                                 {"table", std::move(tab)},
                                 {"children", nlohmann::json::array({docs[n.child[0]], docs[n.child[1]]})}};
    }
  }
  return docs[root_];
}

namespace {

int parse_tree_node(const nlohmann::json& doc, ProtocolTree::Builder& b) {
  if (doc.contains("out")) return b.add_leaf(doc.at("out").get<int>());
  std::string owner = doc.at("owner").get<std::string>();
  if (owner != "alice" && owner != "bob") throw io_error("owner must be \"alice\" or \"bob\"");
  std::vector<uint8_t> table;
  for (const auto& v : doc.at("table")) table.push_back(static_cast<uint8_t>(v.get<int>()));
  const auto& children = doc.at("children");
  if (!children.is_array() || children.size() != 2) throw parameter_error("internal node needs exactly two children");
  int c0 = parse_tree_node(children[0], b);
  int c1 = parse_tree_node(children[1], b);
  return b.add_internal(owner == "alice" ? Player::alice : Player::bob, std::move(table), c0, c1);
}

}  // namespace

ProtocolTree ProtocolTree::from_json(const nlohmann::json& doc, int alice_domain, int bob_domain) {
  try {
    Builder b;
    int root = parse_tree_node(doc, b);
    return std::move(b).finish(alice_domain, bob_domain, root);
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("malformed protocol document: ") + e.what());
  } catch (const parameter_error& e) {
    throw io_error(std::string("malformed protocol document: ") + e.what());
  }
}

bool ProtocolTree::operator==(const ProtocolTree& other) const {
  if (alice_domain_ != other.alice_domain_ || bob_domain_ != other.bob_domain_) return false;
  if (root_ < 0 || other.root_ < 0) return root_ == other.root_;
  // Structural equality of the unfolded trees, memoized over node pairs so
  // shared subtrees stay cheap.  Children precede parents, so no cycles.
  std::map<std::pair<int32_t, int32_t>, bool> memo;
  auto eq = [&](auto&& self, int32_t a, int32_t b) -> bool {
    auto key = std::make_pair(a, b);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const Node& na = nodes_[a];
    const Node& nb = other.nodes_[b];
    bool res;
    if (na.is_leaf != nb.is_leaf) {
      res = false;
    } else if (na.is_leaf) {
      res = na.out == nb.out;
    } else {
      res = na.owner == nb.owner && na.table == nb.table &&
            self(self, na.child[0], nb.child[0]) && self(self, na.child[1], nb.child[1]);
    }
    memo[key] = res;
    return res;
  };
  return eq(eq, root_, other.root_);
}

ProtocolTree::RunResult run_deterministic(const ProtocolTree& tree, int i, int j) { return tree.run(i, j); }

bool computes(const ProtocolTree& tree, const BooleanMatrix& m) {
  if (tree.alice_domain() != m.n_rows() || tree.bob_domain() != m.n_cols())
    throw parameter_error("computes: domain mismatch");
  for (int i = 0; i < m.n_rows(); ++i)
    for (int j = 0; j < m.n_cols(); ++j)
      if (tree.run(i, j).output != static_cast<int>(m.get_unchecked(i, j))) return false;
  return true;
}

ProtocolTree index_protocol(const BooleanMatrix& m) {
  int rows = m.n_rows(), cols = m.n_cols();
  if (rows < 1 || cols < 1) throw parameter_error("index_protocol: empty matrix");
  int bits = ceil_log2(rows);
  ProtocolTree::Builder b;
  int leaf0 = b.add_leaf(0);
  int leaf1 = b.add_leaf(1);
  // Bob's reply node for each fully announced row prefix.
  std::vector<int> level(static_cast<size_t>(1) << bits);
  for (size_t p = 0; p < level.size(); ++p) {
    int row = std::min(static_cast<int>(p), rows - 1);
    std::vector<uint8_t> table(cols);
    for (int j = 0; j < cols; ++j) table[j] = m.get_unchecked(row, j);
    level[p] = b.add_internal(Player::bob, std::move(table), leaf0, leaf1);
  }
  // Alice announces her row index, most significant bit first: the level of
  // size 2^l sits at depth l and therefore announces bit bits-l-1.
  for (int l = bits - 1; l >= 0; --l) {
    std::vector<int> next(static_cast<size_t>(1) << l);
    for (size_t q = 0; q < next.size(); ++q) {
      std::vector<uint8_t> table(rows);
      for (int i = 0; i < rows; ++i) table[i] = (i >> (bits - l - 1)) & 1;
      next[q] = b.add_internal(Player::alice, std::move(table), level[2 * q], level[2 * q + 1]);
    }
    level = std::move(next);
  }
  return std::move(b).finish(rows, cols, level[0]);
}

// ---------------------------------------------------------------------------
// RandomizedProtocol

RandomizedProtocol::RandomizedProtocol(int alice_domain, int bob_domain, int cost_bound, uint64_t seed_count,
                                       std::function<ProtocolTree(uint64_t)> sampler)
    : alice_domain_(alice_domain),
      bob_domain_(bob_domain),
      cost_bound_(cost_bound),
      seed_count_(seed_count),
      sampler_(std::move(sampler)) {
  if (alice_domain < 1 || bob_domain < 1) throw parameter_error("input domains must be >= 1");
  if (cost_bound < 0) throw parameter_error("cost bound must be >= 0");
  if (!sampler_) throw parameter_error("sampler must be callable");
}

ProtocolTree RandomizedProtocol::sample(uint64_t seed) const {
  if (!sampler_) throw parameter_error("sample on an empty protocol");
  if (finite() && seed >= seed_count_) throw parameter_error("seed outside the declared finite domain");
  ProtocolTree t = sampler_(seed);
  if (t.alice_domain() != alice_domain_ || t.bob_domain() != bob_domain_)
    throw validation_error("sampled tree has the wrong input domain");
  if (t.depth() > cost_bound_) throw validation_error("sampled tree exceeds the cost bound");
  return t;
}

uint64_t RandomizedProtocol::draw_seed(CounterRng& rng) const {
  return finite() ? rng.below(seed_count_) : rng.next();
}

RandomizedProtocol point_mass(ProtocolTree tree) {
  int ad = tree.alice_domain(), bd = tree.bob_domain(), depth = tree.depth();
  auto shared = std::make_shared<ProtocolTree>(std::move(tree));
  return RandomizedProtocol(ad, bd, depth, 1, [shared](uint64_t) { return *shared; });
}

// ---------------------------------------------------------------------------
// Error measurement

namespace {

constexpr uint64_t kExactSeedCap = uint64_t{1} << 24;

// Accumulates per-input wrong-output counts over a seed schedule, striped
// across workers.  Integer sums make the reduction order-independent, so the
// counts are identical for every worker count.
template <typename SeedAt>
std::vector<int64_t> count_wrong(const RandomizedProtocol& rp, const BooleanMatrix& m, int64_t num_draws,
                                 const SeedAt& seed_at) {
  int nr = m.n_rows(), nc = m.n_cols();
  int workers = worker_count();
  std::vector<std::vector<int64_t>> partial(workers);
  run_tasks(workers, [&](int64_t w) {
    auto& wrong = partial[w];
    wrong.assign(static_cast<size_t>(nr) * nc, 0);
    for (int64_t s = w; s < num_draws; s += workers) {
      ProtocolTree tree = rp.sample(seed_at(s));
      for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j)
          wrong[static_cast<size_t>(i) * nc + j] += tree.run(i, j).output != static_cast<int>(m.get_unchecked(i, j));
    }
  });
  std::vector<int64_t> wrong(static_cast<size_t>(nr) * nc, 0);
  for (const auto& p : partial)
    for (size_t idx = 0; idx < wrong.size(); ++idx) wrong[idx] += p[idx];
  return wrong;
}

void check_domains(const RandomizedProtocol& rp, const BooleanMatrix& m) {
  if (rp.alice_domain() != m.n_rows() || rp.bob_domain() != m.n_cols())
    throw parameter_error("protocol domain does not match the matrix");
}

// Lexicographically smallest maximizer of the count array.
std::pair<int64_t, std::pair<int, int>> max_with_argmax(const std::vector<int64_t>& counts, int nc) {
  int64_t worst = -1;
  std::pair<int, int> at{0, 0};
  for (size_t idx = 0; idx < counts.size(); ++idx) {
    if (counts[idx] > worst) {
      worst = counts[idx];
      at = {static_cast<int>(idx) / nc, static_cast<int>(idx) % nc};
    }
  }
  return {worst, at};
}

}  // namespace

ErrorReport error_exact(const RandomizedProtocol& rp, const BooleanMatrix& m) {
  check_domains(rp, m);
  if (!rp.finite()) throw parameter_error("error_exact requires a finite seed domain (use error_monte_carlo)");
  if (rp.seed_count() > kExactSeedCap)
    throw parameter_error("seed domain too large for exact enumeration (use error_monte_carlo)");
  auto wrong = count_wrong(rp, m, static_cast<int64_t>(rp.seed_count()),
                           [](int64_t s) { return static_cast<uint64_t>(s); });
  auto [worst, at] = max_with_argmax(wrong, m.n_cols());
  ErrorReport rep;
  rep.method = ErrorReport::Method::exact;
  rep.worst_input = at;
  rep.max_error_exact = Rational(worst, static_cast<int64_t>(rp.seed_count()));
  rep.max_error = rep.max_error_exact.to_double();
  return rep;
}

ErrorReport error_monte_carlo(const RandomizedProtocol& rp, const BooleanMatrix& m, int64_t samples_per_input,
                              uint64_t seed) {
  check_domains(rp, m);
  if (samples_per_input < 1) throw parameter_error("samples_per_input must be >= 1");
  // One tree per sample index, shared across all inputs: each input's draws
  // are i.i.d. from rp and a single sweep serves the whole matrix.
  auto wrong = count_wrong(rp, m, samples_per_input, [&](int64_t s) {
    CounterRng rng = CounterRng::keyed({seed, static_cast<uint64_t>(s)});
    return rp.draw_seed(rng);
  });
  auto [worst, at] = max_with_argmax(wrong, m.n_cols());
  ErrorReport rep;
  rep.method = ErrorReport::Method::monte_carlo;
  rep.samples_per_input = samples_per_input;
  rep.confidence = 0.99;
  rep.radius = std::sqrt(std::log(2.0 / (1.0 - rep.confidence)) / (2.0 * static_cast<double>(samples_per_input)));
  rep.worst_input = at;
  rep.max_error = static_cast<double>(worst) / static_cast<double>(samples_per_input);
  return rep;
}

// ---------------------------------------------------------------------------
// Amplification

namespace {

// Sequential composition of the given trees where both parties tally the
// outputs and the leaf reports the majority.  States (k, ones-so-far) share
// subtrees, so the composed arena stays polynomial in reps * tree size.
ProtocolTree compose_majority(const std::vector<ProtocolTree>& trees) {
  int reps = static_cast<int>(trees.size());
  int ad = trees[0].alice_domain(), bd = trees[0].bob_domain();
  ProtocolTree::Builder b;
  std::map<std::pair<int, int>, int> continuation;  // (k, ones) -> node index

  auto build = [&](auto&& self, int k, int ones) -> int {
    auto key = std::make_pair(k, ones);
    if (auto it = continuation.find(key); it != continuation.end()) return it->second;
    int idx;
    if (k == reps) {
      idx = b.add_leaf(2 * ones > reps ? 1 : 0);
    } else {
      // Graft tree k, replacing each leaf by the continuation for its output.
      const auto& nodes = trees[k].nodes();
      std::vector<int> remap(nodes.size(), -1);
      for (size_t t = 0; t < nodes.size(); ++t) {
        const ProtocolTree::Node& n = nodes[t];
        if (n.is_leaf)
          remap[t] = self(self, k + 1, ones + n.out);
        else
          remap[t] = b.add_internal(n.owner, n.table, remap[n.child[0]], remap[n.child[1]]);
      }
      idx = remap[trees[k].root_index()];
    }
    continuation[key] = idx;
    return idx;
  };
  int root = build(build, 0, 0);
  return std::move(b).finish(ad, bd, root);
}

}  // namespace

RandomizedProtocol amplify(const RandomizedProtocol& rp, int repetitions) {
  if (repetitions < 1 || repetitions % 2 == 0) throw parameter_error("repetitions must be odd and >= 1");
  if (repetitions == 1) return rp;
  // Composed seed domain: base^reps when finite and it fits, else 64-bit.
  uint64_t count = 0;
  if (rp.finite()) {
    unsigned __int128 c = 1;
    for (int k = 0; k < repetitions; ++k) {
      c *= rp.seed_count();
      if (c > (static_cast<unsigned __int128>(1) << 62)) {
        c = 0;
        break;
      }
    }
    count = static_cast<uint64_t>(c);
  }
  int reps = repetitions;
  RandomizedProtocol base = rp;
  auto sampler = [base, reps, count](uint64_t seed) {
    std::vector<ProtocolTree> trees;
    trees.reserve(reps);
    uint64_t rest = seed;
    for (int k = 0; k < reps; ++k) {
      uint64_t sub;
      if (count > 0) {
        sub = rest % base.seed_count();  // digit k of the composed index
        rest /= base.seed_count();
      } else if (base.finite()) {
        CounterRng rng = CounterRng::keyed({seed, static_cast<uint64_t>(k)});
        sub = rng.below(base.seed_count());
      } else {
        sub = mix64(seed, static_cast<uint64_t>(k));
      }
      trees.push_back(base.sample(sub));
    }
    return compose_majority(trees);
  };
  return RandomizedProtocol(rp.alice_domain(), rp.bob_domain(), rp.cost_bound() * repetitions, count,
                            std::move(sampler));
}

Rational amplified_error(const Rational& eps, int repetitions) {
  if (repetitions < 1 || repetitions % 2 == 0) throw parameter_error("repetitions must be odd and >= 1");
  if (repetitions > 61) throw parameter_error("repetitions too large for exact binomial arithmetic");
  Rational p = eps, q = Rational(1) - eps;
  Rational total(0);
  for (int k = repetitions / 2 + 1; k <= repetitions; ++k) {
    int64_t binom = 1;  // C(reps, k); the running value stays integral and fits int64 for reps <= 61
    for (int s = 0; s < k; ++s) binom = binom * (repetitions - s) / (s + 1);
    total = total + Rational(binom) * pow(p, k) * pow(q, repetitions - k);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Row zeroing

RandomizedProtocol lift_row_zeroing(const RandomizedProtocol& rp, int zeroed_row) {
  if (zeroed_row < 0 || zeroed_row >= rp.alice_domain()) throw parameter_error("zeroed row out of range");
  RandomizedProtocol base = rp;
  int ad = rp.alice_domain();
  auto sampler = [base, zeroed_row, ad](uint64_t seed) {
    ProtocolTree inner = base.sample(seed);
    ProtocolTree::Builder b;
    const auto& nodes = inner.nodes();
    std::vector<int> remap(nodes.size(), -1);
    for (size_t t = 0; t < nodes.size(); ++t) {
      const ProtocolTree::Node& n = nodes[t];
      remap[t] = n.is_leaf ? b.add_leaf(n.out)
                           : b.add_internal(n.owner, n.table, remap[n.child[0]], remap[n.child[1]]);
    }
    int zero_leaf = b.add_leaf(0);
    std::vector<uint8_t> table(ad, 0);
    table[zeroed_row] = 1;  // announce "my input is the zeroed row"
    int root = b.add_internal(Player::alice, std::move(table), remap[inner.root_index()], zero_leaf);
    return std::move(b).finish(inner.alice_domain(), inner.bob_domain(), root);
  };
  return RandomizedProtocol(rp.alice_domain(), rp.bob_domain(), rp.cost_bound() + 1, rp.seed_count(),
                            std::move(sampler));
}

// ---------------------------------------------------------------------------
// Derandomization

bool majority_computes(const std::vector<ProtocolTree>& trees, const BooleanMatrix& m) {
  if (trees.empty()) throw parameter_error("majority of zero trees");
  int t = static_cast<int>(trees.size());
  for (const ProtocolTree& tr : trees)
    if (tr.alice_domain() != m.n_rows() || tr.bob_domain() != m.n_cols())
      throw parameter_error("majority_computes: domain mismatch");
  for (int i = 0; i < m.n_rows(); ++i) {
    for (int j = 0; j < m.n_cols(); ++j) {
      int ones = 0;
      for (const ProtocolTree& tr : trees) ones += tr.run(i, j).output;
      int maj = 2 * ones > t ? 1 : 0;
      if (maj != static_cast<int>(m.get_unchecked(i, j))) return false;
    }
  }
  return true;
}

std::optional<DerandomizeResult> derandomize_majority(const BooleanMatrix& m, const RandomizedProtocol& rp,
                                                      int t, int attempts, uint64_t seed) {
  check_domains(rp, m);
  if (t < 1 || t % 2 == 0) throw parameter_error("t must be odd and >= 1");
  if (attempts < 1) throw parameter_error("attempts must be >= 1");
  for (int attempt = 0; attempt < attempts; ++attempt) {
    CounterRng rng = CounterRng::keyed({seed, static_cast<uint64_t>(attempt)});
    std::vector<ProtocolTree> trees;
    trees.reserve(t);
    for (int k = 0; k < t; ++k) trees.push_back(rp.sample(rp.draw_seed(rng)));
    if (majority_computes(trees, m)) return DerandomizeResult{std::move(trees), attempt + 1};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Tiny-scale enumeration

std::vector<BooleanMatrix> enumerate_cost_c_matrices(int n, int c) {
  if (n < 1 || n > 4) throw parameter_error("enumerate_cost_c_matrices: n must be in [1, 4]");
  if (c < 0 || c > 3) throw parameter_error("enumerate_cost_c_matrices: c must be in [0, 3]");
  int cells = n * n;
  uint32_t full = cells == 32 ? ~uint32_t{0} : ((uint32_t{1} << cells) - 1);
  size_t universe = size_t{1} << cells;

  std::vector<char> seen(universe, 0);
  std::vector<uint32_t> members;
  auto insert = [&](uint32_t key) {
    if (!seen[key]) {
      seen[key] = 1;
      members.push_back(key);
    }
  };
  insert(0);
  insert(full);  // single-leaf trees compute exactly the constants

  // Row-select and column-select masks for each message table.
  uint32_t row_block = (uint32_t{1} << n) - 1;
  std::vector<uint32_t> alice_mask(size_t{1} << n, 0), bob_mask(size_t{1} << n, 0);
  for (uint32_t tau = 0; tau < (uint32_t{1} << n); ++tau) {
    for (int i = 0; i < n; ++i)
      if ((tau >> i) & 1) alice_mask[tau] |= row_block << (i * n);
    for (int i = 0; i < n; ++i) bob_mask[tau] |= tau << (i * n);
  }

  // A root with table tau over m0, m1 computes (m0 & ~mask) | (m1 & mask)
  // where mask selects the rows (Alice) or columns (Bob) routed to m1.  For a
  // fixed mask only the restrictions m0 & ~mask and m1 & mask matter, so the
  // pair loop collapses to a product of two deduplicated restriction sets.
  std::vector<char> scratch(universe);
  std::vector<uint32_t> left, right, fresh;
  for (int depth = 1; depth <= c; ++depth) {
    fresh.clear();
    for (const auto& masks : {alice_mask, bob_mask}) {
      for (uint32_t tau = 0; tau < (uint32_t{1} << n); ++tau) {
        uint32_t mask = masks[tau];
        left.clear();
        right.clear();
        std::fill(scratch.begin(), scratch.end(), 0);
        for (uint32_t key : members) {
          uint32_t v = key & ~mask;
          if (!scratch[v]) {
            scratch[v] = 1;
            left.push_back(v);
          }
        }
        std::fill(scratch.begin(), scratch.end(), 0);
        for (uint32_t key : members) {
          uint32_t v = key & mask;
          if (!scratch[v]) {
            scratch[v] = 1;
            right.push_back(v);
          }
        }
        for (uint32_t a : left)
          for (uint32_t bpart : right) {
            uint32_t key = a | bpart;
            if (!seen[key]) {
              seen[key] = 1;
              fresh.push_back(key);
            }
          }
      }
    }
    members.insert(members.end(), fresh.begin(), fresh.end());
  }

  std::sort(members.begin(), members.end());
  std::vector<BooleanMatrix> out;
  out.reserve(members.size());
  for (uint32_t key : members)
    out.push_back(BooleanMatrix::build(n, n, [&](int i, int j) { return (key >> (i * n + j)) & 1; }));
  return out;
}

// ---------------------------------------------------------------------------
// Exact deterministic communication complexity

int deterministic_cc_exact(const BooleanMatrix& m) {
  int nr = m.n_rows(), nc = m.n_cols();
  if (nr < 1 || nc < 1) throw parameter_error("deterministic_cc_exact: empty matrix");
  if (nr > 8 || nc > 8) throw parameter_error("deterministic_cc_exact: sides must be <= 8");
  std::vector<uint32_t> row_bits(nr, 0);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j)
      if (m.get_unchecked(i, j)) row_bits[i] |= uint32_t{1} << j;

  std::vector<int8_t> memo(size_t{1} << (nr + nc), -1);
  auto solve = [&](auto&& self, uint32_t rm, uint32_t cm) -> int {
    if (rm == 0 || cm == 0) return 0;
    size_t key = (static_cast<size_t>(rm) << nc) | cm;
    if (memo[key] >= 0) return memo[key];
    uint32_t and_acc = cm, or_acc = 0;
    for (uint32_t r = rm; r != 0; r &= r - 1) {
      uint32_t row = row_bits[std::countr_zero(r)] & cm;
      and_acc &= row;
      or_acc |= row;
    }
    if (or_acc == 0 || and_acc == cm) {
      memo[key] = 0;
      return 0;
    }
    int best = 127;
    // Speaking player splits their own index set; enumerate unordered
    // bipartitions once by pinning the lowest index into the first part.
    auto try_splits = [&](uint32_t setmask, bool alice) {
      uint32_t low = setmask & (~setmask + 1);
      uint32_t rest = setmask ^ low;
      for (uint32_t sub = rest;; sub = (sub - 1) & rest) {
        uint32_t part1 = sub | low;
        if (part1 != setmask) {
          uint32_t part2 = setmask ^ part1;
          int d = alice ? std::max(self(self, part1, cm), self(self, part2, cm))
                        : std::max(self(self, rm, part1), self(self, rm, part2));
          best = std::min(best, d);
        }
        if (sub == 0) break;
      }
    };
    try_splits(rm, true);
    try_splits(cm, false);
    memo[key] = static_cast<int8_t>(best + 1);
    return best + 1;
  };
  return solve(solve, (uint32_t{1} << nr) - 1, (uint32_t{1} << nc) - 1);
}

}  // namespace ccwb
