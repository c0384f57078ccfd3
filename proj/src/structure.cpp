#include "ccwb/structure.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "ccwb/parallel.hpp"
#include "ccwb/rng.hpp"

namespace ccwb {

namespace {

// Union-find over global vertex ids; add_edge returns false on a cycle.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// Shared peeling engine; pick_fn chooses among the currently peelable lines
// (encoded as row index i, or n_rows + j for column j).
template <typename PickFn>
PeelResult peel_impl(const BooleanMatrix& F, const PickFn& pick_fn) {
  int nr = F.n_rows(), nc = F.n_cols();
  BooleanMatrix Ft = F.transposed();
  int row_wc = F.words_per_row();
  int col_wc = Ft.words_per_row();

  std::vector<uint64_t> alive_cols(static_cast<size_t>(row_wc), 0);
  std::vector<uint64_t> alive_rows(static_cast<size_t>(col_wc), 0);
  for (int j = 0; j < nc; ++j) alive_cols[j >> 6] |= uint64_t{1} << (j & 63);
  for (int i = 0; i < nr; ++i) alive_rows[i >> 6] |= uint64_t{1} << (i & 63);

  std::vector<int> row_cnt(nr), col_cnt(nc);
  for (int i = 0; i < nr; ++i) row_cnt[i] = F.row_popcount(i);
  for (int j = 0; j < nc; ++j) col_cnt[j] = Ft.row_popcount(j);

  int rows_left = nr, cols_left = nc;
  PeelTrace trace{nr, nc, {}};
  trace.steps.reserve(static_cast<size_t>(nr) + nc);
  std::vector<int> candidates;

  auto alive_row = [&](int i) { return (alive_rows[i >> 6] >> (i & 63)) & 1; };
  auto alive_col = [&](int j) { return (alive_cols[j >> 6] >> (j & 63)) & 1; };

  while (rows_left > 0 || cols_left > 0) {
    candidates.clear();
    for (int i = 0; i < nr; ++i)
      if (alive_row(i) && row_cnt[i] <= 2) candidates.push_back(i);
    for (int j = 0; j < nc; ++j)
      if (alive_col(j) && col_cnt[j] <= 2) candidates.push_back(nr + j);
    if (candidates.empty()) break;
    int line = pick_fn(candidates);

    PeelStep step;
    if (line < nr) {
      int i = line;
      step.axis = Axis::row;
      step.index = i;
      auto words = F.row_words(i);
      for (int w = 0; w < row_wc; ++w) {
        uint64_t bits = words[w] & alive_cols[w];
        while (bits != 0) {
          int j = w * 64 + std::countr_zero(bits);
          bits &= bits - 1;
          step.removed.push_back({i, j});
          --col_cnt[j];
        }
      }
      alive_rows[i >> 6] &= ~(uint64_t{1} << (i & 63));
      --rows_left;
    } else {
      int j = line - nr;
      step.axis = Axis::col;
      step.index = j;
      auto words = Ft.row_words(j);
      for (int w = 0; w < col_wc; ++w) {
        uint64_t bits = words[w] & alive_rows[w];
        while (bits != 0) {
          int i = w * 64 + std::countr_zero(bits);
          bits &= bits - 1;
          step.removed.push_back({i, j});
          --row_cnt[i];
        }
      }
      alive_cols[j >> 6] &= ~(uint64_t{1} << (j & 63));
      --cols_left;
    }
    trace.steps.push_back(std::move(step));
  }

  if (rows_left == 0 && cols_left == 0) return trace;

  CoreWitness witness;
  for (int i = 0; i < nr; ++i)
    if (alive_row(i)) witness.rows.push_back(i);
  for (int j = 0; j < nc; ++j)
    if (alive_col(j)) witness.cols.push_back(j);
  validate_core_witness(F, witness);
  return witness;
}

}  // namespace

PeelResult peel(const BooleanMatrix& F) {
  return peel_impl(F, [](const std::vector<int>& candidates) { return candidates.front(); });
}

PeelResult peel_seeded(const BooleanMatrix& F, uint64_t order_seed) {
  CounterRng rng(order_seed);
  return peel_impl(F, [&rng](const std::vector<int>& candidates) {
    return candidates[rng.below(candidates.size())];
  });
}

ForestDecomposition forest_from_trace(const PeelTrace& trace) {
  ForestDecomposition fd{trace.n_rows, trace.n_cols, {}, {}};
  for (const PeelStep& step : trace.steps) {
    if (step.removed.size() > 2)
      throw validation_error("peel step removed more than two entries");
    if (!step.removed.empty()) fd.forest_1.push_back(step.removed[0]);
    if (step.removed.size() == 2) fd.forest_2.push_back(step.removed[1]);
  }
  // Reverse replay keeps each forest acyclic: when a step's line re-enters,
  // its vertex is fresh, so the one edge it contributes per forest cannot
  // close a cycle.  Verify anyway.
  int vertices = trace.n_rows + trace.n_cols;
  for (const auto* forest : {&fd.forest_1, &fd.forest_2}) {
    Dsu dsu(vertices);
    for (const MatrixEntry& e : *forest)
      if (!dsu.unite(e.row, trace.n_rows + e.col)) throw validation_error("forest from trace contains a cycle");
  }
  return fd;
}

ForestDecomposition forest_decompose(const BooleanMatrix& F) {
  PeelResult res = peel(F);
  if (auto* witness = std::get_if<CoreWitness>(&res)) throw not_peelable_error(*witness);
  return forest_from_trace(std::get<PeelTrace>(res));
}

std::pair<StarUnion, StarUnion> star_decompose(const std::vector<MatrixEntry>& forest_edges, int n_rows,
                                               int n_cols) {
  int vertices = n_rows + n_cols;
  std::vector<std::vector<int>> adj(vertices);
  for (const MatrixEntry& e : forest_edges) {
    if (e.row < 0 || e.row >= n_rows || e.col < 0 || e.col >= n_cols)
      throw parameter_error("star_decompose: edge out of range");
    int u = e.row, v = n_rows + e.col;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }

  std::array<StarUnion, 2> unions;
  for (auto& u : unions) {
    u.n_rows = n_rows;
    u.n_cols = n_cols;
    u.star_of_vertex.assign(vertices, -1);
  }
  // leaves grouped per (class, center) while traversing
  std::array<std::vector<std::vector<int>>, 2> leaves_of;
  for (auto& l : leaves_of) l.assign(vertices, {});

  std::vector<int> depth(vertices, -1);
  std::vector<int> stack;
  for (int root = 0; root < vertices; ++root) {
    if (depth[root] >= 0 || adj[root].empty()) continue;
    // Vertices are scanned in increasing id, so each tree is discovered at
    // (and rooted at) its minimum-id vertex; rows sort before columns.
    depth[root] = 0;
    stack.push_back(root);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (depth[w] < 0) {
          depth[w] = depth[v] + 1;
          leaves_of[depth[v] % 2][v].push_back(w);
          stack.push_back(w);
        } else if (depth[w] != depth[v] - 1) {
          throw parameter_error("star_decompose: input edges contain a cycle");
        }
      }
    }
  }
  // A vertex with two distinct neighbors at its own depth - 1 would mean a
  // cycle; in a simple traversal above, the parent check (depth[w] ==
  // depth[v]-1) can miss multi-parent cases, so count edges as a final guard.
  size_t classified = 0;
  for (int c = 0; c < 2; ++c)
    for (int v = 0; v < vertices; ++v) classified += leaves_of[c][v].size();
  if (classified != forest_edges.size()) throw parameter_error("star_decompose: input edges contain a cycle");

  for (int c = 0; c < 2; ++c) {
    StarUnion& u = unions[c];
    for (int v = 0; v < vertices; ++v) {
      if (leaves_of[c][v].empty()) continue;
      Star star;
      star.center = v;
      star.leaves = leaves_of[c][v];
      std::sort(star.leaves.begin(), star.leaves.end());
      int star_idx = static_cast<int>(u.stars.size());
      u.star_of_vertex[v] = star_idx;
      for (int leaf : star.leaves) u.star_of_vertex[leaf] = star_idx;
      u.stars.push_back(std::move(star));
    }
    validate_star_union(u);
  }
  return {std::move(unions[0]), std::move(unions[1])};
}

std::variant<Certificate, CoreWitness> certify(const BooleanMatrix& F) {
  PeelResult res = peel(F);
  if (auto* witness = std::get_if<CoreWitness>(&res)) return *witness;
  Certificate cert;
  cert.trace = std::get<PeelTrace>(std::move(res));
  cert.forests = forest_from_trace(cert.trace);
  auto [u0, u1] = star_decompose(cert.forests.forest_1, cert.forests.n_rows, cert.forests.n_cols);
  auto [u2, u3] = star_decompose(cert.forests.forest_2, cert.forests.n_rows, cert.forests.n_cols);
  cert.star_unions = {std::move(u0), std::move(u1), std::move(u2), std::move(u3)};
  validate_certificate(F, cert);
  return cert;
}

void validate_core_witness(const BooleanMatrix& F, const CoreWitness& witness) {
  Rectangle rect{witness.rows, witness.cols};
  rect.validate(F.n_rows(), F.n_cols());
  if (witness.rows.empty() || witness.cols.empty()) throw validation_error("core witness is empty");
  BooleanMatrix sub = submatrix(F, rect);
  for (int i = 0; i < sub.n_rows(); ++i)
    if (sub.row_popcount(i) < 3) throw validation_error("core witness row with fewer than three ones");
  for (int j = 0; j < sub.n_cols(); ++j)
    if (sub.col_popcount(j) < 3) throw validation_error("core witness column with fewer than three ones");
}

void validate_forest_decomposition(const BooleanMatrix& F, const ForestDecomposition& fd) {
  if (fd.n_rows != F.n_rows() || fd.n_cols != F.n_cols())
    throw validation_error("forest decomposition dimensions do not match the matrix");
  std::set<MatrixEntry> seen;
  for (const auto* forest : {&fd.forest_1, &fd.forest_2}) {
    Dsu dsu(fd.n_rows + fd.n_cols);
    for (const MatrixEntry& e : *forest) {
      if (e.row < 0 || e.row >= fd.n_rows || e.col < 0 || e.col >= fd.n_cols)
        throw validation_error("forest edge out of range");
      if (!F.get_unchecked(e.row, e.col)) throw validation_error("forest edge is not a 1-entry");
      if (!seen.insert(e).second) throw validation_error("forests share an edge");
      if (!dsu.unite(e.row, fd.n_rows + e.col)) throw validation_error("forest contains a cycle");
    }
  }
  if (static_cast<int64_t>(seen.size()) != F.count_ones())
    throw validation_error("forests do not cover all 1-entries");
}

void validate_star_union(const StarUnion& u) {
  int vertices = u.n_rows + u.n_cols;
  if (static_cast<int>(u.star_of_vertex.size()) != vertices)
    throw validation_error("star union vertex map has the wrong size");
  std::vector<int> expected(vertices, -1);
  std::vector<char> center_seen(vertices, 0);
  for (size_t s = 0; s < u.stars.size(); ++s) {
    const Star& star = u.stars[s];
    if (star.center < 0 || star.center >= vertices) throw validation_error("star center out of range");
    if (center_seen[star.center]) throw validation_error("duplicate star center");
    center_seen[star.center] = 1;
    if (star.leaves.empty()) throw validation_error("star without leaves");
    if (expected[star.center] != -1) throw validation_error("stars are not vertex-disjoint");
    expected[star.center] = static_cast<int>(s);
    bool center_is_row = star.center < u.n_rows;
    for (size_t l = 0; l < star.leaves.size(); ++l) {
      int leaf = star.leaves[l];
      if (leaf < 0 || leaf >= vertices) throw validation_error("star leaf out of range");
      if (l > 0 && star.leaves[l] <= star.leaves[l - 1]) throw validation_error("star leaves not increasing");
      bool leaf_is_row = leaf < u.n_rows;
      if (center_is_row == leaf_is_row) throw validation_error("star edge is not bipartite");
      if (expected[leaf] != -1) throw validation_error("stars are not vertex-disjoint");
      expected[leaf] = static_cast<int>(s);
    }
  }
  if (expected != u.star_of_vertex) throw validation_error("star_of_vertex map is inconsistent with the stars");
}

std::vector<MatrixEntry> star_union_edges(const StarUnion& u) {
  std::vector<MatrixEntry> edges;
  for (const Star& star : u.stars) {
    for (int leaf : star.leaves) {
      int row = star.center < u.n_rows ? star.center : leaf;
      int col_vertex = star.center < u.n_rows ? leaf : star.center;
      edges.push_back({row, col_vertex - u.n_rows});
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

void validate_certificate(const BooleanMatrix& F, const Certificate& cert) {
  validate_forest_decomposition(F, cert.forests);
  for (const StarUnion& u : cert.star_unions) {
    if (u.n_rows != F.n_rows() || u.n_cols != F.n_cols())
      throw validation_error("star union dimensions do not match the matrix");
    validate_star_union(u);
  }
  // Classes must partition each forest's edges exactly.
  for (int f = 0; f < 2; ++f) {
    std::vector<MatrixEntry> got = star_union_edges(cert.star_unions[2 * f]);
    std::vector<MatrixEntry> odd = star_union_edges(cert.star_unions[2 * f + 1]);
    got.insert(got.end(), odd.begin(), odd.end());
    std::sort(got.begin(), got.end());
    std::vector<MatrixEntry> want = f == 0 ? cert.forests.forest_1 : cert.forests.forest_2;
    std::sort(want.begin(), want.end());
    if (got != want) throw validation_error("star unions do not partition the forest edges");
  }
}

SurveyReport survey_submatrices(const BooleanMatrix& M, int k, int samples, uint64_t seed) {
  if (k < 1 || k > M.n_rows() || k > M.n_cols()) throw parameter_error("survey: k must fit inside the matrix");
  if (samples < 1) throw parameter_error("survey: samples must be >= 1");
  SurveyReport report;
  report.k = k;
  report.samples = samples;
  report.records.resize(samples);

  run_tasks(samples, [&](int64_t s) {
    SurveySample& rec = report.records[s];
    rec.index = static_cast<int>(s);
    CounterRng rng = CounterRng::keyed({seed, static_cast<uint64_t>(s)});
    auto draw_subset = [&](int n) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      for (int t = 0; t < k; ++t) {
        int u = t + static_cast<int>(rng.below(static_cast<uint64_t>(n - t)));
        std::swap(perm[t], perm[u]);
      }
      perm.resize(k);
      std::sort(perm.begin(), perm.end());
      return perm;
    };
    rec.rows = draw_subset(M.n_rows());
    rec.cols = draw_subset(M.n_cols());
    BooleanMatrix sub = submatrix(M, Rectangle{rec.rows, rec.cols});
    auto res = certify(sub);
    if (auto* cert = std::get_if<Certificate>(&res)) {
      rec.peelable = true;
      rec.certificate = std::move(*cert);
    } else {
      rec.peelable = false;
      rec.witness = std::get<CoreWitness>(std::move(res));
    }
  });

  int64_t peelable = 0;
  for (const SurveySample& rec : report.records) peelable += rec.peelable;
  report.peelable_fraction = static_cast<double>(peelable) / static_cast<double>(samples);
  return report;
}

namespace {

std::string join_indices(const std::vector<int>& idx) {
  std::string out;
  for (size_t s = 0; s < idx.size(); ++s) {
    if (s > 0) out += ':';
    out += std::to_string(idx[s]);
  }
  return out;
}

}  // namespace

std::string survey_to_csv(const SurveyReport& report) {
  std::string out = "sample,rows,cols,peelable,witness_size\n";
  for (const SurveySample& rec : report.records) {
    int64_t witness_size = 0;
    if (rec.witness)
      witness_size = static_cast<int64_t>(rec.witness->rows.size()) * static_cast<int64_t>(rec.witness->cols.size());
    out += std::to_string(rec.index);
    out += ',';
    out += join_indices(rec.rows);
    out += ',';
    out += join_indices(rec.cols);
    out += ',';
    out += rec.peelable ? '1' : '0';
    out += ',';
    out += std::to_string(witness_size);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace {

nlohmann::json entries_to_json(const std::vector<MatrixEntry>& entries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const MatrixEntry& e : entries) arr.push_back(nlohmann::json::array({e.row, e.col}));
  return arr;
}

std::vector<MatrixEntry> entries_from_json(const nlohmann::json& arr) {
  std::vector<MatrixEntry> entries;
  for (const auto& e : arr) entries.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  return entries;
}

nlohmann::json star_union_to_json(const StarUnion& u) {
  nlohmann::json stars = nlohmann::json::array();
  for (const Star& s : u.stars) stars.push_back(nlohmann::json{{"center", s.center}, {"leaves", s.leaves}});
  return nlohmann::json{{"stars", std::move(stars)}};
}

StarUnion star_union_from_json(const nlohmann::json& doc, int n_rows, int n_cols) {
  StarUnion u;
  u.n_rows = n_rows;
  u.n_cols = n_cols;
  u.star_of_vertex.assign(n_rows + n_cols, -1);
  for (const auto& s : doc.at("stars")) {
    Star star;
    star.center = s.at("center").get<int>();
    for (const auto& l : s.at("leaves")) star.leaves.push_back(l.get<int>());
    int idx = static_cast<int>(u.stars.size());
    if (star.center < 0 || star.center >= n_rows + n_cols) throw io_error("certificate: star center out of range");
    u.star_of_vertex[star.center] = idx;
    for (int leaf : star.leaves) {
      if (leaf < 0 || leaf >= n_rows + n_cols) throw io_error("certificate: star leaf out of range");
      u.star_of_vertex[leaf] = idx;
    }
    u.stars.push_back(std::move(star));
  }
  return u;
}

}  // namespace

nlohmann::json certificate_to_json(const Certificate& cert) {
  nlohmann::json steps = nlohmann::json::array();
  for (const PeelStep& step : cert.trace.steps) {
    steps.push_back(nlohmann::json{{"axis", step.axis == Axis::row ? "row" : "col"},
                                   {"index", step.index},
                                   {"removed", entries_to_json(step.removed)}});
  }
  nlohmann::json unions = nlohmann::json::array();
  for (const StarUnion& u : cert.star_unions) unions.push_back(star_union_to_json(u));
  return nlohmann::json{{"n_rows", cert.trace.n_rows},
                        {"n_cols", cert.trace.n_cols},
                        {"trace", std::move(steps)},
                        {"forest_1", entries_to_json(cert.forests.forest_1)},
                        {"forest_2", entries_to_json(cert.forests.forest_2)},
                        {"star_unions", std::move(unions)}};
}

Certificate certificate_from_json(const nlohmann::json& doc) {
  try {
    Certificate cert;
    cert.trace.n_rows = doc.at("n_rows").get<int>();
    cert.trace.n_cols = doc.at("n_cols").get<int>();
    if (cert.trace.n_rows < 0 || cert.trace.n_cols < 0) throw io_error("certificate: negative dimensions");
    for (const auto& s : doc.at("trace")) {
      PeelStep step;
      std::string axis = s.at("axis").get<std::string>();
      if (axis != "row" && axis != "col") throw io_error("certificate: bad axis");
      step.axis = axis == "row" ? Axis::row : Axis::col;
      step.index = s.at("index").get<int>();
      step.removed = entries_from_json(s.at("removed"));
      cert.trace.steps.push_back(std::move(step));
    }
    cert.forests.n_rows = cert.trace.n_rows;
    cert.forests.n_cols = cert.trace.n_cols;
    cert.forests.forest_1 = entries_from_json(doc.at("forest_1"));
    cert.forests.forest_2 = entries_from_json(doc.at("forest_2"));
    const auto& unions = doc.at("star_unions");
    if (!unions.is_array() || unions.size() != 4) throw io_error("certificate: expected four star unions");
    for (int u = 0; u < 4; ++u)
      cert.star_unions[u] = star_union_from_json(unions[u], cert.trace.n_rows, cert.trace.n_cols);
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("malformed certificate document: ") + e.what());
  }
}

nlohmann::json core_witness_to_json(const CoreWitness& witness) {
  return nlohmann::json{{"rows", witness.rows}, {"cols", witness.cols}};
}

}  // namespace ccwb
