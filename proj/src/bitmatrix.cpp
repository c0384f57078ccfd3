#include "ccwb/bitmatrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ccwb/rng.hpp"

namespace ccwb {

BooleanMatrix BooleanMatrix::zeros(int n_rows, int n_cols) {
  if (n_rows < 0 || n_cols < 0) throw parameter_error("matrix dimensions must be non-negative");
  BooleanMatrix m;
  m.n_rows_ = n_rows;
  m.n_cols_ = n_cols;
  m.words_per_row_ = n_cols == 0 ? 1 : (n_cols + 63) / 64;
  m.bits_.assign(static_cast<size_t>(n_rows) * m.words_per_row_, 0);
  return m;
}

BooleanMatrix BooleanMatrix::from_rows(const std::vector<std::string>& rows) {
  int n_rows = static_cast<int>(rows.size());
  int n_cols = n_rows == 0 ? 0 : static_cast<int>(rows[0].size());
  BooleanMatrix m = zeros(n_rows, n_cols);
  for (int i = 0; i < n_rows; ++i) {
    if (static_cast<int>(rows[i].size()) != n_cols) throw parameter_error("from_rows: ragged row lengths");
    for (int j = 0; j < n_cols; ++j) {
      char c = rows[i][j];
      if (c == '1')
        m.set(i, j);
      else if (c != '0')
        throw parameter_error("from_rows: entries must be '0' or '1'");
    }
  }
  return m;
}

void BooleanMatrix::check_index(int i, int j) const {
  if (i < 0 || i >= n_rows_ || j < 0 || j >= n_cols_) throw parameter_error("matrix index out of range");
}

std::span<const uint64_t> BooleanMatrix::row_words(int i) const {
  if (i < 0 || i >= n_rows_) throw parameter_error("row index out of range");
  return {bits_.data() + static_cast<size_t>(i) * words_per_row_, static_cast<size_t>(words_per_row_)};
}

int BooleanMatrix::row_popcount(int i) const {
  auto words = row_words(i);
  int c = 0;
  for (uint64_t w : words) c += std::popcount(w);
  return c;
}

int BooleanMatrix::col_popcount(int j) const {
  if (j < 0 || j >= n_cols_) throw parameter_error("column index out of range");
  int c = 0;
  for (int i = 0; i < n_rows_; ++i) c += get_unchecked(i, j);
  return c;
}

int64_t BooleanMatrix::count_ones() const {
  int64_t c = 0;
  for (uint64_t w : bits_) c += std::popcount(w);
  return c;
}

bool BooleanMatrix::is_constant() const {
  int64_t ones = count_ones();
  return ones == 0 || ones == static_cast<int64_t>(n_rows_) * n_cols_;
}

BooleanMatrix BooleanMatrix::transposed() const {
  BooleanMatrix t = zeros(n_cols_, n_rows_);
  for (int i = 0; i < n_rows_; ++i) {
    auto words = row_words(i);
    for (int wi = 0; wi < words_per_row_; ++wi) {
      uint64_t w = words[wi];
      while (w != 0) {
        int b = std::countr_zero(w);
        w &= w - 1;
        t.set(wi * 64 + b, i);
      }
    }
  }
  return t;
}

std::string BooleanMatrix::to_bmat() const {
  std::string out;
  out.reserve(static_cast<size_t>(n_rows_) * (n_cols_ + 1) + 16);
  out += std::to_string(n_rows_);
  out += ' ';
  out += std::to_string(n_cols_);
  out += '\n';
  for (int i = 0; i < n_rows_; ++i) {
    for (int j = 0; j < n_cols_; ++j) out += get_unchecked(i, j) ? '1' : '0';
    out += '\n';
  }
  return out;
}

void BooleanMatrix::write_bmat(std::ostream& out) const {
  out << to_bmat();
  if (!out) throw io_error("failed to write matrix");
}

BooleanMatrix BooleanMatrix::read_bmat(std::istream& in) {
  int n_rows = 0, n_cols = 0;
  if (!(in >> n_rows >> n_cols)) throw io_error("BMAT: missing or malformed dimension line");
  if (n_rows <= 0 || n_cols <= 0) throw io_error("BMAT: dimensions must be positive");
  std::string line;
  std::getline(in, line);  // consume rest of dimension line
  BooleanMatrix m = zeros(n_rows, n_cols);
  for (int i = 0; i < n_rows; ++i) {
    if (!std::getline(in, line)) throw io_error("BMAT: truncated at row " + std::to_string(i));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<int>(line.size()) != n_cols)
      throw io_error("BMAT: row " + std::to_string(i) + " has length " + std::to_string(line.size()) +
                     ", expected " + std::to_string(n_cols));
    for (int j = 0; j < n_cols; ++j) {
      if (line[j] == '1')
        m.set(i, j);
      else if (line[j] != '0')
        throw io_error("BMAT: row " + std::to_string(i) + " contains a character other than '0'/'1'");
    }
  }
  return m;
}

BooleanMatrix BooleanMatrix::from_bmat(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_bmat(in);
}

BooleanMatrix BooleanMatrix::load_bmat(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open matrix file: " + path);
  return read_bmat(in);
}

void BooleanMatrix::save_bmat(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open output file: " + path);
  write_bmat(out);
}

void Rectangle::validate(int n_rows, int n_cols) const {
  auto check = [](const std::vector<int>& idx, int bound, const char* what) {
    for (size_t s = 0; s < idx.size(); ++s) {
      if (idx[s] < 0 || idx[s] >= bound) throw parameter_error(std::string("rectangle ") + what + " index out of range");
      if (s > 0 && idx[s] <= idx[s - 1]) throw parameter_error(std::string("rectangle ") + what + " indices must be strictly increasing");
    }
  };
  check(rows, n_rows, "row");
  check(cols, n_cols, "column");
}

Rectangle Rectangle::full(int n_rows, int n_cols) {
  Rectangle r;
  r.rows.resize(n_rows);
  r.cols.resize(n_cols);
  std::iota(r.rows.begin(), r.rows.end(), 0);
  std::iota(r.cols.begin(), r.cols.end(), 0);
  return r;
}

int64_t ConstructionParams::resolved_r() const {
  if (n < 1) throw parameter_error("n must be >= 1");
  int64_t r;
  if (r_override) {
    r = *r_override;
  } else if (w) {
    if (*w < 0 || *w > 20) throw parameter_error("w out of range");
    r = int64_t{1} << (3 * *w);
  } else {
    throw parameter_error("either w or r must be given");
  }
  if (r < 1 || r > n) throw parameter_error("r must satisfy 1 <= r <= n (r=" + std::to_string(r) + ", n=" + std::to_string(n) + ")");
  return r;
}

BooleanMatrix gen_row_regular(const ConstructionParams& params) {
  int n = params.n;
  int r = static_cast<int>(params.resolved_r());
  BooleanMatrix m = BooleanMatrix::zeros(n, n);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) {
    CounterRng rng = CounterRng::keyed({params.seed, static_cast<uint64_t>(i)});
    std::iota(perm.begin(), perm.end(), 0);
    // Partial Fisher-Yates: after r swaps, perm[0..r) is a uniform r-subset.
    for (int s = 0; s < r; ++s) {
      int t = s + static_cast<int>(rng.below(static_cast<uint64_t>(n - s)));
      std::swap(perm[s], perm[t]);
    }
    for (int s = 0; s < r; ++s) m.set(i, perm[s]);
  }
  return m;
}

BooleanMatrix gen_identity(int n) {
  if (n < 0) throw parameter_error("n must be non-negative");
  return BooleanMatrix::build(n, n, [](int i, int j) { return i == j; });
}

BooleanMatrix gen_gt(int k) {
  if (k < 0) throw parameter_error("k must be non-negative");
  return BooleanMatrix::build(k, k, [](int i, int j) { return i <= j; });
}

BooleanMatrix submatrix(const BooleanMatrix& m, const Rectangle& rect) {
  rect.validate(m.n_rows(), m.n_cols());
  return BooleanMatrix::build(static_cast<int>(rect.rows.size()), static_cast<int>(rect.cols.size()),
                              [&](int s, int t) { return m.get_unchecked(rect.rows[s], rect.cols[t]); });
}

BooleanMatrix zero_out_row(const BooleanMatrix& m, int row) {
  if (row < 0 || row >= m.n_rows()) throw parameter_error("row index out of range");
  return BooleanMatrix::build(m.n_rows(), m.n_cols(),
                              [&](int i, int j) { return i != row && m.get_unchecked(i, j); });
}

namespace {

// DFS state for contains_gt: at level s we need a pair (i, j) with
//   i > rows[s-1], j > cols[s-1],
//   m[i][j] = 1, m[rows[t]][j] = 1 for all t < s, m[i][cols[t]] = 0 for all t < s,
// which is exactly the incremental condition for rows/cols to form a GT_k
// pattern (1 iff row position <= column position).
struct GtDfs {
  const BooleanMatrix& m;
  int k;
  uint64_t budget;
  uint64_t visited = 0;
  bool truncated = false;
  std::vector<int> rows, cols;

  GtDfs(const BooleanMatrix& mm, int kk, uint64_t b) : m(mm), k(kk), budget(b) {}

  bool extend(int level) {
    if (level == k) return true;
    int i0 = level == 0 ? 0 : rows[level - 1] + 1;
    int j0 = level == 0 ? 0 : cols[level - 1] + 1;
    // Candidate rows must still leave room for k - level - 1 more rows.
    for (int i = i0; i <= m.n_rows() - (k - level); ++i) {
      for (int j = j0; j <= m.n_cols() - (k - level); ++j) {
        if (visited >= budget) {
          truncated = true;
          return false;
        }
        ++visited;
        if (!m.get_unchecked(i, j)) continue;
        bool ok = true;
        for (int t = 0; t < level && ok; ++t) {
          if (!m.get_unchecked(rows[t], j)) ok = false;        // column must be 1 above
          else if (m.get_unchecked(i, cols[t])) ok = false;    // row must be 0 to the left
        }
        if (!ok) continue;
        rows.push_back(i);
        cols.push_back(j);
        if (extend(level + 1)) return true;
        rows.pop_back();
        cols.pop_back();
        if (truncated) return false;
      }
    }
    return false;
  }
};

}  // namespace

GtSearch contains_gt(const BooleanMatrix& m, int k, uint64_t budget) {
  if (k < 1) throw parameter_error("contains_gt: k must be >= 1");
  GtSearch result;
  if (k > m.n_rows() || k > m.n_cols()) {
    result.status = GtSearch::Status::not_found;
    return result;
  }
  GtDfs dfs(m, k, budget);
  bool found = dfs.extend(0);
  result.nodes_visited = dfs.visited;
  if (found) {
    result.status = GtSearch::Status::found;
    result.witness = Rectangle{dfs.rows, dfs.cols};
  } else if (dfs.truncated) {
    result.status = GtSearch::Status::budget_exhausted;
  } else {
    result.status = GtSearch::Status::not_found;
  }
  return result;
}

std::string to_string(GtSearch::Status status) {
  switch (status) {
    case GtSearch::Status::found: return "found";
    case GtSearch::Status::not_found: return "not_found";
    case GtSearch::Status::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

}  // namespace ccwb
