#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccwb/errors.hpp"

namespace ccwb {

// Bit-packed 0/1 matrix, immutable after construction.  Rows are stored as
// contiguous 64-bit words (column j of row i lives in bit j%64 of word
// i*words_per_row + j/64); trailing bits of the last word in a row are zero,
// an invariant the popcount paths rely on.
class BooleanMatrix {
 public:
  BooleanMatrix() = default;

  static BooleanMatrix zeros(int n_rows, int n_cols);

  // Builds from a callable (i, j) -> bool.
  template <typename F>
  static BooleanMatrix build(int n_rows, int n_cols, F&& f) {
    BooleanMatrix m = zeros(n_rows, n_cols);
    for (int i = 0; i < n_rows; ++i)
      for (int j = 0; j < n_cols; ++j)
        if (f(i, j)) m.set(i, j);
    return m;
  }

  // Builds from rows of '0'/'1' characters, e.g. {"10", "01"}.
  static BooleanMatrix from_rows(const std::vector<std::string>& rows);

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  int words_per_row() const { return words_per_row_; }

  bool get(int i, int j) const {
    check_index(i, j);
    return (bits_[static_cast<size_t>(i) * words_per_row_ + (j >> 6)] >> (j & 63)) & 1;
  }
  // No bounds check; hot paths only.
  bool get_unchecked(int i, int j) const {
    return (bits_[static_cast<size_t>(i) * words_per_row_ + (j >> 6)] >> (j & 63)) & 1;
  }

  std::span<const uint64_t> row_words(int i) const;

  int row_popcount(int i) const;
  int col_popcount(int j) const;
  int64_t count_ones() const;
  bool is_constant() const;

  BooleanMatrix transposed() const;

  bool operator==(const BooleanMatrix& other) const = default;

  // BMAT v1: line 1 = "n_rows n_cols", then n_rows lines of '0'/'1'
  // characters, newline-terminated, no separators.
  std::string to_bmat() const;
  void write_bmat(std::ostream& out) const;
  static BooleanMatrix read_bmat(std::istream& in);
  static BooleanMatrix from_bmat(std::string_view text);
  static BooleanMatrix load_bmat(const std::string& path);
  void save_bmat(const std::string& path) const;

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  int words_per_row_ = 0;
  std::vector<uint64_t> bits_;

  void set(int i, int j) { bits_[static_cast<size_t>(i) * words_per_row_ + (j >> 6)] |= uint64_t{1} << (j & 63); }
  void check_index(int i, int j) const;

  friend BooleanMatrix gen_row_regular(const struct ConstructionParams& params);
};

// Combinatorial rectangle: strictly increasing row and column index lists.
struct Rectangle {
  std::vector<int> rows;
  std::vector<int> cols;

  bool operator==(const Rectangle& other) const = default;

  // Throws parameter_error unless both index lists are strictly increasing
  // and within bounds.
  void validate(int n_rows, int n_cols) const;

  static Rectangle full(int n_rows, int n_cols);
};

// Parameters of the row-regular random construction: n columns and rows,
// r ones per row.  r comes from the sparsity exponent w as r = 2^(3w) unless
// overridden directly.
struct ConstructionParams {
  int n = 0;
  std::optional<int> w;
  std::optional<int64_t> r_override;
  uint64_t seed = 0;

  // Resolves r and validates 1 <= r <= n; throws parameter_error.
  int64_t resolved_r() const;
};

// n x n matrix with exactly r ones per row; row i's support is drawn by a
// partial Fisher-Yates shuffle from a counter-based stream keyed by
// (seed, i), so rows are independent and reproducible in any order.
BooleanMatrix gen_row_regular(const ConstructionParams& params);

BooleanMatrix gen_identity(int n);

// k x k greater-than pattern: entry (i, j) = 1 iff i <= j (upper triangular
// with the diagonal).
BooleanMatrix gen_gt(int k);

BooleanMatrix submatrix(const BooleanMatrix& m, const Rectangle& rect);

// Copy with one row forced to all zeros.
BooleanMatrix zero_out_row(const BooleanMatrix& m, int row);

// Search outcome for an order-k greater-than submatrix.
struct GtSearch {
  enum class Status { found, not_found, budget_exhausted };
  Status status = Status::not_found;
  std::optional<Rectangle> witness;   // set iff status == found
  uint64_t nodes_visited = 0;         // candidate (row, col) pairs examined
};

// Depth-first search for row indices i_1 < ... < i_k and column indices
// j_1 < ... < j_k with m[i_s][j_t] = 1 iff s <= t.  The budget caps the
// number of candidate pairs examined.
GtSearch contains_gt(const BooleanMatrix& m, int k, uint64_t budget = 10'000'000);

std::string to_string(GtSearch::Status status);

}  // namespace ccwb
