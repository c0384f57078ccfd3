#include "ccwb/discrepancy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "ccwb/parallel.hpp"
#include "ccwb/rng.hpp"

namespace ccwb {

HardDistribution mu_from_matrix(const BooleanMatrix& m) {
  int64_t total = static_cast<int64_t>(m.n_rows()) * m.n_cols();
  int64_t ones = m.count_ones();
  int64_t zeros = total - ones;
  if (ones == 0 || zeros == 0) throw parameter_error("constant matrix has a degenerate hard distribution");
  HardDistribution mu;
  mu.count_ones = ones;
  mu.count_zeros = zeros;
  mu.mass_one = Rational(1, 2 * ones);
  mu.mass_zero = Rational(1, 2 * zeros);
  return mu;
}

Rational disc_rect(const BooleanMatrix& m, const HardDistribution& mu, const Rectangle& rect) {
  rect.validate(m.n_rows(), m.n_cols());
  int64_t c1 = 0;
  for (int i : rect.rows)
    for (int j : rect.cols) c1 += m.get_unchecked(i, j);
  int64_t c0 = static_cast<int64_t>(rect.rows.size()) * static_cast<int64_t>(rect.cols.size()) - c1;
  return (Rational(c1) * mu.mass_one - Rational(c0) * mu.mass_zero).abs();
}

namespace {

// Integer scaling: with L = lcm of the two mass denominators, a cell
// contributes +W1 (1-entry) or -W0 (0-entry) in units of 1/L.
struct MassScale {
  int64_t w1 = 0;
  int64_t w0 = 0;
  int64_t denom = 0;
};

MassScale scale_of(const HardDistribution& mu) {
  int64_t l = std::lcm(mu.mass_one.den(), mu.mass_zero.den());
  MassScale s;
  s.denom = l;
  s.w1 = mu.mass_one.num() * (l / mu.mass_one.den());
  s.w0 = mu.mass_zero.num() * (l / mu.mass_zero.den());
  if (s.w1 <= 0 || s.w0 <= 0) throw parameter_error("hard distribution masses must be positive");
  return s;
}

// Strict lexicographic order on index sets encoded as bit masks (compared as
// increasing index sequences, so {0} < {0,1} < {1}).
bool lex_less_mask(uint32_t a, uint32_t b) {
  if (a == b) return false;
  uint32_t d = a ^ b;
  uint32_t low = d & (~d + 1);
  uint32_t above = ~(low | (low - 1));
  if (a & low) return (b & above) != 0;  // a's next element is smaller, unless b just ends
  return (a & above) == 0;               // symmetric case
}

std::vector<int> mask_to_indices(uint32_t mask) {
  std::vector<int> idx;
  while (mask != 0) {
    idx.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return idx;
}

// Lexicographically smallest optimal opposite side for the given signed
// sums: all indices of the winning sign plus every zero index below the
// largest mandatory one (zeros never change the value; placing the small
// ones in makes the index sequence lexicographically smallest).
std::vector<int> best_opposite_side(const std::vector<int64_t>& signed_sums) {
  int64_t pos = 0, neg = 0;
  for (int64_t s : signed_sums) {
    if (s > 0) pos += s;
    else neg -= s;
  }
  auto build = [&](bool positive) {
    std::vector<int> out;
    int last_mandatory = -1;
    for (size_t j = 0; j < signed_sums.size(); ++j)
      if ((positive && signed_sums[j] > 0) || (!positive && signed_sums[j] < 0)) last_mandatory = static_cast<int>(j);
    for (int j = 0; j <= last_mandatory; ++j)
      if (signed_sums[j] == 0 || (positive ? signed_sums[j] > 0 : signed_sums[j] < 0)) out.push_back(j);
    return out;
  };
  if (pos == 0 && neg == 0) return {};
  if (pos > neg) return build(true);
  if (neg > pos) return build(false);
  std::vector<int> cp = build(true), cn = build(false);
  return std::lexicographical_compare(cp.begin(), cp.end(), cn.begin(), cn.end()) ? cp : cn;
}

}  // namespace

DiscReport disc_exact(const BooleanMatrix& m, const HardDistribution& mu) {
  int nr = m.n_rows(), nc = m.n_cols();
  if (nr < 1 || nc < 1) throw parameter_error("disc_exact: empty matrix");
  // Enumerate subsets over the smaller dimension.
  bool transposed = nr > nc;
  BooleanMatrix mt = transposed ? m.transposed() : BooleanMatrix();
  const BooleanMatrix& mm = transposed ? mt : m;
  int a = mm.n_rows(), bndim = mm.n_cols();
  if (a > 24) throw parameter_error("disc_exact: smaller dimension must be <= 24");

  MassScale sc = scale_of(mu);
  std::vector<uint32_t> colmask(bndim, 0);
  for (int j = 0; j < bndim; ++j)
    for (int i = 0; i < a; ++i)
      if (mm.get_unchecked(i, j)) colmask[j] |= uint32_t{1} << i;

  struct Candidate {
    int64_t value = -1;
    uint32_t mask = 0;
  };
  uint32_t total = uint32_t{1} << a;
  int workers = worker_count();
  std::vector<Candidate> found(workers);
  run_tasks(workers, [&](int64_t w) {
    Candidate best;
    std::vector<int64_t> sums(bndim);
    for (uint32_t mask = 1 + static_cast<uint32_t>(w); mask < total; mask += workers) {
      int asz = std::popcount(mask);
      int64_t pos = 0, neg = 0;
      for (int j = 0; j < bndim; ++j) {
        int c1 = std::popcount(colmask[j] & mask);
        int64_t s = c1 * sc.w1 - static_cast<int64_t>(asz - c1) * sc.w0;
        if (s > 0) pos += s;
        else neg -= s;
      }
      int64_t value = std::max(pos, neg);
      if (value > best.value || (value == best.value && lex_less_mask(mask, best.mask))) {
        best.value = value;
        best.mask = mask;
      }
    }
    found[w] = best;
  });
  Candidate best;
  for (const Candidate& c : found)
    if (c.value > best.value || (c.value == best.value && c.value >= 0 && lex_less_mask(c.mask, best.mask)))
      best = c;
  if (best.value <= 0) throw validation_error("disc_exact: no positive rectangle found (degenerate input)");

  std::vector<int64_t> sums(bndim);
  int asz = std::popcount(best.mask);
  for (int j = 0; j < bndim; ++j) {
    int c1 = std::popcount(colmask[j] & best.mask);
    sums[j] = c1 * sc.w1 - static_cast<int64_t>(asz - c1) * sc.w0;
  }
  std::vector<int> opposite = best_opposite_side(sums);

  DiscReport report;
  report.method = DiscReport::Method::exact;
  if (transposed) {
    report.argmax = Rectangle{opposite, mask_to_indices(best.mask)};
  } else {
    report.argmax = Rectangle{mask_to_indices(best.mask), opposite};
  }
  // Reported value is always an independent recomputation of the argmax.
  report.value = disc_rect(m, mu, report.argmax);
  if (report.value != Rational(best.value, sc.denom))
    throw validation_error("disc_exact: argmax recomputation mismatch");
  return report;
}

namespace {

std::vector<int64_t> col_signed_sums(const BooleanMatrix& m, const std::vector<int>& rows, const MassScale& sc) {
  std::vector<int64_t> cnt(m.n_cols(), 0);
  for (int i : rows) {
    auto words = m.row_words(i);
    for (int w = 0; w < m.words_per_row(); ++w) {
      uint64_t bits = words[w];
      while (bits != 0) {
        int j = w * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        ++cnt[j];
      }
    }
  }
  std::vector<int64_t> sums(m.n_cols());
  int64_t asz = static_cast<int64_t>(rows.size());
  for (int j = 0; j < m.n_cols(); ++j) sums[j] = cnt[j] * sc.w1 - (asz - cnt[j]) * sc.w0;
  return sums;
}

}  // namespace

DiscReport disc_local_search(const BooleanMatrix& m, const HardDistribution& mu, int restarts, uint64_t seed) {
  if (restarts < 0) throw parameter_error("restarts must be >= 0");
  int nr = m.n_rows(), nc = m.n_cols();
  if (nr < 1 || nc < 1) throw parameter_error("disc_local_search: empty matrix");
  MassScale sc = scale_of(mu);
  BooleanMatrix mt = m.transposed();

  DiscReport best;
  best.method = DiscReport::Method::local_search;
  best.restarts = restarts;
  best.value = Rational(-1);

  for (int start = 0; start <= restarts; ++start) {
    std::vector<int> rows;
    if (start == 0) {
      rows.resize(nr);
      std::iota(rows.begin(), rows.end(), 0);
    } else {
      CounterRng rng = CounterRng::keyed({seed, static_cast<uint64_t>(start)});
      for (int i = 0; i < nr; ++i)
        if (rng.below(2) == 1) rows.push_back(i);
      if (rows.empty()) rows.push_back(static_cast<int>(rng.below(static_cast<uint64_t>(nr))));
    }
    std::vector<int> cols;
    for (int iter = 0; iter < 200; ++iter) {
      std::vector<int> new_cols = best_opposite_side(col_signed_sums(m, rows, sc));
      if (new_cols.empty()) break;
      std::vector<int> new_rows = best_opposite_side(col_signed_sums(mt, new_cols, sc));
      if (new_rows.empty()) break;
      if (new_rows == rows && new_cols == cols) break;
      rows = std::move(new_rows);
      cols = std::move(new_cols);
    }
    if (rows.empty() || cols.empty()) continue;
    Rectangle rect{rows, cols};
    Rational value = disc_rect(m, mu, rect);
    bool better = value > best.value;
    if (!better && value == best.value) {
      if (std::lexicographical_compare(rect.rows.begin(), rect.rows.end(), best.argmax.rows.begin(),
                                       best.argmax.rows.end()))
        better = true;
      else if (rect.rows == best.argmax.rows &&
               std::lexicographical_compare(rect.cols.begin(), rect.cols.end(), best.argmax.cols.begin(),
                                            best.argmax.cols.end()))
        better = true;
    }
    if (better) {
      best.value = value;
      best.argmax = std::move(rect);
    }
  }
  if (best.value < Rational(0)) throw validation_error("disc_local_search: no nonempty rectangle found");
  return best;
}

double rcc_lower_bound(const Rational& disc_value, const Rational& epsilon) {
  if (epsilon <= Rational(0) || epsilon >= Rational(1, 2))
    throw parameter_error("epsilon must lie strictly between 0 and 1/2");
  if (disc_value < Rational(0)) throw parameter_error("discrepancy must be non-negative");
  if (disc_value.is_zero()) return std::numeric_limits<double>::infinity();
  return std::log2(2.0 * epsilon.to_double() / disc_value.to_double());
}

double bernstein_tail(int64_t n, int64_t r, double t) {
  if (n < 1 || r < 1 || r > n) throw parameter_error("bernstein_tail requires 1 <= r <= n");
  if (t < 0) throw parameter_error("bernstein_tail requires t >= 0");
  return 2.0 * std::exp(-(t * t) / (4.0 * static_cast<double>(n) * static_cast<double>(r)));
}

Rational expected_rect_mass(int64_t n, int64_t r, int64_t a, int64_t b) {
  if (n < 1 || r < 1 || r > n) throw parameter_error("expected_rect_mass requires 1 <= r <= n");
  if (a < 0 || b < 0 || a > n || b > n) throw parameter_error("rectangle dimensions must lie in [0, n]");
  return Rational::from_i128(static_cast<__int128>(r) * a * b, n);
}

std::string to_string(DiscReport::Method method) {
  return method == DiscReport::Method::exact ? "exact" : "local_search";
}

nlohmann::json disc_report_to_json(const DiscReport& report) {
  nlohmann::json doc{{"method", to_string(report.method)},
                     {"value_num", report.value.num()},
                     {"value_den", report.value.den()},
                     {"value", report.value.to_double()},
                     {"argmax_rows", report.argmax.rows},
                     {"argmax_cols", report.argmax.cols}};
  if (report.method == DiscReport::Method::local_search) doc["restarts"] = report.restarts;
  return doc;
}

}  // namespace ccwb
