#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "ccwb/bitmatrix.hpp"
#include "ccwb/rational.hpp"

namespace ccwb {

// The hard distribution: total mass 1/2 spread uniformly over the 1-entries
// and 1/2 over the 0-entries.  For a row-regular matrix with r ones per row
// this gives mass 1/(2rn) per 1-entry and 1/(2(n-r)n) per 0-entry.
struct HardDistribution {
  Rational mass_one;
  Rational mass_zero;
  int64_t count_ones = 0;
  int64_t count_zeros = 0;
};

// Throws parameter_error on constant matrices (degenerate distribution).
HardDistribution mu_from_matrix(const BooleanMatrix& m);

struct DiscReport {
  enum class Method { exact, local_search };
  Method method = Method::exact;
  Rational value;       // in [0, 1/2]
  Rectangle argmax;     // nonempty rectangle attaining (exact) or achieving (local) the value
  int restarts = 0;     // local_search only
};

// |mu(1-entries of R) - mu(0-entries of R)|, exact.
Rational disc_rect(const BooleanMatrix& m, const HardDistribution& mu, const Rectangle& rect);

// Exact maximum over all nonempty rectangles.  Enumerates subsets of the
// smaller dimension (guarded at 24); for a fixed subset the optimal opposite
// side keeps exactly the indices whose signed mass carries the majority
// sign.  Ties: lexicographically smallest subset-side index set, then
// smallest opposite-side set.
DiscReport disc_exact(const BooleanMatrix& m, const HardDistribution& mu);

// Alternating maximization (greedy columns for fixed rows and vice versa)
// until a fixpoint, best over `restarts` random starts plus one
// deterministic full-rectangle start.  Always a lower bound on disc_exact.
DiscReport disc_local_search(const BooleanMatrix& m, const HardDistribution& mu, int restarts, uint64_t seed);

// log2(2*epsilon / disc): a lower bound on the cost of any randomized
// protocol with error 1/2 - epsilon.  disc == 0 returns +infinity.
double rcc_lower_bound(const Rational& disc_value, const Rational& epsilon);

// 2 * exp(-t^2 / (4 n r)): tail bound on | |R cap M_1| - E | for the
// row-regular construction.
double bernstein_tail(int64_t n, int64_t r, double t);

// (r/n) * a * b: expected number of 1-entries of a row-regular matrix inside
// an a x b rectangle.
Rational expected_rect_mass(int64_t n, int64_t r, int64_t a, int64_t b);

nlohmann::json disc_report_to_json(const DiscReport& report);

std::string to_string(DiscReport::Method method);

}  // namespace ccwb
