#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ccwb/bitmatrix.hpp"

namespace ccwb {

// A 1-entry of F, doubling as a bipartite edge between row vertex `row` and
// column vertex `col`.  Global vertex ids: rows are 0..n_rows-1, columns are
// n_rows..n_rows+n_cols-1.
struct MatrixEntry {
  int row = 0;
  int col = 0;
  bool operator==(const MatrixEntry&) const = default;
  auto operator<=>(const MatrixEntry&) const = default;
};

enum class Axis : uint8_t { row, col };

struct PeelStep {
  Axis axis = Axis::row;
  int index = 0;
  // The line's surviving 1-entries at peel time, at most two, in increasing
  // cross-index order: removed[0] = e_1, removed[1] = e_2.
  std::vector<MatrixEntry> removed;
  bool operator==(const PeelStep&) const = default;
};

struct PeelTrace {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<PeelStep> steps;
  bool operator==(const PeelTrace&) const = default;
};

// A submatrix in which every row and every column has at least three ones:
// the (3,3)-core, certifying that peeling cannot empty the matrix.
struct CoreWitness {
  std::vector<int> rows;
  std::vector<int> cols;
  bool operator==(const CoreWitness&) const = default;
};

struct ForestDecomposition {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<MatrixEntry> forest_1;
  std::vector<MatrixEntry> forest_2;
  bool operator==(const ForestDecomposition&) const = default;
};

struct Star {
  int center = 0;               // global vertex id
  std::vector<int> leaves;      // global vertex ids, increasing
  bool operator==(const Star&) const = default;
};

struct StarUnion {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<Star> stars;          // sorted by center
  std::vector<int> star_of_vertex;  // size n_rows + n_cols; -1 when unassigned
  bool operator==(const StarUnion&) const = default;
};

struct Certificate {
  PeelTrace trace;
  ForestDecomposition forests;
  std::array<StarUnion, 4> star_unions;  // forest_1 classes 0,1 then forest_2 classes 0,1
  bool operator==(const Certificate&) const = default;
};

// Thrown by forest_decompose on non-peelable input; carries the core.
struct not_peelable_error : std::runtime_error {
  CoreWitness witness;
  explicit not_peelable_error(CoreWitness w)
      : std::runtime_error("matrix has a nonempty (3,3)-core"), witness(std::move(w)) {}
};

using PeelResult = std::variant<PeelTrace, CoreWitness>;

// Iteratively removes lines (rows/columns) with at most two surviving ones.
// Among peelable lines the lowest index goes first, rows before columns.
// Returns the trace when the matrix empties, else the maximal remaining
// (3,3)-core as a witness (invariant-checked before return).
PeelResult peel(const BooleanMatrix& F);

// Same, but the next peelable line is drawn uniformly from the candidates.
// The peelability verdict and the witness are order-independent; this
// variant exists to test exactly that.
PeelResult peel_seeded(const BooleanMatrix& F, uint64_t order_seed);

// Forest pair from a peel trace: replaying the trace in reverse re-inserts
// each line before any of its recorded entries' partners, so collecting e_1
// into forest_1 and e_2 into forest_2 keeps both acyclic.  Acyclicity is
// re-verified before returning.
ForestDecomposition forest_from_trace(const PeelTrace& trace);

// peel + forest_from_trace; throws not_peelable_error on a nonempty core.
ForestDecomposition forest_decompose(const BooleanMatrix& F);

// Roots every tree of the (acyclic) edge set at its minimum-id vertex and
// splits edges by parent depth parity: even-depth parents' edges form one
// star union, odd-depth parents' the other.  Throws parameter_error on
// cyclic input.
std::pair<StarUnion, StarUnion> star_decompose(const std::vector<MatrixEntry>& forest_edges, int n_rows,
                                               int n_cols);

// End-to-end: peel, decompose into two forests, star-decompose each.
// The returned certificate is validated before return.
std::variant<Certificate, CoreWitness> certify(const BooleanMatrix& F);

// Independent validators; throw validation_error with a description.
void validate_core_witness(const BooleanMatrix& F, const CoreWitness& witness);
void validate_forest_decomposition(const BooleanMatrix& F, const ForestDecomposition& fd);
void validate_star_union(const StarUnion& u);
void validate_certificate(const BooleanMatrix& F, const Certificate& cert);

// Edges covered by a star union, normalized to matrix entries.
std::vector<MatrixEntry> star_union_edges(const StarUnion& u);

struct SurveySample {
  int index = 0;
  std::vector<int> rows;
  std::vector<int> cols;
  bool peelable = false;
  std::optional<Certificate> certificate;  // when peelable
  std::optional<CoreWitness> witness;      // when not
};

struct SurveyReport {
  int k = 0;
  int64_t samples = 0;
  double peelable_fraction = 0.0;
  std::vector<SurveySample> records;
};

// Certifies `samples` uniform k x k submatrices (uniform row set, uniform
// column set, derived per-sample seeds); deterministic in seed and worker
// count.
SurveyReport survey_submatrices(const BooleanMatrix& M, int k, int samples, uint64_t seed);

// CSV: header sample,rows,cols,peelable,witness_size; index lists are
// colon-joined; witness_size = rows*cols of the core (0 when peelable).
std::string survey_to_csv(const SurveyReport& report);

nlohmann::json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& doc);
nlohmann::json core_witness_to_json(const CoreWitness& witness);

}  // namespace ccwb
