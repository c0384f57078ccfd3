// Python bindings: a thin veneer over the C++ core exposing the operations
// the CLI offers, with plain dict/tuple return values.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <variant>

#include "ccwb/bitmatrix.hpp"
#include "ccwb/discrepancy.hpp"
#include "ccwb/errors.hpp"
#include "ccwb/protocol.hpp"
#include "ccwb/rng.hpp"
#include "ccwb/structure.hpp"
#include "ccwb/zoo.hpp"

namespace py = pybind11;
using namespace ccwb;

namespace {

std::vector<std::string> row_strings(const BooleanMatrix& m) {
  std::vector<std::string> rows;
  rows.reserve(static_cast<size_t>(m.n_rows()));
  for (int i = 0; i < m.n_rows(); ++i) {
    std::string row(static_cast<size_t>(m.n_cols()), '0');
    for (int j = 0; j < m.n_cols(); ++j)
      if (m.get_unchecked(i, j)) row[j] = '1';
    rows.push_back(std::move(row));
  }
  return rows;
}

BooleanMatrix make_row_regular(int n, std::optional<int> w, std::optional<int64_t> r, uint64_t seed) {
  if (w && r) throw parameter_error("give either w or r, not both");
  ConstructionParams p;
  p.n = n;
  p.w = w;
  p.r_override = r;
  p.seed = seed;
  return gen_row_regular(p);
}

py::dict disc_report_dict(const DiscReport& rep) {
  py::dict d;
  d["method"] = rep.method == DiscReport::Method::exact ? "exact" : "local_search";
  d["value"] = rep.value.to_double();
  d["value_num"] = static_cast<int64_t>(rep.value.num());
  d["value_den"] = static_cast<int64_t>(rep.value.den());
  d["rows"] = rep.argmax.rows;
  d["cols"] = rep.argmax.cols;
  if (rep.method == DiscReport::Method::local_search) d["restarts"] = rep.restarts;
  return d;
}

py::dict disc(const BooleanMatrix& m, const std::string& method, int restarts,
              std::optional<uint64_t> seed) {
  HardDistribution mu = mu_from_matrix(m);
  if (method == "exact") return disc_report_dict(disc_exact(m, mu));
  if (method == "local") {
    if (!seed) throw parameter_error("local search needs a seed");
    return disc_report_dict(disc_local_search(m, mu, restarts, *seed));
  }
  throw parameter_error("method must be \"exact\" or \"local\"");
}

py::object core_witness(const BooleanMatrix& m) {
  PeelResult res = peel(m);
  if (std::holds_alternative<PeelTrace>(res)) return py::none();
  const CoreWitness& w = std::get<CoreWitness>(res);
  return py::make_tuple(w.rows, w.cols);
}

py::dict survey(const BooleanMatrix& m, int k, int samples, uint64_t seed) {
  SurveyReport rep = survey_submatrices(m, k, samples, seed);
  py::dict d;
  d["k"] = rep.k;
  d["samples"] = rep.samples;
  d["peelable_fraction"] = rep.peelable_fraction;
  return d;
}

py::dict gt_search(const BooleanMatrix& m, int k, uint64_t budget) {
  GtSearch s = contains_gt(m, k, budget);
  py::dict d;
  d["status"] = to_string(s.status);
  if (s.witness) {
    d["rows"] = s.witness->rows;
    d["cols"] = s.witness->cols;
  }
  return d;
}

CompiledSparseProtocol compile_from_matrix(const BooleanMatrix& m, int t_check) {
  return compile_sparse_protocol(forest_decompose(m), t_check);
}

py::tuple equality_error(int n, int t) {
  Rational e = error_exact(equality_protocol({n, t}), gen_identity(n)).max_error_exact;
  return py::make_tuple(static_cast<int64_t>(e.num()), static_cast<int64_t>(e.den()));
}

py::object derandomize(int n, int t, int fingerprints, int attempts, uint64_t seed) {
  BooleanMatrix m = gen_identity(n);
  auto res = derandomize_majority(m, equality_protocol({n, fingerprints}), t, attempts, seed);
  if (!res) return py::none();
  py::dict d;
  d["attempts_used"] = res->attempts_used;
  d["trees"] = res->trees.size();
  return py::cast<py::object>(std::move(d));
}

}  // namespace

PYBIND11_MODULE(_ccwb, mod) {
  mod.doc() = "Communication-complexity workbench core";

  py::register_exception<parameter_error>(mod, "ParameterError", PyExc_ValueError);
  py::register_exception<io_error>(mod, "IoError", PyExc_OSError);
  py::register_exception<validation_error>(mod, "ValidationError", PyExc_RuntimeError);
  py::register_exception<not_peelable_error>(mod, "NotPeelableError", PyExc_ValueError);

  py::class_<BooleanMatrix>(mod, "BooleanMatrix")
      .def_static("from_rows", [](const std::vector<std::string>& rows) {
        return BooleanMatrix::from_rows(rows);
      })
      .def_property_readonly("n_rows", &BooleanMatrix::n_rows)
      .def_property_readonly("n_cols", &BooleanMatrix::n_cols)
      .def("get", &BooleanMatrix::get)
      .def("rows", &row_strings)
      .def("to_bmat", &BooleanMatrix::to_bmat)
      .def("save_bmat", &BooleanMatrix::save_bmat)
      .def("count_ones", [](const BooleanMatrix& m) { return m.count_ones(); })
      .def("__eq__", [](const BooleanMatrix& a, const BooleanMatrix& b) { return a == b; })
      .def("__repr__", [](const BooleanMatrix& m) {
        return "BooleanMatrix(" + std::to_string(m.n_rows()) + "x" + std::to_string(m.n_cols()) + ")";
      });

  mod.def("identity", &gen_identity, py::arg("n"));
  mod.def("gt", &gen_gt, py::arg("n"));
  mod.def("row_regular", &make_row_regular, py::arg("n"), py::kw_only(), py::arg("w") = std::nullopt,
          py::arg("r") = std::nullopt, py::arg("seed"));
  mod.def("load_bmat", &BooleanMatrix::load_bmat, py::arg("path"));
  mod.def(
      "submatrix",
      [](const BooleanMatrix& m, std::vector<int> rows, std::vector<int> cols) {
        return submatrix(m, Rectangle{std::move(rows), std::move(cols)});
      },
      py::arg("m"), py::arg("rows"), py::arg("cols"));
  mod.def("zero_out_row", &zero_out_row, py::arg("m"), py::arg("row"));
  mod.def("contains_gt", &gt_search, py::arg("m"), py::arg("k"),
          py::arg("budget") = uint64_t{50'000'000});

  mod.def("disc", &disc, py::arg("m"), py::kw_only(), py::arg("method") = "exact",
          py::arg("restarts") = 32, py::arg("seed") = std::nullopt);
  mod.def(
      "rcc_lower_bound",
      [](int64_t num, int64_t den, int64_t eps_num, int64_t eps_den) {
        return rcc_lower_bound(Rational(num, den), Rational(eps_num, eps_den));
      },
      py::arg("value_num"), py::arg("value_den"), py::arg("eps_num") = 1, py::arg("eps_den") = 6);
  mod.def("bernstein_tail", &bernstein_tail, py::arg("n"), py::arg("r"), py::arg("t"));
  mod.def(
      "expected_rect_mass",
      [](int64_t n, int64_t r, int64_t a, int64_t b) { return expected_rect_mass(n, r, a, b).to_double(); },
      py::arg("n"), py::arg("r"), py::arg("a"), py::arg("b"));

  mod.def("peelable",
          [](const BooleanMatrix& m) { return std::holds_alternative<PeelTrace>(peel(m)); });
  mod.def("core_witness", &core_witness, py::arg("m"));
  mod.def("survey", &survey, py::arg("m"), py::arg("k"), py::arg("samples"), py::arg("seed"));

  py::class_<CompiledSparseProtocol>(mod, "CompiledProtocol")
      .def_property_readonly("cost", &CompiledSparseProtocol::cost)
      .def_readonly("t_check", &CompiledSparseProtocol::t_check)
      .def_readonly("n_rows", &CompiledSparseProtocol::n_rows)
      .def_readonly("n_cols", &CompiledSparseProtocol::n_cols)
      .def("evaluate", &CompiledSparseProtocol::evaluate, py::arg("u"), py::arg("v"), py::arg("seed"))
      .def("surrogate_matrix", &CompiledSparseProtocol::exact_surrogate_matrix);
  mod.def("compile_protocol", &compile_from_matrix, py::arg("m"), py::arg("t_check") = 4);

  mod.def("equality_error", &equality_error, py::arg("n"), py::arg("t"));
  mod.def("deterministic_cc", &deterministic_cc_exact, py::arg("m"));
  mod.def("derandomize", &derandomize, py::arg("n"), py::arg("t"), py::kw_only(),
          py::arg("fingerprints") = 2, py::arg("attempts") = 50, py::arg("seed"));
}
