#include "ccwb/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ccwb/bitmatrix.hpp"
#include "ccwb/discrepancy.hpp"
#include "ccwb/errors.hpp"
#include "ccwb/protocol.hpp"
#include "ccwb/rng.hpp"
#include "ccwb/structure.hpp"
#include "ccwb/zoo.hpp"

namespace ccwb::cli {
namespace {

// All floating-point text goes through one formatter so outputs are
// byte-stable across runs and worker counts.
std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string join_colon(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ':';
    s += std::to_string(v[i]);
  }
  return s;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw io_error("write failed: " + path);
}

// Largest k with k^4 <= n (the default submatrix size for surveys).
int quartic_root_floor(int n) {
  int k = 1;
  while (static_cast<int64_t>(k + 1) * (k + 1) * (k + 1) * (k + 1) <= n) ++k;
  return k;
}

struct GenOptions {
  int n = 0;
  std::optional<int> w;
  std::optional<int64_t> r;
  uint64_t seed = 0;
  std::string output;
};

int cmd_gen(const GenOptions& opt, std::ostream& out) {
  ConstructionParams params;
  params.n = opt.n;
  params.w = opt.w;
  params.r_override = opt.r;
  params.seed = opt.seed;
  int64_t r = params.resolved_r();
  BooleanMatrix m = gen_row_regular(params);
  m.save_bmat(opt.output);
  out << "n=" << opt.n << " r=" << r << " seed=" << opt.seed << "\n";
  return exit_ok;
}

struct DiscOptions {
  std::string input;
  std::string method = "exact";
  int restarts = 32;
  std::optional<uint64_t> seed;
  std::string output;  // optional CSV
};

int cmd_disc(const DiscOptions& opt, std::ostream& out) {
  BooleanMatrix m = BooleanMatrix::load_bmat(opt.input);
  HardDistribution mu = mu_from_matrix(m);
  DiscReport report;
  if (opt.method == "exact") {
    if (std::min(m.n_rows(), m.n_cols()) > 24)
      throw parameter_error("matrix too large for exact discrepancy (smaller dimension " +
                            std::to_string(std::min(m.n_rows(), m.n_cols())) +
                            " > 24); rerun with --method local");
    report = disc_exact(m, mu);
  } else {
    if (!opt.seed.has_value()) throw parameter_error("--method local requires --seed");
    report = disc_local_search(m, mu, opt.restarts, *opt.seed);
  }
  const Rational eps(1, 6);
  double bound = rcc_lower_bound(report.value, eps);

  nlohmann::json doc = disc_report_to_json(report);
  doc["epsilon_num"] = eps.num();
  doc["epsilon_den"] = eps.den();
  doc["rcc_lower_bound"] = bound;
  out << doc.dump(2) << "\n";

  if (!opt.output.empty()) {
    std::ostringstream csv;
    csv << "method,value_num,value_den,value,rows,cols,restarts,rcc_lower_bound\n";
    csv << to_string(report.method) << ',' << report.value.num() << ',' << report.value.den() << ','
        << fmt(report.value.to_double()) << ',' << join_colon(report.argmax.rows) << ','
        << join_colon(report.argmax.cols) << ',';
    if (report.method == DiscReport::Method::local_search) csv << report.restarts;
    csv << ',' << fmt(bound) << "\n";
    write_text_file(opt.output, csv.str());
  }
  return exit_ok;
}

struct VerifyIiOptions {
  std::string input;
  int k = 0;
  int samples = 0;
  uint64_t seed = 0;
  int t_check = 4;
  int mc_inputs = 4;     // how many peelable samples get a Monte Carlo error estimate
  int64_t mc_samples = 200;
  std::string output;
};

int cmd_verify_ii(const VerifyIiOptions& opt, std::ostream& out) {
  BooleanMatrix m = BooleanMatrix::load_bmat(opt.input);
  if (opt.mc_inputs < 0 || opt.mc_samples < 1) throw parameter_error("invalid Monte Carlo sample counts");
  SurveyReport survey = survey_submatrices(m, opt.k, opt.samples, opt.seed);

  std::ostringstream csv;
  csv << "sample,rows,cols,peelable,witness_size,cost,mc_error,mc_radius\n";
  int measured = 0;
  double max_mc_error = 0.0, max_mc_radius = 0.0;
  int64_t peelable = 0;
  for (const SurveySample& rec : survey.records) {
    csv << rec.index << ',' << join_colon(rec.rows) << ',' << join_colon(rec.cols) << ','
        << (rec.peelable ? 1 : 0) << ',';
    if (rec.witness.has_value())
      csv << static_cast<int64_t>(rec.witness->rows.size()) * static_cast<int64_t>(rec.witness->cols.size());
    else
      csv << 0;
    csv << ',';
    if (rec.peelable) {
      ++peelable;
      CompiledSparseProtocol csp = compile_sparse_protocol(rec.certificate->forests, opt.t_check);
      csv << csp.cost() << ',';
      if (measured < opt.mc_inputs) {
        BooleanMatrix sub = submatrix(m, Rectangle{rec.rows, rec.cols});
        ErrorReport err = error_monte_carlo(csp.protocol, sub, opt.mc_samples,
                                            mix64(opt.seed, static_cast<uint64_t>(rec.index) + 1));
        csv << fmt(err.max_error) << ',' << fmt(err.radius);
        max_mc_error = std::max(max_mc_error, err.max_error);
        max_mc_radius = std::max(max_mc_radius, err.radius);
        ++measured;
      } else {
        csv << ',';
      }
    } else {
      csv << ",,";
    }
    csv << "\n";
  }
  write_text_file(opt.output, csv.str());

  out << "peelable_fraction=" << fmt(survey.peelable_fraction) << " peelable=" << peelable << "/"
      << survey.samples << " k=" << survey.k << " t_check=" << opt.t_check << "\n";
  out << "measured=" << measured << " max_mc_error=" << fmt(max_mc_error)
      << " max_mc_radius=" << fmt(max_mc_radius) << "\n";
  return exit_ok;
}

struct CounterexampleOptions {
  std::vector<int> ns;
  int w = 1;
  std::optional<int> k;
  int samples = 100;
  int restarts = 32;
  int gt_k = 4;
  uint64_t seed = 0;
  std::string output;
};

int cmd_counterexample(const CounterexampleOptions& opt, std::ostream& out) {
  if (opt.w < 0 || opt.w > 20) throw parameter_error("w must lie in [0, 20]");
  if (opt.gt_k < 2) throw parameter_error("gt-k must be >= 2");
  std::ostringstream csv;
  csv << "n,r,seed,disc_method,disc_num,disc_den,disc,rcc_bound,disc_seed,restarts,k,survey_samples,"
         "survey_seed,peelable_fraction,gt_k,gt_status\n";
  const Rational eps(1, 6);
  for (int n : opt.ns) {
    if (n < 2) throw parameter_error("counterexample requires n >= 2");
    // Nominal r = 2^{3w}, clamped to n-1 so the matrix keeps both values and
    // the hard distribution stays well defined.
    int64_t r = std::min<int64_t>(int64_t{1} << (3 * opt.w), n - 1);
    uint64_t seed_n = mix64(opt.seed, static_cast<uint64_t>(n));
    ConstructionParams params;
    params.n = n;
    params.r_override = r;
    params.seed = seed_n;
    BooleanMatrix m = gen_row_regular(params);
    HardDistribution mu = mu_from_matrix(m);

    DiscReport disc;
    uint64_t disc_seed = mix64(seed_n, 2);
    bool exact = n <= 24;
    disc = exact ? disc_exact(m, mu) : disc_local_search(m, mu, opt.restarts, disc_seed);
    double bound = rcc_lower_bound(disc.value, eps);

    int k = opt.k.has_value() ? *opt.k : quartic_root_floor(n);
    uint64_t survey_seed = mix64(seed_n, 1);
    SurveyReport survey = survey_submatrices(m, k, opt.samples, survey_seed);
    GtSearch gt = contains_gt(m, opt.gt_k);

    csv << n << ',' << r << ',' << seed_n << ',' << to_string(disc.method) << ',' << disc.value.num()
        << ',' << disc.value.den() << ',' << fmt(disc.value.to_double()) << ',' << fmt(bound) << ',';
    if (!exact) csv << disc_seed;
    csv << ',';
    if (!exact) csv << opt.restarts;
    csv << ',' << k << ',' << survey.samples << ',' << survey_seed << ','
        << fmt(survey.peelable_fraction) << ',' << opt.gt_k << ',' << to_string(gt.status) << "\n";

    out << "n=" << n << " r=" << r << " disc=" << fmt(disc.value.to_double()) << " ("
        << to_string(disc.method) << ") rcc_bound=" << fmt(bound)
        << " peelable_fraction=" << fmt(survey.peelable_fraction) << " gt" << opt.gt_k << "="
        << to_string(gt.status) << "\n";
  }
  write_text_file(opt.output, csv.str());
  return exit_ok;
}

struct DerandomizeOptions {
  int n = 0;
  int t = 0;
  int fingerprints = 2;
  int attempts = 50;
  uint64_t seed = 0;
  std::string output;
};

int cmd_derandomize(const DerandomizeOptions& opt, std::ostream& out, std::ostream& err) {
  BooleanMatrix m = gen_identity(opt.n);
  RandomizedProtocol rp = equality_protocol({opt.n, opt.fingerprints});
  std::optional<DerandomizeResult> result = derandomize_majority(m, rp, opt.t, opt.attempts, opt.seed);
  if (!result.has_value()) {
    err << "error: no majority bundle of " << opt.t << " trees found within " << opt.attempts
        << " attempts\n";
    return exit_failed;
  }
  if (!majority_computes(result->trees, m)) throw validation_error("derandomized bundle failed re-verification");

  nlohmann::json doc;
  doc["alice_domain"] = opt.n;
  doc["bob_domain"] = opt.n;
  doc["t"] = opt.t;
  nlohmann::json trees = nlohmann::json::array();
  size_t total_nodes = 0;
  for (const ProtocolTree& tree : result->trees) {
    trees.push_back(tree.to_json());
    total_nodes += tree.node_count();
  }
  doc["trees"] = std::move(trees);
  std::string text = doc.dump(2);
  text += "\n";
  write_text_file(opt.output, text);

  out << "t=" << opt.t << " attempts_used=" << result->attempts_used << " total_nodes=" << total_nodes
      << " description_bytes=" << text.size() << "\n";
  return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"workbench for two-party communication complexity experiments"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a random row-regular matrix (BMAT v1)");
  gen_cmd->add_option("--n", gen.n, "matrix side")->required();
  CLI::Option* gen_r = gen_cmd->add_option("--r", gen.r, "ones per row");
  gen_cmd->add_option("--w", gen.w, "width parameter; resolves r = 2^(3w)")->excludes(gen_r);
  gen_cmd->add_option("--seed", gen.seed, "PRNG seed (required: no wall-clock default)")->required();
  gen_cmd->add_option("-o,--output", gen.output, "output matrix file")->required();

  DiscOptions disc;
  CLI::App* disc_cmd = app.add_subcommand("disc", "rectangle discrepancy under the hard distribution");
  disc_cmd->add_option("-i,--input", disc.input, "matrix file")->required();
  disc_cmd->add_option("--method", disc.method, "exact | local")
      ->check(CLI::IsMember({"exact", "local"}))
      ->capture_default_str();
  disc_cmd->add_option("--restarts", disc.restarts, "local search restarts")->capture_default_str();
  disc_cmd->add_option("--seed", disc.seed, "PRNG seed (required for --method local)");
  disc_cmd->add_option("-o,--output", disc.output, "optional CSV report");

  VerifyIiOptions vii;
  CLI::App* vii_cmd = app.add_subcommand("verify-ii", "survey k x k submatrices and compile their protocols");
  vii_cmd->add_option("-i,--input", vii.input, "matrix file")->required();
  vii_cmd->add_option("--k", vii.k, "submatrix side")->required();
  vii_cmd->add_option("--samples", vii.samples, "number of sampled submatrices")->required();
  vii_cmd->add_option("--seed", vii.seed, "PRNG seed")->required();
  vii_cmd->add_option("--t-check", vii.t_check, "fingerprint rounds per star-union check")
      ->capture_default_str();
  vii_cmd->add_option("--mc-inputs", vii.mc_inputs, "peelable samples given a Monte Carlo error estimate")
      ->capture_default_str();
  vii_cmd->add_option("--mc-samples", vii.mc_samples, "Monte Carlo samples per input")
      ->capture_default_str();
  vii_cmd->add_option("-o,--output", vii.output, "CSV report")->required();

  CounterexampleOptions ce;
  CLI::App* ce_cmd = app.add_subcommand("counterexample", "end-to-end report: discrepancy bound vs. submatrix structure");
  ce_cmd->add_option("--n", ce.ns, "matrix sides (repeatable)")->required();
  ce_cmd->add_option("--w", ce.w, "width parameter; nominal r = 2^(3w), clamped to n-1")
      ->capture_default_str();
  ce_cmd->add_option("--k", ce.k, "submatrix side (default: floor(n^(1/4)))");
  ce_cmd->add_option("--samples", ce.samples, "survey samples per n")->capture_default_str();
  ce_cmd->add_option("--restarts", ce.restarts, "local search restarts for n > 24")->capture_default_str();
  ce_cmd->add_option("--gt-k", ce.gt_k, "order of the staircase pattern to search for")
      ->capture_default_str();
  ce_cmd->add_option("--seed", ce.seed, "PRNG seed")->required();
  ce_cmd->add_option("-o,--output", ce.output, "CSV report")->required();

  DerandomizeOptions dr;
  CLI::App* dr_cmd = app.add_subcommand("derandomize", "majority-of-t derandomization of the equality protocol");
  dr_cmd->add_option("--n", dr.n, "identity matrix side")->required();
  dr_cmd->add_option("--t", dr.t, "number of trees in the majority bundle")->required();
  dr_cmd->add_option("--fingerprints", dr.fingerprints, "fingerprint rounds of the base protocol")
      ->capture_default_str();
  dr_cmd->add_option("--attempts", dr.attempts, "maximum bundle draws")->capture_default_str();
  dr_cmd->add_option("--seed", dr.seed, "PRNG seed")->required();
  dr_cmd->add_option("-o,--output", dr.output, "protocol list file (JSON)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? exit_ok : exit_params;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (disc_cmd->parsed()) return cmd_disc(disc, out);
    if (vii_cmd->parsed()) return cmd_verify_ii(vii, out);
    if (ce_cmd->parsed()) return cmd_counterexample(ce, out);
    if (dr_cmd->parsed()) return cmd_derandomize(dr, out, err);
  } catch (const parameter_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_params;
  } catch (const io_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failed;
  }
  err << "error: no subcommand selected\n";
  return exit_params;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace ccwb::cli
