// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Criteria 1-10 exercise the library directly; criterion 11 drives the real
// CLI binary (CCWB_CLI_BIN) against committed golden outputs (CCWB_GOLDEN_DIR)
// across repeated runs and worker counts.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ccwb/bitmatrix.hpp"
#include "ccwb/discrepancy.hpp"
#include "ccwb/protocol.hpp"
#include "ccwb/rng.hpp"
#include "ccwb/structure.hpp"
#include "ccwb/zoo.hpp"

using namespace ccwb;

namespace {

struct Check {
  std::string label;
  std::function<void()> body;  // throws std::runtime_error on failure
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

BooleanMatrix row_regular(int n, int64_t r, uint64_t seed) {
  ConstructionParams p;
  p.n = n;
  p.r_override = r;
  p.seed = seed;
  return gen_row_regular(p);
}

int ceil_log2_int(int n) {
  int lg = 0;
  while ((1 << lg) < n) ++lg;
  return lg;
}

// ---- criterion bodies -----------------------------------------------------

void c1_equality_oracle() {
  for (int n = 4; n <= 8; ++n) {
    RandomizedProtocol rp = equality_protocol({n, 2});
    expect(rp.cost_bound() == 3, "cost != 3 at n=" + std::to_string(n));
    ErrorReport rep = error_exact(rp, gen_identity(n));
    expect(rep.max_error_exact == Rational(1, 4), "error != 1/4 at n=" + std::to_string(n));
  }
}

void c2_deterministic_oracle() {
  for (int n : {2, 3, 4, 5, 8}) {
    int got = deterministic_cc_exact(gen_identity(n));
    expect(got == ceil_log2_int(n) + 1,
           "D(I_" + std::to_string(n) + ") = " + std::to_string(got));
  }
}

void c3_discrepancy_pipeline() {
  BooleanMatrix i2 = gen_identity(2);
  DiscReport rep = disc_exact(i2, mu_from_matrix(i2));
  expect(rep.value == Rational(1, 4), "disc_exact(I_2) != 1/4");
  double bound = rcc_lower_bound(rep.value, Rational(1, 6));
  expect(std::abs(bound - std::log2(4.0 / 3.0)) <= 1e-9, "bound != log2(4/3)");
  for (int n = 2; n <= 12; ++n) {
    BooleanMatrix m = gen_identity(n);
    double b = rcc_lower_bound(disc_exact(m, mu_from_matrix(m)).value, Rational(1, 6));
    int cost = equality_protocol({n, 2}).cost_bound();
    expect(b <= cost, "bound exceeds protocol cost at n=" + std::to_string(n));
  }
}

void c4_concentration() {
  const int samples = 100000;
  std::vector<int64_t> exceed(3, 0);
  const double ts[3] = {4.0, 8.0, 12.0};
  const double mean = expected_rect_mass(16, 4, 8, 8).to_double();
  for (int s = 0; s < samples; ++s) {
    BooleanMatrix m = row_regular(16, 4, mix64(0xACCE5501, static_cast<uint64_t>(s)));
    int x = 0;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) x += m.get_unchecked(i, j);
    double dev = std::abs(x - mean);
    for (int k = 0; k < 3; ++k)
      if (dev > ts[k]) ++exceed[k];
  }
  for (int k = 0; k < 3; ++k) {
    double empirical = static_cast<double>(exceed[k]) / samples;
    double predicted = bernstein_tail(16, 4, ts[k]);
    expect(empirical <= predicted, "tail violated at t=" + std::to_string(ts[k]) + ": empirical " +
                                       std::to_string(empirical) + " > " + std::to_string(predicted));
  }
}

void c5_desk_scale_discrepancy() {
  int ok = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    BooleanMatrix m = row_regular(24, 16, seed);
    Rational v = disc_exact(m, mu_from_matrix(m)).value;
    if (v <= Rational(3, 4)) ++ok;
  }
  expect(ok >= 19, "disc <= 0.75 held only " + std::to_string(ok) + "/20 times");
}

void c6_structure_pipeline() {
  const int matrices = 500;
  const int t_check = 4;
  const double threshold = 4.0 * std::pow(2.0, -t_check) + 0.02;
  for (int s = 0; s < matrices; ++s) {
    BooleanMatrix m = row_regular(64, 2, 0x51AB0000u + static_cast<uint64_t>(s));
    auto res = certify(m);
    expect(std::holds_alternative<Certificate>(res), "matrix not peelable at seed " + std::to_string(s));
    const Certificate& cert = std::get<Certificate>(res);
    validate_certificate(m, cert);

    CompiledSparseProtocol csp = compile_sparse_protocol(cert.forests, t_check);
    expect(csp.cost() == 4 * (t_check + 1), "cost != 4(t+1)");
    expect(csp.exact_surrogate_matrix() == m, "decomposition does not reproduce the matrix");

    // Full input sweep: 1-entries never err, under several probed seeds.
    for (uint64_t probe : {uint64_t{1}, uint64_t{2}, uint64_t{3}}) {
      uint64_t seed = mix64(0xE221, mix64(static_cast<uint64_t>(s), probe));
      for (int u = 0; u < 64; ++u)
        for (int v = 0; v < 64; ++v)
          if (m.get_unchecked(u, v))
            expect(csp.evaluate(u, v, seed) == 1, "1-entry erred");
    }

    // Pooled Monte Carlo over all 0-entries (each has the same exact error
    // 1-(1-2^-4)^4 ~= 0.2275 by pairwise independence of the four checks).
    CounterRng rng = CounterRng::keyed({0xC6C6, static_cast<uint64_t>(s)});
    int64_t wrong = 0, total = 0;
    for (int u = 0; u < 64; ++u)
      for (int v = 0; v < 64; ++v) {
        if (m.get_unchecked(u, v)) continue;
        for (int k = 0; k < 50; ++k) {
          wrong += csp.evaluate(u, v, rng.next());
          ++total;
        }
      }
    double pooled = static_cast<double>(wrong) / static_cast<double>(total);
    expect(pooled <= threshold, "pooled 0-entry error " + std::to_string(pooled) + " > " +
                                    std::to_string(threshold) + " at seed " + std::to_string(s));
  }

  // Per-input form on one small instance: the max over 0-entries with 6000
  // samples per entry stays under the same threshold.
  BooleanMatrix m8 = row_regular(8, 2, 1);
  auto res8 = certify(m8);
  expect(std::holds_alternative<Certificate>(res8), "8x8 instance not peelable");
  CompiledSparseProtocol csp8 = compile_sparse_protocol(std::get<Certificate>(res8).forests, t_check);
  double max_err = 0.0;
  CounterRng rng8(0x8888);
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      if (m8.get_unchecked(u, v)) continue;
      int wrong = 0;
      for (int k = 0; k < 6000; ++k) wrong += csp8.evaluate(u, v, rng8.next());
      max_err = std::max(max_err, wrong / 6000.0);
    }
  expect(max_err <= threshold, "per-input 0-entry error " + std::to_string(max_err));
}

void c7_survey() {
  BooleanMatrix m = row_regular(4096, 8, 0x50C7);
  SurveyReport rep = survey_submatrices(m, 8, 1000, 0xBEE);
  expect(rep.peelable_fraction == 1.0,
         "peelable fraction " + std::to_string(rep.peelable_fraction));
  for (const SurveySample& rec : rep.records) {
    expect(rec.certificate.has_value(), "missing certificate");
    BooleanMatrix sub = submatrix(m, Rectangle{rec.rows, rec.cols});
    validate_certificate(sub, *rec.certificate);
  }
}

void c8_row_zeroing() {
  for (int s = 0; s < 50; ++s) {
    int n = 4 + (s % 5);
    int z = s % n;
    RandomizedProtocol orig;
    BooleanMatrix m;
    if (s % 2 == 0) {
      m = row_regular(n, 2, 0x20E0 + static_cast<uint64_t>(s));
      orig = point_mass(index_protocol(m));
    } else {
      m = gen_identity(n);
      orig = equality_protocol({n, 2});
    }
    RandomizedProtocol lifted = lift_row_zeroing(orig, z);
    expect(lifted.cost_bound() == orig.cost_bound() + 1, "lift cost != cost + 1");
    BooleanMatrix mz = zero_out_row(m, z);
    Rational before = error_exact(orig, m).max_error_exact;
    Rational after = error_exact(lifted, mz).max_error_exact;
    expect(after <= before, "lifted error grew at pair " + std::to_string(s));
  }
}

void c9_derandomization() {
  BooleanMatrix i4 = gen_identity(4);
  RandomizedProtocol rp = equality_protocol({4, 2});
  auto res = derandomize_majority(i4, rp, 33, 50, 1);
  expect(res.has_value(), "no bundle found in 50 attempts");
  expect(res->attempts_used <= 50, "attempt budget exceeded");
  expect(res->trees.size() == 33, "bundle size != 33");
  expect(majority_computes(res->trees, i4), "majority identity fails on some input");
}

void c10_enumeration() {
  auto c1 = enumerate_cost_c_matrices(2, 1);
  expect(c1.size() == 6, "enumerate(2,1) has " + std::to_string(c1.size()) + " matrices");
  size_t prev = 0;
  std::vector<std::string> prev_keys;
  for (int c = 0; c <= 3; ++c) {
    auto level = enumerate_cost_c_matrices(2, c);
    expect(level.size() >= prev, "not monotone at c=" + std::to_string(c));
    std::vector<std::string> keys;
    for (const BooleanMatrix& m : level) keys.push_back(m.to_bmat());
    for (const std::string& k : prev_keys)
      expect(std::find(keys.begin(), keys.end(), k) != keys.end(),
             "level " + std::to_string(c) + " lost a matrix");
    prev = level.size();
    prev_keys = std::move(keys);
  }
}

// ---- criterion 11: golden CLI outputs --------------------------------------

struct GoldenConfig {
  std::string name;
  std::string args;             // with {G} = golden dir, {O} = output dir
  std::vector<std::string> outputs;  // file names produced in {O}
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string substitute(std::string s, const std::string& from, const std::string& to) {
  for (size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from))
    s.replace(pos, from.size(), to);
  return s;
}

void c11_golden_cli() {
  const char* bin = std::getenv("CCWB_CLI_BIN");
  const char* golden = std::getenv("CCWB_GOLDEN_DIR");
  expect(bin != nullptr, "CCWB_CLI_BIN not set");
  expect(golden != nullptr, "CCWB_GOLDEN_DIR not set");

  const std::vector<GoldenConfig> configs = {
      {"g1", "gen --n 16 --r 4 --seed 7 -o {O}/g1.bmat", {"g1.bmat"}},
      {"g2", "disc -i {G}/g1.bmat --method exact -o {O}/g2.csv", {"g2.csv"}},
      {"g3",
       "verify-ii -i {G}/g1.bmat --k 6 --samples 50 --seed 11 --mc-inputs 2 --mc-samples 100 "
       "-o {O}/g3.csv",
       {"g3.csv"}},
      {"g4", "counterexample --n 8 --n 12 --w 1 --samples 40 --gt-k 4 --seed 3 -o {O}/g4.csv", {"g4.csv"}},
      {"g5", "derandomize --n 4 --t 33 --fingerprints 2 --attempts 50 --seed 1 -o {O}/g5.json", {"g5.json"}},
  };

  int prep = std::system("rm -rf acceptance_out && mkdir -p acceptance_out");
  expect(prep == 0, "could not prepare acceptance_out");
  for (const GoldenConfig& cfg : configs) {
    for (int workers : {1, 4}) {
      for (int run = 0; run < 2; ++run) {
        std::string args = substitute(substitute(cfg.args, "{G}", golden), "{O}", "acceptance_out");
        std::string cmd = "CCWB_WORKERS=" + std::to_string(workers) + " " + std::string(bin) + " " +
                          args + " >acceptance_out/stdout.txt 2>acceptance_out/stderr.txt";
        int status = std::system(cmd.c_str());
        expect(WIFEXITED(status) && WEXITSTATUS(status) == 0,
               cfg.name + " exited nonzero (workers=" + std::to_string(workers) + ")");
        std::string got_stdout = slurp("acceptance_out/stdout.txt");
        std::string want_stdout = slurp(std::string(golden) + "/" + cfg.name + ".stdout");
        expect(got_stdout == want_stdout, cfg.name + " stdout differs (workers=" +
                                              std::to_string(workers) + ", run=" + std::to_string(run) + ")");
        for (const std::string& f : cfg.outputs) {
          std::string got = slurp("acceptance_out/" + f);
          std::string want = slurp(std::string(golden) + "/" + f);
          expect(got == want, cfg.name + "/" + f + " differs (workers=" + std::to_string(workers) +
                                  ", run=" + std::to_string(run) + ")");
        }
      }
    }
  }
}

}  // namespace

int main() {
  const std::vector<Check> checks = {
      {"1. equality protocol: exact error 1/4 at cost 3 for n=4..8", c1_equality_oracle},
      {"2. deterministic complexity of identities matches ceil(log n)+1", c2_deterministic_oracle},
      {"3. discrepancy pipeline: exact value, bound, protocol consistency", c3_discrepancy_pipeline},
      {"4. concentration: empirical tails under the Bernstein predictor", c4_concentration},
      {"5. desk-scale discrepancy: disc <= 3/sqrt(r) in >= 19/20 trials", c5_desk_scale_discrepancy},
      {"6. structure pipeline: certificates, compiled cost, one-sided error", c6_structure_pipeline},
      {"7. submatrix survey at n=4096: all 1000 samples certify", c7_survey},
      {"8. row zeroing: +1 cost, error never grows on the modified matrix", c8_row_zeroing},
      {"9. derandomization: 33-tree majority bundle for the 4x4 identity", c9_derandomization},
      {"10. enumeration: census of 6 at (2,1), monotone up to c=3", c10_enumeration},
      {"11. golden CLI outputs: byte-identical across runs and workers", c11_golden_cli},
  };

  int failed = 0;
  for (const Check& c : checks) {
    auto start = std::chrono::steady_clock::now();
    std::string verdict = "PASS", detail;
    try {
      c.body();
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = e.what();
      ++failed;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s (%.2fs)%s%s\n", verdict.c_str(), c.label.c_str(), secs,
                detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu/%zu criteria passed\n", checks.size() - failed, checks.size());
  return failed == 0 ? 0 : 1;
}
