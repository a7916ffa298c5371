// Acceptance suite: every criterion below prints one PASS/FAIL line; the
// binary exits nonzero if any criterion fails. Exact integer identities are
// checked exactly; trend criteria check strict improvement between
// consecutive Frobenius exponents.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "limulrich/emit.hpp"
#include "limulrich/parse.hpp"

using namespace limulrich;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  printf("%-6s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  fflush(stdout);
  if (!ok) ++failures;
}

std::shared_ptr<GradedAlgebra> ring_from_file(const std::string& rel, int window) {
  std::ifstream in(std::string(LIMULRICH_SOURCE_DIR) + "/rings/" + rel);
  std::ostringstream ss;
  ss << in.rdbuf();
  RingSpecFile spec = parse_ring_spec(ss.str());
  return std::make_shared<GradedAlgebra>(spec.p, spec.vars, spec.generators, window);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------- AC-1, AC-2
void ac1_ac2() {
  auto start = Clock::now();
  auto cubic = ring_from_file("cubic3fold.ring", 16);
  PipelineOptions opts;  // defaults: J = 4, r = 1
  RingData rd = prepare_ring(cubic, 3, 7, opts);
  std::vector<ConvergenceRow> rows;
  for (int e = 1; e <= 2; ++e) rows.push_back(convergence_row(rd, e, opts));
  double elapsed = seconds_since(start);
  bool ok1 = rows[0].mult == 150 && rows[1].mult == 3750 &&
             rows[0].mult == rows[0].predicted_mult && rows[1].mult == rows[1].predicted_mult;
  report("AC-1", ok1,
         "e(z,U_e) = " + std::to_string(rows[0].mult) + ", " + std::to_string(rows[1].mult) +
             " (want 150, 3750 = 6q^2); " + std::to_string(elapsed) + "s");

  auto absdev = [](const Frac& f) {
    long long num = f.num - f.den;
    if (num < 0) num = -num;
    return Frac::make(num, f.den);
  };
  Frac dev1 = absdev(rows[0].ratio_mult_nu), dev2 = absdev(rows[1].ratio_mult_nu);
  bool chi_trend = rows[1].ratio_chi1_nu.value() < rows[0].ratio_chi1_nu.value();
  bool mult_trend = dev2.value() < dev1.value();
  bool sandwich = rows[0].nu <= rows[0].mult + rows[0].chi1 &&
                  rows[1].nu <= rows[1].mult + rows[1].chi1;
  report("AC-2", chi_trend && mult_trend && sandwich,
         "chi1/nu: " + frac_cell(rows[0].ratio_chi1_nu) + " -> " + frac_cell(rows[1].ratio_chi1_nu) +
             "; |mult/nu - 1|: " + frac_cell(dev1) + " -> " + frac_cell(dev2) +
             "; nu <= mult + chi1 both rows: " + (sandwich ? "yes" : "no"));
}

// --------------------------------------------------------------------- AC-3
void ac3() {
  auto start = Clock::now();
  std::vector<long long> qs = {2, 3, 4, 5, 8, 9, 16, 25, 27, 32, 64};
  bool windows_ok = true;
  long long checked = 0;
  for (int n = 1; n <= 4 && windows_ok; ++n)
    for (long long q : qs) {
      for (int j = 0; j <= n + 1; ++j)
        for (long long t = -(n + 1) * q - 40; t <= 8; ++t) {
          long long v = lc_dim(n, q, j, t);
          ++checked;
          if (!lc_window_contains(n, q, j, t) && v != 0) windows_ok = false;
        }
      // independent consistency: Euler characteristic identity
      for (long long t = -3 * q - 10; t <= 6; ++t) {
        long long chi = 0;
        for (int j = 0; j <= n + 1; ++j) chi += (j % 2 == 0 ? 1 : -1) * lc_dim(n, q, j, t);
        long long prod = 1;
        for (int i = 1; i <= n; ++i) prod *= t + (i - 1) * q + 1;
        if (chi != w_dim(n, q, t) - prod) windows_ok = false;
      }
    }
  double t_rec = seconds_since(start);

  // Koszul-limit oracle for n = 2, q in {2, 4}, degrees in [-12, 4].
  auto ostart = Clock::now();
  bool oracle_ok = true;
  std::string oracle_note;
  for (long long q : {2LL, 4LL}) {
    WDescriptor desc{2, q};
    LinearFormSet forms = sample_w_forms(5, desc, 1000 + static_cast<uint64_t>(q));
    WRealization w(5, desc, forms.forms);
    struct Job {
      int j;
      long long delta;
    };
    std::vector<Job> jobs;
    for (int j = 0; j <= 3; ++j)
      for (long long delta = -12; delta <= 4; ++delta) jobs.push_back({j, delta});
    std::vector<char> ok(jobs.size(), 1);
    parallel_for(jobs.size(), [&](size_t idx) {
      long long got = lc_oracle_dim(w, jobs[idx].j, jobs[idx].delta);
      ok[idx] = got == lc_dim(2, q, jobs[idx].j, jobs[idx].delta);
    });
    for (size_t idx = 0; idx < jobs.size(); ++idx)
      if (!ok[idx]) {
        oracle_ok = false;
        oracle_note += " mismatch at q=" + std::to_string(q) + " j=" + std::to_string(jobs[idx].j) +
                       " t=" + std::to_string(jobs[idx].delta);
      }
  }
  double t_orc = seconds_since(ostart);
  report("AC-3", windows_ok && oracle_ok,
         std::to_string(checked) + " window checks + Euler identities (" + std::to_string(t_rec) +
             "s), Koszul-limit oracle n=2, q in {2,4}, t in [-12,4] (" + std::to_string(t_orc) +
             "s)" + oracle_note);
}

// --------------------------------------------------------------------- AC-4
void ac4() {
  // At r=1 the congruence class misses every H^j window (the windows are
  // q-1 consecutive degrees skipping exactly residue -1), so the stated
  // sequences are identically zero; vacuous decrease is accepted and the
  // substantive o(q^n) decay is checked at r=2.
  bool ok = true;
  std::string note;
  for (int j = 0; j <= 3; ++j) {
    long long q = 1;
    std::vector<double> ratios;
    for (int e = 1; e <= 4; ++e) {
      q *= 3;
      ratios.push_back(static_cast<double>(lc_slice_total(3, q, j, 1)) /
                       (static_cast<double>(q) * q * q));
    }
    bool all_zero = true;
    for (double v : ratios) all_zero = all_zero && v == 0.0;
    bool strict = true;
    for (size_t i = 1; i < ratios.size(); ++i) strict = strict && ratios[i] < ratios[i - 1];
    if (!(all_zero || strict)) ok = false;
    if (all_zero && note.empty()) note = "r=1 sums identically zero (class misses the windows); ";
  }
  bool decay_ok = true;
  for (int j = 2; j <= 3; ++j) {
    long long q = 1;
    double prev = 1e300;
    for (int e = 1; e <= 4; ++e) {
      q *= 3;
      long long total = lc_slice_total(3, q, j, 2);
      double ratio = static_cast<double>(total) / (static_cast<double>(q) * q * q);
      if (!(total > 0 && ratio < prev)) decay_ok = false;
      prev = ratio;
    }
  }
  report("AC-4", ok && decay_ok, note + "r=2 ratios strictly decrease for j in {2,3}");
}

// --------------------------------------------------------- AC-5, AC-6 suite
struct SuiteModule {
  std::string name;
  SlicedModule module;
  int d;
};

std::vector<SuiteModule> build_suite(uint32_t p) {
  std::vector<SuiteModule> suite;
  auto a2 = std::make_shared<GradedAlgebra>(p, 2, std::vector<Polynomial>{}, 14);
  suite.push_back({"A", algebra_module(a2, 10), 2});
  suite.push_back({"k", residue_field_module(a2), 2});
  suite.push_back({"A+A(-1)", free_module(a2, {0, 1}, 10), 2});
  WDescriptor desc{2, 4};
  LinearFormSet wf = sample_w_forms(p, desc, 4242);
  suite.push_back({"W_4^2", realize_w(p, desc, wf, 14), 3});
  FpVec z0 = {1, 0};
  SlicedModule amod = algebra_module(a2, 10);
  suite.push_back({"A+A/(z0)", direct_sum(amod, quotient_module(amod, FormSpec::linear(z0))), 2});
  return suite;
}

FpVec seeded_form(size_t width, uint32_t p, SeededRng& rng) {
  for (;;) {
    FpVec v(width);
    bool any = false;
    for (auto& c : v) {
      c = rng.below(p);
      any = any || c;
    }
    if (any) return v;
  }
}

void ac5_ac6() {
  bool ok5 = true, ok6 = true, additivity_ok = true;
  int identity_checks = 0, sandwich_checks = 0, additivity_checks = 0;
  std::string detail;
  for (uint32_t p : {5u, 7u}) {
    std::vector<SuiteModule> suite = build_suite(p);
    for (SuiteModule& sm : suite) {
      // fixed seeds per (module, p); the attempt index is part of the
      // stream, so retries stay deterministic and only skip degenerate draws
      Prop24Report rep;
      bool done = false;
      for (uint64_t attempt = 0; attempt < 8 && !done; ++attempt) {
        SeededRng rng(fnv1a(sm.name) ^ p, "ac5", attempt);
        size_t width = sm.module.num_gens();
        std::vector<FormSpec> x_minus;
        for (int i = 0; i < sm.d - 1; ++i)
          x_minus.push_back(FormSpec::linear(seeded_form(width, p, rng)));
        FormSpec y = FormSpec::linear(seeded_form(width, p, rng));
        FormSpec z = FormSpec::linear(seeded_form(width, p, rng));
        try {
          rep = prop24_check(sm.module, x_minus, y, z);
          done = true;
          // additivity footnote on the materialized homology modules and on
          // the one-dimensional quotients M/(x^-)M
          std::vector<SlicedModule> one_dim;
          for (int jj = 1; jj <= sm.d - 1; ++jj) {
            SlicedModule h = homology_module(sm.module, x_minus, jj);
            bool empty = true;
            for (size_t dim : h.dims) empty = empty && dim == 0;
            if (!empty) one_dim.push_back(std::move(h));
          }
          {
            SlicedModule quot = sm.module;
            for (const FormSpec& f : x_minus) quot = quotient_module(quot, f);
            one_dim.push_back(std::move(quot));
          }
          for (const SlicedModule& nmod : one_dim) {
            try {
              long long ey = elem_multiplicity(nmod, y);
              long long ez = elem_multiplicity(nmod, z);
              long long eyz = elem_multiplicity(nmod, FormSpec::product(y, z));
              additivity_ok = additivity_ok && eyz == ey + ez;
              ++additivity_checks;
            } catch (const window_error&) {
            }
          }
        } catch (const window_error&) {
        }
      }
      if (!done) {
        ok5 = false;
        detail += " " + sm.name + "@p=" + std::to_string(p) + " never certified;";
        continue;
      }
      ++identity_checks;
      if (!rep.all_equal()) {
        ok5 = false;
        detail += " " + sm.name + "@p=" + std::to_string(p) + " identity failed;";
      }
      // AC-6 sandwich with a sampled s.o.p. on the base
      for (uint64_t attempt = 0; attempt < 8; ++attempt) {
        SeededRng rng(fnv1a(sm.name) ^ p, "ac6", attempt);
        size_t width = sm.module.num_gens();
        std::vector<FormSpec> zf;
        for (int i = 0; i < sm.d; ++i) zf.push_back(FormSpec::linear(seeded_form(width, p, rng)));
        try {
          KoszulReport kr = koszul_report(sm.module, zf);
          SlicedModule ring_mod =
              algebra_module(sm.module.base, std::min(10, sm.module.base->window()));
          KoszulReport ring_rep = koszul_report(ring_mod, zf);
          long long nu_m = nu(sm.module);
          bool s1 = nu_m <= kr.coker_length;
          bool s2 = kr.coker_length <= nu_m * ring_rep.coker_length;
          if (!(s1 && s2)) {
            ok6 = false;
            detail += " " + sm.name + "@p=" + std::to_string(p) + " sandwich failed;";
          }
          ++sandwich_checks;
          break;
        } catch (const window_error&) {
        }
      }
    }
  }
  report("AC-5", ok5 && additivity_ok,
         std::to_string(identity_checks) + " identity triples, " +
             std::to_string(additivity_checks) + " additivity checks, exact equality" + detail);
  report("AC-6", ok6, std::to_string(sandwich_checks) + " sandwich checks" + detail);
}

// --------------------------------------------------------------------- AC-7
void ac7() {
  auto plane = ring_from_file("plane.ring", 16);
  Polynomial g1 = parse_polynomial("u^2 - x0*x1", 2, 5, true);
  LechDemoReport r1 = lech_demo(plane, 2, g1, 3);
  auto cubic = ring_from_file("cubic_surface.ring", 16);
  Polynomial g2 = parse_polynomial("u^2 - x0*x1", 3, 5, true);
  LechDemoReport r2 = lech_demo(cubic, 2, g2, 5);
  bool ok = r1.e_r == 1 && r1.e_s == 2 && r1.holds && r2.e_r == 3 && r2.holds;
  report("AC-7", ok,
         "plane: e_R=" + std::to_string(r1.e_r) + " e_S=" + std::to_string(r1.e_s) +
             "; cubic: e_R=" + std::to_string(r2.e_r) + " e_S=" + std::to_string(r2.e_s) +
             " (both inequalities hold)");
}

// --------------------------------------------------------------------- AC-8
void ac8() {
  auto plane = ring_from_file("plane.ring", 16);
  PipelineOptions opts;
  RingData rd = prepare_ring(plane, 2, 7, opts);
  bool ok = true;
  std::string detail;
  for (int e = 1; e <= 3; ++e) {
    ConvergenceRow row = convergence_row(rd, e, opts);
    bool row_ok = row.chi1 == 0 && row.ratio_mult_nu.num == 1 && row.ratio_mult_nu.den == 1;
    ok = ok && row_ok;
    detail += "e=" + std::to_string(e) + ": chi1=" + std::to_string(row.chi1) +
              " mult/nu=" + frac_cell(row.ratio_mult_nu) + "  ";
  }
  report("AC-8", ok, detail);
}

// ------------------------------------------------------------- CLI surface
// Exit codes and plain numeric outputs pinned alongside the criteria.
void cli_surface() {
  std::string cli = LIMULRICH_CLI_PATH;
  auto capture = [&](const std::string& args, std::string* out) {
    std::string path = "/tmp/limulrich_cli_check.txt";
    int rc = std::system((cli + " " + args + " > " + path + " 2>/dev/null").c_str());
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
    return WEXITSTATUS(rc);
  };
  std::string out;
  bool ok = true;
  ok = ok && capture("wdim --n 2 --q 4 --t 3", &out) == 0 && out == "32\n";
  ok = ok && capture("lcdim --n 2 --q 4 --j 3 --t -1", &out) == 0 && out == "0\n";
  ok = ok && capture("lcdim --n 2 --q 4 --j 9 --t -1", &out) == 1;   // index error
  ok = ok && capture("hilbert --ring /nonexistent.ring", &out) == 1;  // input error
  std::string plane = std::string(LIMULRICH_SOURCE_DIR) + "/rings/plane.ring";
  ok = ok && capture("converge --ring " + plane + " --d 3 --e-min 1 --e-max 1", &out) == 2;
  report("CLI", ok, "numeric outputs and exit codes 0/1/2 as documented");
}

// --------------------------------------------------------------------- AC-9
void ac9() {
  std::string cli = LIMULRICH_CLI_PATH;
  std::string ringfile = std::string(LIMULRICH_SOURCE_DIR) + "/rings/cubic3fold.ring";
  auto run_once = [&](int threads, const std::string& out) {
    std::string cmd = "LIMULRICH_THREADS=" + std::to_string(threads) + " " + cli +
                      " converge --ring " + ringfile +
                      " --d 3 --e-min 1 --e-max 2 --seed 7 --format csv > " + out + " 2>/dev/null";
    return std::system(cmd.c_str());
  };
  std::string f1 = "/tmp/limulrich_ac9_t1.csv", f8 = "/tmp/limulrich_ac9_t8.csv",
              f1b = "/tmp/limulrich_ac9_t1b.csv";
  int rc1 = run_once(1, f1);
  int rc8 = run_once(8, f8);
  int rc1b = run_once(1, f1b);
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string a = slurp(f1), b = slurp(f8), c = slurp(f1b);
  bool ok = rc1 == 0 && rc8 == 0 && rc1b == 0 && !a.empty() && a == b && a == c;
  report("AC-9", ok,
         "three CLI runs (threads 1, 8, 1) byte-identical: " + std::to_string(a.size()) +
             " bytes each" + (ok ? "" : " MISMATCH"));
}

}  // namespace

int main() {
  auto start = Clock::now();
  ac1_ac2();
  ac3();
  ac4();
  ac5_ac6();
  ac7();
  ac8();
  ac9();
  cli_surface();
  printf("%s: %d criterion(s) failed, total %.1fs\n", failures == 0 ? "ALL PASS" : "FAILURES",
         failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
