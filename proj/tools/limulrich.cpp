// limulrich: exact computations around weakly lim Ulrich sequences for
// standard graded rings over prime fields. Subcommands cover Hilbert
// functions, the twisted Segre module W and its local cohomology, the
// Frobenius-pushforward pipeline U_e with convergence tables, residue
// profiles, Koszul-homology identity checks, and the multiplicity
// inequality demo for free graded extensions.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "limulrich/emit.hpp"
#include "limulrich/parse.hpp"

using namespace limulrich;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitWindow = 2;
constexpr int kExitMathAssert = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RingArgs {
  std::string path;
  int window_override = 0;

  RingSpecFile spec;

  int default_window() const {
    int degsum = 0;
    for (const auto& g : spec.generators) degsum += g.degree();
    return std::max(16, 2 * degsum + spec.vars + 6);
  }

  std::shared_ptr<GradedAlgebra> build(int window) const {
    return std::make_shared<GradedAlgebra>(spec.p, spec.vars, spec.generators, window);
  }
};

void load_ring(RingArgs& args) { args.spec = parse_ring_spec(read_file(args.path)); }

int resolve_dim(const RingArgs& args, int flag_d) {
  if (flag_d > 0) return flag_d;
  if (args.spec.dim) return *args.spec.dim;
  throw input_error("dimension needed: pass --d or put dim= in the ring file");
}

void emit(const ordered_json& j, const std::string& csv, const std::string& format) {
  if (format == "csv")
    std::cout << csv;
  else
    std::cout << j.dump(2) << "\n";
}

std::vector<FpVec> random_forms(size_t count, size_t width, uint32_t p, uint64_t seed,
                                const char* tag) {
  SeededRng rng(seed, tag);
  std::vector<FpVec> out(count, FpVec(width, 0));
  for (auto& f : out)
    for (auto& c : f) c = rng.below(p);
  return out;
}

// The module menu for the identity checker; mirrors the unit-test suite.
struct Prop24Setup {
  SlicedModule module;
  int d;
};

Prop24Setup prop24_module(const std::string& name, uint32_t p, uint64_t seed) {
  if (name == "w") {
    WDescriptor desc{2, 4};
    LinearFormSet forms = sample_w_forms(p, desc, seed);
    return {realize_w(p, desc, forms, 14), 3};
  }
  auto a2 = std::make_shared<GradedAlgebra>(p, 2, std::vector<Polynomial>{}, 12);
  if (name == "poly") return {algebra_module(a2, 9), 2};
  if (name == "field") return {residue_field_module(a2), 2};
  if (name == "free") return {free_module(a2, {0, 1}, 9), 2};
  if (name == "noncm") {
    SlicedModule amod = algebra_module(a2, 9);
    FpVec z0(2, 0);
    z0[0] = 1;
    SlicedModule quot = quotient_module(amod, FormSpec::linear(z0));
    return {direct_sum(amod, quot), 2};
  }
  throw input_error("unknown module '" + name + "' (use poly|field|free|w|noncm)");
}

int run(int argc, char** argv) {
  CLI::App app{"weakly lim Ulrich sequence laboratory for graded rings over GF(p)"};
  app.require_subcommand(1);
  std::string format = "json";

  // wdim / lcdim / lcslice: closed-form dimensions, plain numeric output
  long long n = 2, q = 4, t = 0, j = 2, r = 1;
  auto* wdim_cmd = app.add_subcommand("wdim", "slice dimension of the twisted Segre module W");
  wdim_cmd->add_option("--n", n, "number of Segre factors")->required();
  wdim_cmd->add_option("--q", q, "twist step")->required();
  wdim_cmd->add_option("--t", t, "degree")->required();

  auto* lcdim_cmd =
      app.add_subcommand("lcdim", "dimension of one graded piece of local cohomology of W");
  lcdim_cmd->add_option("--n", n)->required();
  lcdim_cmd->add_option("--q", q)->required();
  lcdim_cmd->add_option("--j", j, "cohomological index")->required();
  lcdim_cmd->add_option("--t", t, "degree")->required();

  auto* lcslice_cmd = app.add_subcommand(
      "lcslice", "total local-cohomology dimension over the congruence class -r mod q");
  lcslice_cmd->add_option("--n", n)->required();
  lcslice_cmd->add_option("--q", q)->required();
  lcslice_cmd->add_option("--j", j)->required();
  lcslice_cmd->add_option("--r", r, "class offset (class is -r mod q)")->required();

  // hilbert
  RingArgs ring;
  int upto = 12;
  auto* hilbert_cmd = app.add_subcommand("hilbert", "Hilbert function of a ring file");
  hilbert_cmd->add_option("--ring", ring.path, "ring description file")->required();
  hilbert_cmd->add_option("--upto", upto, "largest degree to report");
  hilbert_cmd->add_option("--format", format, "json|csv");

  // converge
  int flag_d = 0, e_min = 1, e_max = 1, e_single = 1;
  uint64_t seed = 0;
  PipelineOptions popts;
  auto* conv_cmd = app.add_subcommand("converge", "convergence table for the sequence U_e");
  conv_cmd->add_option("--ring", ring.path)->required();
  conv_cmd->add_option("--d", flag_d, "Krull dimension of the ring");
  conv_cmd->add_option("--e-min", e_min)->required();
  conv_cmd->add_option("--e-max", e_max)->required();
  conv_cmd->add_option("--seed", seed, "sampling seed");
  conv_cmd->add_option("--J", popts.J, "slice-count knob (module gets J+2 slices)");
  conv_cmd->add_option("--r", popts.r, "degree-class offset");
  conv_cmd->add_flag("--allow-bad-r", popts.allow_bad_r,
                     "permit r <= 0 to reproduce the non-negative-class failure");
  conv_cmd->add_option("--max-slice-dim", popts.max_slice_dim, "memory guard");
  conv_cmd->add_flag("--generic", popts.force_generic, "disable the free-decomposition engine");
  conv_cmd->add_option("--window-r", ring.window_override, "override the ring window");
  conv_cmd->add_option("--format", format, "json|csv");

  // build-ue
  auto* bue_cmd = app.add_subcommand("build-ue", "slice profile of one U_e");
  bue_cmd->add_option("--ring", ring.path)->required();
  bue_cmd->add_option("--d", flag_d);
  bue_cmd->add_option("--e", e_single, "Frobenius exponent")->required();
  bue_cmd->add_option("--seed", seed);
  bue_cmd->add_option("--J", popts.J);
  bue_cmd->add_option("--r", popts.r);
  bue_cmd->add_option("--window-r", ring.window_override);
  bue_cmd->add_option("--format", format, "json|csv");

  // residue
  uint32_t p_flag = 5;
  auto* res_cmd =
      app.add_subcommand("residue", "off-degree residue mass of the selected W quotient");
  res_cmd->add_option("--d", flag_d, "ambient dimension (W has d-1 factors)")->required();
  res_cmd->add_option("--p", p_flag, "characteristic")->required();
  res_cmd->add_option("--e-min", e_min)->required();
  res_cmd->add_option("--e-max", e_max)->required();
  res_cmd->add_option("--r", popts.r);
  res_cmd->add_option("--seed", seed);
  res_cmd->add_option("--format", format, "json|csv");

  // lech
  std::string g_src;
  auto* lech_cmd =
      app.add_subcommand("lech", "e(R) <= e(S) demo for the free extension S = R[u]/(g)");
  lech_cmd->add_option("--ring", ring.path)->required();
  lech_cmd->add_option("--d", flag_d);
  lech_cmd->add_option("--g", g_src, "monic-in-u homogeneous polynomial")->required();
  lech_cmd->add_option("--seed", seed);
  lech_cmd->add_option("--window-r", ring.window_override);
  lech_cmd->add_option("--format", format, "json|csv");

  // prop24
  std::string module_name = "poly";
  auto* p24_cmd =
      app.add_subcommand("prop24", "long-exact-sequence multiplicity identities, exact check");
  p24_cmd->add_option("--module", module_name, "poly|field|free|w|noncm");
  p24_cmd->add_option("--p", p_flag, "characteristic")->required();
  p24_cmd->add_option("--seed", seed);
  p24_cmd->add_option("--format", format, "json|csv");

  CLI11_PARSE(app, argc, argv);

  if (*wdim_cmd) {
    std::cout << w_dim(static_cast<int>(n), q, t) << "\n";
    return kExitOk;
  }
  if (*lcdim_cmd) {
    std::cout << lc_dim(static_cast<int>(n), q, static_cast<int>(j), t) << "\n";
    return kExitOk;
  }
  if (*lcslice_cmd) {
    std::cout << lc_slice_total(static_cast<int>(n), q, static_cast<int>(j), r) << "\n";
    return kExitOk;
  }

  if (*hilbert_cmd) {
    load_ring(ring);
    if (upto < 2) throw input_error("--upto must be at least 2");
    auto alg = ring.build(upto);
    ordered_json rows = ordered_json::array();
    std::string csv = "t,dim\n";
    for (int tt = 0; tt <= upto; ++tt) {
      rows.push_back(ordered_json{{"t", tt}, {"dim", alg->dim(tt)}});
      csv += std::to_string(tt) + "," + std::to_string(alg->dim(tt)) + "\n";
    }
    emit(ordered_json{{"p", ring.spec.p}, {"vars", ring.spec.vars}, {"rows", rows}}, csv, format);
    return kExitOk;
  }

  if (*conv_cmd) {
    load_ring(ring);
    int d = resolve_dim(ring, flag_d);
    int window = ring.window_override > 0 ? ring.window_override : ring.default_window();
    auto alg = ring.build(window);
    RingData rd = prepare_ring(alg, d, seed, popts);
    if (!rd.free_over_A && !popts.force_generic) {
      // the generic engine walks every tensor degree; realize a wide enough ring
      long long q_top = 1;
      for (int i = 0; i < e_max; ++i) q_top *= ring.spec.p;
      int need = static_cast<int>((popts.J + 3) * q_top - 1);
      if (binomial_ll(need + ring.spec.vars - 1, ring.spec.vars - 1) > 60000)
        throw window_error(
            "generic engine would need an infeasible ring window at this e; lower --e-max or --J");
      if (need > window) {
        alg = ring.build(need);
        rd = prepare_ring(alg, d, seed, popts);
      }
    }
    std::vector<RowResult> rows = convergence_table(rd, e_min, e_max, popts);
    bool any_window_error = false;
    for (const RowResult& rr : rows) {
      if (!rr.row) {
        std::cerr << "row skipped: " << rr.error << "\n";
        any_window_error = true;
        continue;
      }
      const ConvergenceRow& row = *rr.row;
      if (row.mult != row.predicted_mult)
        throw math_assert_error("e(z,U_e) != (d-1)! s q^{d-1} on a certified row: bug");
      if (row.nu < row.slice_dim_q1)
        throw math_assert_error("nu(U_e) below the first-slice bound: bug");
      if (row.nu > row.mult + row.chi1)
        throw math_assert_error("nu(U_e) exceeds length(U_e/zU_e): bug");
    }
    emit(converge_json(rows), converge_csv(rows), format);
    return any_window_error ? kExitWindow : kExitOk;
  }

  if (*bue_cmd) {
    load_ring(ring);
    int d = resolve_dim(ring, flag_d);
    int window = ring.window_override > 0 ? ring.window_override : ring.default_window();
    auto alg = ring.build(window);
    RingData rd = prepare_ring(alg, d, seed, popts);
    long long q = 1;
    for (int i = 0; i < e_single; ++i) q *= ring.spec.p;
    long long a0 = first_selected_degree(q, popts.r);
    ordered_json slices = ordered_json::array();
    std::string csv = "j,degree,dim\n";
    if (rd.free_over_A) {
      for (int jj = 0; jj <= popts.J + 1; ++jj) {
        long long deg = a0 + static_cast<long long>(jj) * q;
        long long dim = 0;
        for (int b : rd.shifts) dim += w_dim(d - 1, q, deg - b);
        slices.push_back(ordered_json{{"j", jj}, {"degree", deg}, {"dim", dim}});
        csv += std::to_string(jj) + "," + std::to_string(deg) + "," + std::to_string(dim) + "\n";
      }
    } else {
      long long need = (popts.J + 3) * q - 1;
      if (need > alg->window()) {
        alg = ring.build(static_cast<int>(need));
        rd = prepare_ring(alg, d, seed, popts);
      }
      uint64_t wseed = splitmix64(seed ^ (0x57ULL + static_cast<uint64_t>(e_single) * 1315423911ULL));
      SlicedModule ue = build_ue_generic(rd, e_single, popts, wseed);
      for (size_t k = 0; k < ue.dims.size(); ++k) {
        long long deg = a0 + static_cast<long long>(k) * q;
        slices.push_back(
            ordered_json{{"j", k}, {"degree", deg}, {"dim", ue.dims[k]}});
        csv += std::to_string(k) + "," + std::to_string(deg) + "," + std::to_string(ue.dims[k]) +
               "\n";
      }
    }
    long long fact = 1;
    for (int i = 2; i <= d - 1; ++i) fact *= i;
    long long qpow = 1;
    for (int i = 0; i < d - 1; ++i) qpow *= q;
    ordered_json shifts = ordered_json::array();
    for (int b : rd.shifts) shifts.push_back(b);
    emit(ordered_json{{"e", e_single},
                      {"q", q},
                      {"d", d},
                      {"s", rd.s},
                      {"free_over_A", rd.free_over_A},
                      {"shifts", shifts},
                      {"predicted_mult", fact * rd.s * qpow},
                      {"slices", slices}},
         csv, format);
    return kExitOk;
  }

  if (*res_cmd) {
    int d = flag_d;
    if (d < 2) throw input_error("residue: need --d >= 2");
    check_modulus(p_flag);
    std::vector<ResidueReport> rows;
    for (int e = e_min; e <= e_max; ++e) {
      long long qq = 1;
      for (int i = 0; i < e; ++i) qq *= p_flag;
      WDescriptor desc{d - 1, qq};
      uint64_t wseed = splitmix64(seed ^ (0x57ULL + static_cast<uint64_t>(e) * 1315423911ULL));
      LinearFormSet forms = sample_w_forms(p_flag, desc, wseed);
      rows.push_back(residue_profile(p_flag, d, e, popts.r, forms));
    }
    emit(residue_json(rows, d), residue_csv(rows, d), format);
    return kExitOk;
  }

  if (*lech_cmd) {
    load_ring(ring);
    int d = resolve_dim(ring, flag_d);
    int window = ring.window_override > 0 ? ring.window_override : ring.default_window();
    auto alg = ring.build(window);
    Polynomial g = parse_polynomial(g_src, ring.spec.vars, ring.spec.p, /*allow_u=*/true);
    LechDemoReport rep = lech_demo(alg, d, g, seed);
    emit(lech_json(rep), lech_csv(rep), format);
    if (!rep.holds) {
      std::cerr << "e(R) <= e(S) FAILED: this is a proof-backed inequality, so it is a bug\n";
      return kExitMathAssert;
    }
    return kExitOk;
  }

  if (*p24_cmd) {
    check_modulus(p_flag);
    Prop24Setup setup = prop24_module(module_name, p_flag, seed);
    size_t width = setup.module.num_gens();
    std::vector<FpVec> xm = random_forms(setup.d - 1, width, p_flag, seed, "prop24_xminus");
    std::vector<FpVec> yzv = random_forms(2, width, p_flag, seed, "prop24_yz");
    std::vector<FormSpec> x_minus;
    for (auto& f : xm) x_minus.push_back(FormSpec::linear(f));
    Prop24Report rep =
        prop24_check(setup.module, x_minus, FormSpec::linear(yzv[0]), FormSpec::linear(yzv[1]));
    emit(prop24_json(rep), prop24_csv(rep), format);
    if (!rep.all_equal()) {
      std::cerr << "identity check FAILED: proof-backed equality violated, so it is a bug\n";
      return kExitMathAssert;
    }
    return kExitOk;
  }

  return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const math_assert_error& e) {
    std::cerr << "math assertion failed: " << e.what() << "\n";
    return kExitMathAssert;
  } catch (const window_error& e) {
    std::cerr << "window/normalization error: " << e.what() << "\n";
    return kExitWindow;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
