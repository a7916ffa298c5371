#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "limulrich/segre.hpp"
#include "limulrich/tensor.hpp"

namespace limulrich {

struct Frac {
  long long num = 0, den = 1;

  static Frac make(long long n, long long d) {
    if (d == 0) throw input_error("fraction with zero denominator");
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    return Frac{n / g, d / g};
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct ConvergenceRow {
  int e = 0;
  long long q = 1;
  long long nu = 0;
  long long mult = 0;
  long long chi1 = 0;
  Frac ratio_mult_nu, ratio_chi1_nu;
  long long predicted_mult = 0;
  long long slice_dim_q1 = 0;  // dim (R⊗W) at the first selected degree (q-r)
  long long coker_length = 0;
  std::vector<long long> homology_lengths;
};

struct RowResult {
  std::optional<ConvergenceRow> row;
  std::string error;
};

struct PipelineOptions {
  int J = 4;              // slice count knob; the module gets J+2 slices
  long long r = 1;        // degree-class offset (class -r mod q)
  bool allow_bad_r = false;
  long long max_slice_dim = 4000000;
  bool force_generic = false;  // disable the free-decomposition engine
};

// Per-ring data shared by every row: normalization, multiplicity s = e(m,R),
// and (when R is free over A within the probe horizon) the generator shifts
// plus structure constants of the extra degree-one generators.
struct RingData {
  std::shared_ptr<const GradedAlgebra> ring;
  int d = 0;
  uint64_t seed = 0;
  LinearFormSet z;
  long long s = 0;  // e(m, R), computed by the Koszul engine
  long long ring_mult_window = 0;

  bool free_over_A = false;
  std::vector<int> shifts;                         // generator degrees b_l
  std::vector<size_t> extra_gens;                  // R_1-basis indices beyond the z-span
  std::vector<std::vector<std::vector<Polynomial>>> cmat;  // [extra][i][l], entries in k[z_1..z_d]
};

// Multiplicity of the ring itself with respect to a sampled minimal
// reduction, growing the window until the Koszul tail certifies.
inline long long ring_multiplicity(std::shared_ptr<const GradedAlgebra> alg, int d,
                                   const LinearFormSet& z) {
  int hi = std::min(alg->window(), z.t0 + d + 2);
  for (;;) {
    SlicedModule m = algebra_module(alg, hi);
    std::vector<FormSpec> forms;
    for (const FpVec& f : z.forms) forms.push_back(FormSpec::linear(f));
    KoszulReport rep = koszul_report_partial(m, forms);
    if (rep.tail_certified) return rep.multiplicity;
    if (hi == alg->window())
      throw window_error("ring multiplicity not certified within the realized window");
    hi = std::min(alg->window(), hi + d + 2);
  }
}

inline RingData prepare_ring(std::shared_ptr<const GradedAlgebra> ring, int d, uint64_t seed,
                             const PipelineOptions& opts = {}) {
  RingData data;
  data.ring = ring;
  data.d = d;
  data.seed = seed;
  data.z = noether_normalize(*ring, d, seed);
  data.s = ring_multiplicity(ring, d, data.z);
  if (opts.force_generic) return data;
  // Free-over-A probe: presentation on a short horizon; freeness needs no
  // relations there and the Hilbert identity across the whole realized
  // window (exact for Cohen-Macaulay R by the graded Auslander-Buchsbaum
  // argument; a miss falls back to the generic engine).
  int bmax = data.z.t0 > 0 ? data.z.t0 - 1 : 0;
  int probe = std::min(ring->window(), bmax + d + 6);
  APresentation pres = a_presentation(ring, data.z, probe);
  if (!pres.is_free()) return data;
  for (int t = 0; t <= ring->window(); ++t) {
    long long expect = 0;
    for (const auto& g : pres.gens)
      if (t >= g.degree) expect += binomial_ll(t - g.degree + d - 1, d - 1);
    if (expect != static_cast<long long>(ring->dim(t))) return data;
  }
  data.free_over_A = true;
  for (const auto& g : pres.gens) data.shifts.push_back(g.degree);
  if (static_cast<long long>(data.shifts.size()) != data.s)
    throw math_assert_error("generator count disagrees with e(m,R) for free R: bug");
  // extra degree-one generators: standard basis vectors completing the z-span
  {
    const uint32_t p = ring->modulus();
    size_t r1 = ring->dim(1);
    FpMatrix zmat(d, r1, p);
    for (int i = 0; i < d; ++i)
      for (size_t j = 0; j < r1; ++j) zmat.at(i, j) = data.z.forms[i][j];
    FpMatrix work = zmat;
    std::vector<size_t> pivots = detail::rref_inplace(work);
    std::vector<char> in_span(r1, 0);
    for (size_t c : pivots) in_span[c] = 1;
    for (size_t j = 0; j < r1; ++j)
      if (!in_span[j]) data.extra_gens.push_back(j);
  }
  // structure constants x * g_i = sum_l c[i][l](z) g_l for each extra x
  const uint32_t p = ring->modulus();
  const auto& vars = ring->degree_one_vars();
  size_t s = data.shifts.size();
  for (size_t xg : data.extra_gens) {
    std::vector<std::vector<Polynomial>> mat(s,
                                             std::vector<Polynomial>(s, Polynomial{d, p, {}}));
    for (size_t i = 0; i < s; ++i) {
      int bi = pres.gens[i].degree;
      FpVec xgv = mat_vec(ring->var_action(vars[xg], bi), pres.gens[i].vec);
      FpMatrix rhs(xgv.size(), 1, p);
      for (size_t rr = 0; rr < xgv.size(); ++rr) rhs.at(rr, 0) = xgv[rr];
      auto sol = solve(pres.phi[bi + 1], rhs);
      if (!sol) throw math_assert_error("free presentation not surjective: bug");
      size_t coord = 0;
      for (size_t l = 0; l < s; ++l) {
        const auto& table = pres.mono_tables[bi + 1][l];
        std::vector<Term> terms;
        for (size_t mi = 0; mi < table.size(); ++mi, ++coord) {
          uint32_t cf = sol->at(coord, 0);
          if (cf) terms.push_back({table.monos[mi], cf});
        }
        mat[i][l] = poly_from_terms(d, p, std::move(terms));
      }
    }
    data.cmat.push_back(std::move(mat));
  }
  return data;
}

namespace detail {

// Sparse action of a polynomial in the z's on W slices, by composing the
// degree-one stencils along each monomial.
inline SpMat apoly_action(const WRealization& w, const Polynomial& h, long long t) {
  long long deg = h.is_zero() ? 0 : h.degree();
  long long rows = w.dim(t + deg), cols = w.dim(t);
  SpBuilder acc(static_cast<size_t>(rows), static_cast<size_t>(cols), w.modulus());
  for (const Term& term : h.terms) {
    SpMat cur;
    bool started = false;
    long long at = t;
    for (int j = 0; j < h.num_vars; ++j)
      for (int rep = 0; rep < term.exps[j]; ++rep) {
        SpMat step = w.form_action(static_cast<size_t>(j), at);
        cur = started ? sp_compose(step, cur) : std::move(step);
        started = true;
        ++at;
      }
    if (!started) {
      for (long long c = 0; c < cols; ++c)
        acc.add(static_cast<uint32_t>(c), static_cast<uint32_t>(c), term.coeff);
    } else {
      sp_add_block(acc, cur, 0, 0, term.coeff);
    }
  }
  return acc.build();
}

// The fast engine for one row when R is free over A: the selected module is
// ⊕_l F^e_*( W(-b_l)_{-r mod q} ), the z's act per summand through Frobenius
// stencils, and the extra degree-one generators act through the structure
// constants, propagated step by step only against the small cokernels.
struct FreeRowEngine {
  const RingData& ring;
  const WRealization& w;
  long long q;
  long long a0;  // first selected tensor degree
  int J;

  long long sel_deg(size_t l, int j) const {
    return a0 + static_cast<long long>(j) * q - ring.shifts[l];
  }

  SpMat z_power(size_t i, size_t l, int j) const {
    return w.form_power_action(i, sel_deg(l, j), q);
  }

  // Koszul data per summand: ranks of the slicewise differentials.
  struct SummandKoszul {
    std::vector<std::vector<long long>> h;  // [i][tau]
  };

  SummandKoszul summand_koszul(size_t l) const {
    const int d = ring.d;
    const int nsl = J + 2;
    auto subsets = subsets_by_size(d);
    std::vector<std::vector<size_t>> ranks(d + 2, std::vector<size_t>(nsl, 0));
    std::vector<std::pair<int, int>> jobs;
    for (int i = 1; i <= d; ++i)
      for (int tau = 0; tau < nsl; ++tau) jobs.push_back({i, tau});
    std::vector<size_t> results(jobs.size(), 0);
    parallel_for(jobs.size(), [&](size_t idx) {
      auto [i, tau] = jobs[idx];
      long long src_dim = w.dim(sel_deg(l, tau - i));
      long long dst_dim = w.dim(sel_deg(l, tau - i + 1));
      if (src_dim == 0) return;  // rank 0
      const auto& cols_sets = subsets[i];
      const auto& rows_sets = subsets[i - 1];
      SpBuilder b(static_cast<size_t>(dst_dim) * rows_sets.size(),
                  static_cast<size_t>(src_dim) * cols_sets.size(), w.modulus());
      std::vector<SpMat> zp(d);
      for (int k = 0; k < d; ++k) zp[k] = z_power(static_cast<size_t>(k), l, tau - i);
      for (size_t a = 0; a < cols_sets.size(); ++a) {
        const auto& s = cols_sets[a];
        for (size_t pos = 0; pos < s.size(); ++pos) {
          int k = s[pos];
          std::vector<int> rest = s;
          rest.erase(rest.begin() + pos);
          size_t bidx = static_cast<size_t>(
              std::lower_bound(rows_sets.begin(), rows_sets.end(), rest) - rows_sets.begin());
          uint32_t scale = pos % 2 == 1 ? w.modulus() - 1 : 1;
          sp_add_block(b, zp[k], bidx * dst_dim, a * src_dim, scale);
        }
      }
      results[idx] = sparse_rank(b.build());
    });
    for (size_t idx = 0; idx < jobs.size(); ++idx)
      ranks[jobs[idx].first][jobs[idx].second] = results[idx];
    SummandKoszul out;
    out.h.assign(d + 1, std::vector<long long>(nsl, 0));
    for (int i = 0; i <= d; ++i)
      for (int tau = 0; tau < nsl; ++tau) {
        long long dim_ki = binomial_ll(d, i) * w.dim(sel_deg(l, tau - i));
        out.h[i][tau] = dim_ki - static_cast<long long>(ranks[i][tau]) -
                        static_cast<long long>(ranks[i + 1][tau]);
      }
    return out;
  }

  // Step map ⊕_l W_{t-b_l} -> ⊕_l W_{t+1-b_l} for one extra generator.
  SpMat step_map(size_t extra_idx, long long t) const {
    size_t s = ring.shifts.size();
    std::vector<long long> src_off(s + 1, 0), dst_off(s + 1, 0);
    for (size_t l = 0; l < s; ++l) {
      src_off[l + 1] = src_off[l] + w.dim(t - ring.shifts[l]);
      dst_off[l + 1] = dst_off[l] + w.dim(t + 1 - ring.shifts[l]);
    }
    SpBuilder b(static_cast<size_t>(dst_off[s]), static_cast<size_t>(src_off[s]), w.modulus());
    for (size_t i = 0; i < s; ++i) {
      long long u = t - ring.shifts[i];
      if (w.dim(u) == 0) continue;
      for (size_t l = 0; l < s; ++l) {
        const Polynomial& h = ring.cmat[extra_idx][i][l];
        if (h.is_zero()) continue;
        SpMat act = apoly_action(w, h, u);
        sp_add_block(b, act, static_cast<size_t>(dst_off[l]), static_cast<size_t>(src_off[i]), 1);
      }
    }
    return b.build();
  }

  ConvergenceRow run(int e) const {
    const int d = ring.d;
    const size_t s = ring.shifts.size();
    const uint32_t p = w.modulus();
    const int nsl = J + 2;
    std::vector<SummandKoszul> per_summand(s);
    for (size_t l = 0; l < s; ++l) per_summand[l] = summand_koszul(l);
    // certification on the top two window slices, every summand and index
    for (size_t l = 0; l < s; ++l)
      for (int i = 0; i <= d; ++i)
        if (per_summand[l].h[i][nsl - 1] != 0 || per_summand[l].h[i][nsl - 2] != 0)
          throw window_error("U_e Koszul homology not certified; increase J");
    ConvergenceRow row;
    row.e = e;
    row.q = q;
    row.homology_lengths.assign(d + 1, 0);
    for (size_t l = 0; l < s; ++l)
      for (int i = 0; i <= d; ++i)
        for (int tau = 0; tau < nsl; ++tau) row.homology_lengths[i] += per_summand[l].h[i][tau];
    row.coker_length = row.homology_lengths[0];
    for (int i = 1; i <= d; ++i)
      row.chi1 += (i % 2 == 1 ? 1 : -1) * row.homology_lengths[i];
    row.mult = row.coker_length - row.chi1;
    // nu: cokernels of the z-stack per slice (these are the H_0 numbers per
    // summand) refined by the extra generators.
    std::vector<long long> coker_m(nsl, 0);
    for (int j = 0; j < nsl; ++j) {
      long long cj = 0;
      for (size_t l = 0; l < s; ++l) cj += per_summand[l].h[0][j];
      if (cj == 0 || ring.extra_gens.empty()) {
        coker_m[j] = cj;
        continue;
      }
      if (j == 0) {
        coker_m[j] = cj;  // nothing maps into the first slice
        continue;
      }
      // quotient map of the z-image inside slice j, per summand
      FpMatrix proj(0, 0, p);
      {
        std::vector<FpMatrix> qs(s);
        size_t total_rows = 0, total_cols = 0;
        for (size_t l = 0; l < s; ++l) {
          long long dim_j = w.dim(sel_deg(l, j));
          long long dim_prev = w.dim(sel_deg(l, j - 1));
          SpBuilder b(static_cast<size_t>(dim_j), static_cast<size_t>(dim_prev) * d, p);
          for (int i = 0; i < d; ++i)
            sp_add_block(b, z_power(static_cast<size_t>(i), l, j - 1), 0,
                         static_cast<size_t>(i) * dim_prev, 1);
          qs[l] = sparse_quotient_map(b.build());
          total_rows += qs[l].rows();
          total_cols += qs[l].cols();
        }
        proj = FpMatrix(total_rows, total_cols, p);
        size_t ro = 0, co = 0;
        for (size_t l = 0; l < s; ++l) {
          for (size_t rr = 0; rr < qs[l].rows(); ++rr)
            for (size_t cc = 0; cc < qs[l].cols(); ++cc) proj.at(ro + rr, co + cc) = qs[l].at(rr, cc);
          ro += qs[l].rows();
          co += qs[l].cols();
        }
      }
      FpMatrix stacked(proj.rows(), 0, p);
      for (size_t xi = 0; xi < ring.extra_gens.size(); ++xi) {
        FpMatrix pmat = proj;
        for (long long step = q - 1; step >= 0; --step)
          pmat = rowblock_times_sparse(pmat, step_map(xi, a0 + (j - 1) * q + step));
        stacked = hstack(stacked, pmat);
      }
      coker_m[j] = cj - static_cast<long long>(rank(stacked));
    }
    if (coker_m[nsl - 1] != 0 || coker_m[nsl - 2] != 0)
      throw window_error("nu cokernel not certified; increase J");
    for (long long c : coker_m) row.nu += c;
    // first selected slice of the tensor
    for (size_t l = 0; l < s; ++l) row.slice_dim_q1 += w.dim(sel_deg(l, 0));
    long long fact = 1;
    for (int i = 2; i <= d - 1; ++i) fact *= i;
    long long qpow = 1;
    for (int i = 0; i < d - 1; ++i) qpow *= q;
    row.predicted_mult = fact * ring.s * qpow;
    row.ratio_mult_nu = Frac::make(row.mult, row.nu);
    row.ratio_chi1_nu = Frac::make(row.chi1, row.nu);
    return row;
  }
};

}  // namespace detail

// Degree of the first selected slice for the class -r mod q.
inline long long first_selected_degree(long long q, long long r) {
  long long m = ((-r) % q + q) % q;
  return m;
}

// Builds U_e through the generic dense engine (tensor + selection). Used at
// desk scale and as the cross-check for the free engine.
inline SlicedModule build_ue_generic(const RingData& ring, int e, const PipelineOptions& opts,
                                     uint64_t wseed) {
  const uint32_t p = ring.ring->modulus();
  if (opts.r < 1 && !opts.allow_bad_r)
    throw input_error("r must be >= 1 (pass allow_bad_r to demonstrate the failure)");
  long long q = 1;
  for (int i = 0; i < e; ++i) q *= p;
  const int n = ring.d - 1;
  int window = static_cast<int>((opts.J + 3) * q - 1);
  if (window > ring.ring->window())
    throw window_error("ring window too small for the requested J and e");
  WDescriptor desc{n, q};
  LinearFormSet wfs = sample_w_forms(p, desc, wseed);
  long long worst = w_dim(n, q, window);
  if (worst > opts.max_slice_dim) throw window_error("slice dimension exceeds the memory guard");
  SlicedModule wmod = realize_w(p, desc, wfs, window);
  SlicedModule tensor = tensor_over_A(ring.ring, ring.z, wmod, window);
  long long a0 = first_selected_degree(q, opts.r);
  return select_and_pushforward(tensor, a0, q, e);
}

inline ConvergenceRow row_from_module(const SlicedModule& ue, const RingData& ring, int e,
                                      long long q) {
  std::vector<FormSpec> zforms;
  for (const FpVec& f : ring.z.forms) zforms.push_back(FormSpec::linear(f));
  KoszulReport rep = koszul_report(ue, zforms);
  ConvergenceRow row;
  row.e = e;
  row.q = q;
  row.homology_lengths = rep.homology_lengths;
  row.coker_length = rep.coker_length;
  row.chi1 = rep.chi1;
  row.mult = rep.multiplicity;
  row.nu = nu(ue);
  row.slice_dim_q1 = static_cast<long long>(ue.dims[0]);
  long long fact = 1;
  for (int i = 2; i <= ring.d - 1; ++i) fact *= i;
  long long qpow = 1;
  for (int i = 0; i < ring.d - 1; ++i) qpow *= q;
  row.predicted_mult = fact * ring.s * qpow;
  row.ratio_mult_nu = Frac::make(row.mult, row.nu);
  row.ratio_chi1_nu = Frac::make(row.chi1, row.nu);
  return row;
}

// One certified convergence row; picks the free engine when available.
inline ConvergenceRow convergence_row(const RingData& ring, int e, const PipelineOptions& opts) {
  const uint32_t p = ring.ring->modulus();
  if (e < 1) throw input_error("Frobenius exponent must be >= 1");
  if (opts.r < 1 && !opts.allow_bad_r)
    throw input_error("r must be >= 1 (pass allow_bad_r to demonstrate the failure)");
  long long q = 1;
  for (int i = 0; i < e; ++i) {
    q *= p;
    if (q > (1LL << 40)) throw input_error("q too large");
  }
  uint64_t wseed = splitmix64(ring.seed ^ (0x57ULL + static_cast<uint64_t>(e) * 1315423911ULL));
  if (ring.free_over_A && !opts.force_generic && ring.d >= 2) {
    const int n = ring.d - 1;
    WDescriptor desc{n, q};
    long long top = w_dim(n, q, first_selected_degree(q, opts.r) + (opts.J + 1) * q);
    if (top > opts.max_slice_dim) throw window_error("slice dimension exceeds the memory guard");
    LinearFormSet wfs = sample_w_forms(p, desc, wseed);
    WRealization w(p, desc, wfs.forms);
    detail::FreeRowEngine engine{ring, w, q, first_selected_degree(q, opts.r), opts.J};
    return engine.run(e);
  }
  SlicedModule ue = build_ue_generic(ring, e, opts, wseed);
  return row_from_module(ue, ring, e, q);
}

inline std::vector<RowResult> convergence_table(const RingData& ring, int e_min, int e_max,
                                                const PipelineOptions& opts) {
  if (e_min < 1 || e_max < e_min) throw input_error("bad Frobenius exponent range");
  std::vector<RowResult> rows;
  for (int e = e_min; e <= e_max; ++e) {
    RowResult rr;
    try {
      rr.row = convergence_row(ring, e, opts);
    } catch (const window_error& err) {
      rr.error = err.what();
    }
    rows.push_back(std::move(rr));
  }
  return rows;
}

// length((W)_{-r mod q} / (z^q)) - dim W_{q-r}: the off-degree residue mass
// of the selected quotient. Computed per slice through the sparse stencils.
struct ResidueReport {
  int e = 0;
  long long q = 1;
  long long quotient_length = 0;
  long long concentrated_dim = 0;  // dim W_{q-r}
  long long residue = 0;
};

inline ResidueReport residue_profile(uint32_t p, int d, int e, long long r,
                                     const LinearFormSet& wforms) {
  if (r < 1) throw input_error("residue offset r must be >= 1");
  if (d < 2) throw input_error("residue_profile needs d >= 2");
  long long q = 1;
  for (int i = 0; i < e; ++i) q *= p;
  const int n = d - 1;
  WRealization w(p, WDescriptor{n, q}, wforms.forms);
  long long a0 = first_selected_degree(q, r);
  const int nsl = d + 3;  // support dies by socle degree ~ d(q-1)+const
  std::vector<long long> coker(nsl, 0);
  parallel_for(static_cast<size_t>(nsl), [&](size_t j) {
    long long t = a0 + static_cast<long long>(j) * q;
    if (j == 0) {
      coker[j] = w.dim(t);
      return;
    }
    long long dim_prev = w.dim(t - q);
    SpBuilder b(static_cast<size_t>(w.dim(t)), static_cast<size_t>(dim_prev) * d, p);
    for (int i = 0; i < d; ++i)
      sp_add_block(b, w.form_power_action(static_cast<size_t>(i), t - q, q), 0,
                   static_cast<size_t>(i) * dim_prev, 1);
    coker[j] = w.dim(t) - static_cast<long long>(sparse_rank(b.build()));
  });
  if (coker[nsl - 1] != 0 || coker[nsl - 2] != 0)
    throw window_error("residue quotient not certified finite");
  ResidueReport rep;
  rep.e = e;
  rep.q = q;
  for (long long c : coker) rep.quotient_length += c;
  rep.concentrated_dim = w_dim(n, q, q - r);
  rep.residue = rep.quotient_length - rep.concentrated_dim;
  return rep;
}

// Free graded extension demo: S = R[u]/(g) with g homogeneous and monic in
// u; reports e(R) <= e(S) with independently sampled minimal reductions.
struct LechDemoReport {
  long long e_r = 0, e_s = 0;
  bool holds = false;
  uint64_t seed_r = 0, seed_s = 0;
};

inline void check_monic_in_u(const Polynomial& g, int m) {
  if (g.is_zero()) throw input_error("lech: g must be nonzero");
  if (!g.is_homogeneous()) throw input_error("lech: g must be homogeneous");
  int top = -1;
  for (const Term& t : g.terms) top = std::max(top, static_cast<int>(t.exps[m]));
  if (top < 1) throw input_error("lech: g must involve u");
  int count = 0;
  for (const Term& t : g.terms)
    if (t.exps[m] == top) {
      ++count;
      for (int j = 0; j < m; ++j)
        if (t.exps[j]) throw input_error("lech: g is not monic in u");
      if (t.coeff != 1) throw input_error("lech: leading u-coefficient must be 1");
    }
  if (count != 1) throw input_error("lech: g is not monic in u");
}

inline LechDemoReport lech_demo(std::shared_ptr<const GradedAlgebra> ring, int d,
                                const Polynomial& g, uint64_t seed) {
  const int m = ring->num_vars();
  if (g.num_vars != m + 1) throw input_error("lech: g must live in the x's and u");
  check_monic_in_u(g, m);
  std::vector<Polynomial> sgens;
  for (const Polynomial& f : ring->ideal_gens()) sgens.push_back(poly_extend(f, m + 1));
  sgens.push_back(g);
  auto sring = std::make_shared<GradedAlgebra>(ring->modulus(), m + 1, sgens, ring->window());
  LechDemoReport rep;
  rep.seed_r = splitmix64(seed ^ 0xabcdULL);
  rep.seed_s = splitmix64(seed ^ 0x1234ULL);
  LinearFormSet zr = noether_normalize(*ring, d, rep.seed_r);
  LinearFormSet zs = noether_normalize(*sring, d, rep.seed_s);
  rep.e_r = ring_multiplicity(ring, d, zr);
  rep.e_s = ring_multiplicity(sring, d, zs);
  rep.holds = rep.e_r <= rep.e_s;
  return rep;
}

}  // namespace limulrich
