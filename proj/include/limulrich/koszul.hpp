#pragma once

#include <optional>
#include <vector>

#include "limulrich/parallel.hpp"
#include "limulrich/sliced_module.hpp"

namespace limulrich {

// Koszul homology lengths of a window-realized module with respect to a
// sequence of homogeneous forms. The complex is assembled slicewise: in
// slice-degree t the i-th term is the direct sum of M_{t - deg(S)} over
// i-element subsets S of the forms, and the differential carries the usual
// exterior-algebra signs (-1)^{position of k in S}.
struct KoszulReport {
  std::vector<int> form_degrees;
  std::vector<long long> homology_lengths;        // l_0 .. l_d
  long long chi1 = 0;                             // sum_{i>=1} (-1)^{i-1} l_i
  long long coker_length = 0;                     // l_0 = length(M/(x)M)
  long long multiplicity = 0;                     // coker_length - chi1
  bool tail_certified = false;                    // all H_i vanish on top two slices
  std::vector<std::vector<long long>> per_slice;  // [i][t - lo]
};

namespace detail {

inline std::vector<std::vector<std::vector<int>>> subsets_by_size(int d) {
  std::vector<std::vector<std::vector<int>>> out(d + 1);
  for (uint32_t mask = 0; mask < (1u << d); ++mask) {
    std::vector<int> s;
    for (int k = 0; k < d; ++k)
      if (mask & (1u << k)) s.push_back(k);
    out[s.size()].push_back(std::move(s));
  }
  for (auto& level : out)
    std::sort(level.begin(), level.end());
  return out;
}

struct KoszulAssembler {
  const SlicedModule& m;
  const std::vector<FormSpec>& forms;
  std::vector<std::vector<std::vector<int>>> subsets;
  std::vector<int> degs;
  // cache[k][t - lo] = action of forms[k] out of slice t
  std::vector<std::vector<FpMatrix>> cache;

  KoszulAssembler(const SlicedModule& mod, const std::vector<FormSpec>& fs) : m(mod), forms(fs) {
    int d = static_cast<int>(forms.size());
    subsets = subsets_by_size(d);
    for (const FormSpec& f : forms) degs.push_back(f.degree());
    cache.resize(forms.size());
    size_t nslices = m.dims.size();
    for (size_t k = 0; k < forms.size(); ++k) cache[k].resize(nslices);
    parallel_for(forms.size() * nslices, [&](size_t job) {
      size_t k = job / nslices;
      int t = m.lo + static_cast<int>(job % nslices);
      if (t + degs[k] <= m.hi())
        cache[k][t - m.lo] = form_action(m, forms[k], t);
      else
        cache[k][t - m.lo] = FpMatrix(0, m.dim_at(t), m.modulus());
    });
  }

  int subset_degree(const std::vector<int>& s) const {
    int d = 0;
    for (int k : s) d += degs[k];
    return d;
  }

  const FpMatrix* action_of(int k, int t) const {
    if (t < m.lo || t > m.hi()) return nullptr;
    return &cache[k][t - m.lo];
  }

  size_t term_dim(int i, int t) const {
    size_t total = 0;
    for (const auto& s : subsets[i]) total += m.dim_at(t - subset_degree(s));
    return total;
  }

  // The differential K_i(t) -> K_{i-1}(t); i >= 1.
  FpMatrix differential(int i, int t) const {
    const uint32_t p = m.modulus();
    const auto& cols_sets = subsets[i];
    const auto& rows_sets = subsets[i - 1];
    std::vector<size_t> col_off(cols_sets.size() + 1, 0), row_off(rows_sets.size() + 1, 0);
    for (size_t a = 0; a < cols_sets.size(); ++a)
      col_off[a + 1] = col_off[a] + m.dim_at(t - subset_degree(cols_sets[a]));
    for (size_t b = 0; b < rows_sets.size(); ++b)
      row_off[b + 1] = row_off[b] + m.dim_at(t - subset_degree(rows_sets[b]));
    FpMatrix out(row_off.back(), col_off.back(), p);
    for (size_t a = 0; a < cols_sets.size(); ++a) {
      const auto& s = cols_sets[a];
      int src_t = t - subset_degree(s);
      if (m.dim_at(src_t) == 0) continue;
      for (size_t pos = 0; pos < s.size(); ++pos) {
        int k = s[pos];
        std::vector<int> rest = s;
        rest.erase(rest.begin() + pos);
        size_t b = static_cast<size_t>(
            std::lower_bound(rows_sets.begin(), rows_sets.end(), rest) - rows_sets.begin());
        const FpMatrix* act = action_of(k, src_t);
        if (!act || act->rows() == 0) continue;
        bool negative = (pos % 2) == 1;
        for (size_t r = 0; r < act->rows(); ++r)
          for (size_t c = 0; c < act->cols(); ++c) {
            uint32_t v = act->at(r, c);
            if (!v) continue;
            out.at(row_off[b] + r, col_off[a] + c) = negative ? fp_neg(v, p) : v;
          }
      }
    }
    return out;
  }
};

}  // namespace detail

// Non-throwing variant; tail_certified tells whether the window sufficed.
inline KoszulReport koszul_report_partial(const SlicedModule& m,
                                          const std::vector<FormSpec>& forms) {
  m.validate();
  if (forms.empty()) throw input_error("koszul_report needs at least one form");
  if (m.dims.size() < 2) throw window_error("koszul_report needs at least two slices");
  const int d = static_cast<int>(forms.size());
  detail::KoszulAssembler asmb(m, forms);
  const int nslices = static_cast<int>(m.dims.size());
  // ranks[i][t-lo] of the differential K_i(t) -> K_{i-1}(t), i in [1, d]
  std::vector<std::vector<size_t>> ranks(d + 2, std::vector<size_t>(nslices, 0));
  parallel_for(static_cast<size_t>(d) * nslices, [&](size_t job) {
    int i = 1 + static_cast<int>(job / nslices);
    int idx = static_cast<int>(job % nslices);
    ranks[i][idx] = rank(asmb.differential(i, m.lo + idx));
  });
  KoszulReport rep;
  rep.form_degrees = asmb.degs;
  rep.per_slice.assign(d + 1, std::vector<long long>(nslices, 0));
  rep.homology_lengths.assign(d + 1, 0);
  for (int i = 0; i <= d; ++i)
    for (int idx = 0; idx < nslices; ++idx) {
      long long dim_ki = static_cast<long long>(asmb.term_dim(i, m.lo + idx));
      long long h = dim_ki - static_cast<long long>(ranks[i][idx]) -
                    static_cast<long long>(ranks[i + 1][idx]);
      rep.per_slice[i][idx] = h;
      rep.homology_lengths[i] += h;
    }
  rep.coker_length = rep.homology_lengths[0];
  for (int i = 1; i <= d; ++i)
    rep.chi1 += (i % 2 == 1 ? 1 : -1) * rep.homology_lengths[i];
  rep.multiplicity = rep.coker_length - rep.chi1;
  rep.tail_certified = true;
  for (int i = 0; i <= d; ++i)
    if (rep.per_slice[i][nslices - 1] != 0 || rep.per_slice[i][nslices - 2] != 0)
      rep.tail_certified = false;
  return rep;
}

struct koszul_window_error : window_error {
  KoszulReport partial;
  explicit koszul_window_error(KoszulReport rep)
      : window_error("koszul homology not certified within window (lengths are lower bounds)"),
        partial(std::move(rep)) {}
};

inline KoszulReport koszul_report(const SlicedModule& m, const std::vector<FormSpec>& forms) {
  KoszulReport rep = koszul_report_partial(m, forms);
  if (!rep.tail_certified) throw koszul_window_error(std::move(rep));
  if (rep.chi1 < 0) throw math_assert_error("chi1 negative on a certified report: bug");
  if (rep.multiplicity < 0)
    throw math_assert_error("negative multiplicity on a certified report: bug");
  return rep;
}

// Minimal number of generators: length of M / (all degree-one generators)M.
inline long long nu(const SlicedModule& m) {
  m.validate();
  if (m.dims.size() < 2) throw window_error("nu needs at least two slices");
  const int nslices = static_cast<int>(m.dims.size());
  std::vector<long long> coker(nslices, 0);
  parallel_for(static_cast<size_t>(nslices), [&](size_t idx) {
    int t = m.lo + static_cast<int>(idx);
    if (idx == 0) {
      coker[idx] = static_cast<long long>(m.dim_at(t));
      return;
    }
    FpMatrix stacked(m.dim_at(t), 0, m.modulus());
    for (size_t g = 0; g < m.num_gens(); ++g) stacked = hstack(stacked, m.gen_action(g, t - 1));
    coker[idx] = static_cast<long long>(m.dim_at(t)) - static_cast<long long>(rank(stacked));
  });
  if (coker[nslices - 1] != 0 || coker[nslices - 2] != 0)
    throw window_error("nu: cokernel has not died by the top of the window");
  long long total = 0;
  for (long long c : coker) total += c;
  return total;
}

namespace detail {

// Quotient maps of M/(x^-)M per slice, shared by ann_length and prop24.
struct QuotientData {
  std::vector<FpMatrix> qmap;  // slice t -> quotient coords
  std::vector<long long> dims;
};

inline QuotientData quotient_by_forms(const SlicedModule& m, const std::vector<FormSpec>& forms) {
  QuotientData out;
  int nslices = static_cast<int>(m.dims.size());
  out.qmap.resize(nslices);
  out.dims.resize(nslices);
  parallel_for(static_cast<size_t>(nslices), [&](size_t idx) {
    int t = m.lo + static_cast<int>(idx);
    FpMatrix img(m.dim_at(t), 0, m.modulus());
    for (const FormSpec& f : forms) {
      int src = t - f.degree();
      if (src >= m.lo) img = hstack(img, form_action(m, f, src));
    }
    out.qmap[idx] = quotient_map(img);
    out.dims[idx] = static_cast<long long>(out.qmap[idx].rows());
  });
  return out;
}

}  // namespace detail

// length of Ann_{M/(x^-)M}(w) = sum over slices of dim ker(w on the
// quotient). The quotient itself may have positive dimension (x^- is one
// form short of a full system); only the annihilator must die, so the
// certificate watches the kernel dimensions.
inline long long ann_length(const SlicedModule& m, const std::vector<FormSpec>& x_minus,
                            const FormSpec& w) {
  m.validate();
  detail::QuotientData q = detail::quotient_by_forms(m, x_minus);
  const int a = w.degree();
  const int nslices = static_cast<int>(m.dims.size());
  if (nslices < a + 3) throw window_error("ann_length: window too small for the form degree");
  std::vector<long long> ker(nslices, 0);
  parallel_for(static_cast<size_t>(nslices - a), [&](size_t idx) {
    int t = m.lo + static_cast<int>(idx);
    if (m.dim_at(t) == 0) return;
    // ker of (quotient at t+a) ∘ w, minus the subspace already killed at t
    FpMatrix composed = compose(q.qmap[idx + a], form_action(m, w, t));
    long long full_ker =
        static_cast<long long>(m.dim_at(t)) - static_cast<long long>(rank(composed));
    long long killed = static_cast<long long>(m.dim_at(t)) - q.dims[idx];
    ker[idx] = full_ker - killed;
  });
  if (ker[nslices - a - 1] != 0 || ker[nslices - a - 2] != 0)
    throw window_error("ann_length: annihilator not certified finite within window");
  long long total = 0;
  for (long long k : ker) total += k;
  return total;
}

// e(w, N) = length(N/wN) - length(Ann_N w) for a form w with both sides
// certified finite in the window.
inline long long elem_multiplicity(const SlicedModule& n, const FormSpec& w) {
  n.validate();
  const int a = w.degree();
  const int nslices = static_cast<int>(n.dims.size());
  if (nslices < a + 3) throw window_error("elem_multiplicity: window too small");
  std::vector<long long> qdim(nslices, 0), kdim(nslices, 0);
  parallel_for(static_cast<size_t>(nslices), [&](size_t idx) {
    int t = n.lo + static_cast<int>(idx);
    int src = t - a;
    FpMatrix incoming = (src >= n.lo) ? form_action(n, w, src) : FpMatrix(n.dim_at(t), 0, n.modulus());
    qdim[idx] = static_cast<long long>(n.dim_at(t)) - static_cast<long long>(rank(incoming));
    if (t + a <= n.hi()) {
      FpMatrix outgoing = form_action(n, w, t);
      kdim[idx] = static_cast<long long>(n.dim_at(t)) - static_cast<long long>(rank(outgoing));
    }
  });
  if (qdim[nslices - 1] != 0 || qdim[nslices - 2] != 0)
    throw window_error("elem_multiplicity: N/wN not certified finite");
  if (kdim[nslices - a - 1] != 0 || kdim[nslices - a - 2] != 0)
    throw window_error("elem_multiplicity: Ann_N(w) not certified finite");
  long long lq = 0, lk = 0;
  for (int idx = 0; idx < nslices; ++idx) lq += qdim[idx];
  for (int idx = 0; idx + a < nslices; ++idx) lk += kdim[idx];
  return lq - lk;
}

// Koszul homology H_j(x^-, M) materialized as a module with induced actions
// of all degree-one generators of the base.
inline SlicedModule homology_module(const SlicedModule& m, const std::vector<FormSpec>& x_minus,
                                    int j) {
  m.validate();
  const int dm = static_cast<int>(x_minus.size());
  if (j < 1 || j > dm) throw index_error("homology index out of range");
  detail::KoszulAssembler asmb(m, x_minus);
  const uint32_t p = m.modulus();
  const int nslices = static_cast<int>(m.dims.size());
  std::vector<FpMatrix> kerb(nslices), qmap(nslices), section(nslices);
  SlicedModule h;
  h.base = m.base;
  h.lo = m.lo;
  h.dims.resize(nslices);
  for (int idx = 0; idx < nslices; ++idx) {
    int t = m.lo + idx;
    FpMatrix out = asmb.differential(j, t);
    FpMatrix in = (j + 1 <= dm) ? asmb.differential(j + 1, t)
                                : FpMatrix(out.cols(), 0, p);
    kerb[idx] = kernel_basis(out);
    auto coords = solve(kerb[idx], in);
    if (!coords) throw math_assert_error("koszul image not inside kernel: bug");
    qmap[idx] = quotient_map(*coords);
    section[idx] = section_of(qmap[idx]);
    h.dims[idx] = qmap[idx].rows();
  }
  // Diagonal generator actions descend to homology.
  const auto& sets = asmb.subsets[j];
  h.actions.resize(m.num_gens());
  for (size_t g = 0; g < m.num_gens(); ++g) {
    h.actions[g].resize(nslices - 1);
    for (int idx = 0; idx + 1 < nslices; ++idx) {
      int t = m.lo + idx;
      // block-diagonal action on the j-th Koszul term
      std::vector<size_t> src_off(sets.size() + 1, 0), dst_off(sets.size() + 1, 0);
      for (size_t a = 0; a < sets.size(); ++a) {
        int sd = asmb.subset_degree(sets[a]);
        src_off[a + 1] = src_off[a] + m.dim_at(t - sd);
        dst_off[a + 1] = dst_off[a] + m.dim_at(t + 1 - sd);
      }
      FpMatrix diag(dst_off.back(), src_off.back(), p);
      for (size_t a = 0; a < sets.size(); ++a) {
        int sd = asmb.subset_degree(sets[a]);
        if (m.dim_at(t - sd) == 0 || m.dim_at(t + 1 - sd) == 0) continue;
        FpMatrix blk = m.gen_action(g, t - sd);
        for (size_t r = 0; r < blk.rows(); ++r)
          for (size_t c = 0; c < blk.cols(); ++c) diag.at(dst_off[a] + r, src_off[a] + c) = blk.at(r, c);
      }
      auto moved = solve(kerb[idx + 1], compose(diag, kerb[idx]));
      if (!moved) throw math_assert_error("generator action does not preserve kernels: bug");
      h.actions[g][idx] = compose(qmap[idx + 1], compose(*moved, section[idx]));
    }
  }
  return h;
}

// The three long-exact-sequence identities relating multiplicities on the
// Koszul homology of x^- to chi_1 and annihilator lengths, checked as exact
// integers for w = yz, y, z.
struct IdentityCheck {
  long long lhs = 0, rhs = 0;
  bool equal = false;
};

struct Prop24Report {
  IdentityCheck for_yz, for_y, for_z;
  bool all_equal() const { return for_yz.equal && for_y.equal && for_z.equal; }
};

inline Prop24Report prop24_check(const SlicedModule& m, const std::vector<FormSpec>& x_minus,
                                 const FormSpec& y, const FormSpec& z) {
  const int dm = static_cast<int>(x_minus.size());
  std::vector<SlicedModule> homs;
  for (int j = 1; j <= dm; ++j) homs.push_back(homology_module(m, x_minus, j));
  auto one_side = [&](const FormSpec& w) {
    IdentityCheck chk;
    for (int j = 1; j <= dm; ++j) {
      long long e = elem_multiplicity(homs[j - 1], w);
      chk.lhs += (j % 2 == 1 ? 1 : -1) * e;
    }
    std::vector<FormSpec> full = {w};
    full.insert(full.end(), x_minus.begin(), x_minus.end());
    KoszulReport rep = koszul_report(m, full);
    chk.rhs = rep.chi1 - ann_length(m, x_minus, w);
    chk.equal = chk.lhs == chk.rhs;
    return chk;
  };
  Prop24Report rep;
  rep.for_yz = one_side(FormSpec::product(y, z));
  rep.for_y = one_side(y);
  rep.for_z = one_side(z);
  return rep;
}

// Rank over a polynomial base ring: the Koszul multiplicity with respect to
// the variables (torsion contributes nothing, e(m_A, A) = 1).
inline long long rank_over_A(const SlicedModule& m) {
  if (!m.base->is_polynomial_ring())
    throw input_error("rank_over_A requires a polynomial base ring");
  std::vector<FormSpec> vars;
  for (size_t g = 0; g < m.num_gens(); ++g) {
    FpVec e(m.num_gens(), 0);
    e[g] = 1;
    vars.push_back(FormSpec::linear(std::move(e)));
  }
  return koszul_report(m, vars).multiplicity;
}

}  // namespace limulrich
