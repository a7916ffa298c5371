#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "limulrich/koszul.hpp"
#include "limulrich/rng.hpp"
#include "limulrich/sliced_module.hpp"
#include "limulrich/sparse.hpp"

namespace limulrich {

// The twisted Segre module W over n factors k[x_i, y_i], twist (i-1)q on the
// i-th factor. Degree-t slice: monomials x_i^{a_i} y_i^{(t+(i-1)q)-a_i},
// indexed lexicographically in (a_1, ..., a_n).

struct WDescriptor {
  int n = 1;        // number of Segre factors; ambient dimension is n+1
  long long q = 1;  // twist step; any positive integer as a graded module
};

inline void check_w_descriptor(const WDescriptor& d) {
  if (d.n < 1) throw input_error("W needs at least one Segre factor");
  if (d.q < 1) throw input_error("W twist step must be positive");
}

// dim_k W_t = prod_i (t + (i-1)q + 1) for t >= 0.
inline long long w_dim(int n, long long q, long long t) {
  if (t < 0) return 0;
  long long out = 1;
  for (int i = 1; i <= n; ++i) out *= t + (i - 1) * q + 1;
  return out;
}

// dim_k (T_n)_t = (t+1)^n for t >= 0.
inline long long t_dim(int n, long long t) {
  if (t < 0) return 0;
  long long out = 1;
  for (int i = 0; i < n; ++i) out *= t + 1;
  return out;
}

namespace detail {

inline long long poly2_dim(long long s) { return s >= 0 ? s + 1 : 0; }        // dim k[x,y]_s
inline long long poly2_h2(long long s) { return s <= -2 ? -s - 1 : 0; }       // dim H^2(k[x,y])_s

}  // namespace detail

// Degreewise dimension of H^j_m(W_q^n) by the Kunneth recursion: the base is
// the plane k[x,y] (H^2 only, dim -t-1 in degrees <= -2); for j <= n the
// factor k[x_n,y_n]((n-1)q) multiplies by its slice dimension, and the top
// index pairs with the plane's H^2.
inline long long lc_dim(int n, long long q, int j, long long t) {
  if (n < 1) throw input_error("lc_dim: n must be >= 1");
  if (q < 1) throw input_error("lc_dim: q must be >= 1");
  if (j < 0 || j > n + 1) throw index_error("lc_dim: cohomological index out of range");
  if (n == 1) return j == 2 ? detail::poly2_h2(t) : 0;
  if (j <= n) return lc_dim(n - 1, q, j, t) * detail::poly2_dim(t + (n - 1) * q);
  return lc_dim(n - 1, q, n, t) * detail::poly2_h2(t + (n - 1) * q);
}

// Support window of H^j: [-(j-1)q, -(j-2)q-2] for 2 <= j <= n, and
// everything <= -(n-1)q-2 for j = n+1.
inline bool lc_window_contains(int n, long long q, int j, long long t) {
  if (j <= 1) return false;
  if (j <= n) return t >= -(j - 1) * q && t <= -(j - 2) * q - 2;
  return t <= -(n - 1) * q - 2;
}

// The full finitely-supported table of local-cohomology dimensions for the
// indices 0..n (H^0 and H^1 vanish; each middle index lives in its window).
// The top index n+1 has unbounded support below and is queried through
// lc_dim directly.
struct LcTable {
  int n = 1;
  long long q = 1;
  // entries[j] = dims over the window [-(j-1)q, -(j-2)q-2], low degree first;
  // empty for j <= 1.
  std::vector<std::vector<long long>> entries;

  long long window_low(int j) const { return -(static_cast<long long>(j) - 1) * q; }

  long long at(int j, long long t) const {
    if (j < 0 || j >= static_cast<int>(entries.size()))
      throw index_error("LcTable: cohomological index out of range");
    long long off = t - window_low(j);
    if (off < 0 || off >= static_cast<long long>(entries[j].size())) return 0;
    return entries[j][off];
  }
};

inline LcTable make_lc_table(int n, long long q) {
  LcTable table;
  table.n = n;
  table.q = q;
  table.entries.resize(n + 1);
  for (int j = 2; j <= n; ++j) {
    long long lo = table.window_low(j), hi = -(static_cast<long long>(j) - 2) * q - 2;
    for (long long t = lo; t <= hi; ++t) table.entries[j].push_back(lc_dim(n, q, j, t));
  }
  return table;
}

// Sum of lc_dim over the congruence class -r mod q, defined for j <= n where
// the support is finite; the top index has unbounded support in every class.
inline long long lc_slice_total(int n, long long q, int j, long long r) {
  if (r < 1) throw input_error("lc_slice_total: r must be >= 1");
  if (j < 0 || j > n)
    throw index_error("lc_slice_total: defined for 0 <= j <= n (top index diverges)");
  if (j <= 1) return 0;
  long long lo = -(j - 1) * q, hi = -(j - 2) * q - 2;
  long long total = 0;
  for (long long t = lo; t <= hi; ++t)
    if (((t + r) % q + q) % q == 0) total += lc_dim(n, q, j, t);
  return total;
}

// --- explicit monomial realization ---------------------------------------

// Slice bases and sparse multiplication stencils for W. Forms live in the
// 2^n-dimensional degree-one piece of T_n; the monomial of mask b multiplies
// by x_{i} on factor i when bit i is set, else by y_{i}.
class WRealization {
 public:
  WRealization(uint32_t p, WDescriptor desc, std::vector<FpVec> forms)
      : p_(p), desc_(desc), forms_(std::move(forms)) {
    check_modulus(p_);
    check_w_descriptor(desc_);
    if (forms_.size() != static_cast<size_t>(desc_.n + 1))
      throw input_error("W realization needs n+1 forms");
    for (const FpVec& f : forms_)
      if (f.size() != (size_t(1) << desc_.n)) throw input_error("W form has wrong coefficient count");
  }

  uint32_t modulus() const { return p_; }
  const WDescriptor& desc() const { return desc_; }
  const std::vector<FpVec>& forms() const { return forms_; }
  long long dim(long long t) const { return w_dim(desc_.n, desc_.q, t); }

  // Multiplication by the T-monomial of the given mask raised to the c-th
  // power (an element of T_c): a one-entry-per-column shift W_t -> W_{t+c}.
  SpMat monomial_shift(long long t, uint32_t mask, long long c) const {
    long long src = dim(t), dst = dim(t + c);
    SpBuilder b(static_cast<size_t>(dst), static_cast<size_t>(src), p_);
    if (t >= 0) {
      std::vector<long long> src_rad = radices(t), dst_rad = radices(t + c);
      std::vector<long long> a(desc_.n, 0);
      for (long long col = 0; col < src; ++col) {
        long long row = 0;
        for (int i = 0; i < desc_.n; ++i) {
          long long ai = a[i] + ((mask >> i) & 1 ? c : 0);
          row = row * dst_rad[i] + ai;
        }
        b.add(static_cast<uint32_t>(row), static_cast<uint32_t>(col), 1);
        // odometer over (a_1..a_n), last index fastest
        for (int i = desc_.n - 1; i >= 0; --i) {
          if (++a[i] < src_rad[i]) break;
          a[i] = 0;
        }
      }
    }
    return b.build();
  }

  // z_i^(qq) for qq a power of the characteristic: Frobenius turns the q-th
  // power of a sum into the sum of q-th powers, so the stencil keeps one
  // entry per T_1-monomial with coefficients raised to qq.
  SpMat form_power_action(size_t form_idx, long long t, long long qq) const {
    if (form_idx >= forms_.size()) throw index_error("form index");
    const FpVec& f = forms_[form_idx];
    long long src = dim(t), dst = dim(t + qq);
    SpBuilder b(static_cast<size_t>(dst), static_cast<size_t>(src), p_);
    if (t >= 0 && src > 0) {
      std::vector<long long> dst_rad = radices(t + qq);
      std::vector<long long> src_rad = radices(t);
      for (uint32_t mask = 0; mask < f.size(); ++mask) {
        uint32_t coeff = fp_pow(f[mask], static_cast<uint64_t>(qq), p_);
        if (!coeff) continue;
        std::vector<long long> a(desc_.n, 0);
        for (long long col = 0; col < src; ++col) {
          long long row = 0;
          for (int i = 0; i < desc_.n; ++i) {
            long long ai = a[i] + ((mask >> i) & 1 ? qq : 0);
            row = row * dst_rad[i] + ai;
          }
          b.add(static_cast<uint32_t>(row), static_cast<uint32_t>(col), coeff);
          for (int i = desc_.n - 1; i >= 0; --i) {
            if (++a[i] < src_rad[i]) break;
            a[i] = 0;
          }
        }
      }
    }
    return b.build();
  }

  SpMat form_action(size_t form_idx, long long t) const { return form_power_action(form_idx, t, 1); }

  FpMatrix dense_form_action(size_t form_idx, long long t) const {
    return sparse_to_dense(form_action(form_idx, t));
  }

 private:
  std::vector<long long> radices(long long t) const {
    std::vector<long long> r(desc_.n);
    for (int i = 0; i < desc_.n; ++i) r[i] = t + static_cast<long long>(i) * desc_.q + 1;
    return r;
  }

  uint32_t p_;
  WDescriptor desc_;
  std::vector<FpVec> forms_;
};

// Random degree-one forms of T_n certified as a system of parameters on W:
// the slicewise cokernel of (z_1..z_{n+1}) dies and stays dead through the
// certificate window. Up to 32 attempts.
inline LinearFormSet sample_w_forms(uint32_t p, const WDescriptor& desc, uint64_t seed,
                                    int cert_window = 5) {
  check_w_descriptor(desc);
  size_t t1 = size_t(1) << desc.n;
  for (uint64_t attempt = 0; attempt < 32; ++attempt) {
    SeededRng rng(seed, "w_forms", attempt * 1000003ULL + static_cast<uint64_t>(desc.n));
    std::vector<FpVec> forms(desc.n + 1, FpVec(t1, 0));
    for (auto& f : forms)
      for (auto& c : f) c = rng.below(p);
    WRealization w(p, desc, forms);
    std::vector<size_t> qdims(cert_window + 1);
    qdims[0] = static_cast<size_t>(w.dim(0));
    bool ok = true;
    int t0 = -1;
    for (int t = 1; t <= cert_window; ++t) {
      SpBuilder stack(static_cast<size_t>(w.dim(t)),
                      static_cast<size_t>(w.dim(t - 1)) * (desc.n + 1), p);
      for (int i = 0; i <= desc.n; ++i) {
        SpMat zi = w.form_action(i, t - 1);
        for (size_t c = 0; c < zi.cols; ++c)
          for (uint64_t k = zi.col_ptr[c]; k < zi.col_ptr[c + 1]; ++k)
            stack.add(zi.row_idx[k], static_cast<uint32_t>(c + i * zi.cols), zi.vals[k]);
      }
      qdims[t] = static_cast<size_t>(w.dim(t)) - sparse_rank(stack.build());
    }
    for (int t = cert_window; t >= 0; --t) {
      if (qdims[t] != 0) break;
      t0 = t;
    }
    ok = t0 >= 1;
    if (ok) {
      LinearFormSet out;
      out.forms = std::move(forms);
      out.seed = seed;
      out.t0 = t0;
      out.quotient_dims = std::move(qdims);
      return out;
    }
  }
  throw normalization_error("no certified system of parameters on W after 32 attempts");
}

// Dense realization as a module over the polynomial ring A = k[z_1..z_{n+1}]:
// slice dimensions follow the closed product formula by construction, the
// actions are the sampled forms in the explicit monomial basis.
inline SlicedModule realize_w(uint32_t p, const WDescriptor& desc, const LinearFormSet& forms,
                              int window, std::shared_ptr<const GradedAlgebra> a_ring = nullptr,
                              long long max_dense_cells = 400000000) {
  check_w_descriptor(desc);
  if (window < 2) throw window_error("realize_w: window must be at least 2");
  WRealization w(p, desc, forms.forms);
  long long cells = 0;
  for (int t = 0; t < window; ++t) cells += w.dim(t) * w.dim(t + 1);
  if (cells * static_cast<long long>(desc.n + 1) > max_dense_cells)
    throw window_error("realize_w: dense realization exceeds the memory guard");
  if (!a_ring)
    a_ring = std::make_shared<GradedAlgebra>(p, desc.n + 1, std::vector<Polynomial>{},
                                             std::max(2, window));
  SlicedModule m;
  m.base = a_ring;
  m.lo = 0;
  m.dims.resize(window + 1);
  for (int t = 0; t <= window; ++t) m.dims[t] = static_cast<size_t>(w.dim(t));
  m.actions.resize(desc.n + 1);
  for (int g = 0; g <= desc.n; ++g) {
    m.actions[g].resize(window);
    for (int t = 0; t < window; ++t) m.actions[g][t] = w.dense_form_action(g, t);
  }
  return m;
}

// --- independent oracle: local cohomology as stabilized Koszul cohomology --

// H^j of the cochain complex on (z_1^tp, ..., z_{n+1}^tp) in internal degree
// delta. The direct limit over tp computes H^j_m; the caller checks
// stabilization across consecutive tp.
inline long long lc_koszul_cohomology_dim(const WRealization& w, int j, long long delta, int tp) {
  const int d = w.desc().n + 1;
  if (j < 0 || j > d) throw index_error("cohomology index");
  const uint32_t p = w.modulus();
  auto subsets = detail::subsets_by_size(d);
  // z_i^tp out of degree t by composing the sparse stencils (these powers
  // are honest compositions: no Frobenius shortcut in the oracle)
  auto power_action = [&](int i, long long t) {
    SpMat acc = w.form_action(i, t);
    for (int step = 1; step < tp; ++step) acc = sp_compose(w.form_action(i, t + step), acc);
    return sparse_to_dense(acc);
  };
  auto term_dim = [&](int level) {
    return static_cast<long long>(subsets[level].size()) * w.dim(delta + level * tp);
  };
  // cochain differential K^level -> K^{level+1}
  auto differential = [&](int level) {
    const auto& rows_sets = subsets[level + 1];
    const auto& cols_sets = subsets[level];
    long long src_block = w.dim(delta + level * tp);
    long long dst_block = w.dim(delta + (level + 1) * tp);
    FpMatrix out(static_cast<size_t>(dst_block * rows_sets.size()),
                 static_cast<size_t>(src_block * cols_sets.size()), p);
    if (src_block == 0 || dst_block == 0) return out;
    std::vector<FpMatrix> pow(d);
    for (int i = 0; i < d; ++i) pow[i] = power_action(i, delta + level * tp);
    for (size_t a = 0; a < cols_sets.size(); ++a) {
      const auto& s = cols_sets[a];
      for (int k = 0; k < d; ++k) {
        if (std::find(s.begin(), s.end(), k) != s.end()) continue;
        std::vector<int> bigger = s;
        bigger.insert(std::lower_bound(bigger.begin(), bigger.end(), k), k);
        size_t pos = static_cast<size_t>(
            std::lower_bound(bigger.begin(), bigger.end(), k) - bigger.begin());
        size_t b = static_cast<size_t>(
            std::lower_bound(rows_sets.begin(), rows_sets.end(), bigger) - rows_sets.begin());
        bool neg = pos % 2 == 1;
        const FpMatrix& blk = pow[k];
        for (size_t r = 0; r < blk.rows(); ++r)
          for (size_t c = 0; c < blk.cols(); ++c) {
            uint32_t v = blk.at(r, c);
            if (!v) continue;
            out.at(b * dst_block + r, a * src_block + c) = neg ? fp_neg(v, p) : v;
          }
      }
    }
    return out;
  };
  long long rank_out = (j < d) ? static_cast<long long>(rank(differential(j))) : 0;
  long long rank_in = (j > 0) ? static_cast<long long>(rank(differential(j - 1))) : 0;
  return term_dim(j) - rank_out - rank_in;
}

// Stabilized value: walk the powers until three consecutive values agree.
// Dimension sequences wobble (rise, overshoot, settle) before the transition
// maps become isomorphisms, and the required depth grows with |delta|; the
// scan only starts once the j-th strand term W_{delta + j*tp} can be
// nonzero, since agreement among structurally empty complexes says nothing.
inline long long lc_oracle_dim(const WRealization& w, int j, long long delta, int max_power = 30) {
  int tp_min = 1;
  if (j >= 1 && delta < 0) tp_min = static_cast<int>((-delta + j - 1) / j);
  long long a = -1, b = -2, c = -3;
  int tracked = 0;
  for (int tp = std::max(1, tp_min); tp <= max_power; ++tp) {
    a = b;
    b = c;
    c = lc_koszul_cohomology_dim(w, j, delta, tp);
    ++tracked;
    if (tracked >= 3 && a == b && b == c) return c;
  }
  throw window_error("Koszul-limit oracle did not stabilize; raise the power bound");
}

}  // namespace limulrich
