#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "limulrich/errors.hpp"
#include "limulrich/fp.hpp"
#include "limulrich/parallel.hpp"
#include "limulrich/polynomial.hpp"
#include "limulrich/rng.hpp"
#include "limulrich/sparse.hpp"

namespace limulrich {

// A standard graded algebra R = k[x0..x_{m-1}]/I realized degree by degree:
// for each t <= window, a monomial basis of R_t (the non-leading monomials of
// the ideal slice) plus the reduction of every degree-t monomial into that
// basis, and multiplication matrices R_t -> R_{t+1} for each variable.
//
// Basis convention: monomials are listed grevlex-descending, the elimination
// pivots (leading monomials of the reduced ideal slice) are removed, and the
// surviving monomials keep their relative order.
class GradedAlgebra {
 public:
  struct DegreeSlice {
    MonoTable table;                 // all monomials of this degree
    std::vector<uint32_t> basis;     // indices into table of basis monomials
    std::vector<int32_t> basis_pos;  // table index -> basis position or -1
    // For every monomial of the degree, its expansion in the basis
    // (column-major: resolved[idx] has length basis.size()). Basis monomials
    // expand to unit vectors and are stored implicitly.
    std::vector<FpVec> pivot_expansion;  // keyed by table index, empty if basis
  };

  GradedAlgebra(uint32_t p, int num_vars, std::vector<Polynomial> gens, int window)
      : p_(p), m_(num_vars), window_(window), gens_(std::move(gens)) {
    check_modulus(p_);
    if (m_ < 1) throw input_error("need at least one variable");
    if (window_ < 2) throw input_error("window must be at least 2");
    for (const Polynomial& g : gens_) {
      if (g.num_vars != m_ || g.p != p_) throw input_error("generator in wrong ring");
      if (g.is_zero()) throw input_error("zero ideal generator");
      if (!g.is_homogeneous()) throw input_error("ideal generator not homogeneous: must be");
      if (g.degree() < 1) throw input_error("ideal generator of degree 0");
    }
    build();
  }

  uint32_t modulus() const { return p_; }
  int num_vars() const { return m_; }
  int window() const { return window_; }
  const std::vector<Polynomial>& ideal_gens() const { return gens_; }
  bool is_polynomial_ring() const { return gens_.empty(); }

  void check_degree(int t) const {
    if (t < 0 || t > window_)
      throw window_error("degree " + std::to_string(t) + " outside realized window [0, " +
                         std::to_string(window_) + "]");
  }

  // dim_k R_t
  size_t dim(int t) const {
    if (t < 0) return 0;
    check_degree(t);
    return slices_[t].basis.size();
  }

  const DegreeSlice& slice(int t) const {
    check_degree(t);
    return slices_[t];
  }

  // Multiplication by variable j as a matrix R_t -> R_{t+1}.
  const FpMatrix& var_action(int j, int t) const {
    if (j < 0 || j >= m_) throw index_error("variable index out of range");
    if (t < 0 || t + 1 > window_) throw window_error("var_action at degree " + std::to_string(t));
    return var_action_[j][t];
  }

  // Multiplication by a degree-one form given by coefficients over the basis
  // of R_1 (not over the raw variables, which may be cut down by linear
  // generators).
  FpMatrix linear_action(const FpVec& coeffs, int t) const {
    if (t < 0 || t + 1 > window_)
      throw window_error("linear_action at degree " + std::to_string(t));
    if (coeffs.size() != dim(1)) throw shape_error("linear_action: coefficient count != dim R_1");
    FpMatrix out(dim(t + 1), dim(t), p_);
    for (size_t k = 0; k < coeffs.size(); ++k) {
      if (!coeffs[k]) continue;
      int j = deg1_vars_[k];
      const FpMatrix& act = var_action_[j][t];
      for (size_t r = 0; r < out.rows(); ++r)
        for (size_t c = 0; c < out.cols(); ++c)
          out.at(r, c) = fp_add(out.at(r, c), fp_mul(coeffs[k], act.at(r, c), p_), p_);
    }
    return out;
  }

  // Variable indices of the basis monomials of R_1.
  const std::vector<int>& degree_one_vars() const { return deg1_vars_; }

  // Expansion of a degree-t monomial in the degree-t basis.
  FpVec reduce_monomial(int t, const Expo& e) const {
    check_degree(t);
    const DegreeSlice& s = slices_[t];
    size_t idx = s.table.index_of(e);
    if (s.basis_pos[idx] >= 0) {
      FpVec v(s.basis.size(), 0);
      v[s.basis_pos[idx]] = 1;
      return v;
    }
    return s.pivot_expansion[idx];
  }

  // Expansion of a homogeneous polynomial in the basis of its degree.
  FpVec reduce_polynomial(const Polynomial& f) const {
    if (!f.is_homogeneous()) throw input_error("reduce_polynomial needs homogeneous input");
    if (f.is_zero()) throw input_error("reduce_polynomial of zero: degree unknown");
    int t = f.degree();
    FpVec out(dim(t), 0);
    for (const Term& term : f.terms) {
      FpVec red = reduce_monomial(t, term.exps);
      for (size_t i = 0; i < out.size(); ++i)
        out[i] = fp_add(out[i], fp_mul(term.coeff, red[i], p_), p_);
    }
    return out;
  }

  // Hilbert series values over the window.
  std::vector<size_t> hilbert_values() const {
    std::vector<size_t> h(window_ + 1);
    for (int t = 0; t <= window_; ++t) h[t] = dim(t);
    return h;
  }

  // Degree of the Hilbert polynomial read off from finite differences of the
  // tail of the window (-1 for eventually-zero). Needs a window comfortably
  // past the generator degrees.
  int hilbert_poly_degree() const {
    std::vector<long long> v;
    for (int t = 0; t <= window_; ++t) v.push_back(static_cast<long long>(dim(t)));
    int tail = std::min<int>(3, static_cast<int>(v.size()) - 1);
    for (int order = 0; order <= window_; ++order) {
      bool tail_zero = true;
      for (size_t i = v.size() - tail; i < v.size(); ++i)
        if (v[i] != 0) tail_zero = false;
      if (tail_zero) return order - 1;
      for (size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
      v.pop_back();
      if (v.empty()) break;
    }
    throw window_error("Hilbert function not polynomial within window; enlarge window");
  }

 private:
  void build() {
    slices_.resize(window_ + 1);
    // Degree slices are independent given the generators, so realize them in
    // parallel.
    parallel_for(static_cast<size_t>(window_) + 1,
                 [&](size_t t) { build_degree(static_cast<int>(t)); });
    // degree-one basis variables
    const DegreeSlice& s1 = slices_[1];
    for (uint32_t b : s1.basis) {
      const Expo& e = s1.table.monos[b];
      for (int j = 0; j < m_; ++j)
        if (e[j] == 1) deg1_vars_.push_back(j);
    }
    if (slices_[0].basis.size() != 1) throw input_error("ideal contains a unit: R_0 != k");
    build_actions();
  }

  void build_degree(int t) {
    DegreeSlice s;
    s.table = make_mono_table(m_, t);
    size_t n = s.table.size();
    // Span of { mono * g : g generator, deg mono = t - deg g } as sparse rows.
    std::vector<SparseRow> sp_rows;
    for (const Polynomial& g : gens_) {
      int d = g.degree();
      if (d > t) continue;
      std::vector<Expo> mults = monomials_of_degree(m_, t - d);
      for (const Expo& mu : mults) {
        SparseRow row;
        row.reserve(g.terms.size());
        for (const Term& term : g.terms) {
          Expo e(m_);
          for (int i = 0; i < m_; ++i) e[i] = static_cast<uint16_t>(mu[i] + term.exps[i]);
          row.push_back({static_cast<uint32_t>(s.table.index_of(e)), term.coeff});
        }
        std::sort(row.begin(), row.end());
        sp_rows.push_back(std::move(row));
      }
    }
    // Sparse echelon of the ideal slice; pivots (leading monomials, i.e.
    // lowest column index = grevlex-largest) leave, the rest is the basis.
    // Each reduction step strictly increases the leading column, so the loop
    // terminates; the resulting pivot-column set and expansions are canonical
    // regardless of row order.
    std::vector<int64_t> pivot_row_of_col(n, -1);
    std::vector<SparseRow> echelon;
    for (SparseRow& row : sp_rows) {
      while (!row.empty()) {
        int64_t pr = pivot_row_of_col[row.front().first];
        if (pr < 0) break;
        row = sub_scaled(row, echelon[pr], row.front().second);
      }
      if (row.empty()) continue;
      uint32_t lead = row.front().first;
      uint32_t inv = fp_inv(row.front().second, p_);
      for (auto& e : row) e.second = fp_mul(e.second, inv, p_);
      pivot_row_of_col[lead] = static_cast<int64_t>(echelon.size());
      echelon.push_back(std::move(row));
    }
    // Back-substitute: fully reduce each pivot row against later pivots so a
    // pivot monomial expands purely into basis monomials.
    s.basis_pos.assign(n, -1);
    for (size_t idx = 0; idx < n; ++idx)
      if (pivot_row_of_col[idx] < 0) {
        s.basis_pos[idx] = static_cast<int32_t>(s.basis.size());
        s.basis.push_back(static_cast<uint32_t>(idx));
      }
    size_t bdim = s.basis.size();
    s.pivot_expansion.assign(n, {});
    // process pivot columns from the grevlex-smallest (largest index) upward
    for (size_t idx = n; idx-- > 0;) {
      int64_t pr = pivot_row_of_col[idx];
      if (pr < 0) continue;
      FpVec exp(bdim, 0);
      const auto& row = echelon[pr];
      for (size_t k = 1; k < row.size(); ++k) {  // row[0] is the pivot itself
        uint32_t col = row[k].first;
        uint32_t c = fp_neg(row[k].second, p_);
        if (s.basis_pos[col] >= 0) {
          exp[s.basis_pos[col]] = fp_add(exp[s.basis_pos[col]], c, p_);
        } else {
          const FpVec& sub = s.pivot_expansion[col];
          for (size_t i = 0; i < bdim; ++i)
            exp[i] = fp_add(exp[i], fp_mul(c, sub[i], p_), p_);
        }
      }
      s.pivot_expansion[idx] = std::move(exp);
    }
    slices_[t] = std::move(s);
  }

  using SparseRow = std::vector<std::pair<uint32_t, uint32_t>>;

  // a - f*b with b normalized to leading value 1; sorted-merge.
  SparseRow sub_scaled(const SparseRow& a, const SparseRow& b, uint32_t f) const {
    SparseRow out;
    out.reserve(a.size() + b.size());
    const uint64_t mf = p_ - f;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        uint32_t v = static_cast<uint32_t>(mf * b[j].second % p_);
        if (v) out.push_back({b[j].first, v});
        ++j;
      } else {
        uint32_t v = static_cast<uint32_t>((a[i].second + mf * b[j].second) % p_);
        if (v) out.push_back({a[i].first, v});
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::vector<DegreeSlice> slices_;
  std::vector<std::vector<FpMatrix>> var_action_;  // [var][t]: R_t -> R_{t+1}
  std::vector<int> deg1_vars_;

  void build_actions() {
    var_action_.assign(m_, std::vector<FpMatrix>(window_));
    parallel_for(static_cast<size_t>(m_) * window_, [&](size_t job) {
      int j = static_cast<int>(job / window_);
      int t = static_cast<int>(job % window_);
      const DegreeSlice& src = slices_[t];
      const DegreeSlice& dst = slices_[t + 1];
      FpMatrix mat(dim(t + 1), dim(t), p_);
      for (size_t c = 0; c < src.basis.size(); ++c) {
        Expo e = src.table.monos[src.basis[c]];
        e[j] = static_cast<uint16_t>(e[j] + 1);
        size_t idx = dst.table.index_of(e);
        if (dst.basis_pos[idx] >= 0) {
          mat.at(dst.basis_pos[idx], c) = 1;
        } else {
          const FpVec& red = dst.pivot_expansion[idx];
          for (size_t r = 0; r < red.size(); ++r) mat.at(r, c) = red[r];
        }
      }
      var_action_[j][t] = std::move(mat);
    });
  }

  uint32_t p_;
  int m_;
  int window_;
  std::vector<Polynomial> gens_;
};

// d degree-one forms certified as a homogeneous system of parameters: the
// quotient's Hilbert function reaches zero at t0 and stays zero through the
// window.
struct LinearFormSet {
  std::vector<FpVec> forms;  // d coefficient vectors over the basis of R_1
  uint64_t seed = 0;
  int t0 = 0;
  std::vector<size_t> quotient_dims;  // dim (R/(z))_t for t in [0, window]

  size_t total_quotient_length() const {
    size_t s = 0;
    for (size_t v : quotient_dims) s += v;
    return s;
  }
};

// Hilbert function of R/(span of the given forms), degree by degree.
inline std::vector<size_t> quotient_hilbert(const GradedAlgebra& alg,
                                            const std::vector<FpVec>& forms) {
  std::vector<size_t> dims(alg.window() + 1);
  dims[0] = alg.dim(0);
  parallel_for(static_cast<size_t>(alg.window()), [&](size_t idx) {
    int t = static_cast<int>(idx) + 1;
    FpMatrix stacked(alg.dim(t), 0, alg.modulus());
    for (const FpVec& f : forms) stacked = hstack(stacked, alg.linear_action(f, t - 1));
    dims[t] = alg.dim(t) - rank(stacked);
  });
  return dims;
}

// Random linear forms z_1..z_d forming a minimal reduction of the maximal
// ideal. The user-supplied d is cross-checked against the Hilbert-polynomial
// degree; up to 32 resampling attempts before giving up (small p may need
// several tries, some rings admit none over the prime field).
inline LinearFormSet noether_normalize(const GradedAlgebra& alg, int d, uint64_t seed) {
  if (d < 1) throw input_error("dimension must be >= 1");
  int hp_deg = alg.hilbert_poly_degree();
  if (hp_deg != d - 1)
    throw normalization_error("asserted dimension " + std::to_string(d) +
                              " contradicts Hilbert polynomial degree " + std::to_string(hp_deg) +
                              " (window " + std::to_string(alg.window()) + ")");
  size_t r1 = alg.dim(1);
  for (uint64_t attempt = 0; attempt < 32; ++attempt) {
    SeededRng rng(seed, "noether_normalize", attempt);
    std::vector<FpVec> forms(d, FpVec(r1, 0));
    for (int i = 0; i < d; ++i)
      for (size_t j = 0; j < r1; ++j) forms[i][j] = rng.below(alg.modulus());
    std::vector<size_t> qdims = quotient_hilbert(alg, forms);
    int t0 = -1;
    for (int t = alg.window(); t >= 0; --t) {
      if (qdims[t] != 0) break;
      t0 = t;
    }
    if (t0 >= 1) {
      LinearFormSet out;
      out.forms = std::move(forms);
      out.seed = seed;
      out.t0 = t0;
      out.quotient_dims = std::move(qdims);
      return out;
    }
  }
  throw normalization_error(
      "no system of parameters of linear forms found in 32 attempts (wrong dimension, window too "
      "small, or p too small)");
}

}  // namespace limulrich
