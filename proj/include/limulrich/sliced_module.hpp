#pragma once

#include <memory>
#include <vector>

#include "limulrich/graded_algebra.hpp"

namespace limulrich {

// A finitely generated graded module realized as a window of slices with one
// action matrix per degree-one generator of the base algebra. Slices below
// lo are zero by contract; slices above the window are unknown (truncation),
// which is what tail certification guards.
struct SlicedModule {
  std::shared_ptr<const GradedAlgebra> base;
  int lo = 0;
  std::vector<size_t> dims;  // dims[k] = dim of slice lo+k
  // actions[g][k]: slice lo+k -> slice lo+k+1; g runs over the degree-one
  // basis generators of the base. actions[g].size() == dims.size()-1.
  std::vector<std::vector<FpMatrix>> actions;

  int hi() const { return lo + static_cast<int>(dims.size()) - 1; }
  size_t num_gens() const { return actions.size(); }
  uint32_t modulus() const { return base->modulus(); }

  size_t dim_at(int t) const {
    if (t < lo || t > hi()) return 0;
    return dims[t - lo];
  }

  // Action of generator g from slice t; empty-shaped matrix outside range.
  FpMatrix gen_action(size_t g, int t) const {
    if (t >= lo && t + 1 <= hi()) return actions[g][t - lo];
    return FpMatrix(dim_at(t + 1), dim_at(t), modulus());
  }

  void validate() const {
    if (dims.empty()) throw input_error("module needs at least one slice");
    for (const auto& per_gen : actions) {
      if (per_gen.size() + 1 != dims.size()) throw shape_error("action count != slices-1");
      for (size_t k = 0; k + 1 < dims.size(); ++k)
        if (per_gen[k].rows() != dims[k + 1] || per_gen[k].cols() != dims[k])
          throw shape_error("action matrix shape mismatch");
    }
  }
};

// Multiplication by sum_g coeffs[g] * (generator g): slice t -> t+1.
inline FpMatrix combo_action(const SlicedModule& m, const FpVec& coeffs, int t) {
  if (coeffs.size() != m.num_gens()) throw shape_error("combo_action: wrong coefficient count");
  const uint32_t p = m.modulus();
  FpMatrix out(m.dim_at(t + 1), m.dim_at(t), p);
  for (size_t g = 0; g < coeffs.size(); ++g) {
    if (!coeffs[g]) continue;
    FpMatrix a = m.gen_action(g, t);
    for (size_t r = 0; r < out.rows(); ++r)
      for (size_t c = 0; c < out.cols(); ++c)
        out.at(r, c) = fp_add(out.at(r, c), fp_mul(coeffs[g], a.at(r, c), p), p);
  }
  return out;
}

// A homogeneous element of the base presented as a product of powers of
// degree-one forms. Powers are realized by repeated composition, so all
// factor actions must stay inside the window when applied.
struct FormSpec {
  struct Factor {
    FpVec coeffs;
    int power = 1;
  };
  std::vector<Factor> factors;

  int degree() const {
    int d = 0;
    for (const Factor& f : factors) d += f.power;
    return d;
  }

  static FormSpec linear(FpVec coeffs) { return FormSpec{{Factor{std::move(coeffs), 1}}}; }

  static FormSpec product(const FormSpec& a, const FormSpec& b) {
    FormSpec out = a;
    out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
    return out;
  }

  static FormSpec power(const FormSpec& f, int n) {
    if (n < 1) throw input_error("form power must be >= 1");
    FormSpec out;
    for (const auto& fac : f.factors) out.factors.push_back({fac.coeffs, fac.power * n});
    return out;
  }
};

// Matrix of a form acting from slice t (degree t -> t + deg). The composite
// walks through intermediate slices, so t + deg must not exceed the window.
inline FpMatrix form_action(const SlicedModule& m, const FormSpec& f, int t) {
  int cur = t;
  FpMatrix acc;  // empty means identity-so-far
  bool started = false;
  for (const auto& fac : f.factors) {
    for (int rep = 0; rep < fac.power; ++rep) {
      FpMatrix step = combo_action(m, fac.coeffs, cur);
      acc = started ? compose(step, acc) : std::move(step);
      started = true;
      ++cur;
    }
  }
  if (!started) return FpMatrix::identity(m.dim_at(t), m.modulus());
  return acc;
}

// --- stock modules -------------------------------------------------------

// The algebra itself, slices [0, hi].
inline SlicedModule algebra_module(std::shared_ptr<const GradedAlgebra> alg, int hi) {
  if (hi < 1 || hi > alg->window()) throw window_error("algebra_module window");
  SlicedModule m;
  m.base = alg;
  m.lo = 0;
  m.dims.resize(hi + 1);
  for (int t = 0; t <= hi; ++t) m.dims[t] = alg->dim(t);
  const auto& vars = alg->degree_one_vars();
  m.actions.resize(vars.size());
  for (size_t g = 0; g < vars.size(); ++g) {
    m.actions[g].resize(hi);
    for (int t = 0; t < hi; ++t) m.actions[g][t] = alg->var_action(vars[g], t);
  }
  return m;
}

// Free module ⊕_i R(-shift_i), slices [0, hi].
inline SlicedModule free_module(std::shared_ptr<const GradedAlgebra> alg,
                                const std::vector<int>& shifts, int hi) {
  if (hi < 1 || hi > alg->window()) throw window_error("free_module window");
  for (int s : shifts)
    if (s < 0) throw input_error("free_module shifts must be non-negative");
  SlicedModule m;
  m.base = alg;
  m.lo = 0;
  m.dims.resize(hi + 1);
  auto block_dims = [&](int t) {
    std::vector<size_t> out;
    for (int s : shifts) out.push_back(t - s >= 0 ? alg->dim(t - s) : 0);
    return out;
  };
  for (int t = 0; t <= hi; ++t) {
    size_t total = 0;
    for (size_t b : block_dims(t)) total += b;
    m.dims[t] = total;
  }
  const auto& vars = alg->degree_one_vars();
  m.actions.resize(vars.size());
  for (size_t g = 0; g < vars.size(); ++g) {
    m.actions[g].resize(hi);
    for (int t = 0; t < hi; ++t) {
      FpMatrix mat(m.dims[t + 1], m.dims[t], alg->modulus());
      size_t roff = 0, coff = 0;
      for (size_t i = 0; i < shifts.size(); ++i) {
        int u = t - shifts[i];
        size_t bc = u >= 0 ? alg->dim(u) : 0;
        size_t br = u + 1 >= 0 ? alg->dim(u + 1) : 0;
        if (bc && br) {
          const FpMatrix& a = alg->var_action(vars[g], u);
          for (size_t r = 0; r < br; ++r)
            for (size_t c = 0; c < bc; ++c) mat.at(roff + r, coff + c) = a.at(r, c);
        }
        roff += br;
        coff += bc;
      }
      m.actions[g][t] = std::move(mat);
    }
  }
  return m;
}

// The residue field k: one-dimensional slice at degree 0, genuinely zero
// above. The zero tail is long enough for the top Koszul homology (living in
// slice-degree = number of generators) to certify.
inline SlicedModule residue_field_module(std::shared_ptr<const GradedAlgebra> alg) {
  SlicedModule m;
  m.base = alg;
  m.lo = 0;
  size_t g = alg->dim(1);
  m.dims.assign(g + 4, 0);
  m.dims[0] = 1;
  m.actions.assign(g, std::vector<FpMatrix>(m.dims.size() - 1));
  for (size_t j = 0; j < g; ++j) {
    m.actions[j][0] = FpMatrix(0, 1, alg->modulus());
    for (size_t k = 1; k + 1 < m.dims.size(); ++k)
      m.actions[j][k] = FpMatrix(0, 0, alg->modulus());
  }
  return m;
}

// Direct sum; windows must agree (callers build summands on a common window).
inline SlicedModule direct_sum(const SlicedModule& a, const SlicedModule& b) {
  if (a.base != b.base || a.lo != b.lo || a.dims.size() != b.dims.size())
    throw shape_error("direct_sum: windows or bases differ");
  SlicedModule m;
  m.base = a.base;
  m.lo = a.lo;
  m.dims.resize(a.dims.size());
  for (size_t k = 0; k < a.dims.size(); ++k) m.dims[k] = a.dims[k] + b.dims[k];
  m.actions.resize(a.num_gens());
  for (size_t g = 0; g < a.num_gens(); ++g) {
    m.actions[g].resize(m.dims.size() - 1);
    for (size_t k = 0; k + 1 < m.dims.size(); ++k) {
      FpMatrix mat(m.dims[k + 1], m.dims[k], a.modulus());
      const FpMatrix& am = a.actions[g][k];
      const FpMatrix& bm = b.actions[g][k];
      for (size_t r = 0; r < am.rows(); ++r)
        for (size_t c = 0; c < am.cols(); ++c) mat.at(r, c) = am.at(r, c);
      for (size_t r = 0; r < bm.rows(); ++r)
        for (size_t c = 0; c < bm.cols(); ++c)
          mat.at(am.rows() + r, am.cols() + c) = bm.at(r, c);
      m.actions[g][k] = std::move(mat);
    }
  }
  return m;
}

// Quotient M/fM realized slicewise with induced generator actions.
inline SlicedModule quotient_module(const SlicedModule& m, const FormSpec& f) {
  const int a = f.degree();
  const uint32_t p = m.modulus();
  SlicedModule q;
  q.base = m.base;
  q.lo = m.lo;
  int n = static_cast<int>(m.dims.size());
  std::vector<FpMatrix> qmap(n), section(n);
  q.dims.resize(n);
  for (int k = 0; k < n; ++k) {
    int t = m.lo + k;
    FpMatrix img = (t - a >= m.lo) ? form_action(m, f, t - a)
                                   : FpMatrix(m.dim_at(t), 0, p);
    qmap[k] = quotient_map(img);
    section[k] = section_of(qmap[k]);
    q.dims[k] = qmap[k].rows();
  }
  q.actions.resize(m.num_gens());
  for (size_t g = 0; g < m.num_gens(); ++g) {
    q.actions[g].resize(n - 1);
    for (int k = 0; k + 1 < n; ++k)
      q.actions[g][k] = compose(qmap[k + 1], compose(m.gen_action(g, m.lo + k), section[k]));
  }
  return q;
}

}  // namespace limulrich
