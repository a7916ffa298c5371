#pragma once

#include <map>
#include <memory>
#include <vector>

#include "limulrich/koszul.hpp"
#include "limulrich/sliced_module.hpp"

namespace limulrich {

// R viewed as a module over A = k[z_1..z_d] via a certified system of linear
// forms: generators (lifted cokernel bases of (z)R), the monomial-to-slice
// maps Phi_t, and the relation generators found inside the window. Inside the
// window this presentation is exact: a relation generator of degree c only
// touches tensor slices >= c, so nothing above the window can contribute.
struct APresentation {
  std::shared_ptr<const GradedAlgebra> ring;
  std::vector<FpVec> z_forms;  // d coefficient vectors over R_1
  int window = 0;

  struct Generator {
    int degree;
    FpVec vec;  // element of R_degree
  };
  struct Relation {
    int degree;
    FpVec coords;  // element of (F_0)_degree in monomial coordinates
  };
  std::vector<Generator> gens;
  std::vector<Relation> relations;
  // phi[t]: ⊕_l A_{t-b_l} -> R_t in monomial coordinates; column layout is
  // generator-major, monomials of A in the fixed table order per generator.
  std::vector<FpMatrix> phi;
  std::vector<std::vector<MonoTable>> mono_tables;  // [t][l] tables of degree t-b_l

  int d() const { return static_cast<int>(z_forms.size()); }
  bool is_free() const { return relations.empty(); }

  size_t f0_dim(int t) const {
    size_t total = 0;
    for (const Generator& g : gens)
      if (t >= g.degree) total += static_cast<size_t>(binomial_ll(t - g.degree + d() - 1, d() - 1));
    return total;
  }
};

inline APresentation a_presentation(std::shared_ptr<const GradedAlgebra> ring,
                                    const LinearFormSet& forms, int window) {
  if (window > ring->window()) throw window_error("a_presentation window exceeds ring window");
  APresentation pres;
  pres.ring = ring;
  pres.z_forms = forms.forms;
  pres.window = window;
  const uint32_t p = ring->modulus();
  const int d = pres.d();
  // Generators: lift a basis of (R/(z)R)_t for each degree.
  for (int t = 0; t <= std::min(window, forms.t0); ++t) {
    FpMatrix img(ring->dim(t), 0, p);
    if (t >= 1)
      for (const FpVec& f : forms.forms) img = hstack(img, ring->linear_action(f, t - 1));
    FpMatrix q = quotient_map(img);
    if (q.rows() == 0) continue;
    FpMatrix sec = section_of(q);
    for (size_t c = 0; c < sec.cols(); ++c) {
      FpVec v(sec.rows());
      for (size_t r = 0; r < sec.rows(); ++r) v[r] = sec.at(r, c);
      pres.gens.push_back({t, std::move(v)});
    }
  }
  // Phi_t column by column; each monomial column comes from a shorter one by
  // one more z-action, so the whole family is built in one sweep (with the
  // per-degree action matrices hoisted out of the column loop).
  pres.phi.resize(window + 1);
  pres.mono_tables.resize(window + 1);
  for (int t = 0; t <= window; ++t) {
    pres.mono_tables[t].reserve(pres.gens.size());
    for (const auto& g : pres.gens)
      pres.mono_tables[t].push_back(t >= g.degree ? make_mono_table(d, t - g.degree)
                                                  : MonoTable{d, t - g.degree, {}});
    std::vector<FpMatrix> z_act(d);
    if (t >= 1)
      for (int j = 0; j < d; ++j) z_act[j] = ring->linear_action(forms.forms[j], t - 1);
    FpMatrix mat(ring->dim(t), pres.f0_dim(t), p);
    size_t col = 0;
    for (size_t l = 0; l < pres.gens.size(); ++l) {
      const auto& table = pres.mono_tables[t][l];
      for (size_t mi = 0; mi < table.size(); ++mi, ++col) {
        const Expo& mu = table.monos[mi];
        FpVec v;
        if (total_degree(mu) == 0) {
          v = pres.gens[l].vec;
        } else {
          int j = 0;
          while (mu[j] == 0) ++j;
          Expo smaller = mu;
          smaller[j] -= 1;
          size_t prev_col = 0;
          for (size_t l2 = 0; l2 < l; ++l2) prev_col += pres.mono_tables[t - 1][l2].size();
          prev_col += pres.mono_tables[t - 1][l].index_of(smaller);
          FpVec prev(pres.phi[t - 1].rows());
          for (size_t r = 0; r < prev.size(); ++r) prev[r] = pres.phi[t - 1].at(r, prev_col);
          v = mat_vec(z_act[j], prev);
        }
        for (size_t r = 0; r < v.size(); ++r) mat.at(r, col) = v[r];
      }
    }
    pres.phi[t] = std::move(mat);
  }
  // Relation generators: kernel columns of Phi_t not reached by z * (kernel
  // at t-1).
  std::vector<FpMatrix> kernels(window + 1);
  for (int t = 0; t <= window; ++t) kernels[t] = kernel_basis(pres.phi[t]);
  for (int t = 1; t <= window; ++t) {
    if (kernels[t].cols() == 0) continue;
    // shift map sigma_j: (l, mu) at t-1 -> (l, mu + e_j) at t
    FpMatrix reached(pres.f0_dim(t), 0, p);
    if (kernels[t - 1].cols() > 0) {
      for (int j = 0; j < d; ++j) {
        FpMatrix shifted(pres.f0_dim(t), kernels[t - 1].cols(), p);
        size_t src_off = 0;
        for (size_t l = 0; l < pres.gens.size(); ++l) {
          const auto& src_table = pres.mono_tables[t - 1][l];
          size_t dst_off = 0;
          for (size_t l2 = 0; l2 < l; ++l2) dst_off += pres.mono_tables[t][l2].size();
          for (size_t mi = 0; mi < src_table.size(); ++mi) {
            Expo bigger = src_table.monos[mi];
            bigger[j] += 1;
            size_t dst = dst_off + pres.mono_tables[t][l].index_of(bigger);
            for (size_t c = 0; c < kernels[t - 1].cols(); ++c)
              shifted.at(dst, c) = kernels[t - 1].at(src_off + mi, c);
          }
          src_off += src_table.size();
        }
        reached = hstack(reached, shifted);
      }
    }
    size_t base_rank = rank(reached);
    // grow with kernel columns that add rank
    FpMatrix work = reached;
    for (size_t c = 0; c < kernels[t].cols(); ++c) {
      FpMatrix cand(pres.f0_dim(t), 1, p);
      for (size_t r = 0; r < cand.rows(); ++r) cand.at(r, 0) = kernels[t].at(r, c);
      FpMatrix trial = hstack(work, cand);
      if (rank(trial) > base_rank) {
        base_rank += 1;
        work = std::move(trial);
        FpVec coords(pres.f0_dim(t));
        for (size_t r = 0; r < coords.size(); ++r) coords[r] = kernels[t].at(r, c);
        pres.relations.push_back({t, std::move(coords)});
      }
    }
  }
  return pres;
}

namespace detail {

// Action of the A-monomial mu on a module over A (the W side), computed by
// composing variable actions; memoized per (start slice, monomial).
struct MonoActionCache {
  const SlicedModule& w;
  std::map<std::pair<int, Expo>, FpMatrix> memo;

  explicit MonoActionCache(const SlicedModule& mod) : w(mod) {}

  const FpMatrix& get(int t, const Expo& mu) {
    auto key = std::make_pair(t, mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    FpMatrix result;
    int deg = total_degree(mu);
    if (deg == 0) {
      result = FpMatrix::identity(w.dim_at(t), w.modulus());
    } else {
      int j = 0;
      while (mu[j] == 0) ++j;
      Expo smaller = mu;
      smaller[j] -= 1;
      FpVec unit(w.num_gens(), 0);
      unit[j] = 1;
      result = compose(combo_action(w, unit, t + deg - 1), get(t, smaller));
    }
    return memo.emplace(std::move(key), std::move(result)).first->second;
  }
};

}  // namespace detail

// R tensor_A W realized over R: slice t is the cokernel of the relation
// images inside ⊕_l W_{t - b_l}, with the R_1 action induced by lifting
// x * g_l through Phi. Desk-scale dense realization.
inline SlicedModule tensor_over_A(const APresentation& pres, const SlicedModule& w, int window) {
  const uint32_t p = w.modulus();
  if (pres.d() != static_cast<int>(w.num_gens()))
    throw shape_error("tensor_over_A: form count != W generator count");
  for (const auto& rel : pres.relations)
    if (window - rel.degree > w.hi() - 0)
      throw window_error("tensor_over_A: W window too small for relations");
  if (window > pres.window) throw window_error("tensor_over_A: window exceeds presentation");
  const auto& R = *pres.ring;
  detail::MonoActionCache mono(w);

  auto sum_dims = [&](int t) {
    size_t total = 0;
    for (const auto& g : pres.gens) total += w.dim_at(t - g.degree);
    return total;
  };
  // quotient maps per slice
  std::vector<FpMatrix> qmap(window + 1), section(window + 1);
  SlicedModule out;
  out.base = pres.ring;
  out.lo = 0;
  out.dims.resize(window + 1);
  for (int t = 0; t <= window; ++t) {
    FpMatrix img(sum_dims(t), 0, p);
    for (const auto& rel : pres.relations) {
      int u = t - rel.degree;  // W-degree feeding this relation
      if (w.dim_at(u) == 0) continue;
      FpMatrix colblock(sum_dims(t), w.dim_at(u), p);
      size_t coord = 0;
      size_t row_off = 0;
      std::vector<size_t> row_offs;
      for (const auto& g : pres.gens) {
        row_offs.push_back(row_off);
        row_off += w.dim_at(t - g.degree);
      }
      for (size_t l = 0; l < pres.gens.size(); ++l) {
        const auto& table = pres.mono_tables[rel.degree][l];
        for (size_t mi = 0; mi < table.size(); ++mi, ++coord) {
          uint32_t cf = rel.coords[coord];
          if (!cf) continue;
          // z^mu * W_u lands in W_{u + deg mu} = W_{t - b_l}
          const FpMatrix& act = mono.get(u, table.monos[mi]);
          for (size_t r = 0; r < act.rows(); ++r)
            for (size_t c = 0; c < act.cols(); ++c) {
              uint32_t v = act.at(r, c);
              if (v)
                colblock.at(row_offs[l] + r, c) =
                    fp_add(colblock.at(row_offs[l] + r, c), fp_mul(cf, v, p), p);
            }
        }
      }
      img = hstack(img, colblock);
    }
    qmap[t] = quotient_map(img);
    section[t] = section_of(qmap[t]);
    out.dims[t] = qmap[t].rows();
  }
  // R_1-generator actions: x * (g_l ⊗ w) via an A-expansion of x * g_l.
  const auto& vars = R.degree_one_vars();
  out.actions.resize(vars.size());
  for (size_t gi = 0; gi < vars.size(); ++gi) {
    // expansion of x*g_l in F_0 coordinates (any lift works modulo relations)
    std::vector<FpVec> lifts;
    for (const auto& g : pres.gens) {
      FpVec xg = mat_vec(R.var_action(vars[gi], g.degree), g.vec);
      FpMatrix rhs(xg.size(), 1, p);
      for (size_t r = 0; r < xg.size(); ++r) rhs.at(r, 0) = xg[r];
      auto sol = solve(pres.phi[g.degree + 1], rhs);
      if (!sol) throw math_assert_error("Phi not surjective: presentation bug");
      FpVec lift(sol->rows());
      for (size_t r = 0; r < lift.size(); ++r) lift[r] = sol->at(r, 0);
      lifts.push_back(std::move(lift));
    }
    out.actions[gi].resize(window);
    for (int t = 0; t < window; ++t) {
      FpMatrix big(sum_dims(t + 1), sum_dims(t), p);
      std::vector<size_t> dst_offs, src_offs;
      {
        size_t off = 0;
        for (const auto& g : pres.gens) {
          dst_offs.push_back(off);
          off += w.dim_at(t + 1 - g.degree);
        }
        off = 0;
        for (const auto& g : pres.gens) {
          src_offs.push_back(off);
          off += w.dim_at(t - g.degree);
        }
      }
      for (size_t l = 0; l < pres.gens.size(); ++l) {
        int u = t - pres.gens[l].degree;
        if (w.dim_at(u) == 0) continue;
        // x*g_l = sum over (l2, mu) of lift-coeff * z^mu g_l2
        size_t coord = 0;
        for (size_t l2 = 0; l2 < pres.gens.size(); ++l2) {
          const auto& table = pres.mono_tables[pres.gens[l].degree + 1][l2];
          for (size_t mi = 0; mi < table.size(); ++mi, ++coord) {
            uint32_t cf = lifts[l][coord];
            if (!cf) continue;
            const FpMatrix& act = mono.get(u, table.monos[mi]);
            for (size_t r = 0; r < act.rows(); ++r)
              for (size_t c = 0; c < act.cols(); ++c) {
                uint32_t v = act.at(r, c);
                if (v)
                  big.at(dst_offs[l2] + r, src_offs[l] + c) =
                      fp_add(big.at(dst_offs[l2] + r, src_offs[l] + c), fp_mul(cf, v, p), p);
              }
          }
        }
      }
      out.actions[gi][t] = compose(qmap[t + 1], compose(big, section[t]));
    }
  }
  return out;
}

// Convenience overload: presentation computed on the fly.
inline SlicedModule tensor_over_A(std::shared_ptr<const GradedAlgebra> ring,
                                  const LinearFormSet& forms, const SlicedModule& w, int window) {
  return tensor_over_A(a_presentation(ring, forms, window), w, window);
}

// Degree-class selection followed by Frobenius pushforward: slice k holds
// M_{a + (jmin+k) q} and every degree-one generator acts through the q-fold
// composite of its action matrices (multiplication by x^q).
inline SlicedModule select_and_pushforward(const SlicedModule& m, long long a, long long q,
                                           int e) {
  const uint32_t p = m.modulus();
  if (e < 0) throw input_error("Frobenius exponent must be >= 0");
  long long expect = 1;
  for (int i = 0; i < e; ++i) {
    expect *= p;
    if (expect > (1LL << 40)) throw input_error("q = p^e too large");
  }
  if (q != expect) throw input_error("select_and_pushforward: q must equal p^e");
  long long jmin_deg = a;
  while (jmin_deg < m.lo) jmin_deg += q;
  if (jmin_deg > m.hi()) throw window_error("selection class misses the window");
  SlicedModule out;
  out.base = m.base;
  out.lo = 0;
  for (long long t = jmin_deg; t <= m.hi(); t += q) out.dims.push_back(m.dim_at(static_cast<int>(t)));
  if (out.dims.size() < 2) throw window_error("selection produces fewer than two slices");
  out.actions.resize(m.num_gens());
  for (size_t g = 0; g < m.num_gens(); ++g) {
    out.actions[g].resize(out.dims.size() - 1);
    for (size_t k = 0; k + 1 < out.dims.size(); ++k) {
      int t = static_cast<int>(jmin_deg + static_cast<long long>(k) * q);
      FpMatrix acc = m.gen_action(g, t);
      for (long long step = 1; step < q; ++step)
        acc = compose(m.gen_action(g, t + static_cast<int>(step)), acc);
      out.actions[g][k] = std::move(acc);
    }
  }
  return out;
}

}  // namespace limulrich
