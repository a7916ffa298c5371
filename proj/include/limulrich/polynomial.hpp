#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "limulrich/errors.hpp"
#include "limulrich/fp.hpp"

namespace limulrich {

using Expo = std::vector<uint16_t>;  // exponent vector, one slot per variable

inline int total_degree(const Expo& e) {
  int d = 0;
  for (uint16_t x : e) d += x;
  return d;
}

// Graded reverse-lexicographic: higher degree first; within a degree, a > b
// iff the last nonzero entry of a-b is negative.
inline bool grevlex_greater(const Expo& a, const Expo& b) {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  for (size_t i = a.size(); i-- > 0;) {
    int diff = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    if (diff != 0) return diff < 0;
  }
  return false;
}

// All monomials of total degree deg in m variables, grevlex-descending. This
// fixed order makes every basis choice downstream reproducible.
inline std::vector<Expo> monomials_of_degree(int m, int deg) {
  std::vector<Expo> out;
  Expo cur(m, 0);
  // enumerate compositions of deg into m parts
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == m - 1) {
      cur[pos] = static_cast<uint16_t>(rem);
      out.push_back(cur);
      return;
    }
    for (int v = rem; v >= 0; --v) {
      cur[pos] = static_cast<uint16_t>(v);
      self(self, pos + 1, rem - v);
    }
  };
  if (m == 0) {
    if (deg == 0) out.push_back({});
    return out;
  }
  rec(rec, 0, deg);
  std::sort(out.begin(), out.end(), grevlex_greater);
  return out;
}

// Sorted monomial list for one degree with exact index lookup.
struct MonoTable {
  int num_vars = 0;
  int degree = 0;
  std::vector<Expo> monos;  // grevlex-descending

  size_t size() const { return monos.size(); }

  // Index of a monomial; the table is sorted by grevlex_greater.
  size_t index_of(const Expo& e) const {
    auto it = std::lower_bound(monos.begin(), monos.end(), e, grevlex_greater);
    if (it == monos.end() || *it != e)
      throw index_error("monomial not found in degree-" + std::to_string(degree) + " table");
    return static_cast<size_t>(it - monos.begin());
  }
};

inline MonoTable make_mono_table(int m, int deg) {
  return MonoTable{m, deg, monomials_of_degree(m, deg)};
}

inline long long binomial_ll(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct Term {
  Expo exps;
  uint32_t coeff;  // in [1, p)
};

// Sparse multivariate polynomial over GF(p), canonical term order
// (grevlex-descending), no zero coefficients, no duplicate monomials.
struct Polynomial {
  int num_vars = 0;
  uint32_t p = 3;
  std::vector<Term> terms;

  bool is_zero() const { return terms.empty(); }

  int degree() const {
    int d = -1;
    for (const Term& t : terms) d = std::max(d, total_degree(t.exps));
    return d;
  }

  bool is_homogeneous() const {
    if (terms.empty()) return true;
    int d = total_degree(terms.front().exps);
    for (const Term& t : terms)
      if (total_degree(t.exps) != d) return false;
    return true;
  }
};

// Combines duplicates, drops zeros, sorts into the canonical order.
inline void canonicalize(Polynomial& f) {
  std::sort(f.terms.begin(), f.terms.end(),
            [](const Term& a, const Term& b) { return grevlex_greater(a.exps, b.exps); });
  std::vector<Term> out;
  for (Term& t : f.terms) {
    if (!out.empty() && out.back().exps == t.exps) {
      out.back().coeff = fp_add(out.back().coeff, t.coeff, f.p);
    } else {
      out.push_back(std::move(t));
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.coeff == 0; }),
            out.end());
  f.terms = std::move(out);
}

inline Polynomial poly_from_terms(int m, uint32_t p, std::vector<Term> terms) {
  Polynomial f{m, p, std::move(terms)};
  canonicalize(f);
  return f;
}

inline Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars != b.num_vars || a.p != b.p) throw shape_error("poly_mul mismatch");
  Polynomial out{a.num_vars, a.p, {}};
  for (const Term& s : a.terms)
    for (const Term& t : b.terms) {
      Expo e(a.num_vars);
      for (int i = 0; i < a.num_vars; ++i) e[i] = static_cast<uint16_t>(s.exps[i] + t.exps[i]);
      out.terms.push_back({std::move(e), fp_mul(s.coeff, t.coeff, a.p)});
    }
  canonicalize(out);
  return out;
}

// Extends a polynomial in m variables to m2 >= m variables.
inline Polynomial poly_extend(const Polynomial& f, int m2) {
  if (m2 < f.num_vars) throw shape_error("poly_extend shrinks");
  Polynomial out{m2, f.p, {}};
  for (const Term& t : f.terms) {
    Expo e(m2, 0);
    std::copy(t.exps.begin(), t.exps.end(), e.begin());
    out.terms.push_back({std::move(e), t.coeff});
  }
  canonicalize(out);
  return out;
}

inline std::string poly_to_string(const Polynomial& f) {
  if (f.terms.empty()) return "0";
  std::string out;
  for (size_t i = 0; i < f.terms.size(); ++i) {
    const Term& t = f.terms[i];
    if (i) out += " + ";
    std::string mono;
    for (int v = 0; v < f.num_vars; ++v) {
      if (!t.exps[v]) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(v);
      if (t.exps[v] > 1) mono += "^" + std::to_string(t.exps[v]);
    }
    if (mono.empty()) {
      out += std::to_string(t.coeff);
    } else if (t.coeff == 1) {
      out += mono;
    } else {
      out += std::to_string(t.coeff) + "*" + mono;
    }
  }
  return out;
}

}  // namespace limulrich
