#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "limulrich/errors.hpp"

namespace limulrich {

// Scalars live in [0, p) for an odd prime p < 2^31. All arithmetic is done in
// 64-bit integers with a reduction after each multiply-accumulate chunk, so
// nothing can overflow.

inline bool is_prime_u32(uint32_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline void check_modulus(uint32_t p) {
  if (p < 3 || p % 2 == 0 || p >= (1u << 31) || !is_prime_u32(p))
    throw input_error("modulus must be an odd prime below 2^31, got " + std::to_string(p));
}

inline uint32_t fp_add(uint32_t a, uint32_t b, uint32_t p) {
  uint32_t s = a + b;
  return s >= p ? s - p : s;
}

inline uint32_t fp_sub(uint32_t a, uint32_t b, uint32_t p) { return a >= b ? a - b : a + p - b; }

inline uint32_t fp_neg(uint32_t a, uint32_t p) { return a == 0 ? 0 : p - a; }

inline uint32_t fp_mul(uint32_t a, uint32_t b, uint32_t p) {
  return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p);
}

inline uint32_t fp_pow(uint32_t a, uint64_t e, uint32_t p) {
  uint64_t r = 1, base = a % p;
  while (e) {
    if (e & 1) r = r * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<uint32_t>(r);
}

inline uint32_t fp_inv(uint32_t a, uint32_t p) {
  if (a == 0) throw input_error("division by zero mod " + std::to_string(p));
  return fp_pow(a, p - 2, p);
}

// Reduces an arbitrary signed integer into [0, p).
inline uint32_t fp_from_int(long long v, uint32_t p) {
  long long r = v % static_cast<long long>(p);
  if (r < 0) r += p;
  return static_cast<uint32_t>(r);
}

using FpVec = std::vector<uint32_t>;

// Dense row-major matrix over GF(p). Values are immutable in spirit: all the
// operations below build fresh matrices.
class FpMatrix {
 public:
  FpMatrix() : rows_(0), cols_(0), p_(3) {}
  FpMatrix(size_t rows, size_t cols, uint32_t p)
      : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {}

  static FpMatrix identity(size_t n, uint32_t p) {
    FpMatrix m(n, n, p);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  uint32_t modulus() const { return p_; }

  uint32_t& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
  uint32_t at(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  const uint32_t* row_ptr(size_t r) const { return data_.data() + r * cols_; }
  uint32_t* row_ptr(size_t r) { return data_.data() + r * cols_; }

  bool operator==(const FpMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && p_ == o.p_ && data_ == o.data_;
  }

  bool is_zero() const {
    for (uint32_t v : data_)
      if (v) return false;
    return true;
  }

 private:
  size_t rows_, cols_;
  uint32_t p_;
  std::vector<uint32_t> data_;
};

// Exact product. For p below 2^20 each product is under 2^40, so up to 2^24
// terms accumulate in a uint64 before a single reduction; larger p reduces
// every step.
inline FpMatrix compose(const FpMatrix& a, const FpMatrix& b) {
  if (a.cols() != b.rows())
    throw shape_error("compose: " + std::to_string(a.cols()) + " cols vs " +
                      std::to_string(b.rows()) + " rows");
  if (a.modulus() != b.modulus()) throw shape_error("compose: modulus mismatch");
  const uint32_t p = a.modulus();
  FpMatrix out(a.rows(), b.cols(), p);
  const bool small_p = p < (1u << 20) && a.cols() < (size_t(1) << 24);
  std::vector<uint64_t> scratch(b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    std::fill(scratch.begin(), scratch.end(), 0);
    for (size_t k = 0; k < a.cols(); ++k) {
      uint64_t aik = a.at(i, k);
      if (aik == 0) continue;
      const uint32_t* brow = b.row_ptr(k);
      uint64_t* s = scratch.data();
      if (small_p) {
        for (size_t j = 0; j < b.cols(); ++j) s[j] += aik * brow[j];
      } else {
        for (size_t j = 0; j < b.cols(); ++j) s[j] = (s[j] + aik * brow[j]) % p;
      }
    }
    uint32_t* orow = out.row_ptr(i);
    for (size_t j = 0; j < b.cols(); ++j) orow[j] = static_cast<uint32_t>(scratch[j] % p);
  }
  return out;
}

inline FpVec mat_vec(const FpMatrix& m, const FpVec& v) {
  if (v.size() != m.cols()) throw shape_error("mat_vec: size mismatch");
  const uint32_t p = m.modulus();
  const bool small_p = p < (1u << 20) && m.cols() < (size_t(1) << 24);
  FpVec out(m.rows(), 0);
  for (size_t i = 0; i < m.rows(); ++i) {
    uint64_t acc = 0;
    const uint32_t* row = m.row_ptr(i);
    for (size_t j = 0; j < m.cols(); ++j) {
      acc += static_cast<uint64_t>(row[j]) * v[j];
      if (!small_p) acc %= p;
    }
    out[i] = static_cast<uint32_t>(acc % p);
  }
  return out;
}

inline FpMatrix transpose(const FpMatrix& m) {
  FpMatrix out(m.cols(), m.rows(), m.modulus());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) out.at(j, i) = m.at(i, j);
  return out;
}

// [a | b] side by side.
inline FpMatrix hstack(const FpMatrix& a, const FpMatrix& b) {
  if (a.rows() != b.rows() || a.modulus() != b.modulus()) throw shape_error("hstack mismatch");
  FpMatrix out(a.rows(), a.cols() + b.cols(), a.modulus());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (size_t j = 0; j < b.cols(); ++j) out.at(i, a.cols() + j) = b.at(i, j);
  }
  return out;
}

inline FpMatrix vstack(const FpMatrix& a, const FpMatrix& b) {
  if (a.cols() != b.cols() || a.modulus() != b.modulus()) throw shape_error("vstack mismatch");
  FpMatrix out(a.rows() + b.rows(), a.cols(), a.modulus());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
  for (size_t i = 0; i < b.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out.at(a.rows() + i, j) = b.at(i, j);
  return out;
}

inline FpMatrix add(const FpMatrix& a, const FpMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.modulus() != b.modulus())
    throw shape_error("add mismatch");
  FpMatrix out(a.rows(), a.cols(), a.modulus());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out.at(i, j) = fp_add(a.at(i, j), b.at(i, j), a.modulus());
  return out;
}

inline FpMatrix scale(const FpMatrix& a, uint32_t c) {
  FpMatrix out(a.rows(), a.cols(), a.modulus());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out.at(i, j) = fp_mul(a.at(i, j), c, a.modulus());
  return out;
}

// Kronecker product, row-major index conventions: (i1*rows2+i2, j1*cols2+j2).
inline FpMatrix kron(const FpMatrix& a, const FpMatrix& b) {
  if (a.modulus() != b.modulus()) throw shape_error("kron modulus mismatch");
  FpMatrix out(a.rows() * b.rows(), a.cols() * b.cols(), a.modulus());
  for (size_t i1 = 0; i1 < a.rows(); ++i1)
    for (size_t j1 = 0; j1 < a.cols(); ++j1) {
      uint32_t v = a.at(i1, j1);
      if (!v) continue;
      for (size_t i2 = 0; i2 < b.rows(); ++i2)
        for (size_t j2 = 0; j2 < b.cols(); ++j2)
          out.at(i1 * b.rows() + i2, j1 * b.cols() + j2) = fp_mul(v, b.at(i2, j2), a.modulus());
    }
  return out;
}

namespace detail {

// Plain Gaussian elimination to reduced row echelon form, first-nonzero
// pivoting (leftmost unused column, topmost nonzero row). Returns pivot
// columns in order. Operates in place.
inline std::vector<size_t> rref_inplace(FpMatrix& m) {
  const uint32_t p = m.modulus();
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    size_t sel = row;
    while (sel < m.rows() && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (size_t j = col; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(row, j));
    uint32_t inv = fp_inv(m.at(row, col), p);
    if (inv != 1)
      for (size_t j = col; j < m.cols(); ++j) m.at(row, j) = fp_mul(m.at(row, j), inv, p);
    for (size_t i = 0; i < m.rows(); ++i) {
      if (i == row) continue;
      uint32_t f = m.at(i, col);
      if (!f) continue;
      uint32_t* ri = m.row_ptr(i);
      const uint32_t* rr = m.row_ptr(row);
      for (size_t j = col; j < m.cols(); ++j) {
        uint64_t v = static_cast<uint64_t>(ri[j]) + static_cast<uint64_t>(p - f) * rr[j];
        ri[j] = static_cast<uint32_t>(v % p);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

inline size_t rank(const FpMatrix& m) {
  FpMatrix work = m;
  return detail::rref_inplace(work).size();
}

// Columns form a basis of the right kernel; count = cols - rank.
inline FpMatrix kernel_basis(const FpMatrix& m) {
  FpMatrix work = m;
  std::vector<size_t> pivots = detail::rref_inplace(work);
  const uint32_t p = m.modulus();
  std::vector<char> is_pivot(m.cols(), 0);
  for (size_t c : pivots) is_pivot[c] = 1;
  std::vector<size_t> free_cols;
  for (size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  FpMatrix ker(m.cols(), free_cols.size(), p);
  for (size_t k = 0; k < free_cols.size(); ++k) {
    size_t fc = free_cols[k];
    ker.at(fc, k) = 1;
    for (size_t r = 0; r < pivots.size(); ++r) ker.at(pivots[r], k) = fp_neg(work.at(r, fc), p);
  }
  return ker;
}

// Any solution X of A X = B, or nullopt if inconsistent.
inline std::optional<FpMatrix> solve(const FpMatrix& a, const FpMatrix& b) {
  if (a.rows() != b.rows() || a.modulus() != b.modulus()) throw shape_error("solve mismatch");
  FpMatrix work = hstack(a, b);
  std::vector<size_t> pivots = detail::rref_inplace(work);
  // A pivot in the B block means inconsistency.
  for (size_t c : pivots)
    if (c >= a.cols()) return std::nullopt;
  FpMatrix x(a.cols(), b.cols(), a.modulus());
  for (size_t r = 0; r < pivots.size(); ++r)
    for (size_t j = 0; j < b.cols(); ++j) x.at(pivots[r], j) = work.at(r, a.cols() + j);
  return x;
}

// Surjection Q with kernel exactly the column space of B: rows span the
// orthogonal complement of col(B) under the standard dot product, which is
// nondegenerate over GF(p), so ker Q = col(B) by dimension count.
inline FpMatrix quotient_map(const FpMatrix& b) { return transpose(kernel_basis(transpose(b))); }

// Right inverse of a surjective map (Q S = I).
inline FpMatrix section_of(const FpMatrix& q) {
  auto s = solve(q, FpMatrix::identity(q.rows(), q.modulus()));
  if (!s) throw shape_error("section_of: map is not surjective");
  return *s;
}

}  // namespace limulrich
