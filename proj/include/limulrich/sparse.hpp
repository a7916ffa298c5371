#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "limulrich/fp.hpp"

namespace limulrich {

// Column-compressed sparse matrix over GF(p). The pushforward action matrices
// of the pipeline have a handful of entries per column (Frobenius-expanded
// shift stencils), which is what this engine is tuned for.
struct SpMat {
  size_t rows = 0, cols = 0;
  uint32_t p = 3;
  std::vector<uint64_t> col_ptr;  // size cols+1
  std::vector<uint32_t> row_idx;
  std::vector<uint32_t> vals;

  size_t nnz() const { return row_idx.size(); }
};

class SpBuilder {
 public:
  SpBuilder(size_t rows, size_t cols, uint32_t p) : rows_(rows), cols_(cols), p_(p) {}

  void add(uint32_t r, uint32_t c, uint32_t v) {
    if (v == 0) return;
    entries_.push_back({c, r, v});
  }

  SpMat build() {
    std::sort(entries_.begin(), entries_.end(), [](const E& a, const E& b) {
      return a.c != b.c ? a.c < b.c : a.r < b.r;
    });
    SpMat m;
    m.rows = rows_;
    m.cols = cols_;
    m.p = p_;
    m.col_ptr.assign(cols_ + 1, 0);
    m.row_idx.reserve(entries_.size());
    m.vals.reserve(entries_.size());
    size_t i = 0;
    for (size_t c = 0; c < cols_; ++c) {
      uint64_t col_start = m.row_idx.size();
      while (i < entries_.size() && entries_[i].c == c) {
        if (m.row_idx.size() > col_start && m.row_idx.back() == entries_[i].r) {
          m.vals.back() = fp_add(m.vals.back(), entries_[i].v, p_);  // accumulate duplicates
        } else {
          m.row_idx.push_back(entries_[i].r);
          m.vals.push_back(entries_[i].v);
        }
        ++i;
      }
      // drop entries that cancelled to zero
      uint64_t w = col_start;
      for (uint64_t k = col_start; k < m.row_idx.size(); ++k)
        if (m.vals[k]) {
          m.row_idx[w] = m.row_idx[k];
          m.vals[w] = m.vals[k];
          ++w;
        }
      m.row_idx.resize(w);
      m.vals.resize(w);
      m.col_ptr[c + 1] = w;
    }
    return m;
  }

 private:
  struct E {
    uint32_t c, r, v;
  };
  size_t rows_, cols_;
  uint32_t p_;
  std::vector<E> entries_;
};

inline SpMat sparse_from_dense(const FpMatrix& m) {
  SpBuilder b(m.rows(), m.cols(), m.modulus());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      if (m.at(i, j)) b.add(static_cast<uint32_t>(i), static_cast<uint32_t>(j), m.at(i, j));
  return b.build();
}

inline FpMatrix sparse_to_dense(const SpMat& m) {
  FpMatrix out(m.rows, m.cols, m.p);
  for (size_t c = 0; c < m.cols; ++c)
    for (uint64_t k = m.col_ptr[c]; k < m.col_ptr[c + 1]; ++k) out.at(m.row_idx[k], c) = m.vals[k];
  return out;
}

inline SpMat sparse_transpose(const SpMat& m) {
  SpBuilder b(m.cols, m.rows, m.p);
  for (size_t c = 0; c < m.cols; ++c)
    for (uint64_t k = m.col_ptr[c]; k < m.col_ptr[c + 1]; ++k)
      b.add(static_cast<uint32_t>(c), m.row_idx[k], m.vals[k]);
  return b.build();
}

// out += M * v (dense vector), exact.
inline void sparse_apply_acc(const SpMat& m, const uint32_t* v, uint32_t* out) {
  for (size_t c = 0; c < m.cols; ++c) {
    uint64_t x = v[c];
    if (!x) continue;
    for (uint64_t k = m.col_ptr[c]; k < m.col_ptr[c + 1]; ++k) {
      uint64_t t = out[m.row_idx[k]] + x * m.vals[k];
      out[m.row_idx[k]] = static_cast<uint32_t>(t % m.p);
    }
  }
}

// Sparse product A*B; columns of the result stay sparse as long as the
// factors do (shift stencils compose into shift stencils).
inline SpMat sp_compose(const SpMat& a, const SpMat& b) {
  if (a.cols != b.rows) throw shape_error("sp_compose mismatch");
  SpBuilder out(a.rows, b.cols, a.p);
  for (size_t j = 0; j < b.cols; ++j)
    for (uint64_t kb = b.col_ptr[j]; kb < b.col_ptr[j + 1]; ++kb) {
      uint32_t mid = b.row_idx[kb];
      uint64_t vb = b.vals[kb];
      for (uint64_t ka = a.col_ptr[mid]; ka < a.col_ptr[mid + 1]; ++ka)
        out.add(a.row_idx[ka], static_cast<uint32_t>(j),
                static_cast<uint32_t>(vb * a.vals[ka] % a.p));
    }
  return out.build();
}

// Scaled accumulation helper for assembling block matrices.
inline void sp_add_block(SpBuilder& b, const SpMat& m, size_t row_off, size_t col_off,
                         uint32_t scale) {
  if (!scale) return;
  for (size_t c = 0; c < m.cols; ++c)
    for (uint64_t k = m.col_ptr[c]; k < m.col_ptr[c + 1]; ++k)
      b.add(static_cast<uint32_t>(row_off + m.row_idx[k]), static_cast<uint32_t>(col_off + c),
            static_cast<uint32_t>(static_cast<uint64_t>(scale) * m.vals[k] % m.p));
}

// Dense row-block times sparse: out(r x cols) = P(r x rows) * M.
inline FpMatrix rowblock_times_sparse(const FpMatrix& pblock, const SpMat& m) {
  if (pblock.cols() != m.rows) throw shape_error("rowblock_times_sparse mismatch");
  FpMatrix out(pblock.rows(), m.cols, m.p);
  const uint32_t p = m.p;
  for (size_t c = 0; c < m.cols; ++c) {
    for (uint64_t k = m.col_ptr[c]; k < m.col_ptr[c + 1]; ++k) {
      const uint64_t v = m.vals[k];
      const size_t src = m.row_idx[k];
      for (size_t i = 0; i < pblock.rows(); ++i) {
        uint64_t t = out.at(i, c) + v * pblock.at(i, src);
        out.at(i, c) = static_cast<uint32_t>(t % p);
      }
    }
  }
  return out;
}

namespace detail {

struct SparseElim {
  // Right-looking elimination with min-column-count pivoting (Markowitz-lite,
  // lowest index tie-break, fully deterministic). Keeps the frozen pivot rows
  // so kernels can be back-substituted afterwards.
  using Row = std::vector<std::pair<uint32_t, uint32_t>>;  // (col, val), sorted

  uint32_t p;
  size_t nrows, ncols;
  std::vector<Row> row;
  std::vector<uint8_t> row_active, col_active;
  std::vector<uint32_t> col_count;
  std::vector<std::vector<uint32_t>> col_rows;  // lazy membership
  std::vector<std::vector<uint32_t>> buckets;   // by col count, lazy
  size_t min_bucket = 1;
  std::vector<std::pair<uint32_t, uint32_t>> pivot_order;  // (row, col) in elimination order
  size_t rank = 0;

  explicit SparseElim(const SpMat& m) : p(m.p), nrows(m.rows), ncols(m.cols) {
    row.assign(nrows, {});
    std::vector<uint32_t> per_row(nrows, 0);
    for (size_t c = 0; c < m.cols; ++c)
      for (uint64_t k = m.col_ptr[c]; k < m.col_ptr[c + 1]; ++k) per_row[m.row_idx[k]]++;
    for (size_t r = 0; r < nrows; ++r) row[r].reserve(per_row[r]);
    for (size_t c = 0; c < m.cols; ++c)
      for (uint64_t k = m.col_ptr[c]; k < m.col_ptr[c + 1]; ++k)
        row[m.row_idx[k]].push_back({static_cast<uint32_t>(c), m.vals[k]});
    for (auto& r : row) std::sort(r.begin(), r.end());
    row_active.assign(nrows, 1);
    col_active.assign(ncols, 1);
    col_count.assign(ncols, 0);
    col_rows.assign(ncols, {});
    for (size_t r = 0; r < nrows; ++r)
      for (auto& e : row[r]) {
        col_count[e.first]++;
        col_rows[e.first].push_back(static_cast<uint32_t>(r));
      }
    size_t maxc = 0;
    for (size_t c = 0; c < ncols; ++c) maxc = std::max<size_t>(maxc, col_count[c]);
    buckets.assign(maxc + 2, {});
    for (size_t c = 0; c < ncols; ++c)
      if (col_count[c]) buckets[col_count[c]].push_back(static_cast<uint32_t>(c));
  }

  void bucket_push(uint32_t c) {
    uint32_t cnt = col_count[c];
    if (cnt == 0) return;
    if (cnt >= buckets.size()) buckets.resize(cnt + 1);
    buckets[cnt].push_back(c);
    if (cnt < min_bucket) min_bucket = cnt;
  }

  // Next pivot column: smallest active count, lazy bucket validation.
  int64_t pop_pivot_col() {
    for (size_t b = min_bucket; b < buckets.size(); ++b) {
      auto& vec = buckets[b];
      while (!vec.empty()) {
        uint32_t c = vec.back();
        if (col_active[c] && col_count[c] == b) {
          min_bucket = b;
          return c;
        }
        vec.pop_back();
      }
    }
    return -1;
  }

  bool row_has(uint32_t r, uint32_t c, uint32_t* val) const {
    const Row& rw = row[r];
    auto it = std::lower_bound(rw.begin(), rw.end(), std::make_pair(c, 0u));
    if (it != rw.end() && it->first == c) {
      *val = it->second;
      return true;
    }
    return false;
  }

  void detach_row(uint32_t r) {
    for (auto& e : row[r])
      if (col_active[e.first]) {
        col_count[e.first]--;
        bucket_push(e.first);
      }
  }

  // row[ri] -= f/pv * pivot_row; maintains col_count/col_rows for ri.
  void eliminate_into(uint32_t ri, const Row& prow, uint32_t factor) {
    Row merged;
    merged.reserve(row[ri].size() + prow.size());
    const Row& a = row[ri];
    size_t i = 0, j = 0;
    const uint64_t mf = p - factor;  // we add mf * prow
    while (i < a.size() || j < prow.size()) {
      if (j == prow.size() || (i < a.size() && a[i].first < prow[j].first)) {
        merged.push_back(a[i++]);
      } else if (i == a.size() || prow[j].first < a[i].first) {
        uint32_t c = prow[j].first;
        uint32_t v = static_cast<uint32_t>(mf * prow[j].second % p);
        ++j;
        if (v && col_active[c]) {
          merged.push_back({c, v});
          col_count[c]++;
          col_rows[c].push_back(ri);
          bucket_push(c);
        } else if (v) {
          merged.push_back({c, v});
        }
      } else {
        uint32_t c = a[i].first;
        uint32_t v = static_cast<uint32_t>((a[i].second + mf * prow[j].second) % p);
        ++i;
        ++j;
        if (v) {
          merged.push_back({c, v});
        } else if (col_active[c]) {
          col_count[c]--;
          bucket_push(c);
        }
      }
    }
    row[ri] = std::move(merged);
  }

  // Runs elimination. If stop_when_dense is set and the live region becomes
  // dense enough that a dense finish is cheaper, stops early and reports the
  // live rows/cols instead (caller finishes densely; pivot rows for kernel
  // extraction are then unavailable, so kernel callers pass false).
  struct DenseRest {
    std::vector<uint32_t> live_rows, live_cols;
  };

  std::optional<DenseRest> run(bool allow_dense_finish) {
    size_t steps = 0;
    for (;;) {
      int64_t pc = pop_pivot_col();
      if (pc < 0) return std::nullopt;
      uint32_t c = static_cast<uint32_t>(pc);
      // pick the sparsest valid row in this column
      uint32_t best_row = 0, best_val = 0;
      size_t best_sz = SIZE_MAX;
      auto& cand = col_rows[c];
      size_t w = 0;
      for (size_t k = 0; k < cand.size(); ++k) {
        uint32_t r = cand[k];
        uint32_t v;
        if (!row_active[r] || !row_has(r, c, &v)) continue;
        cand[w++] = r;
        if (row[r].size() < best_sz || (row[r].size() == best_sz && r < best_row)) {
          best_sz = row[r].size();
          best_row = r;
          best_val = v;
        }
      }
      cand.resize(w);
      if (w == 0) {
        col_count[c] = 0;
        continue;
      }
      // eliminate c from every other active row
      uint32_t pinv = fp_inv(best_val, p);
      Row prow = row[best_row];
      for (auto& e : prow) e.second = fp_mul(e.second, pinv, p);
      row_active[best_row] = 0;
      detach_row(best_row);
      // keep the normalized frozen pivot row for kernel back-substitution
      row[best_row] = prow;
      for (uint32_t r : cand) {
        if (!row_active[r]) continue;
        uint32_t f;
        if (!row_has(r, c, &f)) continue;
        eliminate_into(r, prow, f);
      }
      col_active[c] = 0;
      col_count[c] = 0;
      pivot_order.push_back({best_row, c});
      ++rank;
      ++steps;

      if (allow_dense_finish && (steps & 255) == 0) {
        // live nnz and live dims
        uint64_t live_nnz = 0;
        uint64_t live_rows = 0;
        for (size_t r = 0; r < nrows; ++r)
          if (row_active[r]) {
            ++live_rows;
            live_nnz += row[r].size();
          }
        uint64_t live_cols = 0;
        for (size_t cc = 0; cc < ncols; ++cc)
          if (col_active[cc] && col_count[cc]) ++live_cols;
        if (live_rows && live_cols) {
          double density = double(live_nnz) / (double(live_rows) * double(live_cols));
          uint64_t cells = live_rows * live_cols;
          if (p < (1u << 15) && density > 0.04 && cells < (uint64_t(1) << 31) &&
              cells * 2 < (uint64_t(3) << 30)) {
            DenseRest rest;
            for (size_t r = 0; r < nrows; ++r)
              if (row_active[r] && !row[r].empty()) rest.live_rows.push_back(r);
            std::vector<uint8_t> colmark(ncols, 0);
            for (uint32_t r : rest.live_rows)
              for (auto& e : row[r])
                if (col_active[e.first]) colmark[e.first] = 1;
            for (size_t cc = 0; cc < ncols; ++cc)
              if (colmark[cc]) rest.live_cols.push_back(cc);
            if (!rest.live_rows.empty() && !rest.live_cols.empty()) return rest;
          }
        }
      }
    }
  }
};

// Forward elimination rank of a uint16 dense block, delayed-reduction inner
// loop (p < 2^15 so a + (p-f)*b fits in uint32).
inline size_t dense_rank_u16(std::vector<uint16_t>& a, size_t rows, size_t cols, uint32_t p) {
  size_t rank = 0;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && a[sel * cols + c] == 0) ++sel;
    if (sel == rows) continue;
    if (sel != r)
      for (size_t j = c; j < cols; ++j) std::swap(a[sel * cols + j], a[r * cols + j]);
    uint32_t inv = fp_inv(a[r * cols + c], p);
    for (size_t i = r + 1; i < rows; ++i) {
      uint32_t f = a[i * cols + c];
      if (!f) continue;
      uint32_t mf = static_cast<uint32_t>((uint64_t(p - f) * inv) % p);
      const uint16_t* src = &a[r * cols];
      uint16_t* dst = &a[i * cols];
      for (size_t j = c; j < cols; ++j) {
        uint32_t t = dst[j] + mf * src[j];
        dst[j] = static_cast<uint16_t>(t % p);
      }
    }
    ++r;
    ++rank;
  }
  return rank;
}

}  // namespace detail

inline size_t sparse_rank(const SpMat& m) {
  if (m.nnz() == 0) return 0;
  detail::SparseElim elim(m);
  auto rest = elim.run(/*allow_dense_finish=*/true);
  size_t rank = elim.rank;
  if (rest) {
    const auto& lr = rest->live_rows;
    const auto& lc = rest->live_cols;
    std::vector<uint32_t> colpos(m.cols, UINT32_MAX);
    for (size_t j = 0; j < lc.size(); ++j) colpos[lc[j]] = static_cast<uint32_t>(j);
    std::vector<uint16_t> dense(lr.size() * lc.size(), 0);
    for (size_t i = 0; i < lr.size(); ++i)
      for (auto& e : elim.row[lr[i]]) {
        uint32_t cp = colpos[e.first];
        if (cp != UINT32_MAX) dense[i * lc.size() + cp] = static_cast<uint16_t>(e.second);
      }
    rank += detail::dense_rank_u16(dense, lr.size(), lc.size(), m.p);
  }
  return rank;
}

// Right kernel basis as dense columns (nullity = cols - rank). Pure sparse
// elimination (no dense finish) so the frozen pivot rows stay available.
inline FpMatrix sparse_kernel_basis(const SpMat& m) {
  detail::SparseElim elim(m);
  elim.run(/*allow_dense_finish=*/false);
  const uint32_t p = m.p;
  std::vector<uint8_t> is_pivot_col(m.cols, 0);
  for (auto& pr : elim.pivot_order) is_pivot_col[pr.second] = 1;
  std::vector<uint32_t> free_cols;
  for (size_t c = 0; c < m.cols; ++c)
    if (!is_pivot_col[c]) free_cols.push_back(static_cast<uint32_t>(c));
  FpMatrix ker(m.cols, free_cols.size(), p);
  std::vector<uint32_t> x(m.cols);
  for (size_t k = 0; k < free_cols.size(); ++k) {
    std::fill(x.begin(), x.end(), 0);
    x[free_cols[k]] = 1;
    // pivot rows are normalized (pivot value 1); solve in reverse order
    for (size_t s = elim.pivot_order.size(); s-- > 0;) {
      auto [r, c] = elim.pivot_order[s];
      uint64_t acc = 0;
      for (auto& e : elim.row[r]) {
        if (e.first == c) continue;
        acc += static_cast<uint64_t>(e.second) * x[e.first];
      }
      x[c] = fp_neg(static_cast<uint32_t>(acc % p), p);
    }
    for (size_t c = 0; c < m.cols; ++c) ker.at(c, k) = x[c];
  }
  return ker;
}

// Quotient map of the column space: rows span the left kernel.
inline FpMatrix sparse_quotient_map(const SpMat& m) {
  return transpose(sparse_kernel_basis(sparse_transpose(m)));
}

}  // namespace limulrich
