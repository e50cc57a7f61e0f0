#pragma once

#include <cstdint>
#include <cstring>
#include <vector>

#include "ggt/common.hpp"

namespace ggt {

inline std::uint8_t fp_inverse(int v, int p) {
  // p <= 97, so a scan is fine.
  v %= p;
  if (v < 0) v += p;
  if (v == 0) throw computation_error("inverse of zero");
  for (int x = 1; x < p; ++x)
    if (x * v % p == 1) return static_cast<std::uint8_t>(x);
  throw computation_error("no inverse: modulus not prime");
}

/// Dense row-major matrix over F_p (p prime, p < 256). Entries live in [0, p).
struct Mat {
  int rows = 0;
  int cols = 0;
  int p = 2;
  std::vector<std::uint8_t> a;

  Mat() = default;
  Mat(int r, int c, int prime) : rows(r), cols(c), p(prime), a(static_cast<std::size_t>(r) * c, 0) {}

  std::uint8_t& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  std::uint8_t at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
  const std::uint8_t* row_ptr(int r) const { return a.data() + static_cast<std::size_t>(r) * cols; }
  std::uint8_t* row_ptr(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }

  static Mat identity(int n, int p) {
    Mat m(n, n, p);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool is_identity() const {
    if (rows != cols) return false;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

  bool operator==(const Mat& o) const {
    return rows == o.rows && cols == o.cols && p == o.p && a == o.a;
  }

  Mat operator*(const Mat& o) const {
    if (cols != o.rows || p != o.p) throw computation_error("matrix shape mismatch");
    Mat r(rows, o.cols, p);
    for (int i = 0; i < rows; ++i) {
      for (int k = 0; k < cols; ++k) {
        int v = at(i, k);
        if (!v) continue;
        const std::uint8_t* src = o.row_ptr(k);
        std::uint8_t* dst = r.row_ptr(i);
        for (int j = 0; j < o.cols; ++j) dst[j] = static_cast<std::uint8_t>((dst[j] + v * src[j]) % p);
      }
    }
    return r;
  }

  Mat operator+(const Mat& o) const {
    if (rows != o.rows || cols != o.cols || p != o.p) throw computation_error("matrix shape mismatch");
    Mat r(rows, cols, p);
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = static_cast<std::uint8_t>((a[i] + o.a[i]) % p);
    return r;
  }

  Mat operator-(const Mat& o) const {
    if (rows != o.rows || cols != o.cols || p != o.p) throw computation_error("matrix shape mismatch");
    Mat r(rows, cols, p);
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = static_cast<std::uint8_t>((a[i] + p - o.a[i]) % p);
    return r;
  }

  Mat scaled(int c) const {
    c %= p;
    if (c < 0) c += p;
    Mat r(rows, cols, p);
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = static_cast<std::uint8_t>(a[i] * c % p);
    return r;
  }

  Mat transpose() const {
    Mat r(cols, rows, p);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  /// Matrix-vector product (v as a column).
  std::vector<std::uint8_t> apply(const std::vector<std::uint8_t>& v) const {
    std::vector<std::uint8_t> out(rows, 0);
    for (int i = 0; i < rows; ++i) {
      unsigned acc = 0;
      const std::uint8_t* r = row_ptr(i);
      for (int j = 0; j < cols; ++j) acc += static_cast<unsigned>(r[j]) * v[j];
      out[i] = static_cast<std::uint8_t>(acc % p);
    }
    return out;
  }
};

/// Streaming row-echelon accumulator over F_p: feed rows one at a time and
/// keep only the pivot rows. This is the rank kernel behind the cocycle
/// solvers; entries accumulate in 32-bit lanes and reduce mod p once per row.
/// p = 2 uses bit-packed rows.
class Echelon {
 public:
  Echelon(int cols, int p) : cols_(cols), p_(p), pivot_of_col_(cols, -1) {
    if (p == 2) words_ = (cols + 63) / 64;
  }

  int rank() const { return rank_; }
  int cols() const { return cols_; }

  /// Returns true if the row was independent (rank grew).
  bool add_row(const std::uint8_t* row) {
    if (p_ == 2) return add_row_gf2(row);
    acc_.assign(cols_, 0);
    for (int j = 0; j < cols_; ++j) acc_[j] = row[j];
    return reduce_insert();
  }

  bool add_row(const std::vector<std::uint8_t>& row) { return add_row(row.data()); }

  /// Sparse row: (column, value) pairs.
  bool add_row_sparse(const std::vector<std::pair<int, int>>& entries) {
    if (p_ == 2) {
      bits_.assign(words_, 0);
      for (auto [c, v] : entries)
        if (v % 2) bits_[c >> 6] ^= (1ull << (c & 63));
      return reduce_insert_gf2();
    }
    acc_.assign(cols_, 0);
    for (auto [c, v] : entries) {
      int w = v % p_;
      if (w < 0) w += p_;
      acc_[c] = static_cast<std::uint32_t>((acc_[c] + w) % p_);
    }
    return reduce_insert();
  }

 private:
  bool reduce_insert() {
    for (int c = 0; c < cols_; ++c) {
      std::uint32_t v = acc_[c] % static_cast<std::uint32_t>(p_);
      if (!v) continue;
      int pr = pivot_of_col_[c];
      if (pr >= 0) {
        std::uint32_t k = static_cast<std::uint32_t>(p_) - v;
        const std::uint8_t* prow = rows_[pr].data();
        std::uint32_t* acc = acc_.data();
        for (int j = c; j < cols_; ++j) acc[j] += k * prow[j];
      } else {
        std::vector<std::uint8_t> nr(cols_, 0);
        std::uint32_t inv = fp_inverse(static_cast<int>(v), p_);
        for (int j = c; j < cols_; ++j)
          nr[j] = static_cast<std::uint8_t>((acc_[j] % p_) * inv % p_);
        pivot_of_col_[c] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(nr));
        ++rank_;
        return true;
      }
    }
    return false;
  }

  bool add_row_gf2(const std::uint8_t* row) {
    bits_.assign(words_, 0);
    for (int j = 0; j < cols_; ++j)
      if (row[j] & 1) bits_[j >> 6] |= (1ull << (j & 63));
    return reduce_insert_gf2();
  }

  bool reduce_insert_gf2() {
    for (int c = 0; c < cols_; ++c) {
      if (!((bits_[c >> 6] >> (c & 63)) & 1)) continue;
      int pr = pivot_of_col_[c];
      if (pr >= 0) {
        const std::uint64_t* prow = bitrows_[pr].data();
        for (int w = c >> 6; w < words_; ++w) bits_[w] ^= prow[w];
      } else {
        pivot_of_col_[c] = static_cast<int>(bitrows_.size());
        bitrows_.push_back(bits_);
        ++rank_;
        return true;
      }
    }
    return false;
  }

  int cols_;
  int p_;
  int rank_ = 0;
  int words_ = 0;
  std::vector<int> pivot_of_col_;
  std::vector<std::vector<std::uint8_t>> rows_;
  std::vector<std::uint32_t> acc_;
  std::vector<std::vector<std::uint64_t>> bitrows_;
  std::vector<std::uint64_t> bits_;
};

inline int rank_of(const Mat& m) {
  Echelon e(m.cols, m.p);
  for (int i = 0; i < m.rows; ++i) e.add_row(m.row_ptr(i));
  return e.rank();
}

/// Basis of {x : M x = 0}, returned as the rows of a matrix.
inline Mat kernel_basis(const Mat& m) {
  // Reduced row echelon with pivot bookkeeping.
  Mat w = m;
  int p = m.p;
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < w.cols && r < w.rows; ++c) {
    int pr = -1;
    for (int i = r; i < w.rows; ++i)
      if (w.at(i, c)) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    if (pr != r)
      for (int j = 0; j < w.cols; ++j) std::swap(w.at(pr, j), w.at(r, j));
    int inv = fp_inverse(w.at(r, c), p);
    for (int j = 0; j < w.cols; ++j) w.at(r, j) = static_cast<std::uint8_t>(w.at(r, j) * inv % p);
    for (int i = 0; i < w.rows; ++i) {
      if (i == r || !w.at(i, c)) continue;
      int k = p - w.at(i, c);
      for (int j = 0; j < w.cols; ++j)
        w.at(i, j) = static_cast<std::uint8_t>((w.at(i, j) + k * w.at(r, j)) % p);
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(w.cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  int nullity = w.cols - r;
  Mat basis(nullity, w.cols, p);
  int bi = 0;
  for (int c = 0; c < w.cols; ++c) {
    if (is_pivot[c]) continue;
    basis.at(bi, c) = 1;
    for (int i = 0; i < r; ++i) {
      int pc = pivot_col[i];
      int v = w.at(i, c);
      if (v) basis.at(bi, pc) = static_cast<std::uint8_t>(p - v);
    }
    ++bi;
  }
  return basis;
}

/// Row space basis (reduced), for incremental span tests.
class RowSpan {
 public:
  RowSpan(int cols, int p) : ech_(cols, p) {}
  bool insert(const std::vector<std::uint8_t>& v) { return ech_.add_row(v); }
  bool insert(const std::uint8_t* v) { return ech_.add_row(v); }
  int dim() const { return ech_.rank(); }

 private:
  Echelon ech_;
};

}  // namespace ggt
