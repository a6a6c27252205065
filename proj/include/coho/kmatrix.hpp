#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coho/field.hpp"

namespace coho {

using KVec = std::vector<uint16_t>;

// Dense matrix over GF(p^m). GF(2) entries are bit-packed with word-level row
// operations; every other field uses a uint16 grid. All elimination picks the
// lowest-index nonzero pivot so reduced forms (and everything derived from
// them) are canonical.
class KMatrix {
 public:
  KMatrix() = default;
  KMatrix(FieldPtr F, int rows, int cols);
  static KMatrix identity(FieldPtr F, int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FieldPtr& field() const { return F_; }

  uint16_t get(int r, int c) const;
  void set(int r, int c, uint16_t v);
  void add_at(int r, int c, uint16_t v);  // entry += v

  bool is_zero() const;
  bool operator==(const KMatrix& o) const;

  KMatrix operator+(const KMatrix& o) const;
  KMatrix operator-(const KMatrix& o) const;
  KMatrix mul(const KMatrix& o) const;         // parallel-capable path
  KMatrix mul_serial(const KMatrix& o) const;  // reference implementation
  KMatrix transpose() const;
  KMatrix scaled(uint16_t c) const;

  KVec mul_vec(const KVec& x) const;  // this * column vector
  void add_scaled_col_into(const KVec& x, uint16_t c, KVec& acc) const;

  // Reduced row echelon form in place; returns pivot column indices
  // (strictly increasing). `rref` may use internal parallelism but is
  // bit-identical to `rref_serial`.
  std::vector<int> rref();
  std::vector<int> rref_serial();
  int rank() const;

  // Basis of {x : this * x = 0}, one vector per row, reduced to rref.
  KMatrix kernel_basis() const;

  // Solve this * x = b; absent when inconsistent. Deterministic: free
  // variables are set to zero.
  std::optional<KVec> solve(const KVec& b) const;

  // Rows of this spanning a subspace, rows given in rref with pivots `piv`:
  // reduce v modulo the span. Zero result iff v is in the span.
  static KVec coords_mod_subspace(const KVec& v, const KMatrix& S, const std::vector<int>& piv);

  void set_block(int r0, int c0, const KMatrix& M);
  KMatrix block(int r0, int c0, int rows, int cols) const;
  void set_row(int r, const KVec& v);
  KVec row(int r) const;
  KVec col(int c) const;
  static KMatrix from_rows(FieldPtr F, const std::vector<KVec>& rows, int cols);
  KMatrix vstack(const KMatrix& below) const;
  KMatrix hstack(const KMatrix& right) const;

 private:
  std::vector<int> rref_impl(bool parallel);
  void row_axpy(int dst, int src, uint16_t c);  // row[dst] += c * row[src]
  void scale_row(int r, uint16_t c);
  void swap_rows(int a, int b);

  FieldPtr F_;
  int rows_ = 0, cols_ = 0;
  bool packed_ = false;        // GF(2) layout
  size_t wpr_ = 0;             // words per row when packed
  std::vector<uint64_t> bits_;
  std::vector<uint16_t> vals_;
};

}  // namespace coho
