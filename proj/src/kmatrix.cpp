#include "coho/kmatrix.hpp"

#include <algorithm>

#include "coho/common.hpp"

namespace coho {

KMatrix::KMatrix(FieldPtr F, int rows, int cols) : F_(std::move(F)), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw InternalError("BadShape", "negative matrix dimension");
  packed_ = (F_->q() == 2);
  if (packed_) {
    wpr_ = static_cast<size_t>((cols_ + 63) / 64);
    bits_.assign(static_cast<size_t>(rows_) * wpr_, 0);
  } else {
    vals_.assign(static_cast<size_t>(rows_) * cols_, 0);
  }
}

KMatrix KMatrix::identity(FieldPtr F, int n) {
  KMatrix M(std::move(F), n, n);
  for (int i = 0; i < n; ++i) M.set(i, i, 1);
  return M;
}

uint16_t KMatrix::get(int r, int c) const {
  if (packed_) return (bits_[r * wpr_ + c / 64] >> (c % 64)) & 1u;
  return vals_[static_cast<size_t>(r) * cols_ + c];
}

void KMatrix::set(int r, int c, uint16_t v) {
  if (packed_) {
    uint64_t& w = bits_[r * wpr_ + c / 64];
    uint64_t m = uint64_t(1) << (c % 64);
    w = v ? (w | m) : (w & ~m);
  } else {
    vals_[static_cast<size_t>(r) * cols_ + c] = v;
  }
}

void KMatrix::add_at(int r, int c, uint16_t v) { set(r, c, F_->add(get(r, c), v)); }

bool KMatrix::is_zero() const {
  if (packed_) return std::all_of(bits_.begin(), bits_.end(), [](uint64_t w) { return w == 0; });
  return std::all_of(vals_.begin(), vals_.end(), [](uint16_t v) { return v == 0; });
}

bool KMatrix::operator==(const KMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  if (packed_ && o.packed_) return bits_ == o.bits_;
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (get(r, c) != o.get(r, c)) return false;
  return true;
}

KMatrix KMatrix::operator+(const KMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw InputError("DimensionMismatch", "matrix addition shape mismatch");
  KMatrix R = *this;
  if (packed_) {
    for (size_t i = 0; i < bits_.size(); ++i) R.bits_[i] ^= o.bits_[i];
  } else {
    for (size_t i = 0; i < vals_.size(); ++i) R.vals_[i] = F_->add(vals_[i], o.vals_[i]);
  }
  return R;
}

KMatrix KMatrix::operator-(const KMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw InputError("DimensionMismatch", "matrix subtraction shape mismatch");
  KMatrix R = *this;
  if (packed_) {
    for (size_t i = 0; i < bits_.size(); ++i) R.bits_[i] ^= o.bits_[i];
  } else {
    for (size_t i = 0; i < vals_.size(); ++i) R.vals_[i] = F_->sub(vals_[i], o.vals_[i]);
  }
  return R;
}

KMatrix KMatrix::scaled(uint16_t c) const {
  KMatrix R = *this;
  if (packed_) {
    if (c == 0) std::fill(R.bits_.begin(), R.bits_.end(), 0);
  } else {
    for (auto& v : R.vals_) v = F_->mul(v, c);
  }
  return R;
}

KMatrix KMatrix::mul_serial(const KMatrix& o) const {
  if (cols_ != o.rows_) throw InputError("DimensionMismatch", "matrix product shape mismatch");
  KMatrix R(F_, rows_, o.cols_);
  if (packed_) {
    for (int i = 0; i < rows_; ++i) {
      uint64_t* dst = &R.bits_[i * R.wpr_];
      for (int k = 0; k < cols_; ++k) {
        if (get(i, k)) {
          const uint64_t* src = &o.bits_[k * o.wpr_];
          for (size_t w = 0; w < o.wpr_; ++w) dst[w] ^= src[w];
        }
      }
    }
  } else {
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        uint16_t a = get(i, k);
        if (!a) continue;
        for (int j = 0; j < o.cols_; ++j) {
          uint16_t b = o.get(k, j);
          if (b) R.vals_[static_cast<size_t>(i) * R.cols_ + j] =
              F_->add(R.vals_[static_cast<size_t>(i) * R.cols_ + j], F_->mul(a, b));
        }
      }
  }
  return R;
}

KMatrix KMatrix::mul(const KMatrix& o) const {
  if (cols_ != o.rows_) throw InputError("DimensionMismatch", "matrix product shape mismatch");
  KMatrix R(F_, rows_, o.cols_);
  if (packed_) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows_; ++i) {
      uint64_t* dst = &R.bits_[i * R.wpr_];
      for (int k = 0; k < cols_; ++k) {
        if (get(i, k)) {
          const uint64_t* src = &o.bits_[k * o.wpr_];
          for (size_t w = 0; w < o.wpr_; ++w) dst[w] ^= src[w];
        }
      }
    }
  } else {
    const Field* f = F_.get();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows_; ++i) {
      for (int k = 0; k < cols_; ++k) {
        uint16_t a = get(i, k);
        if (!a) continue;
        for (int j = 0; j < o.cols_; ++j) {
          uint16_t b = o.get(k, j);
          if (b) {
            auto& cell = R.vals_[static_cast<size_t>(i) * R.cols_ + j];
            cell = f->add(cell, f->mul(a, b));
          }
        }
      }
    }
  }
  return R;
}

KMatrix KMatrix::transpose() const {
  KMatrix R(F_, cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) {
      uint16_t v = get(r, c);
      if (v) R.set(c, r, v);
    }
  return R;
}

KVec KMatrix::mul_vec(const KVec& x) const {
  if (static_cast<int>(x.size()) != cols_)
    throw InputError("DimensionMismatch", "matrix-vector product shape mismatch");
  KVec y(rows_, 0);
  for (int r = 0; r < rows_; ++r) {
    uint16_t acc = 0;
    for (int c = 0; c < cols_; ++c) {
      uint16_t a = get(r, c);
      if (a && x[c]) acc = F_->add(acc, F_->mul(a, x[c]));
    }
    y[r] = acc;
  }
  return y;
}

void KMatrix::add_scaled_col_into(const KVec& x, uint16_t c, KVec& acc) const {
  KVec y = mul_vec(x);
  for (int r = 0; r < rows_; ++r) acc[r] = F_->add(acc[r], F_->mul(c, y[r]));
}

void KMatrix::row_axpy(int dst, int src, uint16_t c) {
  if (!c) return;
  if (packed_) {
    uint64_t* d = &bits_[dst * wpr_];
    const uint64_t* s = &bits_[src * wpr_];
    for (size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
  } else {
    uint16_t* d = &vals_[static_cast<size_t>(dst) * cols_];
    const uint16_t* s = &vals_[static_cast<size_t>(src) * cols_];
    for (int j = 0; j < cols_; ++j)
      if (s[j]) d[j] = F_->add(d[j], F_->mul(c, s[j]));
  }
}

void KMatrix::scale_row(int r, uint16_t c) {
  if (packed_) return;  // only possible scale is 1
  uint16_t* d = &vals_[static_cast<size_t>(r) * cols_];
  for (int j = 0; j < cols_; ++j)
    if (d[j]) d[j] = F_->mul(c, d[j]);
}

void KMatrix::swap_rows(int a, int b) {
  if (a == b) return;
  if (packed_) {
    for (size_t w = 0; w < wpr_; ++w) std::swap(bits_[a * wpr_ + w], bits_[b * wpr_ + w]);
  } else {
    for (int j = 0; j < cols_; ++j) {
      uint16_t t = get(a, j);
      set(a, j, get(b, j));
      set(b, j, t);
    }
  }
}

std::vector<int> KMatrix::rref_impl(bool parallel) {
  std::vector<int> pivots;
  int prow = 0;
  for (int c = 0; c < cols_ && prow < rows_; ++c) {
    int sel = -1;
    for (int r = prow; r < rows_; ++r)
      if (get(r, c)) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    swap_rows(prow, sel);
    uint16_t pv = get(prow, c);
    if (pv != 1) scale_row(prow, F_->inv(pv));
    if (parallel && rows_ >= 64) {
#pragma omp parallel for schedule(static)
      for (int r = 0; r < rows_; ++r) {
        if (r == prow) continue;
        uint16_t v = get(r, c);
        if (v) row_axpy(r, prow, F_->neg(v));
      }
    } else {
      for (int r = 0; r < rows_; ++r) {
        if (r == prow) continue;
        uint16_t v = get(r, c);
        if (v) row_axpy(r, prow, F_->neg(v));
      }
    }
    pivots.push_back(c);
    ++prow;
  }
  return pivots;
}

std::vector<int> KMatrix::rref() { return rref_impl(true); }
std::vector<int> KMatrix::rref_serial() { return rref_impl(false); }

int KMatrix::rank() const {
  KMatrix C = *this;
  return static_cast<int>(C.rref().size());
}

KMatrix KMatrix::kernel_basis() const {
  KMatrix R = *this;
  std::vector<int> piv = R.rref();
  std::vector<int> free_cols;
  {
    size_t pi = 0;
    for (int c = 0; c < cols_; ++c) {
      if (pi < piv.size() && piv[pi] == c) {
        ++pi;
      } else {
        free_cols.push_back(c);
      }
    }
  }
  KMatrix K(F_, static_cast<int>(free_cols.size()), cols_);
  for (size_t i = 0; i < free_cols.size(); ++i) {
    int fc = free_cols[i];
    K.set(static_cast<int>(i), fc, 1);
    for (size_t r = 0; r < piv.size(); ++r) {
      uint16_t v = R.get(static_cast<int>(r), fc);
      if (v) K.set(static_cast<int>(i), piv[r], F_->neg(v));
    }
  }
  K.rref();
  return K;
}

std::optional<KVec> KMatrix::solve(const KVec& b) const {
  if (static_cast<int>(b.size()) != rows_)
    throw InputError("DimensionMismatch", "solve: rhs length != row count");
  KMatrix A(F_, rows_, cols_ + 1);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      uint16_t v = get(r, c);
      if (v) A.set(r, c, v);
    }
    if (b[r]) A.set(r, cols_, b[r]);
  }
  std::vector<int> piv = A.rref();
  if (!piv.empty() && piv.back() == cols_) return std::nullopt;
  KVec x(cols_, 0);
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = A.get(static_cast<int>(r), cols_);
  return x;
}

KVec KMatrix::coords_mod_subspace(const KVec& v, const KMatrix& S, const std::vector<int>& piv) {
  if (static_cast<int>(v.size()) != S.cols())
    throw InputError("DimensionMismatch", "coords_mod_subspace: vector length != ambient dim");
  const FieldPtr& F = S.field();
  KVec w = v;
  for (size_t r = 0; r < piv.size(); ++r) {
    uint16_t c = w[piv[r]];
    if (!c) continue;
    for (int j = 0; j < S.cols(); ++j) {
      uint16_t s = S.get(static_cast<int>(r), j);
      if (s) w[j] = F->sub(w[j], F->mul(c, s));
    }
  }
  return w;
}

void KMatrix::set_block(int r0, int c0, const KMatrix& M) {
  if (r0 + M.rows() > rows_ || c0 + M.cols() > cols_)
    throw InternalError("BadShape", "set_block out of range");
  for (int r = 0; r < M.rows(); ++r)
    for (int c = 0; c < M.cols(); ++c) set(r0 + r, c0 + c, M.get(r, c));
}

KMatrix KMatrix::block(int r0, int c0, int nr, int nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw InternalError("BadShape", "block out of range");
  KMatrix R(F_, nr, nc);
  for (int r = 0; r < nr; ++r)
    for (int c = 0; c < nc; ++c) {
      uint16_t v = get(r0 + r, c0 + c);
      if (v) R.set(r, c, v);
    }
  return R;
}

void KMatrix::set_row(int r, const KVec& v) {
  if (static_cast<int>(v.size()) != cols_) throw InternalError("BadShape", "set_row length");
  for (int c = 0; c < cols_; ++c) set(r, c, v[c]);
}

KVec KMatrix::row(int r) const {
  KVec v(cols_, 0);
  for (int c = 0; c < cols_; ++c) v[c] = get(r, c);
  return v;
}

KVec KMatrix::col(int c) const {
  KVec v(rows_, 0);
  for (int r = 0; r < rows_; ++r) v[r] = get(r, c);
  return v;
}

KMatrix KMatrix::from_rows(FieldPtr F, const std::vector<KVec>& rows, int cols) {
  KMatrix M(std::move(F), static_cast<int>(rows.size()), cols);
  for (size_t r = 0; r < rows.size(); ++r) M.set_row(static_cast<int>(r), rows[r]);
  return M;
}

KMatrix KMatrix::vstack(const KMatrix& below) const {
  if (cols_ != below.cols()) throw InternalError("BadShape", "vstack column mismatch");
  KMatrix R(F_, rows_ + below.rows(), cols_);
  R.set_block(0, 0, *this);
  R.set_block(rows_, 0, below);
  return R;
}

KMatrix KMatrix::hstack(const KMatrix& right) const {
  if (rows_ != right.rows()) throw InternalError("BadShape", "hstack row mismatch");
  KMatrix R(F_, rows_, cols_ + right.cols());
  R.set_block(0, 0, *this);
  R.set_block(0, cols_, right);
  return R;
}

}  // namespace coho
