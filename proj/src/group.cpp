#include "coho/group.hpp"

#include <fstream>

#include "coho/common.hpp"
#include "json.hpp"

namespace coho {

std::shared_ptr<const Group> Group::from_table(const std::vector<std::vector<int>>& table,
                                               std::string name) {
  int n = static_cast<int>(table.size());
  if (n < 1 || n > 64) throw InputError("UnsupportedGroup", "group order must be in 1..64");
  for (const auto& row : table)
    if (static_cast<int>(row.size()) != n)
      throw InputError("NotLatinSquare", "multiplication table is not square");
  for (int i = 0; i < n; ++i) {
    std::vector<bool> seen_row(n, false), seen_col(n, false);
    for (int j = 0; j < n; ++j) {
      int r = table[i][j], c = table[j][i];
      if (r < 0 || r >= n || c < 0 || c >= n)
        throw InputError("NotLatinSquare", "table entry out of range");
      if (seen_row[r]) throw InputError("NotLatinSquare", "repeated entry in row " + std::to_string(i));
      if (seen_col[c]) throw InputError("NotLatinSquare", "repeated entry in column " + std::to_string(i));
      seen_row[r] = seen_col[c] = true;
    }
  }
  int e = -1;
  for (int cand = 0; cand < n; ++cand) {
    bool ok = true;
    for (int j = 0; j < n && ok; ++j)
      if (table[cand][j] != j || table[j][cand] != j) ok = false;
    if (ok) {
      e = cand;
      break;
    }
  }
  if (e < 0) throw InputError("NoIdentity", "table has no two-sided identity");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw InputError("NonAssociative",
                           "associativity fails at (" + std::to_string(a) + "," +
                               std::to_string(b) + "," + std::to_string(c) + ")");
  auto G = std::shared_ptr<Group>(new Group());
  G->n_ = n;
  G->e_ = e;
  G->table_ = table;
  G->name_ = std::move(name);
  G->inv_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table[a][b] == e) {
        G->inv_[a] = b;
        break;
      }
  return G;
}

bool Group::is_p_group(int p) const {
  int n = n_;
  while (n % p == 0) n /= p;
  return n == 1;
}

namespace {

std::vector<std::vector<int>> cyclic_table(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return t;
}

std::vector<std::vector<int>> xor_table(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = i ^ j;
  return t;
}

// Dihedral of order 8: index = i + 4j encodes r^i s^j, with s r s = r^-1.
std::vector<std::vector<int>> d8_table() {
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int i = a % 4, j = a / 4, k = b % 4, l = b / 4;
      int i2 = ((j ? -k : k) % 4 + 4 + i) % 4;
      t[a][b] = i2 + 4 * (j ^ l);
    }
  return t;
}

// Quaternion group: index = 2*axis + sign with axes (1, i, j, k) and
// sign 0 = +, 1 = -.
std::vector<std::vector<int>> q8_table() {
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int ax1 = a / 2, s1 = a % 2, ax2 = b / 2, s2 = b % 2;
      int ax, s = s1 ^ s2;
      if (ax1 == 0) {
        ax = ax2;
      } else if (ax2 == 0) {
        ax = ax1;
      } else if (ax1 == ax2) {
        ax = 0;
        s ^= 1;  // i*i = j*j = k*k = -1
      } else {
        ax = 6 - ax1 - ax2;
        bool cyclic = (ax2 == ax1 % 3 + 1);  // (i,j), (j,k), (k,i)
        if (!cyclic) s ^= 1;
      }
      t[a][b] = 2 * ax + s;
    }
  return t;
}

}  // namespace

std::shared_ptr<const Group> Group::preset(const std::string& name) {
  if (name == "C2") return from_table(cyclic_table(2), name);
  if (name == "C3") return from_table(cyclic_table(3), name);
  if (name == "C4") return from_table(cyclic_table(4), name);
  if (name == "C8") return from_table(cyclic_table(8), name);
  if (name == "C2xC2") return from_table(xor_table(4), name);
  if (name == "C2xC2xC2") return from_table(xor_table(8), name);
  if (name == "D8") return from_table(d8_table(), name);
  if (name == "Q8") return from_table(q8_table(), name);
  throw InputError("UnknownPreset", "no preset group named '" + name + "'");
}

std::shared_ptr<const Group> Group::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("BadGroupFile", "cannot open group file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw InputError("BadGroupFile", std::string("invalid JSON: ") + ex.what());
  }
  if (!j.is_object() || !j.contains("order") || !j.contains("table"))
    throw InputError("BadGroupFile", "group file needs fields 'order' and 'table'");
  int n = j["order"].get<int>();
  auto table = j["table"].get<std::vector<std::vector<int>>>();
  if (static_cast<int>(table.size()) != n)
    throw InputError("BadGroupFile", "'table' size does not match 'order'");
  return from_table(table, path);
}

AlgebraElem AlgebraElem::unit(const FieldPtr& F, const GroupPtr& G) {
  AlgebraElem a(F, G);
  a.c[G->identity()] = 1;
  return a;
}

AlgebraElem AlgebraElem::of(const FieldPtr& F, const GroupPtr& G, int g) {
  AlgebraElem a(F, G);
  a.c[g] = 1;
  return a;
}

bool AlgebraElem::is_zero() const {
  for (uint16_t v : c)
    if (v) return false;
  return true;
}

uint16_t AlgebraElem::aug() const {
  uint16_t s = 0;
  for (uint16_t v : c) s = F->add(s, v);
  return s;
}

AlgebraElem AlgebraElem::operator+(const AlgebraElem& o) const {
  AlgebraElem r = *this;
  for (size_t i = 0; i < c.size(); ++i) r.c[i] = F->add(c[i], o.c[i]);
  return r;
}

AlgebraElem AlgebraElem::operator-(const AlgebraElem& o) const {
  AlgebraElem r = *this;
  for (size_t i = 0; i < c.size(); ++i) r.c[i] = F->sub(c[i], o.c[i]);
  return r;
}

AlgebraElem AlgebraElem::scaled(uint16_t s) const {
  AlgebraElem r = *this;
  for (auto& v : r.c) v = F->mul(v, s);
  return r;
}

AlgebraElem algebra_mul(const AlgebraElem& a, const AlgebraElem& b) {
  AlgebraElem r(a.F, a.G);
  int n = a.G->order();
  for (int g = 0; g < n; ++g) {
    if (!a.c[g]) continue;
    for (int h = 0; h < n; ++h) {
      if (!b.c[h]) continue;
      int gh = a.G->mul(g, h);
      r.c[gh] = a.F->add(r.c[gh], a.F->mul(a.c[g], b.c[h]));
    }
  }
  return r;
}

FreeMap::FreeMap(FieldPtr F, GroupPtr G, int dst_rank, int src_rank)
    : F_(std::move(F)), G_(std::move(G)), dst_(dst_rank), src_(src_rank), ng_(G_->order()) {
  if (dst_ < 0 || src_ < 0) throw InternalError("BadShape", "negative free-module rank");
  data_.assign(static_cast<size_t>(dst_) * src_ * ng_, 0);
}

FreeMap FreeMap::identity(const FieldPtr& F, const GroupPtr& G, int rank) {
  FreeMap f(F, G, rank, rank);
  for (int i = 0; i < rank; ++i) f.set_coeff(i, i, G->identity(), 1);
  return f;
}

void FreeMap::add_coeff(int i, int j, int g, uint16_t v) {
  auto& cell = data_[idx(i, j, g)];
  cell = F_->add(cell, v);
}

AlgebraElem FreeMap::entry(int i, int j) const {
  AlgebraElem a(F_, G_);
  for (int g = 0; g < ng_; ++g) a.c[g] = coeff(i, j, g);
  return a;
}

void FreeMap::set_entry(int i, int j, const AlgebraElem& a) {
  for (int g = 0; g < ng_; ++g) set_coeff(i, j, g, a.c[g]);
}

bool FreeMap::is_zero() const {
  for (uint16_t v : data_)
    if (v) return false;
  return true;
}

bool FreeMap::operator==(const FreeMap& o) const {
  return dst_ == o.dst_ && src_ == o.src_ && data_ == o.data_;
}

FreeMap FreeMap::operator+(const FreeMap& o) const {
  if (dst_ != o.dst_ || src_ != o.src_)
    throw InternalError("BadShape", "free-map addition shape mismatch");
  FreeMap r = *this;
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = F_->add(data_[i], o.data_[i]);
  return r;
}

FreeMap FreeMap::operator-(const FreeMap& o) const {
  if (dst_ != o.dst_ || src_ != o.src_)
    throw InternalError("BadShape", "free-map subtraction shape mismatch");
  FreeMap r = *this;
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = F_->sub(data_[i], o.data_[i]);
  return r;
}

FreeMap FreeMap::scaled(uint16_t s) const {
  FreeMap r = *this;
  for (auto& v : r.data_) v = F_->mul(v, s);
  return r;
}

FreeMap FreeMap::after(const FreeMap& f) const {
  if (src_ != f.dst_) throw InternalError("BadShape", "free-map composition shape mismatch");
  FreeMap r(F_, G_, dst_, f.src_);
  // (this o f)(e_k): push f's entry through this; coefficients act on the
  // left, so the source entry multiplies first in the convolution.
  for (int k = 0; k < f.src_; ++k)
    for (int j = 0; j < src_; ++j)
      for (int g1 = 0; g1 < ng_; ++g1) {
        uint16_t a = f.coeff(j, k, g1);
        if (!a) continue;
        for (int i = 0; i < dst_; ++i)
          for (int g2 = 0; g2 < ng_; ++g2) {
            uint16_t b = coeff(i, j, g2);
            if (b) r.add_coeff(i, k, G_->mul(g1, g2), F_->mul(a, b));
          }
      }
  return r;
}

KMatrix FreeMap::to_k() const {
  KMatrix M(F_, dst_ * ng_, src_ * ng_);
  for (int i = 0; i < dst_; ++i)
    for (int j = 0; j < src_; ++j)
      for (int g = 0; g < ng_; ++g) {
        uint16_t v = coeff(i, j, g);
        if (!v) continue;
        for (int h = 0; h < ng_; ++h) M.set(i * ng_ + G_->mul(h, g), j * ng_ + h, v);
      }
  return M;
}

KMatrix FreeMap::aug() const {
  KMatrix M(F_, dst_, src_);
  for (int i = 0; i < dst_; ++i)
    for (int j = 0; j < src_; ++j) {
      uint16_t s = 0;
      for (int g = 0; g < ng_; ++g) s = F_->add(s, coeff(i, j, g));
      M.set(i, j, s);
    }
  return M;
}

void FreeMap::set_block(int i0, int j0, const FreeMap& S) {
  if (i0 + S.dst_ > dst_ || j0 + S.src_ > src_)
    throw InternalError("BadShape", "free-map block out of range");
  for (int i = 0; i < S.dst_; ++i)
    for (int j = 0; j < S.src_; ++j)
      for (int g = 0; g < ng_; ++g) set_coeff(i0 + i, j0 + j, g, S.coeff(i, j, g));
}

FreeMap FreeMap::block(int i0, int j0, int ni, int nj) const {
  if (i0 + ni > dst_ || j0 + nj > src_)
    throw InternalError("BadShape", "free-map block out of range");
  FreeMap S(F_, G_, ni, nj);
  for (int i = 0; i < ni; ++i)
    for (int j = 0; j < nj; ++j)
      for (int g = 0; g < ng_; ++g) S.set_coeff(i, j, g, coeff(i0 + i, j0 + j, g));
  return S;
}

KVec FreeMap::gen_column(int j) const {
  KVec v(static_cast<size_t>(dst_) * ng_, 0);
  for (int i = 0; i < dst_; ++i)
    for (int g = 0; g < ng_; ++g) v[i * ng_ + g] = coeff(i, j, g);
  return v;
}

void FreeMap::set_gen_column(int j, const KVec& v) {
  for (int i = 0; i < dst_; ++i)
    for (int g = 0; g < ng_; ++g) set_coeff(i, j, g, v[i * ng_ + g]);
}

void FreeMap::add_gen_column(int j, const KVec& v) {
  for (int i = 0; i < dst_; ++i)
    for (int g = 0; g < ng_; ++g) add_coeff(i, j, g, v[i * ng_ + g]);
}

KMatrix freemap_to_k(const FreeMap& f) { return f.to_k(); }

RepModule::RepModule(FieldPtr f, GroupPtr g, std::vector<KMatrix> a)
    : F(std::move(f)), G(std::move(g)), act(std::move(a)) {
  int n = G->order();
  if (static_cast<int>(act.size()) != n)
    throw InternalError("BadShape", "representation needs one matrix per group element");
  dim = act.empty() ? 0 : act[0].rows();
  for (const auto& m : act)
    if (m.rows() != dim || m.cols() != dim)
      throw InternalError("BadShape", "representation matrices must be square of equal size");
  if (!(act[G->identity()] == KMatrix::identity(F, dim)))
    throw InternalError("NotGStable", "identity element must act as the identity matrix");
  for (int g1 = 0; g1 < n; ++g1)
    for (int g2 = 0; g2 < n; ++g2)
      if (!(act[g1].mul(act[g2]) == act[G->mul(g1, g2)]))
        throw InternalError("NotGStable", "action is not multiplicative");
}

RepModule submodule_as_rep(const FreeMap& f, SubmoduleKind kind) {
  const FieldPtr& F = f.field();
  const GroupPtr& G = f.group();
  int ng = G->order();
  KMatrix M = f.to_k();
  KMatrix B(F, 0, 0);
  if (kind == SubmoduleKind::Kernel) {
    B = M.kernel_basis();
  } else {
    KMatrix C = M.transpose();
    std::vector<int> piv = C.rref();
    B = C.block(0, 0, static_cast<int>(piv.size()), C.cols());
  }
  int dim = B.rows(), amb = B.cols();
  int rank = amb / ng;
  std::vector<int> piv(dim);
  for (int r = 0; r < dim; ++r) {
    int p = -1;
    for (int c = 0; c < amb; ++c)
      if (B.get(r, c)) {
        p = c;
        break;
      }
    if (p < 0 || B.get(r, p) != 1)
      throw InternalError("NotGStable", "submodule basis is not in reduced form");
    piv[r] = p;
  }
  std::vector<KMatrix> act;
  act.reserve(ng);
  for (int g = 0; g < ng; ++g) {
    KMatrix A(F, dim, dim);
    for (int j = 0; j < dim; ++j) {
      // Image of basis vector j under the permutation action (i, h) -> (i, gh).
      KVec w(amb, 0);
      for (int i = 0; i < rank; ++i)
        for (int h = 0; h < ng; ++h) {
          uint16_t v = B.get(j, i * ng + h);
          if (v) w[i * ng + G->mul(g, h)] = v;
        }
      for (int r = 0; r < dim; ++r) {
        uint16_t c = w[piv[r]];
        if (!c) continue;
        A.set(r, j, c);
        for (int col = 0; col < amb; ++col) {
          uint16_t s = B.get(r, col);
          if (s) w[col] = F->sub(w[col], F->mul(c, s));
        }
      }
      for (uint16_t v : w)
        if (v) throw InternalError("NotGStable", "submodule is not closed under the group action");
    }
    act.push_back(std::move(A));
  }
  return RepModule(F, G, std::move(act));
}

}  // namespace coho
