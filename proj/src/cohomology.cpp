#include "coho/cohomology.hpp"

#include <cctype>
#include <random>
#include <utility>

namespace coho {

namespace {

// Row-times-matrix over the field: (u * A)_j with A given as dst x src aug
// data, u indexed by rows of A.
KVec row_mul(const FieldPtr& F, const KVec& u, const KMatrix& A) {
  KVec out(A.cols(), 0);
  for (int i = 0; i < A.rows(); ++i) {
    if (!u[i]) continue;
    for (int j = 0; j < A.cols(); ++j) out[j] = F->add(out[j], F->mul(u[i], A.get(i, j)));
  }
  return out;
}

bool all_zero(const KVec& v) {
  for (uint16_t c : v)
    if (c) return false;
  return true;
}

}  // namespace

CohRing::CohRing(Resolution P, unsigned seed) : P_(std::move(P)), seed_(seed) {}

const CohBasis& CohRing::basis(int n) const {
  auto it = bases_.find(n);
  if (it != bases_.end()) return it->second;

  const ComplexPtr& C = P_.complex;
  if (n < C->min_deg() || n > C->max_deg() - 1)
    throw InputError("TruncationUnderflow", "degree " + std::to_string(n) +
                                                " needs the resolution stored through degree " +
                                                std::to_string(n + 1));
  const FieldPtr& F = C->field();
  int r = C->rank(n);

  CohBasis b;
  b.degree = n;
  b.del = C->diff(n + 1).aug();  // r x rank(n+1)

  // Cocycles: rows u with u * del = 0.
  KMatrix Z = b.del.transpose().kernel_basis();

  // Coboundaries: row space of the augmented differential into degree n.
  if (n > C->min_deg()) {
    KMatrix Bm = C->diff(n).aug();
    b.bpiv = Bm.rref();
    b.cobound = Bm.block(0, 0, static_cast<int>(b.bpiv.size()), r);
  } else {
    b.cobound = KMatrix(F, 0, r);
  }

  // Canonical representatives: cocycle rows reduced modulo coboundaries,
  // then brought to rref so coordinates are reproducible.
  std::vector<KVec> rows;
  for (int i = 0; i < Z.rows(); ++i) {
    KVec res = KMatrix::coords_mod_subspace(Z.row(i), b.cobound, b.bpiv);
    if (!all_zero(res)) rows.push_back(std::move(res));
  }
  KMatrix R = KMatrix::from_rows(F, rows, r);
  b.rpiv = R.rref();
  b.reps = R.block(0, 0, static_cast<int>(b.rpiv.size()), r);
  b.dim = static_cast<int>(b.rpiv.size());
  if (b.dim != Z.rows() - b.cobound.rows())
    throw InternalError("SolverBug", "quotient dimension mismatch");
  return bases_.emplace(n, std::move(b)).first->second;
}

KVec CohRing::coords_of(int n, const KVec& row) const {
  const CohBasis& b = basis(n);
  const ComplexPtr& C = P_.complex;
  const FieldPtr& F = C->field();
  if (static_cast<int>(row.size()) != C->rank(n))
    throw InputError("PreconditionViolated", "cocycle row length mismatch");
  if (!all_zero(row_mul(F, row, b.del)))
    throw InputError("PreconditionViolated", "row is not a cocycle");

  KVec res = KMatrix::coords_mod_subspace(row, b.cobound, b.bpiv);
  KVec c(b.dim, 0);
  for (int i = 0; i < b.dim; ++i) c[i] = res[b.rpiv[i]];
  for (int j = 0; j < static_cast<int>(res.size()); ++j) {
    uint16_t acc = res[j];
    for (int i = 0; i < b.dim; ++i) acc = F->add(acc, F->neg(F->mul(c[i], b.reps.get(i, j))));
    if (acc) throw InternalError("SolverBug", "cocycle reduction failed");
  }
  return c;
}

CohClass CohRing::cls(int n, const KVec& coords) const {
  const CohBasis& b = basis(n);
  if (static_cast<int>(coords.size()) != b.dim)
    throw InputError("PreconditionViolated", "coordinate length mismatch");
  const FieldPtr& F = P_.complex->field();
  KVec row(P_.complex->rank(n), 0);
  for (int i = 0; i < b.dim; ++i) {
    if (!coords[i]) continue;
    for (int j = 0; j < static_cast<int>(row.size()); ++j)
      row[j] = F->add(row[j], F->mul(coords[i], b.reps.get(i, j)));
  }
  return CohClass{n, coords, std::move(row)};
}

CohClass CohRing::from_cocycle(int n, const KVec& row) const {
  return CohClass{n, coords_of(n, row), row};
}

CohClass CohRing::zero(int n) const {
  const CohBasis& b = basis(n);
  return CohClass{n, KVec(b.dim, 0), KVec(P_.complex->rank(n), 0)};
}

CohClass CohRing::one() const {
  const CohBasis& b = basis(0);
  if (b.dim != 1) throw InternalError("SolverBug", "degree-zero cohomology is not a line");
  return cls(0, {1});
}

CohClass CohRing::sum(const CohClass& a, const CohClass& b) const {
  if (a.degree != b.degree) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    throw InputError("NonHomogeneous", "cannot add classes of degrees " +
                                           std::to_string(a.degree) + " and " +
                                           std::to_string(b.degree));
  }
  const FieldPtr& F = P_.complex->field();
  CohClass out = a;
  for (size_t i = 0; i < out.coords.size(); ++i) out.coords[i] = F->add(a.coords[i], b.coords[i]);
  for (size_t i = 0; i < out.cocycle.size(); ++i)
    out.cocycle[i] = F->add(a.cocycle[i], b.cocycle[i]);
  return out;
}

CohClass CohRing::scaled(const CohClass& a, uint16_t c) const {
  const FieldPtr& F = P_.complex->field();
  CohClass out = a;
  for (auto& v : out.coords) v = F->mul(v, c);
  for (auto& v : out.cocycle) v = F->mul(v, c);
  return out;
}

bool CohRing::equal(const CohClass& a, const CohClass& b) const {
  if (a.degree == b.degree) return a.coords == b.coords;
  return a.is_zero() && b.is_zero();
}

const GradedMap& CohRing::chain_rep(const CohClass& z) const {
  auto key = std::make_pair(z.degree, z.cocycle);
  auto it = reps_.find(key);
  if (it != reps_.end()) return it->second;
  GradedMap f = lift_map(P_.complex, z.cocycle, 1, P_, z.degree, P_.top());
  return reps_.emplace(std::move(key), std::move(f)).first->second;
}

const Diagonal& CohRing::diag() const {
  if (!diag_) {
    Diagonal d = diagonal(P_);
    if (seed_ != 0) {
      // Regenerate the comultiplication choice: add the boundary of random
      // degree-one data. The result is another chain map over the identity,
      // homotopic to the canonical one.
      const ComplexPtr& C = P_.complex;
      const FieldPtr& F = C->field();
      const GroupPtr& G = C->group();
      int ng = G->order();
      std::mt19937 rng(seed_);
      GradedMap K(C, d.square.C, 1);
      for (int s = C->min_deg(); s <= C->max_deg() - 1; ++s) {
        FreeMap R(F, G, d.square.C->rank(s + 1), C->rank(s));
        for (int i = 0; i < R.dst_rank(); ++i)
          for (int j = 0; j < R.src_rank(); ++j)
            for (int g = 0; g < ng; ++g)
              R.set_coeff(i, j, g, static_cast<uint16_t>(rng() % static_cast<unsigned>(F->q())));
        K.set(s, std::move(R));
      }
      d.map = d.map + K.defect();
    }
    diag_ = std::move(d);
  }
  return *diag_;
}

KVec CohRing::pair_with_diag(const CohClass& x, const CohClass& y) const {
  const Diagonal& D = diag();
  const ComplexPtr& C = P_.complex;
  const FieldPtr& F = C->field();
  int ng = C->group()->order();
  int N = x.degree + y.degree;
  const FreeMap* dn = D.map.at(N);
  if (!dn) throw InternalError("SolverBug", "diagonal missing degree " + std::to_string(N));
  const TensorBlock* blk = nullptr;
  for (const TensorBlock& b : D.square.blocks(N))
    if (b.i == x.degree) {
      blk = &b;
      break;
    }
  if (!blk) throw InternalError("SolverBug", "tensor block missing");

  int rN = C->rank(N);
  KVec phi(rN, 0);
  for (int j = 0; j < rN; ++j) {
    KVec col = dn->gen_column(j);
    uint16_t acc = 0;
    for (int a = 0; a < blk->ri; ++a) {
      if (!x.cocycle[a]) continue;
      for (int bb = 0; bb < blk->rj; ++bb) {
        uint16_t w = F->mul(x.cocycle[a], y.cocycle[bb]);
        if (!w) continue;
        uint16_t s = 0;
        for (int h = 0; h < ng; ++h) {
          size_t base = static_cast<size_t>(D.square.gen_index(*blk, a, bb, h)) * ng;
          for (int g = 0; g < ng; ++g) s = F->add(s, col[base + g]);
        }
        acc = F->add(acc, F->mul(w, s));
      }
    }
    phi[j] = koszul(*F, static_cast<long long>(x.degree) * y.degree, acc);
  }
  return phi;
}

CohClass CohRing::cup(const CohClass& x, const CohClass& y) const {
  if (x.degree == 0) return scaled(y, x.cocycle.empty() ? uint16_t(0) : x.cocycle[0]);
  if (y.degree == 0) return scaled(x, y.cocycle.empty() ? uint16_t(0) : y.cocycle[0]);
  int N = x.degree + y.degree;
  (void)basis(N);  // range guard before any lifting work

  const FieldPtr& F = P_.complex->field();
  const GradedMap& yh = chain_rep(y);
  CohClass out = from_cocycle(N, row_mul(F, x.cocycle, yh.component_or_zero(N).aug()));

  // Independent route: pair both cocycles against the diagonal approximation.
  CohClass alt = from_cocycle(N, pair_with_diag(x, y));
  if (out.coords != alt.coords) throw InternalError("SolverBug", "product routes disagree");
  return out;
}

KMatrix CohRing::mult_matrix(const CohClass& z, int d) const {
  int N = d + z.degree;
  const CohBasis& Bd = basis(d);
  const CohBasis& BN = basis(N);
  const FieldPtr& F = P_.complex->field();

  KMatrix M(F, BN.dim, Bd.dim);
  if (z.degree == 0) {
    uint16_t c = z.cocycle.empty() ? uint16_t(0) : z.cocycle[0];
    for (int i = 0; i < Bd.dim; ++i) M.set(i, i, c);
    return M;
  }
  const GradedMap& zh = chain_rep(z);
  KMatrix A = zh.component_or_zero(N).aug();
  for (int i = 0; i < Bd.dim; ++i) {
    KVec c = coords_of(N, row_mul(F, Bd.reps.row(i), A));
    for (int r = 0; r < BN.dim; ++r) M.set(r, i, c[r]);
  }
  return M;
}

std::optional<CohClass> CohRing::ideal_member(const CohClass& t, const CohClass& z) const {
  if (t.degree < z.degree)
    throw InputError("PreconditionViolated", "target degree is below the divisor degree");
  int d = t.degree - z.degree;
  KMatrix M = mult_matrix(z, d);
  auto c = M.solve(t.coords);
  if (!c) return std::nullopt;
  return cls(d, *c);
}

std::vector<CohClass> CohRing::annihilator_basis(const CohClass& z, int d) const {
  KMatrix M = mult_matrix(z, d);
  KMatrix K = M.kernel_basis();
  std::vector<CohClass> out;
  out.reserve(K.rows());
  for (int i = 0; i < K.rows(); ++i) out.push_back(cls(d, K.row(i)));
  return out;
}

// --- expression front end ----------------------------------------------------

namespace {

struct ClassParser {
  const CohRing& R;
  const std::string& s;
  size_t i = 0;

  [[noreturn]] void fail(const std::string& expected) const {
    throw InputError("ParseError",
                     "position " + std::to_string(i) + ": expected " + expected);
  }
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  long number() {
    skip();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail("a number");
    long v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i] - '0');
      if (v > 1000000) fail("a smaller number");
      ++i;
    }
    return v;
  }

  CohClass generator(const std::string& name, size_t at) {
    int r = R.dim(1);
    int idx = -1;
    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (size_t k = 1; k < name.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(name[k]))) digits = false;
      if (digits) idx = std::stoi(name.substr(1));
    } else if (name.size() == 1 && r <= 3) {
      if (name == "x") idx = 0;
      else if (name == "y") idx = 1;
      else if (name == "z") idx = 2;
    }
    if (idx < 0 || idx >= r)
      throw InputError("UnknownGenerator", "position " + std::to_string(at) + ": '" + name +
                                               "' does not name a degree-one basis class");
    KVec c(r, 0);
    c[idx] = 1;
    return R.cls(1, c);
  }

  CohClass atom() {
    skip();
    if (i >= s.size()) fail("a scalar, a generator, or '('");
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long v = number();
      const FieldPtr& F = R.res().complex->field();
      return R.scaled(R.one(), static_cast<uint16_t>(v % F->p()));
    }
    if (c == '(') {
      ++i;
      CohClass e = expr();
      if (!eat(')')) fail("')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
      std::string name = s.substr(i, j - i);
      size_t at = i;
      i = j;
      if (name == "a") return R.scaled(R.one(), R.res().complex->field()->gen());
      return generator(name, at);
    }
    fail("a scalar, a generator, or '('");
  }

  CohClass power() {
    CohClass b = atom();
    if (eat('^')) {
      long e = number();
      CohClass v = R.one();
      for (long k = 0; k < e; ++k) v = R.cup(v, b);
      return v;
    }
    return b;
  }

  CohClass term() {
    CohClass v = power();
    while (eat('*')) v = R.cup(v, power());
    return v;
  }

  CohClass expr() {
    CohClass v = term();
    while (eat('+')) v = R.sum(v, term());
    return v;
  }
};

}  // namespace

CohClass CohRing::parse_class(const std::string& expr) const {
  ClassParser p{*this, expr};
  CohClass v = p.expr();
  p.skip();
  if (p.i != expr.size()) p.fail("'+', '*', '^', or end of input");
  return v;
}

}  // namespace coho
