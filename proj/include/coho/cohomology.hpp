#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coho/resolution.hpp"

namespace coho {

// A cohomology class: canonical-basis coordinates plus a representing
// functional on the degree-n generators (a row that kills the image of the
// next differential at the augmentation level).
struct CohClass {
  int degree = 0;
  KVec coords;
  KVec cocycle;

  bool is_zero() const {
    for (uint16_t c : coords)
      if (c) return false;
    return true;
  }
};

// Cocycle/coboundary data of one degree with the canonical quotient basis:
// representatives are the rref of cocycle rows reduced modulo coboundaries,
// so coordinates are reproducible across runs.
struct CohBasis {
  int degree = 0;
  int dim = 0;
  KMatrix del;  // augmented next differential; u is a cocycle iff u*del = 0
  KMatrix cobound;  // rref rows spanning the coboundary functionals
  std::vector<int> bpiv;
  KMatrix reps;  // dim rows of canonical representative cocycles
  std::vector<int> rpiv;
};

// The cohomology of a group through the resolution's stored range: bases,
// products, chain-map representatives, division, annihilators, and a small
// expression front end. A nonzero seed regenerates the diagonal by a
// null-homotopic perturbation; all class-level answers are unchanged.
class CohRing {
 public:
  explicit CohRing(Resolution P, unsigned seed = 0);

  const Resolution& res() const { return P_; }
  int top() const { return P_.top(); }
  unsigned seed() const { return seed_; }

  const CohBasis& basis(int n) const;
  int dim(int n) const { return basis(n).dim; }

  CohClass cls(int n, const KVec& coords) const;
  CohClass from_cocycle(int n, const KVec& row) const;
  CohClass zero(int n) const;
  CohClass one() const;
  CohClass sum(const CohClass& a, const CohClass& b) const;
  CohClass scaled(const CohClass& a, uint16_t c) const;
  bool equal(const CohClass& a, const CohClass& b) const;

  // Chain map P -> P of degree -n whose augmentation level at source degree
  // n is the class's cocycle row. Cached per cocycle.
  const GradedMap& chain_rep(const CohClass& z) const;

  // The diagonal approximation used for products; cached, seed-perturbed.
  const Diagonal& diag() const;

  // Product of classes: the composite of chain representatives, checked
  // against the diagonal pairing on the matching block.
  CohClass cup(const CohClass& x, const CohClass& y) const;

  // Multiplication by z as a matrix on canonical coordinates H^d -> H^{d+n}.
  KMatrix mult_matrix(const CohClass& z, int d) const;

  // Solve u * z = t in a single degree; exact decision.
  std::optional<CohClass> ideal_member(const CohClass& t, const CohClass& z) const;

  // Basis of the degree-d kernel of multiplication by z.
  std::vector<CohClass> annihilator_basis(const CohClass& z, int d) const;

  // Expressions in +, *, ^ over degree-one generators (x0.., aliases x,y,z)
  // and scalars (digits are prime-subfield values, 'a' is the field
  // generator). The result must be homogeneous.
  CohClass parse_class(const std::string& expr) const;

 private:
  KVec coords_of(int n, const KVec& row) const;
  KVec pair_with_diag(const CohClass& x, const CohClass& y) const;

  Resolution P_;
  unsigned seed_ = 0;
  mutable std::map<int, CohBasis> bases_;
  mutable std::optional<Diagonal> diag_;
  mutable std::map<std::pair<int, KVec>, GradedMap> reps_;
};

}  // namespace coho
