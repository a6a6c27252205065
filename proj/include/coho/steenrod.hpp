#pragma once
// Cup-1 structure on a resolution: the homotopy between the diagonal and its
// transpose, the semilinear top square it induces, triple Massey products
// with indeterminacy, and the productive / semi-productive classifiers.

#include <optional>
#include <vector>

#include "coho/cohomology.hpp"
#include "coho/lzeta.hpp"
#include "coho/verdict.hpp"

namespace coho {

// A triple-product representative together with an echelon basis of its
// indeterminacy span in canonical coordinates of the target degree.
struct MasseyTriple {
  CohClass rep;
  KMatrix indet;
  std::vector<int> jpiv;
};

// Does the coordinate row lie in the indeterminacy span?
bool in_indeterminacy(const MasseyTriple& T, const KVec& coords);

// Canonical residue representative of t modulo the principal ideal (z).
CohClass reduce_mod_ideal(const CohRing& R, const CohClass& t, const CohClass& z);

class Steenrod {
 public:
  // A nonzero seed regenerates every homotopy choice made here by a random
  // null-homotopic shift; all published classes must be invariant under it.
  explicit Steenrod(const CohRing& R, unsigned seed = 0) : R_(R), seed_(seed) {}

  // Degree +1 homotopy H into the tensor square with dH + Hd = diag - T diag
  // (signs as stated in characteristic 2), exact through the stored range.
  const GradedMap& cup1_homotopy() const;

  // The top square of an n-class: the degree 2n-1 class pairing the class
  // with itself through the cup-1 homotopy. Semilinear: scaling the input by
  // c scales the output by c^2. Characteristic 2 only.
  CohClass sq_top_minus_one(const CohClass& z) const;

  // Triple product <u, v, w>: representative plus indeterminacy basis.
  // Requires uv = 0 and vw = 0.
  MasseyTriple massey_triple(const CohClass& u, const CohClass& v, const CohClass& w) const;

  // Residue of <z, v, z> modulo (z); the indeterminacy dies in the quotient,
  // so this is well-defined on the nose. Requires vz = zv = 0.
  CohClass massey_mu(const CohClass& z, const CohClass& v) const;

  // Does the class admit products with everything it annihilates?
  // Characteristic 2 decides exactly via the top square; odd characteristic
  // answers Yes for even degrees and falls back to the module oracle (capped)
  // for odd ones.
  Verdict is_productive(const CohClass& z, int cap) const;

  // Does every annihilator of the class multiply its top square into (z)?
  // Checked degree by degree through the cap; No is exact with a witness.
  // Characteristic 2 only.
  Verdict is_semiproductive(const CohClass& z, int cap) const;

  const CohRing& ring() const { return R_; }

 private:
  const CohRing& R_;
  unsigned seed_ = 0;
  mutable std::optional<GradedMap> h1_;
};

}  // namespace coho
