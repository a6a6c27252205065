#pragma once
// Two-block sphere complexes glued along a cohomology class, their tensor
// squares, comultiplication candidates, and the degree -1 obstruction that
// decides whether the candidate extends over the top tensor block. The
// pipeline runs: build_p_zeta -> build_p_zeta_plus -> build_psi ->
// obstruction / lift_comultiplication, all truncated to an explicit window.

#include <string>

#include "coho/cohomology.hpp"
#include "coho/complex.hpp"
#include "coho/view.hpp"

namespace coho {

// The two-block complex attached to a nonzero class z of degree n: the top
// block Q carries the resolution's data placed n-1 degrees higher with the
// differentials kept as stored, the bottom block is the resolution cut at the
// window top, and the glue is the sign-twisted chain representative of z.
// Homologically a sphere: H_0 = k and H_{n-1} = k (one k^2 in degree 0 when
// n = 1), nothing else through window-1.
struct PolarizedSphereComplex {
  Extension E;        // total complex; A block = top copy Q, C block = bottom P
  GradedMap alpha;    // glue P -> Q, degree -1, anticommutes with the diffs
  CohClass zclass;    // the class the complex was glued along
  int n = 0;          // degree of the class
  int window = 0;     // top stored degree; every later stage works below it
  ViewPtr qview, pview;  // contractions on the blocks (transferred verbatim)
  ViewPtr tview;         // contraction on the glued total
};

// The tensor square of the sphere complex, assembled as iterated two-block
// extensions: inner = (P(x)Q over P(x)P), outer stacks Q(x)P on top of inner,
// and big glues the remaining Q(x)Q block onto outer. The glue maps are the
// factorwise images of alpha, so big's validated differential reproduces the
// square of the sphere differential exactly.
struct SphereSquare {
  TensorComplex QQ, QP, PQ, PP;
  ViewPtr vqq, vqp;   // contractions used by the homotopy searches
  Extension inner;    // P(x)Q over P(x)P, glue id x alpha
  Extension outer;    // Q(x)P over inner: the three-block lower-left part
  GradedMap eta;      // outer -> Q(x)Q, degree -1: [id x alpha, alpha x id, 0]
  Extension big;      // Q(x)Q over outer: the full square
};

// A comultiplication candidate psi: sphere -> outer, stored with the data
// that certifies it blockwise: the diagonal on the bottom block, its two
// re-graded copies on the top block, the homotopies tying them to the glue,
// and the commutation homotopy for the diagonal. The normalization
// correction hp is identically zero for the constructed choice.
struct PsiData {
  GradedMap psi;     // degree-0 chain map through window-1
  GradedMap delta;   // bottom diagonal P -> P(x)P
  GradedMap delta1;  // top diagonal Q -> Q(x)P (right-degree sign twist)
  GradedMap delta2;  // transposed top diagonal Q -> P(x)Q
  GradedMap h1;      // d h1 - h1 d = delta1 alpha - (alpha x id) delta
  GradedMap h2;      // d h2 - h2 d = delta2 alpha - (id x alpha) delta
  GradedMap cup1;    // X with d X + X d = delta - T delta on the window
  GradedMap hp;      // correction with h2 - T h1 = hp alpha + (id x alpha) X
};

// Outcome of the obstruction decision for eta psi. When the top-block
// restriction admits no null-homotopy (odd characteristic with n odd), the
// verdict is already negative and no residue class is defined; both residue
// fields are then left empty and the note says so.
struct ObstructionReport {
  bool vanishes = false;
  bool top_part_trivial = false;  // the restriction to Q was null-homotopic
  CohClass residue;               // bottom-block residue, reduced mod (z)
  CohClass direct_residue;        // closed-form residue, reduced mod (z)
  GradedMap u;  // factorization witness through alpha (when vanishes)
  GradedMap K;  // homotopy witness alongside u (when vanishes)
  std::string note;
};

// The lifted comultiplication on the full square and its counit witnesses.
struct Comultiplication {
  GradedMap lift;      // sphere -> big total, degree 0; projects back to psi
  GradedMap counit_r;  // homotopy: (id x eps) lift ~ id on the sphere
  GradedMap counit_l;  // homotopy: (eps x id) lift ~ id on the sphere
};

// Two obstruction runs whose homotopy choices differ by independent
// null-homotopic shifts; verdicts and reduced residues must agree.
struct ChoiceReport {
  ObstructionReport base, perturbed;
  bool verdicts_match = false;
  bool residues_match = false;
};

class Postnikov {
 public:
  // A nonzero seed regenerates every homotopy chosen by this instance with an
  // independent null-homotopic shift; decisions and reduced residues are
  // unaffected by construction.
  explicit Postnikov(const CohRing& R, unsigned seed = 0) : R_(R), seed_(seed) {}

  // window < 0 selects the default 2n+2. The window must satisfy
  // 2n+1 <= window <= stored resolution top, so the residue degree 2n-1
  // stays strictly inside the verified range.
  PolarizedSphereComplex build_p_zeta(const CohClass& z, int window = -1) const;
  SphereSquare build_p_zeta_plus(const PolarizedSphereComplex& S) const;
  PsiData build_psi(const PolarizedSphereComplex& S, const SphereSquare& T) const;
  ObstructionReport obstruction(const PolarizedSphereComplex& S, const SphereSquare& T,
                                const PsiData& D) const;
  Comultiplication lift_comultiplication(const PolarizedSphereComplex& S, const SphereSquare& T,
                                         const PsiData& D) const;
  // Runs the pipeline twice, seed 0 against a perturbing seed, and checks
  // that the verdict and the reduced residue agree.
  ChoiceReport choice_independence_check(const CohClass& z, int window = -1) const;

  const CohRing& ring() const { return R_; }

 private:
  const CohRing& R_;
  unsigned seed_ = 0;
};

}  // namespace coho
