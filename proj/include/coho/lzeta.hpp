#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coho/cohomology.hpp"
#include "coho/resolution.hpp"
#include "coho/verdict.hpp"

namespace coho {

// The one-dimensional module with every group element acting as the identity.
RepModule trivial_module(const FieldPtr& F, const GroupPtr& G);

// n-th syzygy module of k read off a stored minimal resolution: the kernel
// of the previous differential (of the augmentation when n = 1), on its
// canonical rref basis inside P_{n-1}. omega(P, 0) is the trivial module.
// Requires kind "minimal" (NotMinimal) and n <= top-1 (TruncationUnderflow).
RepModule omega(const Resolution& P, int n);

// Kernel of the module map omega(n) -> k induced by a nonzero degree-n class
// z: the canonical cocycle row factors through the syzygy, and the kernel of
// the induced functional is G-stable of dimension dim omega(n) - 1.
RepModule lzeta(const CohRing& R, const CohClass& z);

// Minimal free resolution of an arbitrary module, with the module kept
// alongside; the view's degree-0 model point maps onto the module itself
// (eps columns list the group translates of the chosen generators).
struct ModuleResolution {
  RepModule module;
  Resolution res;

  int top() const { return res.complex->max_deg(); }
};

ModuleResolution module_resolution(const RepModule& M, int D);

// Canonical basis data for one degree of Ext(M, N), computed from the
// Hom-over-kG cochain complex on P(M): a kG-map u out of degree i is the row
// of its generator values in N ((gen j, coord s) -> j*dim(N)+s), u is a
// cocycle iff u * del = 0, and coboundaries are reduced away exactly as in
// the ring's cohomology bases.
struct ExtDeg {
  int dim = 0;
  KMatrix del;      // composition with the next differential, acting on rows
  KMatrix cobound;  // rref rows spanning the coboundaries
  std::vector<int> bpiv;
  KMatrix reps;  // canonical representative rows, one per basis class
  std::vector<int> rpiv;

  // Canonical coordinates of a cocycle row; throws when row is not a cocycle.
  KVec coords(const FieldPtr& F, const KVec& row) const;
};

std::vector<ExtDeg> ext_dims(const ModuleResolution& PM, const RepModule& N, int cap);
std::vector<ExtDeg> ext_dims(const RepModule& M, const RepModule& N, int cap);

// Chain-level bridge between P(M) and P (x) M: the tensor side is free on
// (generator, module basis vector) pairs after untwisting the diagonal
// action, and carries the transferred contraction. Both comparison maps are
// lifts of the identity of M; their composite is checked to be homotopic to
// the identity at construction, never assumed.
class ModuleTransport {
 public:
  ModuleTransport(const CohRing& R, const ModuleResolution& PM, int hi);

  const Resolution& tensor_side() const { return T_; }
  const GradedMap& to_tensor() const { return phi_; }    // P(M) -> P (x) M
  const GradedMap& to_module() const { return psi_; }    // P (x) M -> P(M)

  // Chain self-map of P(M) of degree -deg(z) acting as multiplication by z,
  // transported from the ring's chain representative tensored with id_M.
  GradedMap zeta_hat(const CohClass& z) const;

 private:
  const CohRing& R_;
  const ModuleResolution& PM_;
  int hi_;
  Resolution T_;
  GradedMap phi_, psi_;
};

// Action of a prebuilt degree-(-n) chain self-map of P(M) on canonical Ext
// bases: columns are the coordinates of u_j composed with the source-(i+n)
// component. ext must cover degrees i and i+n.
KMatrix ext_action(const std::vector<ExtDeg>& ext, const RepModule& N, const GradedMap& zh,
                   int i);

// One-stop action matrix Ext^i(M,N) -> Ext^{i+deg z}(M,N); builds the
// resolution of M and the transport internally. N must be M or the trivial
// module for the oracle semantics, but any module over the same group works.
KMatrix zeta_action(const CohRing& R, const CohClass& z, const RepModule& M, const RepModule& N,
                    int i);

// Degree-bounded direct checks of the defining annihilation conditions:
// whether z kills Ext^i(L_z, L_z) (productive) or Ext^i(L_z, k)
// (semi-productive) for all i <= cap - deg z. A nonzero action gives an
// exact No with the acting basis cocycle as witness; otherwise the verdict
// is YesUpToDegree(cap).
Verdict oracle_productive(const CohRing& R, const CohClass& z, int cap);
Verdict oracle_semiproductive(const CohRing& R, const CohClass& z, int cap);

// Feasibility default for the oracle cap on this group/field pair.
int default_oracle_cap(const FieldPtr& F, const GroupPtr& G);

}  // namespace coho
