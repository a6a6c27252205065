#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "coho/group.hpp"

namespace coho {

// Bounded complex of free left kG-modules. Degrees run over a stored window
// [min_deg, max_deg]; diff(d) is the differential out of degree d, and the
// composite of consecutive differentials is checked to vanish at
// construction. Expansions to plain k-matrices are cached per degree.
class ChainComplex {
 public:
  // diffs[t] maps degree min_deg+t+1 to degree min_deg+t.
  ChainComplex(FieldPtr F, GroupPtr G, int min_deg, std::vector<int> ranks,
               std::vector<FreeMap> diffs, bool check_d2 = true);

  const FieldPtr& field() const { return F_; }
  const GroupPtr& group() const { return G_; }
  int min_deg() const { return min_; }
  int max_deg() const { return min_ + static_cast<int>(ranks_.size()) - 1; }
  int rank(int d) const;
  int kdim(int d) const { return rank(d) * G_->order(); }
  bool in_window(int d) const { return d >= min_ && d <= max_deg(); }

  // Differential out of degree d; valid for min_deg < d <= max_deg.
  const FreeMap& diff(int d) const;
  const KMatrix& diff_k(int d) const;
  // Differential applied to a k-vector at degree d; zero map at/below min.
  KVec apply_diff(int d, const KVec& x) const;

 private:
  FieldPtr F_;
  GroupPtr G_;
  int min_ = 0;
  std::vector<int> ranks_;
  std::vector<FreeMap> diffs_;
  mutable std::vector<std::optional<KMatrix>> diff_k_;
};

using ComplexPtr = std::shared_ptr<const ChainComplex>;

// Graded kG-linear map f: C -> D of fixed degree: component at source degree
// d maps C_d -> D_{d+deg}. Missing components are zero. A chain map is a
// graded map whose defect d_D f - (-1)^deg f d_C vanishes.
struct GradedMap {
  ComplexPtr src, dst;
  int deg = 0;
  std::map<int, FreeMap> comp;

  GradedMap() = default;
  GradedMap(ComplexPtr s, ComplexPtr d, int degree) : src(std::move(s)), dst(std::move(d)), deg(degree) {}

  const FreeMap* at(int d) const;
  FreeMap component_or_zero(int d) const;  // materialized with correct shape
  void set(int d, FreeMap f);
  bool is_zero() const;

  GradedMap operator+(const GradedMap& o) const;
  GradedMap operator-(const GradedMap& o) const;
  GradedMap scaled(uint16_t s) const;
  GradedMap after(const GradedMap& inner) const;  // plain composition, no sign

  // d_D f - (-1)^deg f d_C, evaluated at every source degree where the
  // result lands inside the stored windows.
  GradedMap defect() const;
  bool is_chain_map() const { return defect().is_zero(); }

  // Keep only components at source degrees in [lo, hi].
  GradedMap restrict_window(int lo, int hi) const;

  // Apply the kG-linear extension to a k-vector at source degree d.
  KVec apply(int d, const KVec& x) const;
};

// Validated chain-map constructor: throws NotAChainMap when the defect is
// nonzero.
GradedMap make_chain_map(ComplexPtr src, ComplexPtr dst, int deg, std::map<int, FreeMap> comp);

GradedMap identity_map(const ComplexPtr& C);

// --- basic constructions ---------------------------------------------------

// Suspension: (shift(C,n))_d = C_{d-n}, differential scaled by (-1)^n.
ComplexPtr shift(const ComplexPtr& C, int n);
GradedMap shift_map(const GradedMap& f, int n, ComplexPtr ssrc, ComplexPtr sdst);

// Hard truncation keeping degrees >= k.
ComplexPtr truncate(const ComplexPtr& C, int k);

// Tensor product over k with diagonal G-action; free on e_a (x) h e_b.
struct TensorBlock {
  int i = 0, j = 0;   // factor degrees, i + j = total
  int off = 0;        // first free-generator index of this block
  int ri = 0, rj = 0; // factor ranks
};

class TensorComplex {
 public:
  ComplexPtr C;             // the tensor complex itself
  ComplexPtr left, right;   // factors

  const std::vector<TensorBlock>& blocks(int n) const;
  // Free generator e_a (x) h e_b inside block b of total degree n.
  int gen_index(const TensorBlock& b, int a, int bb, int h) const;
  // k-coordinate pairing: tensor k-index at total degree n for the pure
  // tensor (g e_a) (x) (g' e_b) in block blk.
  int k_index(const TensorBlock& blk, int a, int g, int b, int gp) const;

  // Extract/accumulate the block component of a degree-n k-vector as a
  // (left kdim at i) x (right kdim at j) matrix X[(a,g)][(b,g')].
  KMatrix block_matrix(int n, const TensorBlock& blk, const KVec& x) const;
  void add_block_matrix(int n, const TensorBlock& blk, const KMatrix& X, KVec& x) const;

  std::map<int, std::vector<TensorBlock>> layout;
};

// Tensor product of stored windows, exact through total degree cap. Throws
// TruncationUnderflow when cap exceeds what the stored factor windows
// determine.
TensorComplex tensor(const ComplexPtr& A, const ComplexPtr& B, int cap);

// f x g on tensor complexes, with the Koszul sign (-1)^{|x| deg g} on the
// block at left degree |x|.
GradedMap cross(const GradedMap& f, const GradedMap& g, const TensorComplex& src,
                const TensorComplex& dst);

// The symmetry x (x) y -> (-1)^{|x||y|} y (x) x as a chain map.
GradedMap transposition(const TensorComplex& CD, const TensorComplex& DC);

// Residual of the homotopy equation d H - (-1)^{deg f + 1} H d = f - g.
GradedMap homotopy_defect(const GradedMap& H, const GradedMap& f, const GradedMap& g);

// Global solver for the same equation, over the window [lo, hi] of source
// degrees (H vanishes outside). Equations are imposed at every source degree
// in the window; absence means the full linear system is inconsistent.
std::optional<GradedMap> find_homotopy_global(const GradedMap& f, const GradedMap& g, int lo, int hi);

// --- homology ---------------------------------------------------------------

struct HomologyData {
  int dim = 0;
  KMatrix cycle_reps;  // rows: representative cycles, reduced canonical form
  RepModule action;    // induced G-action on homology
};

HomologyData homology(const ChainComplex& C, int d);

// --- extensions (two-term total complexes) ----------------------------------

struct Extension {
  ComplexPtr total;      // E_d = A_d + C_d, A block first
  ComplexPtr A, Cpart;
  GradedMap alpha;       // degree -1 chain map C -> A used for the glue
  GradedMap incl_A;      // A -> E
  GradedMap proj_C;      // E -> C
};

// Total complex of the degree -1 chain map alpha: C -> A, with differential
// [[d_A, alpha], [0, d_C]]. Throws NotAChainMap when alpha fails
// d alpha + alpha d = 0.
Extension extension_total(const ComplexPtr& A, const ComplexPtr& C, const GradedMap& alpha);

// Read the glue map back off a total complex built as above.
GradedMap extension_class(const Extension& E);

// Lift f: X -> C through the extension: find degree-0 data H: X -> A with
// -dH + Hd = alpha f, i.e. the block map (H, f): X -> E is a chain map.
// Absent when the linear system is inconsistent.
std::optional<GradedMap> lifting_obstruction(const Extension& E, const GradedMap& f, int lo, int hi);

struct RotatedExtension {
  ComplexPtr total;   // C_{d+1} + A_d + C_d
  GradedMap j;        // A -> total
  GradedMap q;        // total -> A, q(c1, a, c2) = a - alpha(c1)
  GradedMap H;        // degree +1, dH + Hd = id - j q exactly
};

RotatedExtension extension_rotate(const Extension& E);

// Decide whether a chain map phi: E -> D of degree t that vanishes on the A
// block is null-homotopic. Writing phi2: C -> D for its C-part (a chain map of
// degree t), this happens exactly when phi2 divides through the glue up to
// homotopy: phi2 - u alpha = d K - (-1)^{t+1} K d for some chain map
// u: A -> D of degree t+1. One joint linear solve for (u, K) over the window;
// throws PreconditionViolated when phi does not vanish on the A block.
struct FactorDecision {
  bool factors = false;
  GradedMap u;  // chain map A -> D of degree t+1 (defined when factors)
  GradedMap K;  // homotopy C -> D witnessing phi2 - u alpha = defect(K)
};

FactorDecision factor_decision(const Extension& E, const GradedMap& phi, int lo, int hi);

// Given phi: E -> D whose A-part is null-homotopic via H: A -> D (that is,
// phi o incl_A = d H - (-1)^{deg H} H d), return the C-part of the homotopic
// map that vanishes on the A block: phi2' = phi2 + (-1)^{deg H} H alpha.
GradedMap kill_off_part(const Extension& E, const GradedMap& phi, const GradedMap& H);

}  // namespace coho
