#pragma once

#include <memory>
#include <string>
#include <vector>

#include "coho/kmatrix.hpp"

namespace coho {

// Finite group given by its full multiplication table (indices 0..n-1).
// Construction validates the table: Latin square, identity, associativity.
class Group {
 public:
  static std::shared_ptr<const Group> from_table(const std::vector<std::vector<int>>& table,
                                                 std::string name = "custom");
  static std::shared_ptr<const Group> preset(const std::string& name);
  static std::shared_ptr<const Group> from_json_file(const std::string& path);

  int order() const { return n_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  int identity() const { return e_; }
  const std::string& name() const { return name_; }
  bool is_p_group(int p) const;
  // Structural equality: same order and identical multiplication table.
  bool same(const Group& o) const { return n_ == o.n_ && table_ == o.table_; }

 private:
  Group() = default;
  int n_ = 0;
  int e_ = 0;
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
  std::string name_;
};

using GroupPtr = std::shared_ptr<const Group>;

// Element of the group algebra kG: coefficient vector indexed by group element.
struct AlgebraElem {
  FieldPtr F;
  GroupPtr G;
  KVec c;

  AlgebraElem() = default;
  AlgebraElem(FieldPtr f, GroupPtr g) : F(std::move(f)), G(std::move(g)), c(G->order(), 0) {}
  static AlgebraElem unit(const FieldPtr& F, const GroupPtr& G);      // 1 * e
  static AlgebraElem of(const FieldPtr& F, const GroupPtr& G, int g);  // 1 * g

  bool is_zero() const;
  uint16_t aug() const;  // sum of coefficients
  AlgebraElem operator+(const AlgebraElem& o) const;
  AlgebraElem operator-(const AlgebraElem& o) const;
  AlgebraElem scaled(uint16_t s) const;
  bool operator==(const AlgebraElem& o) const { return c == o.c; }
};

// Convolution product in kG.
AlgebraElem algebra_mul(const AlgebraElem& a, const AlgebraElem& b);

// Map of free left kG-modules, given by a dst_rank x src_rank grid of kG
// entries: f(e_j) = sum_i entry(i,j) * e_i.
class FreeMap {
 public:
  FreeMap() = default;
  FreeMap(FieldPtr F, GroupPtr G, int dst_rank, int src_rank);
  static FreeMap identity(const FieldPtr& F, const GroupPtr& G, int rank);

  const FieldPtr& field() const { return F_; }
  const GroupPtr& group() const { return G_; }
  int src_rank() const { return src_; }
  int dst_rank() const { return dst_; }

  uint16_t coeff(int i, int j, int g) const { return data_[idx(i, j, g)]; }
  void set_coeff(int i, int j, int g, uint16_t v) { data_[idx(i, j, g)] = v; }
  void add_coeff(int i, int j, int g, uint16_t v);
  AlgebraElem entry(int i, int j) const;
  void set_entry(int i, int j, const AlgebraElem& a);

  bool is_zero() const;
  bool operator==(const FreeMap& o) const;
  FreeMap operator+(const FreeMap& o) const;
  FreeMap operator-(const FreeMap& o) const;
  FreeMap scaled(uint16_t s) const;
  FreeMap after(const FreeMap& f) const;  // (*this) composed after f

  // Matrix of the map on underlying k-vector spaces, in the k-basis
  // (generator i, group element g) -> flat index i*|G| + g.
  KMatrix to_k() const;
  KMatrix aug() const;  // dst x src matrix of augmented entries

  void set_block(int i0, int j0, const FreeMap& S);
  FreeMap block(int i0, int j0, int ni, int nj) const;

  // Value on the j-th free generator as a k-vector of the target module
  // (coordinates (i, g) -> i*|G| + g).
  KVec gen_column(int j) const;
  void set_gen_column(int j, const KVec& v);
  void add_gen_column(int j, const KVec& v);

 private:
  size_t idx(int i, int j, int g) const {
    return (static_cast<size_t>(i) * src_ + j) * ng_ + g;
  }
  FieldPtr F_;
  GroupPtr G_;
  int dst_ = 0, src_ = 0, ng_ = 0;
  KVec data_;
};

KMatrix freemap_to_k(const FreeMap& f);

// Finite-dimensional k-linear representation: one invertible matrix per group
// element, multiplicative on the nose.
struct RepModule {
  FieldPtr F;
  GroupPtr G;
  int dim = 0;
  std::vector<KMatrix> act;  // indexed by group element

  RepModule() = default;
  RepModule(FieldPtr F, GroupPtr G, std::vector<KMatrix> act);
};

enum class SubmoduleKind { Kernel, Image };

// The kernel or image of a free-module map, as a representation: the ambient
// G-action permutes the k-basis (i, g) -> (i, hg) and must restrict.
RepModule submodule_as_rep(const FreeMap& f, SubmoduleKind kind);

}  // namespace coho
