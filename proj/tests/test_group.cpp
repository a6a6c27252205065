#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <functional>
#include <random>

#include "coho/group.hpp"

using namespace coho;

namespace {

const FieldPtr F2 = Field::parse("2");
const FieldPtr F3 = Field::parse("3");
const FieldPtr F4 = Field::parse("2^2:1,1,1");

FreeMap random_freemap(const FieldPtr& F, const GroupPtr& G, int dst, int src, uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(0, F->q() - 1);
  FreeMap f(F, G, dst, src);
  for (int i = 0; i < dst; ++i)
    for (int j = 0; j < src; ++j)
      for (int g = 0; g < G->order(); ++g)
        f.set_coeff(i, j, g, static_cast<uint16_t>(dist(rng)));
  return f;
}

std::string error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("cyclic presets") {
  for (auto [name, n] : std::initializer_list<std::pair<const char*, int>>{
           {"C2", 2}, {"C3", 3}, {"C4", 4}, {"C8", 8}}) {
    GroupPtr G = Group::preset(name);
    CHECK(G->order() == n);
    CHECK(G->identity() == 0);
    CHECK(G->mul(1, n - 1) == 0);
    CHECK(G->inv(1) == n - 1);
  }
  GroupPtr V = Group::preset("C2xC2");
  CHECK(V->order() == 4);
  for (int a = 0; a < 4; ++a) CHECK(V->mul(a, a) == 0);
  CHECK(Group::preset("C2xC2xC2")->order() == 8);
}

TEST_CASE("quaternion preset") {
  // indices: 0=1, 1=-1, 2=i, 3=-i, 4=j, 5=-j, 6=k, 7=-k
  GroupPtr Q = Group::preset("Q8");
  CHECK(Q->order() == 8);
  CHECK(Q->identity() == 0);
  CHECK(Q->mul(2, 2) == 1);   // i*i = -1
  CHECK(Q->mul(4, 4) == 1);   // j*j = -1
  CHECK(Q->mul(6, 6) == 1);   // k*k = -1
  CHECK(Q->mul(2, 4) == 6);   // i*j = k
  CHECK(Q->mul(4, 2) == 7);   // j*i = -k
  CHECK(Q->mul(4, 6) == 2);   // j*k = i
  CHECK(Q->mul(6, 2) == 4);   // k*i = j
  CHECK(Q->inv(2) == 3);      // i^{-1} = -i
  CHECK(Q->mul(1, 1) == 0);   // (-1)^2 = 1
  CHECK(Q->is_p_group(2));
  CHECK_FALSE(Q->is_p_group(3));
}

TEST_CASE("dihedral preset") {
  // indices: r^i s^j -> i + 4j
  GroupPtr D = Group::preset("D8");
  CHECK(D->order() == 8);
  int r = 1, s = 4;
  CHECK(D->mul(r, r) == 2);
  CHECK(D->mul(D->mul(r, r), D->mul(r, r)) == 0);  // r^4 = e
  CHECK(D->mul(s, s) == 0);                        // s^2 = e
  // s r s^{-1} = r^{-1}
  CHECK(D->mul(D->mul(s, r), s) == D->inv(r));
  CHECK(D->is_p_group(2));
}

TEST_CASE("table validation errors") {
  CHECK(error_code([] { Group::preset("S5"); }) == "UnknownPreset");
  CHECK(error_code([] { Group::from_table({{0, 1}, {1, 1}}); }) == "NotLatinSquare");
  CHECK(error_code([] { Group::from_table({{0, 2}, {1, 0}}); }) == "NotLatinSquare");
  CHECK(error_code([] { Group::from_table({{0, 1}}); }) == "NotLatinSquare");  // not square
  // Latin square with no two-sided identity
  CHECK(error_code([] {
          Group::from_table({{1, 0, 2}, {0, 2, 1}, {2, 1, 0}});
        }) == "NoIdentity");
  // Latin square with identity 0 that is not associative: (1*1)*2 != 1*(1*2)
  CHECK(error_code([] {
          Group::from_table({{0, 1, 2, 3, 4},
                             {1, 0, 3, 4, 2},
                             {2, 3, 4, 0, 1},
                             {3, 4, 1, 2, 0},
                             {4, 2, 0, 1, 3}});
        }) == "NonAssociative");
  CHECK(error_code([] { Group::from_table({}); }) == "UnsupportedGroup");
}

TEST_CASE("json group file round trip") {
  GroupPtr C3 = Group::preset("C3");
  const char* path = "c3_group_test.json";
  {
    std::ofstream out(path);
    out << "{\"order\": 3, \"table\": [[0,1,2],[1,2,0],[2,0,1]]}\n";
  }
  GroupPtr G = Group::from_json_file(path);
  CHECK(G->order() == 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(G->mul(a, b) == C3->mul(a, b));
  {
    std::ofstream out(path);
    out << "{\"order\": 3}\n";
  }
  CHECK(error_code([&] { Group::from_json_file(path); }) == "BadGroupFile");
  {
    std::ofstream out(path);
    out << "this is not json\n";
  }
  CHECK(error_code([&] { Group::from_json_file(path); }) == "BadGroupFile");
  CHECK(error_code([] { Group::from_json_file("no_such_file_here.json"); }) == "BadGroupFile");
  std::remove(path);
}

TEST_CASE("group algebra arithmetic") {
  GroupPtr C2 = Group::preset("C2");
  AlgebraElem one = AlgebraElem::unit(F2, C2);
  AlgebraElem t = AlgebraElem::of(F2, C2, 1);
  AlgebraElem n = one + t;  // 1 + t
  CHECK(algebra_mul(t, t) == one);            // t^2 = 1
  CHECK(algebra_mul(n, n).is_zero());         // (1+t)^2 = 0 over GF(2)
  CHECK(n.aug() == 0);
  CHECK(one.aug() == 1);

  GroupPtr C3 = Group::preset("C3");
  AlgebraElem u = AlgebraElem::of(F3, C3, 1) - AlgebraElem::unit(F3, C3);  // t - 1
  AlgebraElem norm = AlgebraElem::unit(F3, C3) + AlgebraElem::of(F3, C3, 1) +
                     AlgebraElem::of(F3, C3, 2);
  CHECK(algebra_mul(u, norm).is_zero());
  CHECK(algebra_mul(norm, u).is_zero());
  // (t-1)^3 = t^3 - 3t^2 + 3t - 1 = 0 over GF(3)
  CHECK(algebra_mul(u, algebra_mul(u, u)).is_zero());
  CHECK_FALSE(algebra_mul(u, u).is_zero());

  // noncommutative sanity in kQ8
  GroupPtr Q = Group::preset("Q8");
  AlgebraElem i_el = AlgebraElem::of(F2, Q, 2), j_el = AlgebraElem::of(F2, Q, 4);
  CHECK(algebra_mul(i_el, j_el) == AlgebraElem::of(F2, Q, 6));
  CHECK(algebra_mul(j_el, i_el) == AlgebraElem::of(F2, Q, 7));
}

TEST_CASE("free map composition is functorial under expansion") {
  struct Case {
    FieldPtr F;
    GroupPtr G;
  };
  const Case cases[] = {
      {F2, Group::preset("Q8")},
      {F3, Group::preset("C3")},
      {F4, Group::preset("D8")},
      {F3, Group::preset("C2xC2")},
  };
  uint32_t seed = 100;
  for (const Case& cs : cases) {
    CAPTURE(cs.G->name());
    for (int trial = 0; trial < 3; ++trial) {
      FreeMap f = random_freemap(cs.F, cs.G, 3, 2, seed++);
      FreeMap g = random_freemap(cs.F, cs.G, 2, 3, seed++);
      FreeMap gf = g.after(f);
      CHECK(gf.to_k() == g.to_k().mul(f.to_k()));
      // aug is multiplicative on composition as well
      CHECK(gf.aug() == g.aug().mul(f.aug()));
    }
  }
}

TEST_CASE("free map identities and block access") {
  GroupPtr Q = Group::preset("Q8");
  FreeMap id = FreeMap::identity(F4, Q, 3);
  FreeMap f = random_freemap(F4, Q, 3, 3, 777);
  CHECK(id.after(f) == f);
  CHECK(f.after(id) == f);
  CHECK((f - f).is_zero());
  CHECK((f + f).is_zero());  // characteristic 2
  const uint16_t a = F4->gen();
  // a + a^2 = 1 in GF(4), so the scaled sum recovers f
  CHECK(f.scaled(a) + f.scaled(F4->mul(a, a)) == f);
  // gen_column round trip, with doubling visible over GF(3)
  GroupPtr C3 = Group::preset("C3");
  FreeMap f3 = random_freemap(F3, C3, 3, 3, 778);
  KVec col = f3.gen_column(1);
  FreeMap g(F3, C3, 3, 3);
  g.set_gen_column(1, col);
  for (int i = 0; i < 3; ++i) CHECK(g.entry(i, 1) == f3.entry(i, 1));
  g.add_gen_column(1, col);
  CHECK(g.block(0, 1, 3, 1) == f3.block(0, 1, 3, 1).scaled(2));
  CHECK(g.entry(0, 0).is_zero());
  // block/set_block round trip
  FreeMap blk = f.block(1, 1, 2, 2);
  FreeMap h(F4, Q, 3, 3);
  h.set_block(1, 1, blk);
  CHECK(h.block(1, 1, 2, 2) == blk);
  CHECK(h.entry(0, 0).is_zero());
}

TEST_CASE("augmentation kernel as a representation") {
  GroupPtr C2 = Group::preset("C2");
  // augmentation as a free map kG -> kG would not be kG-linear onto the trivial
  // module; instead take the kernel of multiplication by (1+t): kG -> kG,
  // which equals span(1+t) = ker(aug) over GF(2).
  FreeMap mul_n(F2, C2, 1, 1);
  mul_n.set_coeff(0, 0, 0, 1);
  mul_n.set_coeff(0, 0, 1, 1);
  RepModule K = submodule_as_rep(mul_n, SubmoduleKind::Kernel);
  CHECK(K.dim == 1);
  // the action on the kernel is trivial
  CHECK(K.act[0] == KMatrix::identity(F2, 1));
  CHECK(K.act[1] == KMatrix::identity(F2, 1));
  RepModule I = submodule_as_rep(mul_n, SubmoduleKind::Image);
  CHECK(I.dim == 1);
  CHECK(I.act[1] == KMatrix::identity(F2, 1));
}

TEST_CASE("representation constructor validates multiplicativity") {
  GroupPtr C2 = Group::preset("C2");
  std::vector<KMatrix> act{KMatrix::identity(F3, 1), KMatrix::identity(F3, 1)};
  act[1].set(0, 0, 2);  // t acts by -1: valid since (-1)^2 = 1
  RepModule ok(F3, C2, act);
  CHECK(ok.dim == 1);
  std::vector<KMatrix> bad{KMatrix::identity(F3, 1), KMatrix::identity(F3, 1)};
  bad[0].set(0, 0, 2);  // identity must act as the identity
  CHECK_THROWS_AS(RepModule(F3, C2, bad), Error);
}
