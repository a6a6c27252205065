// Cohomology rings: canonical bases, products by two independent routes,
// chain-map representatives, division, annihilators, and the expression
// parser.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "coho/cohomology.hpp"
#include "coho/view.hpp"

using namespace coho;

namespace {

const FieldPtr F2 = Field::parse("2");
const FieldPtr F3 = Field::parse("3");
const FieldPtr F4 = Field::parse("2^2:1,1,1");

std::string error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

GroupPtr c3xc3() {
  std::vector<std::vector<int>> t(9, std::vector<int>(9));
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) t[a][b] = 3 * ((a / 3 + b / 3) % 3) + (a % 3 + b % 3) % 3;
  return Group::from_table(t, "C3xC3");
}

KVec rand_coords(std::mt19937& rng, int dim, int q) {
  KVec c(dim, 0);
  for (auto& v : c) v = static_cast<uint16_t>(rng() % static_cast<unsigned>(q));
  return c;
}

}  // namespace

TEST_CASE("basis dimensions and range guards") {
  CohRing R(minimal_resolution(F2, Group::preset("C2xC2"), 9));
  CHECK(R.dim(0) == 1);
  CHECK(R.dim(1) == 2);
  CHECK(R.dim(4) == 5);
  for (int n = 0; n <= 8; ++n) CHECK(R.dim(n) == n + 1);
  CHECK(error_code([&] { R.basis(9); }) == "TruncationUnderflow");
  CHECK(error_code([&] { R.basis(-1); }) == "TruncationUnderflow");

  CohRing Q(minimal_resolution(F2, Group::preset("Q8"), 7));
  std::vector<int> want = {1, 2, 2, 1, 1, 2, 2};
  for (int n = 0; n <= 6; ++n) CHECK(Q.dim(n) == want[n]);
}

TEST_CASE("bar and minimal dimensions agree") {
  for (const char* name : {"C2", "C2xC2"}) {
    CohRing Rb(bar_resolution(F2, Group::preset(name), 4));
    CohRing Rm(minimal_resolution(F2, Group::preset(name), 4));
    for (int n = 0; n <= 3; ++n) CHECK(Rb.dim(n) == Rm.dim(n));
  }
  CohRing Rb(bar_resolution(F3, Group::preset("C3"), 4));
  CohRing Rm(minimal_resolution(F3, Group::preset("C3"), 4));
  for (int n = 0; n <= 3; ++n) {
    CHECK(Rb.dim(n) == 1);
    CHECK(Rm.dim(n) == 1);
  }
}

TEST_CASE("classes round-trip between coordinates and cocycles") {
  CohRing R(minimal_resolution(F2, Group::preset("C2xC2"), 5));
  CohClass x = R.cls(1, {1, 0});
  CohClass y = R.cls(1, {0, 1});
  CHECK(R.from_cocycle(1, x.cocycle).coords == x.coords);
  CHECK(R.equal(R.sum(x, y), R.parse_class("x + y")));
  CHECK(R.zero(3).is_zero());
  CHECK_FALSE(x.is_zero());

  // Representative chain map: zero defect, and its augmentation level at the
  // class degree is the cocycle row itself.
  const GradedMap& f = R.chain_rep(x);
  CHECK(f.deg == -1);
  CHECK(f.is_chain_map());
  KMatrix a = f.at(1)->aug();
  for (int j = 0; j < a.cols(); ++j) CHECK(a.get(0, j) == x.cocycle[j]);

  // On a bar resolution the cocycle test is a real constraint.
  CohRing B(bar_resolution(F2, Group::preset("C2xC2"), 3));
  CHECK(error_code([&] { B.from_cocycle(1, {1, 0, 0}); }) == "PreconditionViolated");
  CohClass bx = B.from_cocycle(1, {1, 0, 1});
  CHECK(!bx.is_zero());
  CHECK(B.chain_rep(bx).is_chain_map());
}

TEST_CASE("unit class acts as the identity and lifts to one") {
  CohRing R(minimal_resolution(F2, Group::preset("C2xC2"), 5));
  CohClass e = R.one();
  CohClass x = R.parse_class("x");
  CHECK(R.equal(R.cup(e, x), x));
  CHECK(R.equal(R.cup(x, e), x));

  // The representative of the unit is homotopic to the identity.
  const GradedMap& f = R.chain_rep(e);
  auto H = find_homotopy(f, identity_map(R.res().complex), 0, 4, R.res().view.get());
  REQUIRE(H.has_value());
  CHECK(homotopy_defect(*H, f, identity_map(R.res().complex)).restrict_window(0, 4).is_zero());
}

TEST_CASE("products on the Klein four group") {
  CohRing R(minimal_resolution(F2, Group::preset("C2xC2"), 9));
  CohClass x = R.parse_class("x");
  CohClass y = R.parse_class("y");
  CohClass xx = R.cup(x, x);
  CohClass xy = R.cup(x, y);
  CohClass yy = R.cup(y, y);
  CHECK(R.equal(xy, R.cup(y, x)));
  CHECK_FALSE(xy.is_zero());

  // x^2, xy, y^2 are linearly independent: they span all of degree two.
  KMatrix span = KMatrix::from_rows(F2, {xx.coords, xy.coords, yy.coords}, R.dim(2));
  CHECK(static_cast<int>(span.rref().size()) == 3);

  // A polynomial identity in the stated generators.
  CohClass lhs = R.parse_class("(x + y)^3");
  CohClass rhs = R.parse_class("x^3 + x^2*y + x*y^2 + y^3");
  CHECK(R.equal(lhs, rhs));
}

TEST_CASE("cup products are associative on randomized classes") {
  for (const char* name : {"C2xC2", "C4"}) {
    CohRing R(minimal_resolution(F2, Group::preset(name), 7));
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
      int i = 1 + int(rng() % 3), j = 1 + int(rng() % 2);
      int kdeg = 1 + int(rng() % 3);
      if (i + j + kdeg > 6) continue;
      CohClass a = R.cls(i, rand_coords(rng, R.dim(i), 2));
      CohClass b = R.cls(j, rand_coords(rng, R.dim(j), 2));
      CohClass c = R.cls(kdeg, rand_coords(rng, R.dim(kdeg), 2));
      CHECK(R.equal(R.cup(R.cup(a, b), c), R.cup(a, R.cup(b, c))));
    }
  }
}

TEST_CASE("odd-characteristic products carry the graded sign") {
  CohRing R(minimal_resolution(F3, Group::preset("C3"), 6));
  CohClass x = R.cls(1, {1});
  CohClass y = R.cls(2, {1});
  CHECK(R.cup(x, x).is_zero());          // odd-degree square vanishes
  CHECK_FALSE(R.cup(x, y).is_zero());    // x*y generates degree three
  CHECK_FALSE(R.cup(y, y).is_zero());
  CHECK(R.equal(R.cup(x, y), R.cup(y, x)));  // even factor commutes exactly

  // Two independent degree-one classes anticommute.
  CohRing S(minimal_resolution(F3, c3xc3(), 4));
  CHECK(S.dim(1) == 2);
  CHECK(S.dim(2) == 3);
  CohClass u = S.cls(1, {1, 0});
  CohClass v = S.cls(1, {0, 1});
  CohClass uv = S.cup(u, v);
  CHECK_FALSE(uv.is_zero());
  CHECK(S.sum(uv, S.cup(v, u)).is_zero());
}

TEST_CASE("ideal membership decisions") {
  CohRing R(minimal_resolution(F2, Group::preset("C2xC2"), 9));
  CohClass zeta = R.parse_class("x^2 + x*y + y^2");

  // Dividing a class by itself recovers the unit.
  auto u0 = R.ideal_member(zeta, zeta);
  REQUIRE(u0.has_value());
  CHECK(R.equal(*u0, R.one()));

  // x^2 y + x y^2 is not a multiple of x^2 + xy + y^2.
  CohClass t = R.parse_class("x^2*y + x*y^2");
  CHECK_FALSE(R.ideal_member(t, zeta).has_value());

  // A genuine multiple divides back exactly (the annihilator is trivial).
  CohClass x = R.parse_class("x");
  auto u1 = R.ideal_member(R.cup(x, zeta), zeta);
  REQUIRE(u1.has_value());
  CHECK(R.equal(*u1, x));

  CHECK(error_code([&] { R.ideal_member(x, zeta); }) == "PreconditionViolated");
}

TEST_CASE("ideal membership over the four-element field") {
  CohRing R(minimal_resolution(F4, Group::preset("C2xC2"), 4));
  uint16_t al = F4->gen();
  CohClass zeta = R.parse_class("x + a*y");
  CHECK(zeta.coords == KVec{1, al});

  CHECK_FALSE(R.ideal_member(R.parse_class("x + a^2*y"), zeta).has_value());
  auto u = R.ideal_member(R.parse_class("a*x + a^2*y"), zeta);
  REQUIRE(u.has_value());
  CHECK(u->degree == 0);
  CHECK(u->coords == KVec{al});
}

TEST_CASE("annihilators") {
  CohRing R(minimal_resolution(F2, Group::preset("C2xC2"), 9));
  CohClass zeta = R.parse_class("x^2 + x*y + y^2");
  for (int d = 0; d <= 6; ++d) CHECK(R.annihilator_basis(zeta, d).empty());
  for (int d = 0; d <= 3; ++d) CHECK(R.annihilator_basis(R.one(), d).empty());

  // Quaternion group over GF(4): x + a*y and a*x + y kill each other.
  CohRing Q(minimal_resolution(F4, Group::preset("Q8"), 4));
  CohClass z = Q.parse_class("x + a*y");
  auto ann = Q.annihilator_basis(z, 1);
  REQUIRE(ann.size() == 1);
  CHECK(Q.equal(ann[0], Q.parse_class("x + a^2*y")));
  CHECK(Q.cup(z, ann[0]).is_zero());
  CHECK(Q.cup(ann[0], z).is_zero());
}

TEST_CASE("multiplication matrices compose") {
  CohRing R(minimal_resolution(F2, Group::preset("C2xC2"), 9));
  CohClass x = R.parse_class("x");
  CohClass y = R.parse_class("y");
  CohClass xy = R.cup(x, y);
  for (int d = 0; d <= 3; ++d) {
    KMatrix lhs = R.mult_matrix(y, d + 1).mul(R.mult_matrix(x, d));
    CHECK(lhs == R.mult_matrix(xy, d));
  }
}

TEST_CASE("seeded diagonals change the witness but not the answers") {
  Resolution P = minimal_resolution(F2, Group::preset("C2xC2"), 5);
  CohRing R0(P, 0);
  CohRing R3(P, 3);
  CHECK(R3.diag().map.is_chain_map());

  bool differs = false;
  for (int n = 1; n <= 5 && !differs; ++n) {
    const FreeMap* a = R0.diag().map.at(n);
    const FreeMap* b = R3.diag().map.at(n);
    for (int j = 0; j < P.complex->rank(n) && !differs; ++j)
      differs = a->gen_column(j) != b->gen_column(j);
  }
  CHECK(differs);

  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    int i = 1 + int(rng() % 2), j = 1 + int(rng() % 2);
    CohClass a0 = R0.cls(i, rand_coords(rng, R0.dim(i), 2));
    CohClass b0 = R0.cls(j, rand_coords(rng, R0.dim(j), 2));
    CHECK(R0.cup(a0, b0).coords == R3.cup(a0, b0).coords);
  }
}

TEST_CASE("product range guard") {
  CohRing R(minimal_resolution(F2, Group::preset("C2xC2"), 3));
  CohClass x2 = R.parse_class("x^2");
  CHECK(error_code([&] { R.cup(x2, x2); }) == "TruncationUnderflow");
}

TEST_CASE("expression parser") {
  CohRing R(minimal_resolution(F2, Group::preset("C2xC2"), 5));
  CHECK(R.parse_class("x + y").coords == KVec{1, 1});
  CHECK(R.parse_class("x0 + x1").coords == KVec{1, 1});
  CHECK(R.equal(R.parse_class("x^2 + x*y + y^2"),
                R.sum(R.sum(R.parse_class("x*x"), R.parse_class("x*y")), R.parse_class("y*y"))));
  CHECK(R.equal(R.parse_class("(x + y)*x"), R.parse_class("x^2 + x*y")));
  CHECK(R.parse_class("x^0").degree == 0);
  CHECK(R.parse_class("0").is_zero());
  CHECK(R.parse_class("x + x").is_zero());

  CHECK(error_code([&] { R.parse_class("x +"); }) == "ParseError");
  CHECK(error_code([&] { R.parse_class("x $ y"); }) == "ParseError");
  CHECK(error_code([&] { R.parse_class("x + x^2"); }) == "NonHomogeneous");
  CHECK(error_code([&] { R.parse_class("z"); }) == "UnknownGenerator");
  CHECK(error_code([&] { R.parse_class("x17"); }) == "UnknownGenerator");
  CHECK(error_code([&] { R.parse_class("w + x"); }) == "UnknownGenerator");

  CohRing T(minimal_resolution(F2, Group::preset("C2xC2xC2"), 3));
  CHECK(T.dim(1) == 3);
  CHECK(T.parse_class("x + y + z").coords == KVec{1, 1, 1});
  CHECK(T.parse_class("x2").coords == KVec{0, 0, 1});

  CohRing S(minimal_resolution(F3, Group::preset("C3"), 4));
  CHECK(S.equal(S.parse_class("2*x"), S.sum(S.parse_class("x"), S.parse_class("x"))));
  CHECK(S.parse_class("3*x").is_zero());

  CohRing F(minimal_resolution(F4, Group::preset("C2"), 4));
  CHECK(F.parse_class("a").coords == KVec{F4->gen()});
  CHECK(F.parse_class("a^2").coords == KVec{F4->mul(F4->gen(), F4->gen())});
  CHECK(F.parse_class("x + a*x").coords == KVec{F4->add(1, F4->gen())});
}
