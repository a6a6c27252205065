#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "coho/common.hpp"

namespace coho {

// GF(p^m), p^m <= 2^16. Elements are indices in [0, q): the base-p digits of an
// index are the coefficients (low degree first) of the element written as a
// polynomial in the generator of the extension. For m == 1 the index is just the
// residue mod p. Index 0 and 1 are always the additive and multiplicative units.
class Field {
 public:
  // p prime, m >= 1, poly monic of degree m over GF(p) (low->high, size m+1).
  // poly is ignored for m == 1. Throws NonPrime / ReduciblePolynomial /
  // UnsupportedSize.
  static std::shared_ptr<const Field> make(int p, int m, std::vector<int> poly = {});

  // Text forms: "p" for prime fields, "p^m:c0,c1,...,cm" otherwise.
  static std::shared_ptr<const Field> parse(const std::string& spec);
  std::string to_string() const;

  int p() const { return p_; }
  int m() const { return m_; }
  int q() const { return q_; }
  const std::vector<int>& modulus() const { return poly_; }

  uint16_t add(uint16_t a, uint16_t b) const {
    return add_tab_.empty() ? add_slow(a, b) : add_tab_[size_t(a) * q_ + b];
  }
  uint16_t mul(uint16_t a, uint16_t b) const {
    return mul_tab_.empty() ? mul_slow(a, b) : mul_tab_[size_t(a) * q_ + b];
  }
  uint16_t neg(uint16_t a) const { return neg_tab_[a]; }
  uint16_t sub(uint16_t a, uint16_t b) const { return add(a, neg(b)); }
  // a^(-1); throws on 0.
  uint16_t inv(uint16_t a) const;
  // x -> x^p
  uint16_t frobenius(uint16_t a) const { return frob_tab_[a]; }
  uint16_t pow(uint16_t a, long long e) const;

  // index <-> coefficient tuple over GF(p), low degree first, length m.
  std::vector<int> coeffs(uint16_t a) const;
  uint16_t from_coeffs(const std::vector<int>& c) const;

  // The canonical generator of the extension (the class of t); 1 for m == 1.
  uint16_t gen() const { return m_ == 1 ? 1 : uint16_t(p_); }

  bool same(const Field& o) const { return p_ == o.p_ && m_ == o.m_ && poly_ == o.poly_; }

 private:
  Field() = default;
  uint16_t add_slow(uint16_t a, uint16_t b) const;
  uint16_t mul_slow(uint16_t a, uint16_t b) const;
  uint16_t mul_poly(uint16_t a, uint16_t b) const;  // table-free polynomial product

  int p_ = 2, m_ = 1, q_ = 2;
  std::vector<int> poly_;
  std::vector<uint16_t> add_tab_, mul_tab_;  // full tables when q <= 256
  std::vector<uint16_t> neg_tab_, inv_tab_, frob_tab_;
  std::vector<uint32_t> log_tab_;  // discrete log base a fixed primitive element
  std::vector<uint16_t> exp_tab_;
};

using FieldPtr = std::shared_ptr<const Field>;

// (-1)^e * v, written so characteristic 2 costs nothing.
inline uint16_t koszul(const Field& F, long long e, uint16_t v) {
  return (e % 2 == 0) ? v : F.neg(v);
}

}  // namespace coho
