#include "coho/field.hpp"

#include <algorithm>
#include <sstream>

namespace coho {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Polynomial helpers over GF(p); coefficients low->high, normalized (no trailing 0).
using Poly = std::vector<int>;

Poly trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

// a mod b, b nonzero and monic-normalizable
Poly poly_mod(Poly a, const Poly& b, int p) {
  a = trim(a);
  int db = int(b.size()) - 1;
  int lead = b[db];
  // lead^(-1) mod p
  int li = 1;
  for (int i = 1; i < p; ++i)
    if (lead * i % p == 1) li = i;
  while (int(a.size()) - 1 >= db && !a.empty()) {
    int da = int(a.size()) - 1;
    int c = a[da] * li % p;
    for (int i = 0; i <= db; ++i) {
      int& t = a[da - db + i];
      t = ((t - c * b[i]) % p + p) % p;
    }
    a = trim(a);
  }
  return a;
}

bool poly_is_zero(const Poly& a) { return trim(a).empty(); }

}  // namespace

std::shared_ptr<const Field> Field::make(int p, int m, std::vector<int> poly) {
  if (!is_prime(p)) throw InputError("NonPrime", "characteristic " + std::to_string(p) + " is not prime");
  if (m < 1) throw InputError("UnsupportedSize", "extension degree must be >= 1");
  long long q = 1;
  for (int i = 0; i < m; ++i) {
    q *= p;
    if (q > 65536) throw InputError("UnsupportedSize", "field size p^m exceeds 2^16");
  }
  auto F = std::shared_ptr<Field>(new Field());
  F->p_ = p;
  F->m_ = m;
  F->q_ = int(q);
  if (m == 1) {
    F->poly_.clear();
  } else {
    if (int(poly.size()) != m + 1) throw InputError("ReduciblePolynomial", "modulus must have degree exactly m");
    for (int& c : poly) c = ((c % p) + p) % p;
    if (poly[m] != 1) throw InputError("ReduciblePolynomial", "modulus must be monic");
    // Irreducibility: no monic factor of degree 1..m/2 (exhaustive; covers the
    // root check as the degree-1 case).
    for (int d = 1; 2 * d <= m; ++d) {
      long long count = 1;
      for (int i = 0; i < d; ++i) count *= p;
      for (long long idx = 0; idx < count; ++idx) {
        Poly cand(d + 1, 0);
        cand[d] = 1;
        long long t = idx;
        for (int i = 0; i < d; ++i) {
          cand[i] = int(t % p);
          t /= p;
        }
        if (poly_is_zero(poly_mod(poly, cand, p)))
          throw InputError("ReduciblePolynomial", "modulus has a degree-" + std::to_string(d) + " factor");
      }
    }
    F->poly_ = poly;
  }

  int qi = F->q_;
  F->neg_tab_.resize(qi);
  for (int a = 0; a < qi; ++a) {
    // digit-wise negation
    int r = 0, mult = 1, x = a;
    for (int i = 0; i < m; ++i) {
      int d = x % p;
      r += ((p - d) % p) * mult;
      mult *= p;
      x /= p;
    }
    F->neg_tab_[a] = uint16_t(r);
  }

  if (qi <= 256) {
    F->add_tab_.resize(size_t(qi) * qi);
    F->mul_tab_.resize(size_t(qi) * qi);
    for (int a = 0; a < qi; ++a)
      for (int b = 0; b < qi; ++b) {
        F->add_tab_[size_t(a) * qi + b] = F->add_slow(a, b);
        F->mul_tab_[size_t(a) * qi + b] = F->mul_poly(uint16_t(a), uint16_t(b));
      }
  } else {
    // log/exp tables for multiplication
    F->exp_tab_.resize(qi);
    F->log_tab_.assign(qi, 0);
    for (int g = 2; g < qi; ++g) {
      std::vector<uint16_t> pow_list;
      pow_list.reserve(qi);
      uint16_t x = 1;
      bool primitive = true;
      for (int e = 0; e < qi - 1; ++e) {
        pow_list.push_back(x);
        x = F->mul_poly(x, uint16_t(g));
        if (x == 1 && e + 1 < qi - 1) {
          primitive = false;
          break;
        }
      }
      if (primitive && x == 1) {
        for (int e = 0; e < qi - 1; ++e) {
          F->exp_tab_[e] = pow_list[e];
          F->log_tab_[pow_list[e]] = uint32_t(e);
        }
        break;
      }
    }
  }

  F->inv_tab_.assign(qi, 0);
  for (int a = 1; a < qi; ++a) {
    if (F->inv_tab_[a]) continue;
    for (int b = 1; b < qi; ++b)
      if (F->mul(uint16_t(a), uint16_t(b)) == 1) {
        F->inv_tab_[a] = uint16_t(b);
        F->inv_tab_[b] = uint16_t(a);
        break;
      }
  }

  F->frob_tab_.resize(qi);
  for (int a = 0; a < qi; ++a) F->frob_tab_[a] = F->pow(uint16_t(a), p);
  return F;
}

uint16_t Field::add_slow(uint16_t a, uint16_t b) const {
  int r = 0, mult = 1, x = a, y = b;
  for (int i = 0; i < m_; ++i) {
    r += (x % p_ + y % p_) % p_ * mult;
    mult *= p_;
    x /= p_;
    y /= p_;
  }
  return uint16_t(r);
}

uint16_t Field::mul_poly(uint16_t a, uint16_t b) const {
  if (m_ == 1) return uint16_t(int(a) * int(b) % p_);
  // schoolbook product of digit polynomials, reduced mod poly_
  std::vector<int> pa(m_), pb(m_), prod(2 * m_ - 1, 0);
  int x = a, y = b;
  for (int i = 0; i < m_; ++i) {
    pa[i] = x % p_;
    pb[i] = y % p_;
    x /= p_;
    y /= p_;
  }
  for (int i = 0; i < m_; ++i)
    if (pa[i])
      for (int j = 0; j < m_; ++j) prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % p_;
  // reduce: t^m = -(poly_[0] + ... + poly_[m-1] t^(m-1))
  for (int d = 2 * m_ - 2; d >= m_; --d) {
    int c = prod[d];
    if (!c) continue;
    prod[d] = 0;
    for (int i = 0; i < m_; ++i) prod[d - m_ + i] = ((prod[d - m_ + i] - c * poly_[i]) % p_ + p_) % p_;
  }
  int r = 0, mult = 1;
  for (int i = 0; i < m_; ++i) {
    r += prod[i] * mult;
    mult *= p_;
  }
  return uint16_t(r);
}

uint16_t Field::mul_slow(uint16_t a, uint16_t b) const {
  if (a == 0 || b == 0) return 0;
  if (!exp_tab_.empty()) {
    uint64_t e = uint64_t(log_tab_[a]) + log_tab_[b];
    return exp_tab_[e % (q_ - 1)];
  }
  return mul_poly(a, b);
}

uint16_t Field::inv(uint16_t a) const {
  if (a == 0) throw InternalError("DivisionByZero", "inverse of zero field element");
  return inv_tab_[a];
}

uint16_t Field::pow(uint16_t a, long long e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  uint16_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::vector<int> Field::coeffs(uint16_t a) const {
  std::vector<int> c(m_);
  int x = a;
  for (int i = 0; i < m_; ++i) {
    c[i] = x % p_;
    x /= p_;
  }
  return c;
}

uint16_t Field::from_coeffs(const std::vector<int>& c) const {
  int r = 0, mult = 1;
  for (int i = 0; i < m_ && i < int(c.size()); ++i) {
    r += (((c[i] % p_) + p_) % p_) * mult;
    mult *= p_;
  }
  return uint16_t(r);
}

std::shared_ptr<const Field> Field::parse(const std::string& spec) {
  auto caret = spec.find('^');
  if (caret == std::string::npos) {
    try {
      size_t pos = 0;
      int p = std::stoi(spec, &pos);
      if (pos != spec.size()) throw std::invalid_argument("");
      return make(p, 1);
    } catch (const std::logic_error&) {
      throw InputError("ParseError", "bad field spec '" + spec + "' (want \"p\" or \"p^m:c0,...,cm\")");
    }
  }
  auto colon = spec.find(':', caret);
  if (colon == std::string::npos)
    throw InputError("ParseError", "field spec '" + spec + "' missing \":c0,...,cm\" modulus part");
  try {
    int p = std::stoi(spec.substr(0, caret));
    int m = std::stoi(spec.substr(caret + 1, colon - caret - 1));
    std::vector<int> poly;
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) poly.push_back(std::stoi(tok));
    if (int(poly.size()) != m + 1)
      throw InputError("ParseError", "field spec '" + spec + "' needs m+1 modulus coefficients");
    return make(p, m, poly);
  } catch (const std::logic_error&) {
    throw InputError("ParseError", "bad field spec '" + spec + "'");
  }
}

std::string Field::to_string() const {
  if (m_ == 1) return std::to_string(p_);
  std::string s = std::to_string(p_) + "^" + std::to_string(m_) + ":";
  for (int i = 0; i <= m_; ++i) {
    if (i) s += ",";
    s += std::to_string(poly_[i]);
  }
  return s;
}

}  // namespace coho
