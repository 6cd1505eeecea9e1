#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kakeya {

/// Finite field F_q, q = p^m.
///
/// Elements are codes in [0, q): the base-p digits of a code are the
/// coefficients of the residue polynomial, constant term first. For m = 1
/// this is plain arithmetic mod p. Extension fields reduce modulo the
/// lexicographically least monic irreducible polynomial of degree m over
/// F_p (coefficient tuples compared constant term first), found by
/// exhaustive search at construction.
class Field {
 public:
  explicit Field(uint32_t p, uint32_t m = 1) : p_(p), m_(m) {
    if (m_ == 0) throw std::invalid_argument("extension degree must be >= 1");
    if (!is_prime(p_)) throw std::invalid_argument("characteristic must be prime");
    q_ = 1;
    for (uint32_t i = 0; i < m_; ++i) {
      if (q_ > (1ull << 40) / p_) throw std::invalid_argument("field too large");
      q_ *= p_;
    }
    if (m_ == 1) {
      modulus_ = {0, 1};  // t - 0 convention
    } else {
      modulus_ = find_modulus();
    }
    if (q_ <= kTableLimit) build_tables();
  }

  uint32_t p() const { return p_; }
  uint32_t m() const { return m_; }
  uint64_t q() const { return q_; }
  /// Monic modulus polynomial, length m+1, constant term first.
  const std::vector<uint32_t>& modulus() const { return modulus_; }

  uint32_t add(uint32_t a, uint32_t b) const {
    check(a); check(b);
    if (!add_table_.empty()) return add_table_[a * q_ + b];
    return add_slow(a, b);
  }

  uint32_t neg(uint32_t a) const {
    check(a);
    if (m_ == 1) return a == 0 ? 0 : p_ - a;
    uint32_t r = 0, pw = 1;
    for (uint32_t i = 0; i < m_; ++i) {
      uint32_t d = digit(a, i);
      r += (d == 0 ? 0 : p_ - d) * pw;
      pw *= p_;
    }
    return r;
  }

  uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

  uint32_t mul(uint32_t a, uint32_t b) const {
    check(a); check(b);
    if (!mul_table_.empty()) return mul_table_[a * q_ + b];
    return mul_slow(a, b);
  }

  uint32_t pow(uint32_t a, uint64_t e) const {
    uint32_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  uint32_t inv(uint32_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return pow(a, q_ - 2);
  }

  /// Coefficient of t^i in the residue-polynomial representation of a.
  uint32_t digit(uint32_t a, uint32_t i) const {
    for (uint32_t j = 0; j < i; ++j) a /= p_;
    return a % p_;
  }

  static bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  static constexpr uint64_t kTableLimit = 256;

  void check(uint32_t a) const {
    if (a >= q_) throw std::out_of_range("field element code out of range");
  }

  std::vector<uint32_t> decode(uint32_t a) const {
    std::vector<uint32_t> d(m_);
    for (uint32_t i = 0; i < m_; ++i) { d[i] = a % p_; a /= p_; }
    return d;
  }

  uint32_t encode(const std::vector<uint32_t>& d) const {
    uint32_t r = 0;
    for (uint32_t i = m_; i-- > 0;) r = r * p_ + (i < d.size() ? d[i] : 0);
    return r;
  }

  uint32_t add_slow(uint32_t a, uint32_t b) const {
    uint32_t r = 0, pw = 1;
    for (uint32_t i = 0; i < m_; ++i) {
      r += ((a % p_ + b % p_) % p_) * pw;
      a /= p_; b /= p_; pw *= p_;
    }
    return r;
  }

  uint32_t mul_slow(uint32_t a, uint32_t b) const {
    std::vector<uint32_t> da = decode(a), db = decode(b);
    std::vector<uint32_t> prod(2 * m_ - 1, 0);
    for (uint32_t i = 0; i < m_; ++i)
      for (uint32_t j = 0; j < m_; ++j)
        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    reduce(prod);
    return encode(prod);
  }

  // In-place reduction modulo the monic modulus of degree m.
  void reduce(std::vector<uint32_t>& poly) const {
    for (size_t i = poly.size(); i-- > m_;) {
      uint32_t c = poly[i];
      if (c == 0) continue;
      poly[i] = 0;
      for (uint32_t j = 0; j < m_; ++j) {
        uint32_t t = (c * modulus_[j]) % p_;
        uint32_t& dst = poly[i - m_ + j];
        dst = (dst + p_ - t) % p_;
      }
    }
    poly.resize(m_);
  }

  // Polynomial remainder of a by monic b over F_p (plain integer-coded
  // coefficient vectors, constant term first).
  static std::vector<uint32_t> poly_mod(std::vector<uint32_t> a,
                                        const std::vector<uint32_t>& b, uint32_t p) {
    size_t db = b.size() - 1;
    while (a.size() > db) {
      uint32_t c = a.back();
      size_t shift = a.size() - 1 - db;
      if (c != 0)
        for (size_t j = 0; j <= db; ++j)
          a[shift + j] = (a[shift + j] + p - (c * b[j]) % p) % p;
      a.pop_back();
    }
    while (a.size() > 1 && a.back() == 0) a.pop_back();
    return a;
  }

  static bool poly_is_zero(const std::vector<uint32_t>& a) {
    return std::all_of(a.begin(), a.end(), [](uint32_t c) { return c == 0; });
  }

  // Trial division by every monic polynomial of degree 1..deg/2.
  bool is_irreducible(const std::vector<uint32_t>& f) const {
    uint32_t deg = static_cast<uint32_t>(f.size()) - 1;
    for (uint32_t d = 1; d <= deg / 2; ++d) {
      uint64_t count = 1;
      for (uint32_t i = 0; i < d; ++i) count *= p_;
      for (uint64_t c = 0; c < count; ++c) {
        std::vector<uint32_t> g(d + 1);
        uint64_t t = c;
        for (uint32_t i = 0; i < d; ++i) { g[i] = static_cast<uint32_t>(t % p_); t /= p_; }
        g[d] = 1;
        if (poly_is_zero(poly_mod(f, g, p_))) return false;
      }
    }
    return true;
  }

  std::vector<uint32_t> find_modulus() const {
    // Lex order on (c_0, ..., c_{m-1}): earliest coordinate most significant.
    std::vector<uint32_t> c(m_, 0);
    while (true) {
      std::vector<uint32_t> f(c);
      f.push_back(1);
      if (is_irreducible(f)) return f;
      uint32_t i = m_;
      while (i-- > 0) {
        if (++c[i] < p_) break;
        c[i] = 0;
        if (i == 0) throw std::logic_error("no irreducible polynomial found");
      }
    }
  }

  void build_tables() {
    add_table_.resize(q_ * q_);
    mul_table_.resize(q_ * q_);
    for (uint32_t a = 0; a < q_; ++a)
      for (uint32_t b = 0; b < q_; ++b) {
        add_table_[a * q_ + b] = add_slow(a, b);
        mul_table_[a * q_ + b] = mul_slow(a, b);
      }
  }

  uint32_t p_, m_;
  uint64_t q_;
  std::vector<uint32_t> modulus_;
  std::vector<uint32_t> add_table_, mul_table_;
};

}  // namespace kakeya
