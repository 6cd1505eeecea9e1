#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kakeya/field.hpp"

namespace kakeya {

enum class RingKind { series, padic };

/// A finite local ring R: either F_q[t]/t^k (q = p^m) or Z/p^k.
///
/// Elements are codes in [0, |R|). Series codes are base-q digit strings
/// whose i-th digit is the field-element code of the coefficient of t^i;
/// padic codes are the integers themselves. With this encoding
/// alpha(i) == i in both families.
///
/// Immutable value type; cheap to copy (guts are shared).
class Ring {
 public:
  using Elem = uint64_t;

  static Ring series(uint32_t p, uint32_t m, uint32_t k) {
    return Ring(RingKind::series, p, m, k);
  }
  static Ring padic(uint32_t p, uint32_t k) {
    return Ring(RingKind::padic, p, 1, k);
  }

  /// Parses "series:p=<p>,m=<m>,k=<k>" or "padic:p=<p>,k=<k>".
  static Ring parse(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad ring spec: " + s);
    std::string kind = s.substr(0, colon);
    uint32_t p = 0, m = 1, k = 0;
    std::stringstream ss(s.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("bad ring spec: " + s);
      std::string key = item.substr(0, eq);
      uint32_t val = static_cast<uint32_t>(std::stoul(item.substr(eq + 1)));
      if (key == "p") p = val;
      else if (key == "m") m = val;
      else if (key == "k") k = val;
      else throw std::invalid_argument("bad ring spec key: " + key);
    }
    if (kind == "series") return series(p, m, k);
    if (kind == "padic") return padic(p, k);
    throw std::invalid_argument("bad ring kind: " + kind);
  }

  std::string spec_string() const {
    std::ostringstream os;
    if (kind_ == RingKind::series)
      os << "series:p=" << field().p() << ",m=" << field().m() << ",k=" << k_;
    else
      os << "padic:p=" << p_ << ",k=" << k_;
    return os.str();
  }

  RingKind kind() const { return kind_; }
  uint32_t k() const { return k_; }
  uint64_t residue() const { return residue_; }
  uint64_t size() const { return size_; }
  const Field& field() const {
    if (!guts_->field) throw std::logic_error("padic ring has no coefficient field");
    return *guts_->field;
  }

  Elem add(Elem a, Elem b) const {
    check(a); check(b);
    if (kind_ == RingKind::padic) return (a + b) % size_;
    Elem r = 0, pw = 1;
    const Field& F = *guts_->field;
    for (uint32_t i = 0; i < k_; ++i) {
      r += static_cast<Elem>(F.add(static_cast<uint32_t>(a % residue_),
                                   static_cast<uint32_t>(b % residue_))) * pw;
      a /= residue_; b /= residue_; pw *= residue_;
    }
    return r;
  }

  Elem neg(Elem a) const {
    check(a);
    if (kind_ == RingKind::padic) return a == 0 ? 0 : size_ - a;
    Elem r = 0, pw = 1;
    const Field& F = *guts_->field;
    for (uint32_t i = 0; i < k_; ++i) {
      r += static_cast<Elem>(F.neg(static_cast<uint32_t>(a % residue_))) * pw;
      a /= residue_; pw *= residue_;
    }
    return r;
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    check(a); check(b);
    if (kind_ == RingKind::padic) {
      return static_cast<Elem>((static_cast<unsigned __int128>(a) * b) % size_);
    }
    const Field& F = *guts_->field;
    std::array<uint32_t, 64> da{}, db{}, dr{};
    for (uint32_t i = 0; i < k_; ++i) { da[i] = static_cast<uint32_t>(a % residue_); a /= residue_; }
    for (uint32_t i = 0; i < k_; ++i) { db[i] = static_cast<uint32_t>(b % residue_); b /= residue_; }
    for (uint32_t i = 0; i < k_; ++i)
      for (uint32_t j = 0; j + i < k_; ++j)
        dr[i + j] = F.add(dr[i + j], F.mul(da[i], db[j]));
    Elem r = 0;
    for (uint32_t i = k_; i-- > 0;) r = r * residue_ + dr[i];
    return r;
  }

  /// Largest l with a in m^l; v(0) = k by convention.
  uint32_t valuation(Elem a) const {
    check(a);
    if (a == 0) return k_;
    uint32_t v = 0;
    if (kind_ == RingKind::padic) {
      while (a % p_ == 0) { a /= p_; ++v; }
    } else {
      while (a % residue_ == 0) { a /= residue_; ++v; }
    }
    return v;
  }

  bool is_unit(Elem a) const { return valuation(a) == 0; }

  /// The i-th line slope in canonical enumeration order: i itself under
  /// this element encoding (padic: i mod p^k; series: base-q digits of i).
  Elem alpha(uint64_t i) const {
    if (i >= size_) throw std::out_of_range("alpha index out of range");
    return i;
  }

  /// Canonical reduced directions: (1, b) for every b in R, then (a, 1)
  /// for every a in the maximal ideal. Every reduced direction is a unit
  /// multiple of exactly one entry.
  std::vector<std::array<Elem, 2>> directions() const {
    std::vector<std::array<Elem, 2>> out;
    out.reserve(size_ + size_ / residue_);
    for (Elem b = 0; b < size_; ++b) out.push_back({one(), b});
    for (Elem a = 0; a < size_; ++a)
      if (valuation(a) >= 1) out.push_back({a, one()});
    return out;
  }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }

  /// Series: flat comma-separated base-p digit list, m digits per
  /// coefficient, lowest degree first. Padic: decimal integer.
  std::string elem_to_string(Elem a) const {
    check(a);
    if (kind_ == RingKind::padic) return std::to_string(a);
    const Field& F = *guts_->field;
    std::ostringstream os;
    Elem rest = a;
    for (uint32_t i = 0; i < k_; ++i) {
      uint32_t c = static_cast<uint32_t>(rest % residue_);
      rest /= residue_;
      for (uint32_t j = 0; j < F.m(); ++j) {
        if (i + j) os << ',';
        os << F.digit(c, j);
      }
    }
    return os.str();
  }

  Elem elem_from_string(const std::string& s) const {
    if (kind_ == RingKind::padic) {
      Elem v = std::stoull(s);
      if (v >= size_) throw std::out_of_range("element out of range");
      return v;
    }
    const Field& F = *guts_->field;
    std::vector<uint32_t> digits;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) digits.push_back(static_cast<uint32_t>(std::stoul(item)));
    if (digits.size() != static_cast<size_t>(k_) * F.m())
      throw std::invalid_argument("expected " + std::to_string(k_ * F.m()) + " digits");
    Elem r = 0;
    for (uint32_t i = k_; i-- > 0;) {
      uint32_t c = 0;
      for (uint32_t j = F.m(); j-- > 0;) {
        uint32_t d = digits[i * F.m() + j];
        if (d >= F.p()) throw std::out_of_range("digit out of range");
        c = c * F.p() + d;
      }
      r = r * residue_ + c;
    }
    return r;
  }

  /// Series only: field-element code of the coefficient of t^i.
  uint32_t coeff(Elem a, uint32_t i) const {
    for (uint32_t j = 0; j < i; ++j) a /= residue_;
    return static_cast<uint32_t>(a % residue_);
  }

  std::vector<uint32_t> coeffs(Elem a) const {
    std::vector<uint32_t> d(k_);
    for (uint32_t i = 0; i < k_; ++i) { d[i] = static_cast<uint32_t>(a % residue_); a /= residue_; }
    return d;
  }

  Elem from_coeffs(const std::vector<uint32_t>& d) const {
    Elem r = 0;
    for (uint32_t i = k_; i-- > 0;) r = r * residue_ + (i < d.size() ? d[i] : 0);
    return r;
  }

  friend bool operator==(const Ring& a, const Ring& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_ && a.m_ == b.m_ && a.k_ == b.k_;
  }

 private:
  Ring(RingKind kind, uint32_t p, uint32_t m, uint32_t k)
      : kind_(kind), p_(p), m_(m), k_(k) {
    if (k_ == 0) throw std::invalid_argument("k must be >= 1");
    auto guts = std::make_shared<Guts>();
    if (kind_ == RingKind::series) {
      guts->field.emplace(p, m);
      residue_ = guts->field->q();
    } else {
      if (m != 1) throw std::invalid_argument("padic ring has no extension degree");
      if (!Field::is_prime(p)) throw std::invalid_argument("p must be prime");
      residue_ = p;
    }
    size_ = 1;
    for (uint32_t i = 0; i < k_; ++i) {
      if (size_ > (1ull << 40) / residue_) throw std::invalid_argument("ring too large");
      size_ *= residue_;
    }
    if (kind_ == RingKind::series && k_ > 64)
      throw std::invalid_argument("series truncation too large");
    guts_ = std::move(guts);
  }

  void check(Elem a) const {
    if (a >= size_) throw std::out_of_range("ring element code out of range");
  }

  struct Guts {
    std::optional<Field> field;
  };

  RingKind kind_;
  uint32_t p_, m_, k_;
  uint64_t residue_ = 0, size_ = 0;
  std::shared_ptr<const Guts> guts_;
};

/// Guard for mixed-ring operations.
inline void require_same_ring(const Ring& a, const Ring& b) {
  if (!(a == b)) throw std::invalid_argument("mismatched ring specs");
}

}  // namespace kakeya
