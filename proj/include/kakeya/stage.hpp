#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "kakeya/field.hpp"

namespace kakeya {

/// Coefficient vector over F_q; index i holds the (field-element code of
/// the) coefficient of t^i.
using Coeffs = std::vector<uint32_t>;

/// True iff index i carries a forced zero under the star map, i.e. i+2 is
/// a power of two (i = 0, 2, 6, 14, ...).
inline bool star_index(uint64_t i) { return ((i + 2) & (i + 1)) == 0; }

/// The star map: out[i] = 0 at star indices, a[i+1] otherwise. Input
/// length k >= 2, output length k-1 (the last index would need a_k).
inline Coeffs star(const Coeffs& a) {
  if (a.size() < 2) throw std::invalid_argument("truncation too short for star (k < 2)");
  Coeffs out(a.size() - 1);
  for (size_t i = 0; i < out.size(); ++i) out[i] = star_index(i) ? 0 : a[i + 1];
  return out;
}

inline Coeffs series_add(const Field& F, const Coeffs& a, const Coeffs& b) {
  if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
  Coeffs r(a.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = F.add(a[i], b[i]);
  return r;
}

inline Coeffs series_neg(const Field& F, const Coeffs& a) {
  Coeffs r(a.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = F.neg(a[i]);
  return r;
}

inline Coeffs series_scale(const Field& F, uint32_t c, const Coeffs& a) {
  Coeffs r(a.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = F.mul(c, a[i]);
  return r;
}

/// Truncated product: (a*b) mod t^len. Inputs may be longer than len.
inline Coeffs series_mul_trunc(const Field& F, const Coeffs& a, const Coeffs& b, size_t len) {
  Coeffs r(len, 0);
  for (size_t i = 0; i < a.size() && i < len; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size() && i + j < len; ++j)
      r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  return r;
}

/// Number of solutions of an n-th stage system: zero or q^exponent.
struct SolutionCount {
  bool zero = true;
  uint32_t exponent = 0;

  static SolutionCount none() { return {true, 0}; }
  static SolutionCount power(uint32_t e) { return {false, e}; }

  uint64_t value(uint64_t q) const {
    if (zero) return 0;
    uint64_t v = 1;
    for (uint32_t i = 0; i < exponent; ++i) v *= q;
    return v;
  }
  bool positive() const { return !zero; }

  friend bool operator==(const SolutionCount& a, const SolutionCount& b) {
    return a.zero == b.zero && (a.zero || a.exponent == b.exponent);
  }
};

/// s_n(x, y) by structured elimination: every a_j is kept as an affine
/// combination of the free generators a_{2^t-1} <= n; rows at star indices
/// become constraints, all other equations inside the tuple eagerly
/// substitute a_{l+1}. Result is 0 or q^(free - rank).
inline SolutionCount count_solutions_elim(const Field& F, const Coeffs& x, const Coeffs& y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("length mismatch");
  const size_t n = x.size() - 1;

  // Free generators a_j, j = 2^t - 1 <= n. No equation determines these:
  // Equation [2^t - 2] is a constraint row, and nothing determines a_0.
  std::vector<size_t> free_idx;
  for (uint64_t j = 0; j <= n; j = 2 * j + 1) free_idx.push_back(j);
  const size_t G = free_idx.size();
  const size_t W = G + 1;  // + constant column

  // expr[j]: affine form of a_j over the free generators, length W.
  std::vector<std::vector<uint32_t>> expr(n + 1);
  for (size_t g = 0; g < G; ++g) {
    expr[free_idx[g]].assign(W, 0);
    expr[free_idx[g]][g] = 1;
  }

  std::vector<std::vector<uint32_t>> rows;
  std::vector<uint32_t> combo(W);
  for (size_t l = 0; l <= n; ++l) {
    const bool constraint = star_index(l);
    if (!constraint && l + 1 > n) break;  // Equation [n] defines a_{n+1}; vacuous here
    std::fill(combo.begin(), combo.end(), 0);
    for (size_t i = 0; i <= l; ++i) {
      uint32_t xi = x[i];
      if (xi == 0) continue;
      const auto& e = expr[l - i];
      for (size_t w = 0; w < W; ++w) combo[w] = F.add(combo[w], F.mul(xi, e[w]));
    }
    combo[G] = F.add(combo[G], y[l]);
    if (constraint) {
      rows.push_back(combo);
    } else {
      expr[l + 1] = combo;  // a_{l+1} = a_l x_0 + ... + a_0 x_l + y_l
    }
  }

  // Gaussian elimination over F_q; row means sum(c_g a_g) + c_const = 0.
  size_t rank = 0;
  for (size_t col = 0; col < G && rank < rows.size(); ++col) {
    size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    uint32_t inv = F.inv(rows[rank][col]);
    for (size_t w = col; w < W; ++w) rows[rank][w] = F.mul(inv, rows[rank][w]);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      uint32_t c = rows[r][col];
      for (size_t w = col; w < W; ++w)
        rows[r][w] = F.sub(rows[r][w], F.mul(c, rows[rank][w]));
    }
    ++rank;
  }
  for (size_t r = rank; r < rows.size(); ++r)
    if (rows[r][G] != 0) return SolutionCount::none();

  return SolutionCount::power(static_cast<uint32_t>(G - rank));
}

/// Literal s_n(x, y): enumerate all q^{n+1} tuples and check every
/// equation whose variables lie inside the tuple. Guard: q^{n+1} <= 2^24.
inline SolutionCount count_solutions_naive(const Field& F, const Coeffs& x, const Coeffs& y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("length mismatch");
  const size_t n = x.size() - 1;
  const uint64_t q = F.q();
  uint64_t total = 1;
  for (size_t i = 0; i <= n; ++i) {
    total *= q;
    if (total > (1ull << 24))
      throw std::domain_error("q^{n+1} exceeds 2^24; use count_solutions_elim");
  }

  uint64_t count = 0;
  std::vector<uint32_t> a(n + 1, 0);
  for (uint64_t it = 0;; ++it) {
    bool ok = true;
    for (size_t l = 0; l <= n && ok; ++l) {
      if (!star_index(l) && l == n) continue;  // references a_{n+1}
      uint32_t lhs = y[l];
      for (size_t i = 0; i <= l; ++i) lhs = F.add(lhs, F.mul(a[l - i], x[i]));
      uint32_t rhs = star_index(l) ? 0 : a[l + 1];
      ok = (lhs == rhs);
    }
    if (ok) ++count;
    size_t d = 0;
    while (d <= n && ++a[d] == q) a[d++] = 0;
    if (d > n) break;
  }

  if (count == 0) return SolutionCount::none();
  uint32_t e = 0;
  uint64_t v = count;
  while (v % q == 0) { v /= q; ++e; }
  if (v != 1) throw std::logic_error("stage-system count is not a power of q");
  return SolutionCount::power(e);
}

/// Membership in the level-k projection H_k: solvability of the
/// (k-1)-stage system, which extends to the full infinite system.
inline bool membership_H(const Field& F, const Coeffs& x, const Coeffs& y) {
  return count_solutions_elim(F, x, y).positive();
}

/// K = {(x,y) : (x,y) or (y,x) in H}.
inline bool membership_K(const Field& F, const Coeffs& x, const Coeffs& y) {
  return membership_H(F, x, y) || membership_H(F, y, x);
}

/// K^(n) = K x F_q[[t]]^{n-2}: membership ignores coordinates beyond the
/// first two.
inline bool membership_Kn(const Field& F, const std::vector<Coeffs>& point) {
  if (point.size() < 2) throw std::invalid_argument("K^(n) needs n >= 2");
  return membership_K(F, point[0], point[1]);
}

/// The line with direction (1, b) contained in H: base (0, -b*),
/// direction second coordinate b truncated to length k. Input length k+1.
struct HLine {
  Coeffs base_y;  ///< second coordinate of the base point (first is 0)
  Coeffs dir_y;   ///< second coordinate of the direction (first is 1)
};

inline HLine h_line_for_direction(const Field& F, const Coeffs& b) {
  if (b.size() < 2) throw std::invalid_argument("need length k+1 >= 2");
  HLine line;
  line.base_y = series_neg(F, star(b));
  line.dir_y = Coeffs(b.begin(), b.end() - 1);
  return line;
}

/// Point of the (1,b)-line at parameter s: (s, -b* + b s), truncation k.
inline std::pair<Coeffs, Coeffs> h_line_point(const Field& F, const Coeffs& b, const Coeffs& s) {
  HLine line = h_line_for_direction(F, b);
  size_t k = line.base_y.size();
  if (s.size() != k) throw std::invalid_argument("parameter length mismatch");
  Coeffs y = series_add(F, line.base_y, series_mul_trunc(F, line.dir_y, s, k));
  return {s, y};
}

/// Visits every coefficient vector of the given length in odometer order.
inline void for_each_coeffs(const Field& F, size_t len,
                            const std::function<void(const Coeffs&)>& fn) {
  Coeffs c(len, 0);
  const uint64_t q = F.q();
  while (true) {
    fn(c);
    size_t d = 0;
    while (d < len && ++c[d] == q) c[d++] = 0;
    if (d >= len) break;
  }
}

/// |H_k| by exhaustive membership. Guard: q^{2k} <= 2^26.
inline uint64_t h_census(const Field& F, uint32_t k) {
  uint64_t plane = 1;
  for (uint32_t i = 0; i < 2 * k; ++i) {
    plane *= F.q();
    if (plane > (1ull << 26)) throw std::domain_error("q^{2k} exceeds 2^26");
  }
  uint64_t count = 0;
  for_each_coeffs(F, k, [&](const Coeffs& x) {
    for_each_coeffs(F, k, [&](const Coeffs& y) {
      if (membership_H(F, x, y)) ++count;
    });
  });
  return count;
}

}  // namespace kakeya
