#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "kakeya/markov.hpp"
#include "kakeya/ring.hpp"
#include "kakeya/stage.hpp"

namespace kakeya {

using Point = std::pair<Ring::Elem, Ring::Elem>;
using DirVec = std::array<Ring::Elem, 2>;

/// All |R| points base + s * dir. Size |R| exactly when dir is reduced;
/// nonreduced directions collapse onto fewer points.
inline std::vector<Point> line_points(const Ring& R, Point base, DirVec dir) {
  if (dir[0] == 0 && dir[1] == 0) throw std::invalid_argument("zero direction");
  std::vector<Point> pts;
  pts.reserve(R.size());
  for (Ring::Elem s = 0; s < R.size(); ++s) {
    Point p{R.add(base.first, R.mul(s, dir[0])), R.add(base.second, R.mul(s, dir[1]))};
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
  }
  return pts;
}

/// Finite subset of R^2 with optional per-direction witness lines.
class PointSet {
 public:
  explicit PointSet(const Ring& ring) : ring_(ring), mask_(ring.size() * ring.size(), 0) {}

  const Ring& ring() const { return ring_; }
  uint64_t size() const { return count_; }

  bool contains(Point p) const { return mask_[index(p)] != 0; }

  void insert(Point p) {
    auto& cell = mask_[index(p)];
    if (!cell) { cell = 1; ++count_; }
  }

  void insert_line(Point base, DirVec dir) {
    for (const Point& p : line_points(ring_, base, dir)) insert(p);
    provenance_[dir] = base;
  }

  static PointSet full_plane(const Ring& ring) {
    PointSet s(ring);
    for (Ring::Elem x = 0; x < ring.size(); ++x)
      for (Ring::Elem y = 0; y < ring.size(); ++y) s.insert({x, y});
    return s;
  }

  const std::map<DirVec, Point>& provenance() const { return provenance_; }
  void set_provenance(DirVec dir, Point base) { provenance_[dir] = base; }

  std::vector<Point> points() const {
    std::vector<Point> out;
    out.reserve(count_);
    for (uint64_t i = 0; i < mask_.size(); ++i)
      if (mask_[i]) out.push_back({i / ring_.size(), i % ring_.size()});
    return out;
  }

 private:
  uint64_t index(Point p) const {
    if (p.first >= ring_.size() || p.second >= ring_.size())
      throw std::out_of_range("point outside R^2");
    return p.first * ring_.size() + p.second;
  }

  Ring ring_;
  std::vector<char> mask_;
  uint64_t count_ = 0;
  std::map<DirVec, Point> provenance_;
};

/// Canonical base point for the translate with intercept c: (0, c) for
/// (1, b)-type directions, (c, 0) for (a, 1)-type.
inline Point translate_base(const Ring& R, DirVec dir, Ring::Elem c) {
  return dir[0] == R.one() ? Point{0, c} : Point{c, 0};
}

struct KakeyaCheck {
  bool is_kakeya = false;
  std::map<DirVec, Point> witnesses;       ///< direction -> base of a contained line
  std::optional<DirVec> failing_direction;
};

/// True iff E contains a full line for every canonical direction.
/// Guard: |R| <= 2^10.
inline KakeyaCheck is_kakeya(const PointSet& E) {
  const Ring& R = E.ring();
  if (R.size() > 1024) throw std::domain_error("|R| exceeds 2^10 guard");
  KakeyaCheck out;
  out.is_kakeya = true;
  for (const DirVec& dir : R.directions()) {
    // Precompute s * dir once per direction; translates then only add.
    std::vector<Point> offsets(R.size());
    for (Ring::Elem s = 0; s < R.size(); ++s)
      offsets[s] = {R.mul(s, dir[0]), R.mul(s, dir[1])};
    bool found = false;
    for (Ring::Elem c = 0; c < R.size() && !found; ++c) {
      Point base = translate_base(R, dir, c);
      bool all = true;
      for (const Point& o : offsets) {
        if (!E.contains({R.add(base.first, o.first), R.add(base.second, o.second)})) {
          all = false;
          break;
        }
      }
      if (all) {
        out.witnesses[dir] = base;
        found = true;
      }
    }
    if (!found) {
      out.is_kakeya = false;
      out.failing_direction = dir;
      return out;
    }
  }
  return out;
}

/// Greedy adversarial Kakeya set: directions in seeded random order, each
/// picking the translate with maximal overlap with what is already chosen
/// (ties -> smallest intercept code). Deterministic per seed.
inline PointSet greedy_kakeya(const Ring& R, uint64_t seed) {
  if (R.size() > 1024) throw std::domain_error("|R| exceeds 2^10 guard");
  std::vector<DirVec> dirs = R.directions();
  std::mt19937_64 rng(seed);
  std::shuffle(dirs.begin(), dirs.end(), rng);

  PointSet E(R);
  for (const DirVec& dir : dirs) {
    std::vector<Point> offsets(R.size());
    for (Ring::Elem s = 0; s < R.size(); ++s)
      offsets[s] = {R.mul(s, dir[0]), R.mul(s, dir[1])};
    uint64_t best_overlap = 0;
    Ring::Elem best_c = 0;
    for (Ring::Elem c = 0; c < R.size(); ++c) {
      Point base = translate_base(R, dir, c);
      uint64_t overlap = 0;
      for (const Point& o : offsets)
        if (E.contains({R.add(base.first, o.first), R.add(base.second, o.second)})) ++overlap;
      if (overlap > best_overlap) { best_overlap = overlap; best_c = c; }
    }
    E.insert_line(translate_base(R, dir, best_c), dir);
  }
  return E;
}

struct IntersectionReport {
  bool ok = true;
  uint64_t pairs_checked = 0;
  uint64_t max_intersection = 0;
  double max_ratio = 0;  ///< max over pairs of |L_i ∩ L_j| / residue^{v(α_i-α_j)}
  std::vector<std::array<uint64_t, 3>> violations;  ///< (i, j, size)
};

/// Verifies |L_i ∩ L_j| <= residue^{v(α_i - α_j)} for lines α x + y = b.
/// Intercept pairs are exhausted for |R| <= 16 and sampled deterministically
/// beyond (only the difference b_i - b_j matters). Guard: |R| <= 2^10.
inline IntersectionReport intersection_bound_check(const Ring& R, uint64_t seed = 1) {
  if (R.size() > 1024) throw std::domain_error("|R| exceeds 2^10 guard");
  IntersectionReport rep;
  std::mt19937_64 rng(seed);
  const bool exhaustive = R.size() <= 16;
  const uint64_t samples = 8;
  for (uint64_t i = 0; i < R.size(); ++i) {
    for (uint64_t j = i + 1; j < R.size(); ++j) {
      Ring::Elem d = R.sub(R.alpha(i), R.alpha(j));
      uint64_t cap = 1;
      for (uint32_t v = R.valuation(d); v-- > 0;) cap *= R.residue();
      std::vector<Ring::Elem> deltas;
      if (exhaustive) {
        for (Ring::Elem del = 0; del < R.size(); ++del) deltas.push_back(del);
      } else {
        std::uniform_int_distribution<Ring::Elem> pick(0, R.size() - 1);
        deltas.push_back(0);
        for (uint64_t t = 0; t < samples; ++t) deltas.push_back(pick(rng));
      }
      for (Ring::Elem delta : deltas) {
        // (α_i - α_j) x = b_i - b_j pointwise.
        uint64_t count = 0;
        for (Ring::Elem x = 0; x < R.size(); ++x)
          if (R.mul(d, x) == delta) ++count;
        ++rep.pairs_checked;
        rep.max_intersection = std::max(rep.max_intersection, count);
        double ratio = static_cast<double>(count) / static_cast<double>(cap);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (count > cap) {
          rep.ok = false;
          rep.violations.push_back({i, j, count});
        }
      }
    }
  }
  return rep;
}

/// f(u) = sum_{i=1}^{u} r^{min(v_r(i), k)} in closed form via digit counts.
inline uint64_t f_of_u(uint64_t u, uint64_t r, uint32_t k) {
  if (u == 0 || r < 2) throw std::invalid_argument("need u >= 1, r >= 2");
  unsigned __int128 total = 0;
  uint64_t rw = 1;  // r^w
  for (uint32_t w = 0; w < k; ++w) {
    uint64_t ge_w = u / rw;
    uint64_t ge_w1 = (rw > u / r) ? 0 : u / (rw * r);
    total += static_cast<unsigned __int128>(ge_w - ge_w1) * rw;
    if (rw > u / r) { rw = 0; break; }
    rw *= r;
  }
  if (rw != 0) total += static_cast<unsigned __int128>(u / rw) * rw;  // v capped at k
  if (total > ~uint64_t(0)) throw std::overflow_error("f(u) overflow");
  return static_cast<uint64_t>(total);
}

/// ceil(log_r u); 0 for u = 1.
inline uint32_t ceil_log(uint64_t u, uint64_t r) {
  uint32_t e = 0;
  unsigned __int128 pw = 1;
  while (pw < u) { pw *= r; ++e; }
  return e;
}

/// Number of base-r digits of u (= floor(log_r u) + 1).
inline uint32_t digit_count(uint64_t u, uint64_t r) {
  uint32_t d = 1;
  while (u >= r) { u /= r; ++d; }
  return d;
}

struct BoundReport {
  uint64_t set_size = 0;
  uint32_t lines_used = 0;       ///< l + 1, l = floor(|R|/k)
  uint64_t union_actual = 0;     ///< |∪ L_j| with the provenance intercepts
  int64_t ie_sum = 0;            ///< Σ (|R| - Σ actual |L_i ∩ L_j|)
  int64_t analytic_sum = 0;      ///< Σ (|R| - f(j-1))
  Rational bound;                ///< |R|^2 / 2k
  bool satisfied = false;        ///< |E| >= bound
  bool ordering_ok = false;      ///< union_actual >= ie_sum? chain below
  bool chain_ok = false;         ///< union_actual >= analytic_sum >= bound
};

/// Lower-bound ledger on a point set with provenance for the (1,·)
/// directions: inclusion-exclusion with actual intersections, the analytic
/// sum with exact f values, and the closed-form bound.
inline BoundReport lower_bound_ledger(const PointSet& E) {
  const Ring& R = E.ring();
  const uint64_t l = R.size() / R.k();
  if (l + 1 > R.size() - 1)
    throw std::domain_error("l+1 lines exceed the available slope indices (k = 1 ring)");

  // Line j (1-based) is α_j x + y = b_j; its direction is (1, -α_j) and its
  // intercept is the provenance base of that direction.
  std::vector<Ring::Elem> alphas(l + 2), bs(l + 2);
  for (uint64_t j = 1; j <= l + 1; ++j) {
    alphas[j] = R.alpha(j);
    DirVec dir{R.one(), R.neg(alphas[j])};
    auto it = E.provenance().find(dir);
    if (it == E.provenance().end())
      throw std::invalid_argument("missing provenance for a (1,·) direction");
    if (it->second.first != 0)
      throw std::invalid_argument("provenance base not on the x = 0 transversal");
    bs[j] = it->second.second;
  }

  auto line_pts = [&](uint64_t j) {
    std::vector<Point> pts(R.size());
    for (Ring::Elem x = 0; x < R.size(); ++x)
      pts[x] = {x, R.sub(bs[j], R.mul(alphas[j], x))};  // y = b_j - α_j x
    return pts;
  };

  BoundReport rep;
  rep.set_size = E.size();
  rep.lines_used = static_cast<uint32_t>(l + 1);

  std::vector<char> in_union(R.size() * R.size(), 0);
  uint64_t union_size = 0;
  int64_t ie = 0, analytic = 0;
  for (uint64_t j = 1; j <= l + 1; ++j) {
    auto pts = line_pts(j);
    int64_t inter_total = 0;
    for (uint64_t i = 1; i < j; ++i) {
      // |L_i ∩ L_j| = #{x : (α_i - α_j) x = b_i - b_j}
      Ring::Elem d = R.sub(alphas[i], alphas[j]);
      Ring::Elem delta = R.sub(bs[i], bs[j]);
      int64_t cnt = 0;
      for (Ring::Elem x = 0; x < R.size(); ++x)
        if (R.mul(d, x) == delta) ++cnt;
      inter_total += cnt;
    }
    ie += static_cast<int64_t>(R.size()) - inter_total;
    analytic += static_cast<int64_t>(R.size()) -
                (j == 1 ? 0 : static_cast<int64_t>(f_of_u(j - 1, R.residue(), R.k())));
    for (const Point& p : pts) {
      auto& cell = in_union[p.first * R.size() + p.second];
      if (!cell) { cell = 1; ++union_size; }
    }
  }
  rep.union_actual = union_size;
  rep.ie_sum = ie;
  rep.analytic_sum = analytic;
  rep.bound = Rational(static_cast<unsigned long>(R.size())) *
              Rational(static_cast<unsigned long>(R.size())) /
              Rational(2 * static_cast<unsigned long>(R.k()));
  rep.satisfied = Rational(static_cast<unsigned long>(rep.set_size)) >= rep.bound;
  rep.ordering_ok = static_cast<int64_t>(rep.union_actual) >= rep.ie_sum && rep.ie_sum >= rep.analytic_sum;
  rep.chain_ok = static_cast<int64_t>(rep.union_actual) >= rep.analytic_sum &&
                 Rational(static_cast<long>(rep.analytic_sum)) >= rep.bound;
  return rep;
}

struct MinimalResult {
  uint64_t min_size = 0;
  PointSet witness;
};

/// Exact minimum of |∪ lines| over one translate per canonical direction.
/// Guard: |R|^{#directions} <= 2^24.
inline MinimalResult minimal_kakeya_bruteforce(const Ring& R) {
  std::vector<DirVec> dirs = R.directions();
  double combos = std::pow(static_cast<double>(R.size()), static_cast<double>(dirs.size()));
  if (combos > static_cast<double>(1ull << 24))
    throw std::domain_error("search space exceeds 2^24 guard");

  // Precompute all translate point lists.
  std::vector<std::vector<std::vector<uint32_t>>> lines(dirs.size());
  for (size_t d = 0; d < dirs.size(); ++d) {
    lines[d].resize(R.size());
    for (Ring::Elem c = 0; c < R.size(); ++c) {
      Point base = translate_base(R, dirs[d], c);
      for (const Point& p : line_points(R, base, dirs[d]))
        lines[d][c].push_back(static_cast<uint32_t>(p.first * R.size() + p.second));
    }
  }

  std::vector<Ring::Elem> choice(dirs.size(), 0), best_choice(dirs.size(), 0);
  uint64_t best = ~0ull;
  std::vector<uint32_t> stamp(R.size() * R.size(), 0);
  uint32_t epoch = 0;
  while (true) {
    ++epoch;
    uint64_t sz = 0;
    for (size_t d = 0; d < dirs.size(); ++d)
      for (uint32_t idx : lines[d][choice[d]])
        if (stamp[idx] != epoch) { stamp[idx] = epoch; ++sz; }
    if (sz < best) { best = sz; best_choice = choice; }
    size_t d = 0;
    while (d < dirs.size() && ++choice[d] == R.size()) choice[d++] = 0;
    if (d >= dirs.size()) break;
  }

  MinimalResult res{best, PointSet(R)};
  for (size_t d = 0; d < dirs.size(); ++d)
    res.witness.insert_line(translate_base(R, dirs[d], best_choice[d]), dirs[d]);
  return res;
}

struct DimBound {
  double value;          ///< 2 - log(2k) / (k log r)
  std::string symbolic;  ///< "2 - log_r(2k)/k"
  std::optional<Rational> exact;  ///< present when 2k is a power of r
};

/// Finite-level lower bound on the Minkowski dimension of a Kakeya set.
inline DimBound minkowski_lower(uint64_t residue, uint32_t k) {
  if (k < 1 || residue < 2) throw std::invalid_argument("need k >= 1, r >= 2");
  DimBound b;
  b.value = 2.0 - std::log(2.0 * k) / (k * std::log(static_cast<double>(residue)));
  std::ostringstream os;
  os << "2 - log_" << residue << "(" << 2 * k << ")/" << k;
  b.symbolic = os.str();
  uint64_t pw = 1;
  for (uint32_t e = 0; pw <= 2 * k; ++e) {
    if (pw == 2 * k) {
      b.exact = Rational(2) - Rational(e) / Rational(k);
      break;
    }
    pw *= residue;
  }
  return b;
}

struct DimRow {
  uint32_t k;
  uint64_t count;   ///< |E_k|
  double dim;       ///< log |E_k| / log q^k
  double bound;     ///< 2 - log(2k)/(k log q)
};

/// Per-level Minkowski dimension of a subset of F_q[[t]]^2 given by a
/// truncation-level membership oracle. Guard: q^{2k} <= 2^26 per level.
inline std::vector<DimRow> dimension_trace(
    const Field& F, const std::function<bool(uint32_t, const Coeffs&, const Coeffs&)>& member,
    uint32_t k_max) {
  std::vector<DimRow> rows;
  for (uint32_t k = 1; k <= k_max; ++k) {
    uint64_t plane = 1;
    for (uint32_t i = 0; i < 2 * k; ++i) {
      plane *= F.q();
      if (plane > (1ull << 26)) throw std::domain_error("q^{2k} exceeds 2^26 guard");
    }
    uint64_t count = 0;
    for_each_coeffs(F, k, [&](const Coeffs& x) {
      for_each_coeffs(F, k, [&](const Coeffs& y) {
        if (member(k, x, y)) ++count;
      });
    });
    DimRow row;
    row.k = k;
    row.count = count;
    row.dim = count == 0 ? 0.0
                         : std::log(static_cast<double>(count)) /
                               (k * std::log(static_cast<double>(F.q())));
    row.bound = minkowski_lower(F.q(), k).value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace kakeya
