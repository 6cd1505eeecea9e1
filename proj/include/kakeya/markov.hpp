#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "kakeya/stage.hpp"

namespace kakeya {

/// Exact rational; canonical reduced form is maintained by GMP.
using Rational = mpq_class;

inline Rational q_pow(uint64_t q, uint32_t e) {
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), q, e);
  return Rational(z);
}

/// Exact distribution of the absorbing chain after `step` transitions.
/// alive[l] = P(X_step = q^l); dead = P(X_step = 0).
struct StateDistribution {
  uint32_t step = 1;
  Rational dead;
  std::vector<Rational> alive;

  Rational total() const {
    Rational t = dead;
    for (const auto& m : alive) t += m;
    return t;
  }

  /// E(X_step) = sum q^l * P(q^l); the martingale invariant keeps this at 1.
  Rational expected_value(uint64_t q) const {
    Rational e = 0;
    for (size_t l = 0; l < alive.size(); ++l) e += alive[l] * q_pow(q, static_cast<uint32_t>(l));
    return e;
  }

  Rational alive_mass() const { return Rational(1) - dead; }
};

/// Distribution of s_0 over uniform (x_0, y_0): the chain's step-1 state.
inline StateDistribution initial_distribution(uint64_t q) {
  if (q < 2) throw std::invalid_argument("q must be >= 2");
  StateDistribution d;
  d.step = 1;
  d.alive.resize(2);
  d.alive[0] = Rational(q - 1) / Rational(q);        // s_0 = 1: x_0 a unit
  d.alive[1] = Rational(1) / q_pow(q, 2);            // s_0 = q: x_0 = y_0 = 0
  d.dead = Rational(q - 1) / q_pow(q, 2);            // s_0 = 0: x_0 = 0, y_0 != 0
  return d;
}

/// One transition: state 0 absorbs; q^l goes to 0, q^l, q^{l+1} with
/// probabilities (q-1)/q^{l+2}, 1 - 1/q^{l+1}, 1/q^{l+2}.
inline StateDistribution step_distribution(const StateDistribution& d, uint64_t q) {
  StateDistribution out;
  out.step = d.step + 1;
  out.dead = d.dead;
  out.alive.assign(d.alive.size() + 1, Rational(0));
  for (size_t l = 0; l < d.alive.size(); ++l) {
    const Rational& m = d.alive[l];
    if (m == 0) continue;
    Rational ql2 = q_pow(q, static_cast<uint32_t>(l) + 2);
    out.dead += m * Rational(q - 1) / ql2;
    out.alive[l] += m * (Rational(1) - Rational(1) / q_pow(q, static_cast<uint32_t>(l) + 1));
    out.alive[l + 1] += m / ql2;
  }
  return out;
}

/// Exact trajectory for steps 1..n_steps.
inline std::vector<StateDistribution> evolve(uint64_t q, uint32_t n_steps) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  std::vector<StateDistribution> traj;
  traj.reserve(n_steps);
  traj.push_back(initial_distribution(q));
  for (uint32_t n = 2; n <= n_steps; ++n) traj.push_back(step_distribution(traj.back(), q));
  return traj;
}

/// Exact chain evolution tuned for long trajectories. All state masses are
/// kept as integer numerators over the common denominator q^exp, so a step
/// is pure mpz multiply/add with no gcd work; conversion back to a canonical
/// Rational only needs the p-power common factor stripped (the denominator
/// is a prime power). Agrees with step_distribution exactly.
class ScaledEvolution {
 public:
  explicit ScaledEvolution(uint64_t q) : q_(q) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    p_ = 2;
    while (q % p_ != 0) ++p_;
    uint64_t rest = q;
    m_ = 0;
    while (rest % p_ == 0) { rest /= p_; ++m_; }
    if (rest != 1) throw std::invalid_argument("q must be a prime power");
    step_ = 1;
    exp_ = 2;
    dead_ = q - 1;
    alive_ = {mpz_class(q) * (q - 1), mpz_class(1)};
    total_ = mpz_class(q) * q;
  }

  uint32_t step() const { return step_; }
  uint64_t q() const { return q_; }

  void advance() {
    const size_t L = alive_.size() - 1;
    // Grow the constant tables: pw_[i] = q^i, stay_[l] = (q^{l+1} - 1) q.
    while (pw_.size() <= L + 1) pw_.push_back(pw_.back() * q_);
    while (stay_.size() <= L) stay_.push_back((pw_[stay_.size() + 1] - 1) * q_);
    next_.resize(alive_.size() + 1);
    for (auto& z : next_) z = 0;  // keeps each mpz's allocation
    // Everything is rescaled to the new denominator q^{exp + L + 2}.
    dead_ *= pw_[L];
    dead_ *= q_ * q_;
    for (size_t l = 0; l <= L; ++l) {
      if (alive_[l] == 0) continue;
      t_ = alive_[l] * pw_[L - l];  // shared factor q^{L-l}
      // to 0: (q-1)/q^{l+2}; up: 1/q^{l+2}; stay: (q^{l+1}-1)/q^{l+1}.
      mpz_addmul_ui(dead_.get_mpz_t(), t_.get_mpz_t(), static_cast<unsigned long>(q_ - 1));
      next_[l + 1] += t_;
      mpz_addmul(next_[l].get_mpz_t(), t_.get_mpz_t(), stay_[l].get_mpz_t());
    }
    std::swap(alive_, next_);
    total_ *= pw_[L];
    total_ *= q_ * q_;
    exp_ += static_cast<uint64_t>(L) + 2;
    ++step_;
  }

  Rational dead_prob() const { return to_rational(dead_); }
  Rational alive_mass() const { return to_rational(total_ - dead_); }
  Rational alive_prob(size_t l) const {
    return l < alive_.size() ? to_rational(alive_[l]) : Rational(0);
  }

  /// E(X_step) as an exact Rational (the martingale keeps it at 1).
  Rational expected_value() const {
    mpz_class acc = 0, pw = 1;
    for (size_t l = 0; l < alive_.size(); ++l) {
      acc += alive_[l] * pw;
      pw *= q_;
    }
    return to_rational(acc);
  }

  StateDistribution distribution() const {
    StateDistribution d;
    d.step = step_;
    d.dead = dead_prob();
    d.alive.resize(alive_.size());
    for (size_t l = 0; l < alive_.size(); ++l) d.alive[l] = to_rational(alive_[l]);
    return d;
  }

 private:
  Rational to_rational(const mpz_class& num) const {
    if (num == 0) return Rational(0);
    mpz_class stripped, pz(static_cast<unsigned long>(p_));
    uint64_t mult = mpz_remove(stripped.get_mpz_t(), num.get_mpz_t(), pz.get_mpz_t());
    uint64_t pe = static_cast<uint64_t>(m_) * exp_;  // denominator is p^pe
    uint64_t cancel = std::min(mult, pe);
    if (mult > cancel) {
      mpz_class back;
      mpz_ui_pow_ui(back.get_mpz_t(), p_, static_cast<unsigned long>(mult - cancel));
      stripped *= back;
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), p_, static_cast<unsigned long>(pe - cancel));
    Rational r;
    mpz_set(mpq_numref(r.get_mpq_t()), stripped.get_mpz_t());
    mpz_set(mpq_denref(r.get_mpq_t()), den.get_mpz_t());
    return r;  // gcd(stripped, p^j) = 1: already canonical
  }

  uint64_t q_;
  uint32_t p_ = 2, m_ = 1;
  uint32_t step_ = 1;
  uint64_t exp_ = 2;
  mpz_class dead_, total_, t_;
  std::vector<mpz_class> alive_, next_;
  std::vector<mpz_class> pw_{mpz_class(1)}, stay_;
};

struct DecayRow {
  uint32_t n;
  Rational alive;  ///< 1 - P(X_n = 0), exact
  double ratio;    ///< alive * n / ln(n); NaN at n = 1 (report column only)
};

/// Alive-mass table with the ln(n)/n-normalized ratio column. The only
/// floating point here is ln(n) in the ratio.
inline std::vector<DecayRow> alive_mass_decay(uint64_t q, uint32_t n_max) {
  std::vector<DecayRow> rows;
  rows.reserve(n_max);
  ScaledEvolution ev(q);
  for (uint32_t n = 1; n <= n_max; ++n) {
    if (n > 1) ev.advance();
    Rational alive = ev.alive_mass();
    double ratio = n >= 2 ? alive.get_d() * n / std::log(static_cast<double>(n))
                          : std::numeric_limits<double>::quiet_NaN();
    rows.push_back({n, alive, ratio});
  }
  return rows;
}

struct CrossValState {
  bool dead = false;       ///< census/chain state 0
  uint32_t exponent = 0;   ///< else state q^exponent
  Rational chain_prob;
  Rational census_prob;    ///< exact mode
  double sample_freq = 0;  ///< sampling mode
  double ci_low = 0, ci_high = 0;
  bool match = false;
};

struct CrossValReport {
  uint32_t n = 1;
  bool exact = true;
  uint64_t population = 0;  ///< tuples enumerated (or samples drawn)
  std::vector<CrossValState> states;
  bool match = true;  ///< exact: rational equality; sampled: chain prob inside every CI
};

/// Exact cross-validation of the chain at step n against the exhaustive
/// census of s_{2^n-2} over all coefficient tuples. Guard: q^{2(2^n-1)}
/// must be enumerable.
inline CrossValReport cross_validate(const Field& F, uint32_t n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const uint64_t q = F.q();
  const uint32_t len = (1u << n) - 1;  // stage 2^n - 2 has len coefficients
  uint64_t population = 1;
  for (uint32_t i = 0; i < 2 * len; ++i) {
    population *= q;
    if (population > (1ull << 26))
      throw std::domain_error("census infeasible; use sampled mode");
  }

  StateDistribution chain = evolve(q, n).back();
  uint64_t dead_count = 0;
  std::vector<uint64_t> counts(chain.alive.size() + 1, 0);
  for_each_coeffs(F, len, [&](const Coeffs& x) {
    for_each_coeffs(F, len, [&](const Coeffs& y) {
      SolutionCount s = count_solutions_elim(F, x, y);
      if (s.zero) ++dead_count;
      else {
        if (s.exponent >= counts.size()) counts.resize(s.exponent + 1, 0);
        ++counts[s.exponent];
      }
    });
  });

  CrossValReport rep;
  rep.n = n;
  rep.exact = true;
  rep.population = population;
  Rational pop(population);
  {
    CrossValState st;
    st.dead = true;
    st.chain_prob = chain.dead;
    st.census_prob = Rational(dead_count) / pop;
    st.match = (st.chain_prob == st.census_prob);
    rep.states.push_back(st);
  }
  size_t levels = std::max(counts.size(), chain.alive.size());
  for (size_t l = 0; l < levels; ++l) {
    CrossValState st;
    st.exponent = static_cast<uint32_t>(l);
    st.chain_prob = l < chain.alive.size() ? chain.alive[l] : Rational(0);
    st.census_prob = Rational(l < counts.size() ? counts[l] : 0) / pop;
    st.match = (st.chain_prob == st.census_prob);
    rep.states.push_back(st);
  }
  for (const auto& st : rep.states) rep.match = rep.match && st.match;
  return rep;
}

}  // namespace kakeya
