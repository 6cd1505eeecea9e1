#pragma once

#include <boost/math/distributions/binomial.hpp>

#include <random>

#include "kakeya/markov.hpp"

namespace kakeya {

/// Sampled cross-validation for stages too large to enumerate. Draws
/// uniform coefficient tuples with a seeded generator and reports a
/// Clopper-Pearson interval per state. Diagnostic only; the exact census
/// is the acceptance path.
inline CrossValReport cross_validate_sampled(const Field& F, uint32_t n, uint64_t samples,
                                             uint64_t seed, double confidence = 0.95) {
  if (n < 1 || samples == 0) throw std::invalid_argument("bad sampling parameters");
  const uint64_t q = F.q();
  const uint32_t len = (1u << n) - 1;

  StateDistribution chain = evolve(q, n).back();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint32_t> coeff(0, static_cast<uint32_t>(q - 1));

  uint64_t dead_count = 0;
  std::vector<uint64_t> counts(chain.alive.size(), 0);
  Coeffs x(len), y(len);
  for (uint64_t it = 0; it < samples; ++it) {
    for (auto& c : x) c = coeff(rng);
    for (auto& c : y) c = coeff(rng);
    SolutionCount s = count_solutions_elim(F, x, y);
    if (s.zero) ++dead_count;
    else {
      if (s.exponent >= counts.size()) counts.resize(s.exponent + 1, 0);
      ++counts[s.exponent];
    }
  }

  const double alpha = 1.0 - confidence;
  using boost::math::binomial_distribution;
  auto interval = [&](uint64_t successes) {
    double lo = binomial_distribution<>::find_lower_bound_on_p(
        static_cast<double>(samples), static_cast<double>(successes), alpha / 2);
    double hi = binomial_distribution<>::find_upper_bound_on_p(
        static_cast<double>(samples), static_cast<double>(successes), alpha / 2);
    return std::pair<double, double>(lo, hi);
  };

  CrossValReport rep;
  rep.n = n;
  rep.exact = false;
  rep.population = samples;
  auto push = [&](bool dead, uint32_t l, const Rational& chain_prob, uint64_t cnt) {
    CrossValState st;
    st.dead = dead;
    st.exponent = l;
    st.chain_prob = chain_prob;
    st.sample_freq = static_cast<double>(cnt) / static_cast<double>(samples);
    auto [lo, hi] = interval(cnt);
    st.ci_low = lo;
    st.ci_high = hi;
    double p = chain_prob.get_d();
    st.match = (p >= lo && p <= hi);
    return st;
  };
  rep.states.push_back(push(true, 0, chain.dead, dead_count));
  for (size_t l = 0; l < std::max(counts.size(), chain.alive.size()); ++l) {
    Rational cp = l < chain.alive.size() ? chain.alive[l] : Rational(0);
    uint64_t cnt = l < counts.size() ? counts[l] : 0;
    rep.states.push_back(push(false, static_cast<uint32_t>(l), cp, cnt));
  }
  for (const auto& st : rep.states) rep.match = rep.match && st.match;
  return rep;
}

}  // namespace kakeya
