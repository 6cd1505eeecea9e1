// Command-line front end: reproducible experiments over the exact kernels,
// with CSV/JSON output and byte-exact golden checks.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "kakeya/finite_kakeya.hpp"
#include "kakeya/markov.hpp"
#include "kakeya/markov_sampling.hpp"
#include "kakeya/pointset_io.hpp"
#include "kakeya/ring.hpp"
#include "kakeya/stage.hpp"

namespace {

using namespace kakeya;

// q = p^m -> Field; rejects non prime powers.
Field field_from_q(uint64_t q) {
  if (q < 2) throw CLI::ValidationError("--q", "q must be >= 2");
  uint64_t p = 2;
  while (q % p != 0) ++p;
  uint32_t m = 0;
  uint64_t rest = q;
  while (rest % p == 0) { rest /= p; ++m; }
  if (rest != 1) throw CLI::ValidationError("--q", "q must be a prime power");
  return Field(static_cast<uint32_t>(p), m);
}

Coeffs parse_coeffs(const Field& F, const std::string& s) {
  Coeffs out;
  std::stringstream ss(s);
  std::string item;
  std::vector<uint32_t> digits;
  while (std::getline(ss, item, ',')) digits.push_back(static_cast<uint32_t>(std::stoul(item)));
  if (digits.size() % F.m() != 0)
    throw CLI::ValidationError("--coeffs", "digit count not a multiple of m");
  for (size_t i = 0; i < digits.size(); i += F.m()) {
    uint32_t c = 0;
    for (size_t j = F.m(); j-- > 0;) {
      if (digits[i + j] >= F.p()) throw CLI::ValidationError("--coeffs", "digit out of range");
      c = c * F.p() + digits[i + j];
    }
    out.push_back(c);
  }
  return out;
}

std::string coeffs_to_string(const Field& F, const Coeffs& c) {
  std::ostringstream os;
  for (size_t i = 0; i < c.size(); ++i)
    for (uint32_t j = 0; j < F.m(); ++j) {
      if (i + j) os << ',';
      os << F.digit(c[i], j);
    }
  return os.str();
}

// Emits to stdout, optionally to a file, optionally byte-compares against a
// golden file. Returns the exit code contribution (0 ok, 1 golden mismatch).
int emit(const std::string& text, const std::string& out_path, const std::string& golden_path) {
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << text;
  }
  if (!golden_path.empty()) {
    std::ifstream f(golden_path);
    if (!f) {
      std::cerr << "golden file not readable: " << golden_path << "\n";
      return 1;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    if (buf.str() != text) {
      std::cerr << "golden mismatch: " << golden_path << "\n";
      return 1;
    }
    std::cerr << "golden ok: " << golden_path << "\n";
  }
  return 0;
}

std::string markov_csv(uint64_t q, uint32_t steps) {
  std::ostringstream os;
  os << "n,state,probability,probability_decimal\n";
  for (const auto& d : evolve(q, steps)) {
    os << d.step << ",0," << d.dead.get_str() << "," << d.dead.get_d() << "\n";
    for (size_t l = 0; l < d.alive.size(); ++l)
      os << d.step << ",q^" << l << "," << d.alive[l].get_str() << "," << d.alive[l].get_d()
         << "\n";
  }
  return os.str();
}

std::string markov_json(uint64_t q, uint32_t steps) {
  nlohmann::json j;
  j["q"] = q;
  j["trajectory"] = nlohmann::json::array();
  for (const auto& d : evolve(q, steps)) {
    nlohmann::json row;
    row["n"] = d.step;
    row["dead"] = d.dead.get_str();
    row["alive"] = nlohmann::json::array();
    for (const auto& m : d.alive) row["alive"].push_back(m.get_str());
    j["trajectory"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::string decay_csv(uint64_t q, uint32_t n_max) {
  std::ostringstream os;
  os << "n,alive_mass,alive_mass_decimal,ratio\n";
  for (const auto& row : alive_mass_decay(q, n_max)) {
    os << row.n << "," << row.alive.get_str() << "," << row.alive.get_d() << ",";
    if (row.n >= 2) os << row.ratio;
    os << "\n";
  }
  return os.str();
}

std::string measure_csv(const Field& F, uint32_t k_max) {
  std::ostringstream os;
  os << "k,H_k,measure,measure_decimal\n";
  for (uint32_t k = 1; k <= k_max; ++k) {
    uint64_t h = h_census(F, k);
    Rational mu = Rational(static_cast<unsigned long>(h)) / q_pow(F.q(), 2 * k);
    os << k << "," << h << "," << mu.get_str() << "," << mu.get_d() << "\n";
  }
  return os.str();
}

std::string crossval_text(const CrossValReport& rep) {
  std::ostringstream os;
  os << "n,state,chain,"
     << (rep.exact ? "census,match" : "sample_freq,ci_low,ci_high,match") << "\n";
  for (const auto& st : rep.states) {
    os << rep.n << ",";
    if (st.dead) os << "0";
    else os << "q^" << st.exponent;
    os << "," << st.chain_prob.get_str() << ",";
    if (rep.exact) os << st.census_prob.get_str();
    else os << st.sample_freq << "," << st.ci_low << "," << st.ci_high;
    os << "," << (st.match ? "yes" : "no") << "\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Kakeya/Besicovitch toolkit over finite local rings"};
  app.require_subcommand(1);

  std::string ring_spec, coeffs_str, x_str, y_str, file_path, out_path, golden_path, format = "csv";
  uint64_t q = 2, seed = 1, samples = 0;
  uint32_t k_max = 7, steps = 10, n_cv = 1, n_max = 100;

  // star
  auto* cmd_star = app.add_subcommand("star", "apply the star map to a truncated series");
  cmd_star->add_option("--ring", ring_spec, "series ring spec, e.g. series:p=2,m=1,k=8")->required();
  cmd_star->add_option("--coeffs", coeffs_str, "comma-separated coefficient digits")->required();

  // member
  auto* cmd_member = app.add_subcommand("member", "H-membership of a point at truncation k");
  cmd_member->add_option("--ring", ring_spec)->required();
  cmd_member->add_option("--x", x_str)->required();
  cmd_member->add_option("--y", y_str)->required();

  // measure
  auto* cmd_measure = app.add_subcommand("measure", "census of |H_k| q^{-2k} for k <= k-max");
  cmd_measure->add_option("--q", q)->required();
  cmd_measure->add_option("--k-max", k_max)->required();
  cmd_measure->add_option("--out", out_path);
  cmd_measure->add_option("--check-goldens", golden_path);

  // markov
  auto* cmd_markov = app.add_subcommand("markov", "exact chain distributions for steps 1..N");
  cmd_markov->add_option("--q", q)->required();
  cmd_markov->add_option("--steps", steps)->required();
  cmd_markov->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  cmd_markov->add_option("--out", out_path);
  cmd_markov->add_option("--check-goldens", golden_path);

  // decay
  auto* cmd_decay = app.add_subcommand("decay", "alive-mass decay table with ln(n)/n ratio");
  cmd_decay->add_option("--q", q)->required();
  cmd_decay->add_option("--n-max", n_max)->required();
  cmd_decay->add_option("--out", out_path);
  cmd_decay->add_option("--check-goldens", golden_path);

  // crossval
  auto* cmd_crossval = app.add_subcommand("crossval", "chain vs census cross-validation");
  cmd_crossval->add_option("--q", q)->required();
  cmd_crossval->add_option("--n", n_cv)->required();
  cmd_crossval->add_option("--samples", samples, "sample instead of exhaustive enumeration");
  cmd_crossval->add_option("--seed", seed);

  // kakeya
  auto* cmd_kakeya = app.add_subcommand("kakeya", "finite Kakeya set operations");
  cmd_kakeya->require_subcommand(1);
  auto* kk_verify = cmd_kakeya->add_subcommand("verify", "check a point-set file is Kakeya");
  kk_verify->add_option("--file", file_path)->required();
  auto* kk_greedy = cmd_kakeya->add_subcommand("greedy", "greedy Kakeya set with provenance");
  kk_greedy->add_option("--ring", ring_spec)->required();
  kk_greedy->add_option("--seed", seed);
  kk_greedy->add_option("--out", out_path);
  auto* kk_minimal = cmd_kakeya->add_subcommand("minimal", "exact brute-force minimal union");
  kk_minimal->add_option("--ring", ring_spec)->required();
  kk_minimal->add_option("--out", out_path);
  auto* kk_bound = cmd_kakeya->add_subcommand("bound", "lower-bound ledger |E| >= |R|^2/2k for a point set");
  kk_bound->add_option("--file", file_path)->required();

  // dimension
  auto* cmd_dimension = app.add_subcommand("dimension", "per-level Minkowski dimension of K");
  cmd_dimension->add_option("--q", q)->required();
  cmd_dimension->add_option("--k-max", k_max)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_star) {
      Ring R = Ring::parse(ring_spec);
      if (R.kind() != RingKind::series) throw CLI::ValidationError("--ring", "star needs a series ring");
      Coeffs a = parse_coeffs(R.field(), coeffs_str);
      if (a.size() < 2) {
        std::cerr << "error: truncation too short\n";
        return 1;
      }
      std::cout << coeffs_to_string(R.field(), star(a)) << "\n";
      return 0;
    }
    if (*cmd_member) {
      Ring R = Ring::parse(ring_spec);
      if (R.kind() != RingKind::series) throw CLI::ValidationError("--ring", "member needs a series ring");
      const Field& F = R.field();
      bool in = membership_H(F, parse_coeffs(F, x_str), parse_coeffs(F, y_str));
      std::cout << (in ? "true" : "false") << "\n";
      return 0;
    }
    if (*cmd_measure) return emit(measure_csv(field_from_q(q), k_max), out_path, golden_path);
    if (*cmd_markov)
      return emit(format == "json" ? markov_json(q, steps) : markov_csv(q, steps), out_path,
                  golden_path);
    if (*cmd_decay) return emit(decay_csv(q, n_max), out_path, golden_path);
    if (*cmd_crossval) {
      CrossValReport rep = samples > 0 ? cross_validate_sampled(field_from_q(q), n_cv, samples, seed)
                                       : cross_validate(field_from_q(q), n_cv);
      std::cout << crossval_text(rep);
      std::cout << (rep.match ? "match: exact\n" : "MISMATCH\n");
      return rep.match ? 0 : 1;
    }
    if (*kk_verify) {
      std::ifstream f(file_path);
      if (!f) { std::cerr << "cannot read " << file_path << "\n"; return 1; }
      PointSet E = pointset_from_json(nlohmann::json::parse(f));
      KakeyaCheck chk = is_kakeya(E);
      if (chk.is_kakeya) {
        std::cout << "true (" << chk.witnesses.size() << " directions witnessed, |E| = "
                  << E.size() << ")\n";
        return 0;
      }
      const Ring& R = E.ring();
      std::cout << "false (no line with direction ("
                << R.elem_to_string((*chk.failing_direction)[0]) << ";"
                << R.elem_to_string((*chk.failing_direction)[1]) << "))\n";
      return 1;
    }
    if (*kk_greedy) {
      Ring R = Ring::parse(ring_spec);
      PointSet E = greedy_kakeya(R, seed);
      nlohmann::json j = pointset_to_json(E);
      if (!out_path.empty()) { std::ofstream f(out_path); f << j.dump(2) << "\n"; }
      else std::cout << j.dump(2) << "\n";
      std::cerr << "|E| = " << E.size() << " of " << R.size() * R.size() << "\n";
      return 0;
    }
    if (*kk_minimal) {
      Ring R = Ring::parse(ring_spec);
      MinimalResult res = minimal_kakeya_bruteforce(R);
      std::cout << "minimum = " << res.min_size << "\n";
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << pointset_to_json(res.witness).dump(2) << "\n";
      }
      return 0;
    }
    if (*kk_bound) {
      std::ifstream f(file_path);
      if (!f) { std::cerr << "cannot read " << file_path << "\n"; return 1; }
      PointSet E = pointset_from_json(nlohmann::json::parse(f));
      BoundReport rep = lower_bound_ledger(E);
      std::cout << bound_report_to_json(rep).dump(2) << "\n";
      std::cout << "|E| = " << rep.set_size << " >= union " << rep.union_actual
                << " >= analytic " << rep.analytic_sum << " >= bound " << rep.bound.get_str()
                << (rep.chain_ok && rep.satisfied ? "  [ok]" : "  [VIOLATED]") << "\n";
      return rep.chain_ok && rep.satisfied ? 0 : 1;
    }
    if (*cmd_dimension) {
      Field F = field_from_q(q);
      auto rows = dimension_trace(
          F, [&](uint32_t, const Coeffs& x, const Coeffs& y) { return membership_K(F, x, y); },
          k_max);
      std::cout << "k,count,dim,bound\n";
      bool ok = true;
      for (const auto& r : rows) {
        std::cout << r.k << "," << r.count << "," << r.dim << "," << r.bound << "\n";
        ok = ok && r.dim >= r.bound - 1e-12;
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
