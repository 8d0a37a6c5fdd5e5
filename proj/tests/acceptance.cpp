// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "support.hpp"
#include "tdpkit/corpus.hpp"
#include "tdpkit/serialize.hpp"

using namespace tdp;
using tdp::testing::random_diagonalizable;
using tdp::testing::random_invertible;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 5) failures.push_back(what);
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const std::vector<CorpusInstance>& corpus() {
  static const std::vector<CorpusInstance> c = build_corpus(CorpusGrid::default_grid(), 0);
  return c;
}

std::vector<FieldElement> ints(const Field& f, std::initializer_list<long long> xs) {
  std::vector<FieldElement> v;
  for (long long x : xs) v.push_back(f.from_int(x));
  return v;
}

std::vector<Polynomial> mu_family(std::size_t d) {
  auto ms = monomials_up_to(std::min<std::size_t>(d, 3), 3);
  if (d >= 2) ms.push_back(Polynomial::parse("x1*x2 - x2*x1"));
  return ms;
}

Outcome criterion1() {
  Outcome o;
  auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::size_t total = 0, irreducible = 0;
  for (std::uint64_t p : {2u, 3u}) {
    Field f = Field::prime(p);
    auto values = enumerate_elements(f);
    for (int t = 0; t < 260; ++t) {
      std::size_t n = 1 + t % 4;
      ExactMatrix a = random_diagonalizable(f, n, values, rng);
      ExactMatrix b = random_diagonalizable(f, n, values, rng);
      bool oracle = brute_force_invariant_subspaces(a, b).size() == 2;
      auto r = is_irreducible_pair(a, b);
      bool agree = r.verdict != Irreducibility::inconclusive && (r.verdict == Irreducibility::irreducible) == oracle;
      if (agree && r.verdict == Irreducibility::reducible)
        agree = r.witness && r.witness->dim() > 0 && r.witness->dim() < n && r.witness->is_invariant_under(a) &&
                r.witness->is_invariant_under(b);
      o.require(agree, "GF(" + std::to_string(p) + ") pair #" + std::to_string(t) + " dim " + std::to_string(n) +
                           ": norton " + std::string(to_string(r.verdict)) + ", oracle " +
                           (oracle ? "irreducible" : "reducible"));
      irreducible += oracle;
      ++total;
    }
  }
  double secs = seconds_since(t0);
  o.require(total >= 500, "only " + std::to_string(total) + " pairs");
  o.require(secs < 60, "took " + std::to_string(secs) + " s");
  std::ostringstream s;
  s << total << " pairs (" << irreducible << " irreducible), " << secs << " s";
  o.summary = s.str();
  return o;
}

Outcome criterion2() {
  Outcome o;
  auto t0 = Clock::now();
  Field q = Field::rational();
  ExactMatrix a = ExactMatrix::from_ints(q, {{0, 0}, {1, 1}});
  ExactMatrix as = ExactMatrix::from_ints(q, {{0, 1}, {0, 1}});
  ValidationReport r = verify_td_pair(a, as);
  for (const auto* c : {&r.diagonalizable, &r.standard_a, &r.standard_a_star, &r.irreducible})
    o.require(c->verdict == Verdict::pass, "condition failed: " + c->detail);
  TriDiagonalSystem s = build_system(a, as, OrderingChoice{ints(q, {0, 1}), ints(q, {0, 1})});
  ParameterArray p = extract_parameter_array(s);
  o.require(p.theta == ints(q, {0, 1}) && p.theta_star == ints(q, {0, 1}) && p.zeta == ints(q, {1, 1}),
            "parameter array differs from ((0,1); (0,1); (1,1))");
  ConditionReport cr = check_conjecture_conditions(p);
  o.require(cr.sum == q.from_int(2), "sum is " + cr.sum.to_string());
  double secs = seconds_since(t0);
  o.require(secs < 1, "took " + std::to_string(secs) + " s");
  o.summary = "zeta = (" + p.zeta[0].to_string() + ", " + p.zeta[1].to_string() + "), sum = " + cr.sum.to_string() +
              ", " + std::to_string(secs) + " s";
  return o;
}

bool symmetric_unimodal(const std::vector<std::size_t>& rho) {
  std::size_t d = rho.size() - 1;
  for (std::size_t i = 0; i <= d; ++i)
    if (rho[i] != rho[d - i]) return false;
  for (std::size_t i = 1; i <= d / 2; ++i)
    if (rho[i - 1] > rho[i]) return false;
  return true;
}

Outcome criterion3() {
  Outcome o;
  std::size_t valid = 0, nontrivial_shape = 0;
  for (const auto& inst : corpus()) {
    if (!inst.valid) continue;
    ++valid;
    const TriDiagonalSystem& s = *inst.system;
    const std::string& k = inst.key;
    try {
      s.check_invariants();
    } catch (const Error& e) {
      o.require(false, k + ": " + e.what());
    }
    o.require(triple_product_vanishing(s).holds, k + ": triple product does not vanish");
    o.require(symmetric_unimodal(s.rho), k + ": shape not symmetric unimodal");
    if (std::any_of(s.rho.begin(), s.rho.end(), [](std::size_t r) { return r > 1; })) ++nontrivial_shape;
    for (std::size_t i = 0; i <= s.d; ++i)
      o.require(rank(s.E[i]) == rank(s.E_star[i]), k + ": rank E_" + std::to_string(i) + " != rank E*_" +
                                                       std::to_string(i));
    if (s.d >= 1) {
      std::set<std::string> th, ts;
      for (const auto& c : standard_orderings(s.A, s.Astar)) {
        OrderingChoice a{c.theta, {}}, b{{}, c.theta_star};
        th.insert(a.key());
        ts.insert(b.key());
      }
      o.require(th.size() == 2 && ts.size() == 2, k + ": " + std::to_string(th.size()) + " and " +
                                                      std::to_string(ts.size()) + " standard orderings");
    }
    if (s.sharp()) {
      o.require(inst.parameters.has_value(), k + ": no parameter array (" + inst.reason + ")");
      if (inst.parameters) {
        ConditionReport cr = check_conjecture_conditions(*inst.parameters);
        o.require(cr.passed(), k + ": conditions fail");
        o.require(*inst.parameters == extract_parameter_array(s), k + ": extraction not reproducible");
      }
    }
  }
  o.require(valid >= 100, "only " + std::to_string(valid) + " valid systems");
  o.summary = std::to_string(valid) + " valid systems of " + std::to_string(corpus().size()) + ", " +
              std::to_string(nontrivial_shape) + " with a repeated eigenspace dimension";
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(404);
  std::size_t tuples = 0;
  for (const Field& f : {Field::rational(), Field::prime(13)}) {
    std::size_t here = 0;
    for (int t = 0; here < 60 && t < 5000; ++t) {
      QRacahParameters p{3 + static_cast<std::size_t>(t % 2), random_element(f, rng, 6), random_element(f, rng, 6),
                         random_element(f, rng, 6),             random_element(f, rng, 6), random_element(f, rng, 6),
                         random_element(f, rng, 6),             random_element(f, rng, 6)};
      if (!p.constraint_violation().empty()) continue;
      GeneratedSequences g = generate_sequences(p);
      if (!g.ok()) continue;
      ++here;
      std::string tag = f.name() + " tuple " + std::to_string(here);
      for (const auto* s : {&g.theta, &g.theta_star})
        for (std::size_t i = 2; i + 1 <= p.d; ++i)
          o.require(((*s)[i - 2] - (*s)[i + 1]) / ((*s)[i - 1] - (*s)[i]) == p.beta(), tag + ": ratio != beta");
      FitResult r = fit(g.theta, g.theta_star);
      bool regenerated = false;
      for (const auto& sol : r.solutions) {
        auto h = generate_sequences(sol);
        bool same = true;
        for (std::size_t i = 0; i <= p.d; ++i)
          same = same && h.theta[i] == embed(g.theta[i], sol.field()) &&
                 h.theta_star[i] == embed(g.theta_star[i], sol.field());
        regenerated = regenerated || same;
      }
      o.require(r.status == FitStatus::fitted && regenerated, tag + ": fit " + std::string(to_string(r.status)) +
                                                                   " " + r.reason);
    }
    tuples += here;
  }
  o.require(tuples >= 100, "only " + std::to_string(tuples) + " tuples");
  o.summary = std::to_string(tuples) + " tuples over Q and GF(13)";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::size_t systems = 0, checks = 0;
  for (const auto& inst : corpus()) {
    if (!inst.valid || !inst.sharp || inst.d > 3) continue;
    ++systems;
    const TriDiagonalSystem& s = *inst.system;
    for (const auto& f : mu_family(s.d)) {
      try {
        MuWitnessReport r = mu_scalar_action(s, f);
        o.require(r.scalar_action_verified && r.commuting && r.scalar == f.evaluate(r.xi, s.field()),
                  inst.key + ": " + f.to_string());
        if (f == Polynomial::parse("x1*x2 - x2*x1")) o.require(r.scalar.is_zero(), inst.key + ": commutator");
      } catch (const Error& e) {
        o.require(false, inst.key + ": " + f.to_string() + ": " + e.what());
      }
      ++checks;
    }
  }
  std::mt19937_64 rng(505);
  std::size_t gh = 0;
  for (const Field& f : {Field::rational(), Field::prime(13)}) {
    for (int t = 0; t < 1000; ++t) {
      std::size_t d = 1 + t % 4;
      std::vector<FieldElement> theta, theta_star, xi;
      auto distinct = [&](std::vector<FieldElement>& v) {
        while (v.size() <= d) {
          FieldElement x = random_element(f, rng);
          if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
        }
      };
      distinct(theta);
      distinct(theta_star);
      for (std::size_t i = 0; i < d; ++i) xi.push_back(random_element(f, rng));
      try {
        GhValues v = gh_values(xi, theta, theta_star);
        ParameterArray pa{d, theta, theta_star, zeta_from_xi(xi, theta_star)};
        o.require(v.g == pa.zeta[d] && v.h == check_conjecture_conditions(pa).sum, f.name() + " gh sample");
      } catch (const Error& e) {
        o.require(false, f.name() + " gh sample: " + e.what());
      }
      ++gh;
    }
  }
  o.require(systems > 0, "no sharp corpus systems with d <= 3");
  o.summary = std::to_string(checks) + " polynomial checks on " + std::to_string(systems) + " systems, " +
              std::to_string(gh) + " gh samples";
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::vector<const CorpusInstance*> valid;
  for (const auto& inst : corpus())
    if (inst.valid && inst.sharp && inst.d >= 1) valid.push_back(&inst);
  std::vector<const CorpusInstance*> chosen;
  for (std::size_t k = 0; k < 10 && !valid.empty(); ++k) chosen.push_back(valid[k * valid.size() / 10]);
  std::mt19937_64 rng(606);
  std::size_t conjugations = 0;
  for (const auto* inst : chosen) {
    const TriDiagonalSystem& s = *inst->system;
    auto family = mu_family(s.d);
    std::vector<MuWitnessReport> base;
    for (const auto& f : family) base.push_back(mu_scalar_action(s, f));
    for (int t = 0; t < 50; ++t) {
      TriDiagonalSystem moved = conjugate(s, random_invertible(s.field(), s.dim(), rng));
      try {
        o.require(extract_parameter_array(moved) == *inst->parameters, inst->key + ": parameter array changed");
        for (std::size_t k = 0; k < family.size(); ++k) {
          MuWitnessReport r = mu_scalar_action(moved, family[k]);
          o.require(r.xi == base[k].xi && r.scalar == base[k].scalar &&
                        r.scalar_action_verified == base[k].scalar_action_verified && r.g_value == base[k].g_value &&
                        r.h_value == base[k].h_value,
                    inst->key + ": mu verdict changed for " + family[k].to_string());
        }
      } catch (const Error& e) {
        o.require(false, inst->key + ": " + e.what());
      }
      ++conjugations;
    }
  }
  o.require(chosen.size() == 10, "only " + std::to_string(chosen.size()) + " systems");
  o.summary = std::to_string(conjugations) + " conjugations of " + std::to_string(chosen.size()) + " systems";
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (std::uint64_t seed : {0ull, 7ull, 123456789ull}) {
    std::string first = io::dump(io::manifest_json(build_corpus(CorpusGrid::default_grid(), seed), seed));
    std::string second = io::dump(io::manifest_json(build_corpus(CorpusGrid::default_grid(), seed), seed));
    o.require(first == second, "seed " + std::to_string(seed) + ": manifests differ");
  }
  o.summary = "3 seeds, manifests byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"irreducibility agrees with exhaustive enumeration", criterion1},
      {"worked d = 1 pair", criterion2},
      {"corpus system invariants", criterion3},
      {"q-Racah round trip", criterion4},
      {"scalar action and g/h identities", criterion5},
      {"basis invariance", criterion6},
      {"deterministic corpus manifests", criterion7}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    std::printf("criterion %zu: %s - %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.summary.c_str());
    for (const auto& f : o.failures) std::printf("    %s\n", f.c_str());
    failed += !o.pass;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
