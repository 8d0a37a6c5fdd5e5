#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "input.hpp"
#include "tdpkit/corpus.hpp"
#include "tdpkit/serialize.hpp"

namespace fs = std::filesystem;
using namespace tdp;
using tdp::cli::Document;
using tdp::cli::InputError;
using tdp::cli::Pointer;
using tdp::io::Json;

namespace {

struct Job {
  std::string command;
  std::string input;
  std::optional<std::string> out;
  std::optional<std::string> field;
  std::uint64_t seed = 0;
  std::size_t max_instances = 500;
};

struct Outcome {
  Json report;
  bool ok = true;
};

void emit(const Job& job, const Json& report) {
  std::string text = io::dump(report);
  if (!job.out) {
    std::cout << text;
    return;
  }
  std::ofstream f(*job.out, std::ios::binary);
  if (!f) throw InputError(*job.out, "cannot write report");
  f << text;
}

struct Pair {
  Field field;
  ExactMatrix a, a_star;
};

Pair read_pair(const Document& doc, const Job& job) {
  doc.require_object(Pointer());
  Field f = doc.field(job.field);
  doc.require(Pointer(), "A");
  doc.require(Pointer(), "Astar");
  ExactMatrix a = doc.matrix(Pointer("/A"), f);
  ExactMatrix as = doc.matrix(Pointer("/Astar"), f);
  if (a.rows() != as.rows())
    doc.error(Pointer("/Astar"), "A is " + std::to_string(a.rows()) + "x" + std::to_string(a.rows()) + " but A* is " +
                                     std::to_string(as.rows()) + "x" + std::to_string(as.rows()));
  return {f, a, as};
}

NortonOptions norton(const Job& job) {
  NortonOptions o;
  o.seed = job.seed;
  return o;
}

// System in the ordering named by the file, or the default standard ordering.
TriDiagonalSystem read_system(const Document& doc, const Pair& p) {
  auto choices = standard_orderings(p.a, p.a_star);
  OrderingChoice choice = default_choice(choices);
  if (doc.optional(Pointer(), "ordering")) {
    doc.require(Pointer("/ordering"), "theta");
    doc.require(Pointer("/ordering"), "theta_star");
    choice = {doc.scalars(Pointer("/ordering/theta"), p.field), doc.scalars(Pointer("/ordering/theta_star"), p.field)};
    if (std::find(choices.begin(), choices.end(), choice) == choices.end())
      doc.error(Pointer("/ordering"), "not a standard ordering; standard ones are " + [&] {
        std::string all;
        for (const auto& c : choices) all += (all.empty() ? "" : " | ") + c.key();
        return all;
      }());
  }
  return build_system(p.a, p.a_star, choice);
}

Json orderings_json(const ExactMatrix& a, const ExactMatrix& as) {
  Json out = Json::array();
  for (const auto& c : standard_orderings(a, as))
    out.push_back({{"theta", io::scalars_json(c.theta)}, {"theta_star", io::scalars_json(c.theta_star)}});
  return out;
}

Outcome run_check(const Document& doc, const Job& job) {
  Pair p = read_pair(doc, job);
  ValidationReport r = verify_td_pair(p.a, p.a_star, norton(job));
  Json rep = io::envelope(job.command, job.seed);
  rep["field"] = io::field_json(p.field);
  rep["report"] = io::validation_json(r);
  rep["standard_orderings"] = r.passed() ? orderings_json(p.a, p.a_star) : Json::array();
  return {rep, r.passed()};
}

Outcome run_params(const Document& doc, const Job& job) {
  Pair p = read_pair(doc, job);
  ValidationReport r = verify_td_pair(p.a, p.a_star, norton(job));
  Json rep = io::envelope(job.command, job.seed);
  rep["field"] = io::field_json(p.field);
  rep["report"] = io::validation_json(r);
  rep["parameters"] = nullptr;
  rep["conditions"] = nullptr;
  if (!r.passed()) {
    rep["error"] = "not a tridiagonal pair";
    return {rep, false};
  }
  TriDiagonalSystem s = read_system(doc, p);
  rep["system"] = io::system_json(s);
  if (!s.sharp()) {
    rep["error"] = "NotSharp: rho_0 = " + std::to_string(s.rho.front());
    return {rep, false};
  }
  ParameterArray pa{s.d, s.theta, s.theta_star, split_sequence(s)};
  ConditionReport cr = check_conjecture_conditions(pa);
  rep["parameters"] = io::parameters_json(pa);
  rep["conditions"] = io::conditions_json(cr);
  return {rep, cr.passed()};
}

Outcome run_fit(const Document& doc, const Job& job) {
  doc.require_object(Pointer());
  Field f = doc.field(job.field);
  doc.require(Pointer(), "theta");
  doc.require(Pointer(), "theta_star");
  auto theta = doc.scalars(Pointer("/theta"), f);
  auto theta_star = doc.scalars(Pointer("/theta_star"), f);
  if (theta.empty()) doc.error(Pointer("/theta"), "theta must be nonempty");
  if (theta.size() != theta_star.size())
    doc.error(Pointer("/theta_star"), "theta has " + std::to_string(theta.size()) + " entries but theta_star has " +
                                          std::to_string(theta_star.size()));
  FitResult r = fit(theta, theta_star);
  Json rep = io::envelope(job.command, job.seed);
  rep["field"] = io::field_json(f);
  rep["fit"] = io::fit_json(r);
  return {rep, r.status != FitStatus::not_qracah};
}

Outcome run_generate(const Document& doc, const Job& job) {
  doc.require_object(Pointer());
  Field f = doc.field(job.field);
  for (const char* k : {"d", "q", "a", "b", "c", "a_star", "b_star", "c_star"}) doc.require(Pointer(), k);
  auto s = [&](const char* k) { return doc.scalar(Pointer("/" + std::string(k)), f); };
  QRacahParameters p{doc.count(Pointer("/d")), s("q"), s("a"), s("b"), s("c"), s("a_star"), s("b_star"), s("c_star")};
  Json rep = io::envelope(job.command, job.seed);
  rep["field"] = io::field_json(f);
  if (std::string bad = p.constraint_violation(); !bad.empty()) {
    rep["error"] = "ConstraintViolated: " + bad;
    return {rep, false};
  }
  rep["parameters"] = io::qracah_json(p);
  GeneratedSequences g = generate_sequences(p);
  rep["sequences"] = io::generated_json(g);
  if (g.degenerate) {
    rep["error"] = "DegenerateSpectrum";
    return {rep, false};
  }
  return {rep, true};
}

Outcome run_construct(const Document& doc, const Job& job) {
  doc.require_object(Pointer());
  Field f = doc.field(job.field);
  for (const char* k : {"theta", "theta_star", "phi"}) doc.require(Pointer(), k);
  auto theta = doc.scalars(Pointer("/theta"), f);
  auto theta_star = doc.scalars(Pointer("/theta_star"), f);
  auto phi = doc.scalars(Pointer("/phi"), f);
  SplitBasisCandidate c;
  try {
    c = construct_candidate(theta, theta_star, phi);
  } catch (const Error& e) {
    Pointer at = e.kind() == ErrorKind::ZeroPhi ? Pointer("/phi")
                 : e.kind() == ErrorKind::RepeatedEigenvalue && std::string(e.what()).find("theta*") != std::string::npos
                     ? Pointer("/theta_star")
                     : Pointer("/theta");
    if (e.kind() == ErrorKind::DimensionMismatch) at = Pointer("/phi");
    doc.error(at, e.what());
  }
  Json rep = io::envelope(job.command, job.seed);
  rep["field"] = io::field_json(f);
  rep["A"] = io::matrix_json(c.A);
  rep["Astar"] = io::matrix_json(c.Astar);
  rep["report"] = io::validation_json(verify_td_pair(c.A, c.Astar, norton(job)));
  try {
    VerifiedCandidate v = construct_and_verify(theta, theta_star, phi, job.seed);
    rep["system"] = io::system_json(v.system);
    rep["parameters"] = io::parameters_json(v.parameters);
    return {rep, true};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::CandidateRejected && e.kind() != ErrorKind::OnlyIfViolated) throw;
    rep["error"] = e.what();
    return {rep, false};
  }
}

std::vector<std::pair<Polynomial, std::optional<Pointer>>> mu_polynomials(const Document& doc, std::size_t d) {
  std::vector<std::pair<Polynomial, std::optional<Pointer>>> out;
  if (const Json* list = doc.optional(Pointer(), "polynomials")) {
    if (!list->is_array()) doc.error(Pointer("/polynomials"), "expected an array of polynomial strings");
    for (std::size_t i = 0; i < list->size(); ++i) {
      Pointer at = Pointer("/polynomials") / i;
      out.emplace_back(doc.polynomial(at), at);
    }
    return out;
  }
  for (auto& m : monomials_up_to(std::min<std::size_t>(d, 3), 3)) out.emplace_back(std::move(m), std::nullopt);
  if (d >= 2) out.emplace_back(Polynomial::parse("x1*x2 - x2*x1"), std::nullopt);
  return out;
}

Outcome run_mu(const Document& doc, const Job& job) {
  Pair p = read_pair(doc, job);
  ValidationReport r = verify_td_pair(p.a, p.a_star, norton(job));
  Json rep = io::envelope(job.command, job.seed);
  rep["field"] = io::field_json(p.field);
  rep["results"] = Json::array();
  if (!r.passed()) {
    rep["error"] = "not a tridiagonal pair";
    rep["report"] = io::validation_json(r);
    return {rep, false};
  }
  TriDiagonalSystem s = read_system(doc, p);
  rep["system"] = io::system_json(s);
  if (!s.sharp()) {
    rep["error"] = "NotSharp: rho_0 = " + std::to_string(s.rho.front());
    return {rep, false};
  }
  bool all = true;
  for (const auto& [f, at] : mu_polynomials(doc, s.d)) {
    if (f.max_variable() > s.d) {
      if (at) doc.error(*at, "uses x" + std::to_string(f.max_variable()) + " but d = " + std::to_string(s.d));
    }
    try {
      rep["results"].push_back(io::mu_json(mu_scalar_action(s, f)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ActionMismatch && e.kind() != ErrorKind::IdentityViolated) throw;
      all = false;
      rep["results"].push_back({{"polynomial", f.to_string()}, {"scalar_action_verified", false}, {"error", e.what()}});
    }
  }
  MuWitnessReport base = mu_scalar_action(s, Polynomial::constant(1));
  rep["xi"] = io::scalars_json(base.xi);
  rep["zeta"] = io::scalars_json(zeta_from_xi(base.xi, s.theta_star));
  rep["all_verified"] = all;
  return {rep, all};
}

CorpusGrid read_grid(const Document* doc, const Job& job) {
  CorpusGrid g = CorpusGrid::default_grid();
  if (job.field) {
    try {
      g.fields = {io::field_from_flag(*job.field)};
    } catch (const Error& e) {
      throw InputError("--field", e.what());
    }
  }
  if (!doc) return g;
  doc->require_object(Pointer());
  auto ints = [&](const char* key, std::vector<long long>& dst) {
    if (!doc->optional(Pointer(), key)) return;
    Pointer at("/" + std::string(key));
    if (!doc->root().at(at).is_array()) doc->error(at, "expected an array of integers");
    dst.clear();
    for (std::size_t i = 0; i < doc->root().at(at).size(); ++i) dst.push_back(doc->integer(at / i));
  };
  auto tuples = [&]<std::size_t N>(const char* key, std::vector<std::array<long long, N>>& dst) {
    if (!doc->optional(Pointer(), key)) return;
    Pointer at("/" + std::string(key));
    if (!doc->root().at(at).is_array()) doc->error(at, "expected an array of integer tuples");
    dst.clear();
    for (std::size_t i = 0; i < doc->root().at(at).size(); ++i) {
      const Json& t = doc->root().at(at / i);
      if (!t.is_array() || t.size() != N) doc->error(at / i, "expected " + std::to_string(N) + " integers");
      std::array<long long, N> v{};
      for (std::size_t k = 0; k < N; ++k) v[k] = doc->integer(at / i / k);
      dst.push_back(v);
    }
  };
  if (const Json* fields = doc->optional(Pointer(), "fields")) {
    if (!fields->is_array()) doc->error(Pointer("/fields"), "expected an array of field names");
    g.fields.clear();
    for (std::size_t i = 0; i < fields->size(); ++i) {
      Pointer at = Pointer("/fields") / i;
      try {
        g.fields.push_back((*fields)[i].is_string() ? io::field_from_flag((*fields)[i].get<std::string>())
                                                    : io::field_from_json((*fields)[i]));
      } catch (const Error& e) {
        doc->error(at, e.what());
      }
    }
  }
  std::vector<long long> diameters;
  for (auto d : g.diameters) diameters.push_back(static_cast<long long>(d));
  ints("diameters", diameters);
  g.diameters.clear();
  for (std::size_t i = 0; i < diameters.size(); ++i) {
    if (diameters[i] < 0 || diameters[i] > 4) doc->error(Pointer("/diameters") / i, "diameters must lie in 0..4");
    g.diameters.push_back(static_cast<std::size_t>(diameters[i]));
  }
  ints("q", g.q);
  ints("phi1", g.phi1);
  tuples.operator()<3>("abc", g.abc);
  tuples.operator()<3>("abc_star", g.abc_star);
  tuples.operator()<2>("tensor_phi", g.tensor_phi);
  return g;
}

Outcome run_corpus(const Document* doc, const Job& job) {
  if (!job.out) throw InputError("--out", "corpus needs an output directory");
  CorpusGrid grid = read_grid(doc, job);
  std::vector<CorpusInstance> instances;
  try {
    instances = build_corpus(grid, job.seed, job.max_instances);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::CapExceeded) throw;
    throw InputError("--max-instances", e.what());
  }
  fs::path dir(*job.out);
  fs::create_directories(dir / "instances");
  for (const auto& inst : instances) {
    std::ofstream f(dir / "instances" / (inst.key + ".json"), std::ios::binary);
    f << io::dump(io::instance_json(inst));
  }
  std::ofstream(dir / "manifest.json", std::ios::binary) << io::dump(io::manifest_json(instances, job.seed));
  std::size_t valid = 0;
  for (const auto& inst : instances) valid += inst.valid;
  spdlog::info("corpus: {} instances, {} valid, written to {}", instances.size(), valid, dir.string());
  Json rep = io::envelope(job.command, job.seed);
  rep["instances"] = instances.size();
  rep["valid"] = valid;
  return {rep, true};
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("tdpkit");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("TDPKIT_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Exact checks and constructions for tridiagonal pairs"};
  app.require_subcommand(1);
  app.fallthrough();
  Job job;
  app.add_option("--field", job.field, "rational or gf:p (must agree with the file's field if both are given)");
  app.add_option("--seed", job.seed, "seed for randomized steps")->default_val(0);
  app.add_option("--out", job.out, "report path (directory for corpus)");
  app.add_option("--max-instances", job.max_instances, "corpus size cap")->default_val(500);
  app.add_flag_function("--version", [](std::int64_t) {
    std::cout << "tdpkit " << io::kVersion << "\n";
    std::exit(0);
  }, "print the version");

  const std::vector<std::pair<const char*, const char*>> commands{
      {"check", "verify the tridiagonal pair axioms on {field, A, Astar}"},
      {"params", "parameter array and its three conditions for a sharp pair"},
      {"qracah-fit", "fit q-Racah parameters to {theta, theta_star}"},
      {"generate", "eigenvalue sequences from q-Racah parameters"},
      {"construct", "build and verify the split-basis candidate for {theta, theta_star, phi}"},
      {"mu-test", "scalar action of polynomials in the E*0 tau_i(A) E*0"},
      {"corpus", "build the instance corpus and its manifest into --out"}};
  for (auto [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", job.input, std::string(name) == "corpus" ? "optional grid file" : "input JSON file")
        ->required(std::string(name) != "corpus");
    sub->callback([&job, n = std::string(name)] { job.command = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    spdlog::debug("{} {} seed={}", job.command, job.input, job.seed);
    Outcome o;
    if (job.command == "corpus") {
      std::optional<Document> doc;
      if (!job.input.empty()) doc = Document::load(job.input);
      o = run_corpus(doc ? &*doc : nullptr, job);
    } else {
      Document doc = Document::load(job.input);
      if (job.command == "check") o = run_check(doc, job);
      if (job.command == "params") o = run_params(doc, job);
      if (job.command == "qracah-fit") o = run_fit(doc, job);
      if (job.command == "generate") o = run_generate(doc, job);
      if (job.command == "construct") o = run_construct(doc, job);
      if (job.command == "mu-test") o = run_mu(doc, job);
    }
    o.report["status"] = o.ok ? "pass" : "fail";
    if (job.command == "corpus") {
      std::cout << io::dump(o.report);
    } else {
      emit(job, o.report);
    }
    return o.ok ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << job.input << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
