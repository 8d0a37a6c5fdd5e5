#include "tdpkit/corpus.hpp"

#include <algorithm>

namespace tdp {

CorpusGrid CorpusGrid::default_grid() {
  CorpusGrid g;
  g.fields = {Field::rational(), Field::prime(13)};
  g.diameters = {0, 1, 2, 3, 4};
  g.q = {2, 3};
  g.abc = {{0, 1, 2}, {1, -1, 3}};
  g.abc_star = {{0, 1, -2}, {2, 3, 1}};
  g.phi1 = {1, 2};
  g.tensor_phi = {{1, 2}, {1, 3}, {2, 3}};
  return g;
}

std::size_t CorpusGrid::size() const {
  return fields.size() *
         (diameters.size() * q.size() * abc.size() * abc_star.size() * phi1.size() + tensor_phi.size());
}

namespace {

std::string field_tag(const Field& f) {
  if (f.kind() == FieldKind::rational) return "rational";
  if (f.kind() == FieldKind::prime) return "gf" + std::to_string(f.characteristic());
  fail(ErrorKind::InvalidArgument, "corpus fields must be Q or GF(p), got " + f.name());
}

std::string num(long long x) { return x < 0 ? "m" + std::to_string(-x) : std::to_string(x); }

ExactMatrix kron(const ExactMatrix& x, const ExactMatrix& y) {
  ExactMatrix m(x.field(), x.rows() * y.rows(), x.cols() * y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      for (std::size_t k = 0; k < y.rows(); ++k)
        for (std::size_t l = 0; l < y.cols(); ++l) m(i * y.rows() + k, j * y.cols() + l) = x(i, j) * y(k, l);
  return m;
}

ExactMatrix kron_sum(const ExactMatrix& x, const ExactMatrix& y) {
  return kron(x, ExactMatrix::identity(x.field(), y.rows())) + kron(ExactMatrix::identity(x.field(), x.rows()), y);
}

bool fit_ok(const std::vector<FieldElement>& theta, const std::vector<FieldElement>& theta_star) {
  FitResult r = fit(theta, theta_star);
  if (r.status == FitStatus::parametric_family) return true;
  if (r.status != FitStatus::fitted) return false;
  for (const auto& p : r.solutions) {
    auto g = generate_sequences(p);
    bool same = g.theta.size() == theta.size();
    for (std::size_t i = 0; same && i < theta.size(); ++i)
      same = g.theta[i] == embed(theta[i], p.field()) && g.theta_star[i] == embed(theta_star[i], p.field());
    if (same) return true;
  }
  return false;
}

void attach_parameters(CorpusInstance& inst) {
  inst.sharp = inst.system->sharp();
  inst.theta = inst.system->theta;
  inst.theta_star = inst.system->theta_star;
  if (inst.sharp) {
    try {
      inst.parameters = extract_parameter_array(*inst.system);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OnlyIfViolated) throw;
      inst.reason = e.what();
    }
  }
  inst.qracah_fit_ok = fit_ok(inst.theta, inst.theta_star);
}

CorpusInstance qracah_instance(const Field& f, std::size_t d, long long q, const std::array<long long, 3>& abc,
                               const std::array<long long, 3>& abc_star, long long phi1, std::uint64_t seed) {
  CorpusInstance inst;
  inst.key = field_tag(f) + "_qracah_d" + std::to_string(d) + "_q" + num(q) + "_abc" + num(abc[0]) + "." +
             num(abc[1]) + "." + num(abc[2]) + "_abcs" + num(abc_star[0]) + "." + num(abc_star[1]) + "." +
             num(abc_star[2]) + "_phi" + num(phi1);
  inst.field = f;
  inst.d = d;
  inst.origin = "qracah";
  QRacahParameters p{d,
                     f.from_int(q),
                     f.from_int(abc[0]),
                     f.from_int(abc[1]),
                     f.from_int(abc[2]),
                     f.from_int(abc_star[0]),
                     f.from_int(abc_star[1]),
                     f.from_int(abc_star[2])};
  inst.qracah = p;
  if (std::string bad = p.constraint_violation(); !bad.empty()) {
    inst.reason = "q-Racah constraint violated: " + bad;
    return inst;
  }
  GeneratedSequences g = generate_sequences(p);
  inst.theta = g.theta;
  inst.theta_star = g.theta_star;
  if (g.degenerate) {
    inst.reason = std::string(g.degenerate->dual ? "theta*" : "theta") + "_" + std::to_string(g.degenerate->i) +
                  " = " + (g.degenerate->dual ? "theta*" : "theta") + "_" + std::to_string(g.degenerate->j);
    return inst;
  }
  inst.phi = leonard_phi(g.theta, g.theta_star, f.from_int(phi1));
  try {
    SplitBasisCandidate c = construct_candidate(g.theta, g.theta_star, inst.phi);
    inst.A = c.A;
    inst.Astar = c.Astar;
    VerifiedCandidate v = construct_and_verify(g.theta, g.theta_star, inst.phi, seed);
    inst.valid = true;
    inst.system = std::move(v.system);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroPhi && e.kind() != ErrorKind::CandidateRejected) throw;
    inst.reason = e.what();
    return inst;
  }
  attach_parameters(inst);
  return inst;
}

CorpusInstance tensor_instance(const Field& f, const std::array<long long, 2>& phis, std::uint64_t seed) {
  CorpusInstance inst;
  inst.key = field_tag(f) + "_tensor_phi" + num(phis[0]) + "." + num(phis[1]);
  inst.field = f;
  inst.origin = "tensor";
  std::vector<FieldElement> t{f.zero(), f.one()};
  try {
    auto x = construct_candidate(t, t, {f.from_int(phis[0])});
    auto y = construct_candidate(t, t, {f.from_int(phis[1])});
    inst.A = kron_sum(x.A, y.A);
    inst.Astar = kron_sum(x.Astar, y.Astar);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroPhi) throw;
    inst.reason = e.what();
    return inst;
  }
  NortonOptions opts;
  opts.seed = seed;
  ValidationReport r = verify_td_pair(*inst.A, *inst.Astar, opts);
  if (r.diameter) inst.d = *r.diameter;
  if (!r.passed()) {
    inst.reason = "not a tridiagonal pair";
    for (auto [c, name] : {std::pair{&r.diagonalizable, "(i)"}, std::pair{&r.standard_a, "(ii)"},
                           std::pair{&r.standard_a_star, "(iii)"}, std::pair{&r.irreducible, "(iv)"}})
      if (c->verdict != Verdict::pass) {
        inst.reason = std::string(name) + " " + std::string(to_string(c->verdict));
        break;
      }
    return inst;
  }
  inst.valid = true;
  inst.system = build_system(*inst.A, *inst.Astar, default_choice(standard_orderings(*inst.A, *inst.Astar)));
  attach_parameters(inst);
  return inst;
}

}  // namespace

std::vector<CorpusInstance> build_corpus(const CorpusGrid& grid, std::uint64_t seed, std::size_t cap) {
  if (grid.size() > cap)
    fail(ErrorKind::CapExceeded, "grid has " + std::to_string(grid.size()) + " instances, cap is " +
                                     std::to_string(cap));
  for (std::size_t d : grid.diameters)
    if (d > 4) fail(ErrorKind::InvalidArgument, "corpus diameters are limited to d <= 4");
  std::vector<CorpusInstance> out;
  for (const Field& f : grid.fields) {
    for (std::size_t d : grid.diameters)
      for (long long q : grid.q)
        for (const auto& abc : grid.abc)
          for (const auto& abc_star : grid.abc_star)
            for (long long phi1 : grid.phi1) out.push_back(qracah_instance(f, d, q, abc, abc_star, phi1, seed));
    for (const auto& phis : grid.tensor_phi) out.push_back(tensor_instance(f, phis, seed));
  }
  std::sort(out.begin(), out.end(), [](const CorpusInstance& a, const CorpusInstance& b) { return a.key < b.key; });
  auto dup = std::adjacent_find(out.begin(), out.end(),
                                [](const CorpusInstance& a, const CorpusInstance& b) { return a.key == b.key; });
  if (dup != out.end()) fail(ErrorKind::InvalidArgument, "grid lists instance " + dup->key + " twice");
  return out;
}

}  // namespace tdp
