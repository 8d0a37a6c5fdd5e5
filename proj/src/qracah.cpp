#include "tdpkit/qracah.hpp"

#include <algorithm>

#include "tdpkit/exactlinalg.hpp"

namespace tdp {

FieldElement QRacahParameters::beta() const {
  FieldElement q2 = q * q;
  return q2 + q2.inverse() + field().one();
}

FieldElement beta_of(const QRacahParameters& p) { return p.beta(); }

std::string QRacahParameters::constraint_violation() const {
  const Field& f = field();
  for (const FieldElement* x : {&a, &b, &c, &a_star, &b_star, &c_star})
    if (x->field() != f) return "all parameters in one field";
  if (q.is_zero()) return "q != 0";
  FieldElement q2 = q * q;
  if (q2 == f.one()) return "q^2 != 1";
  if (q2 == -f.one()) return "q^2 != -1";
  if ((b * b_star * c * c_star).is_zero()) return "b b* c c* != 0";
  return {};
}

namespace {

std::vector<FieldElement> sequence(std::size_t d, const FieldElement& q, const FieldElement& a, const FieldElement& b,
                                   const FieldElement& c) {
  std::vector<FieldElement> out;
  for (std::size_t i = 0; i <= d; ++i) {
    long long e = 2 * static_cast<long long>(i) - static_cast<long long>(d);
    out.push_back(a + b * q.pow(e) + c * q.pow(-e));
  }
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> first_collision(const std::vector<FieldElement>& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i] == s[j]) return std::pair{i, j};
  return std::nullopt;
}

// (a, b, c) with s_i = a + b q^(2i-d) + c q^(d-2i) for every i, if any.
std::optional<std::vector<FieldElement>> solve_abc(const std::vector<FieldElement>& s, const FieldElement& q) {
  const Field& f = q.field();
  std::size_t d = s.size() - 1;
  auto row = [&](std::size_t i) {
    long long e = 2 * static_cast<long long>(i) - static_cast<long long>(d);
    return Vector{f.one(), q.pow(e), q.pow(-e)};
  };
  std::vector<std::size_t> rows{0, 1, d};
  ExactMatrix m = ExactMatrix::from_rows(f, {row(0), row(1), row(d)});
  Vector rhs{s[0], s[1], s[d]};
  LinearSolution sol = solve_linear(m, rhs);
  if (!sol.unique) {
    // singular for the chosen rows (q a small root of unity): use them all
    std::vector<Vector> all;
    Vector all_rhs;
    for (std::size_t i = 0; i <= d; ++i) {
      all.push_back(row(i));
      all_rhs.push_back(s[i]);
    }
    sol = solve_linear(ExactMatrix::from_rows(f, all), all_rhs);
    if (!sol.consistent) return std::nullopt;
  }
  if (sequence(d, q, sol.particular[0], sol.particular[1], sol.particular[2]) != s) return std::nullopt;
  return sol.particular;
}

std::vector<FieldElement> embed_all(const std::vector<FieldElement>& xs, const Field& target) {
  std::vector<FieldElement> out;
  for (const auto& x : xs) out.push_back(embed(x, target));
  return out;
}

bool params_less(const QRacahParameters& x, const QRacahParameters& y) {
  for (auto [u, v] : {std::pair{&x.q, &y.q}, std::pair{&x.a, &y.a}, std::pair{&x.b, &y.b}, std::pair{&x.c, &y.c},
                      std::pair{&x.a_star, &y.a_star}, std::pair{&x.b_star, &y.b_star},
                      std::pair{&x.c_star, &y.c_star}}) {
    if (canonical_less(*u, *v)) return true;
    if (canonical_less(*v, *u)) return false;
  }
  return false;
}

}  // namespace

GeneratedSequences generate_sequences(const QRacahParameters& p) {
  std::string bad = p.constraint_violation();
  if (!bad.empty()) fail(ErrorKind::InvalidArgument, "q-Racah constraint violated: " + bad);
  GeneratedSequences g;
  g.theta = sequence(p.d, p.q, p.a, p.b, p.c);
  g.theta_star = sequence(p.d, p.q, p.a_star, p.b_star, p.c_star);
  if (auto c = first_collision(g.theta)) {
    g.degenerate = SpectrumCollision{false, c->first, c->second};
  } else if (auto cs = first_collision(g.theta_star)) {
    g.degenerate = SpectrumCollision{true, cs->first, cs->second};
  }
  return g;
}

std::string_view to_string(FitStatus s) noexcept {
  switch (s) {
    case FitStatus::fitted: return "fitted";
    case FitStatus::not_qracah: return "not_qracah";
    case FitStatus::parametric_family: return "parametric_family";
  }
  return "?";
}

FitResult fit(const std::vector<FieldElement>& theta, const std::vector<FieldElement>& theta_star) {
  if (theta.empty() || theta.size() != theta_star.size())
    fail(ErrorKind::DimensionMismatch, "sequences must be nonempty and of equal length");
  const Field f = theta.front().field();
  for (const auto* s : {&theta, &theta_star})
    for (const auto& x : *s)
      if (x.field() != f) fail(ErrorKind::MixedFields, "sequence entries in different fields");
  std::size_t d = theta.size() - 1;
  FitResult r;
  auto reject = [&r](const char* reason, std::string detail) {
    r.status = FitStatus::not_qracah;
    r.reason = reason;
    r.detail = std::move(detail);
    return r;
  };

  for (auto [s, name] : {std::pair{&theta, "theta"}, std::pair{&theta_star, "theta*"}})
    if (auto c = first_collision(*s))
      return reject("sequence_not_distinct", std::string(name) + "_" + std::to_string(c->first) + " = " + name + "_" +
                                                 std::to_string(c->second));

  if (d <= 2) {
    r.status = FitStatus::parametric_family;
    r.detail = "no ratio constrains q when d <= 2";
    if (d == 0) r.free_parameters = {"q", "b", "c", "b_star", "c_star"};
    if (d == 1) r.free_parameters = {"q", "c", "c_star"};
    if (d == 2) r.free_parameters = {"q"};
    return r;
  }

  FieldElement num0 = theta[0] - theta[3], den0 = theta[1] - theta[2];
  for (auto [s, name] : {std::pair{&theta, "theta"}, std::pair{&theta_star, "theta*"}})
    for (std::size_t i = 2; i + 1 <= d; ++i) {
      FieldElement num = (*s)[i - 2] - (*s)[i + 1], den = (*s)[i - 1] - (*s)[i];
      if (num * den0 != num0 * den)
        return reject("ratio_not_constant", std::string(name) + " ratio at i = " + std::to_string(i) + " is " +
                                                (num / den).to_string() + ", expected " + (num0 / den0).to_string());
    }
  FieldElement beta = num0 / den0;
  r.beta = beta;

  // q^2 is a root of y^2 - (beta - 1) y + 1
  QuadraticRoots ys = solve_quadratic(f.one(), f.one() - beta, f.one(), true);
  const Field& f1 = ys.field;
  std::vector<FieldElement> admissible;
  for (const auto& y : ys.roots)
    if (y != f1.one() && y != -f1.one()) admissible.push_back(y);
  if (admissible.empty()) return reject("constraint_violated", "q^2 = " + ys.roots.front().to_string() + " for beta = " +
                                                                   beta.to_string());

  QuadraticRoots qs = solve_quadratic(f1.one(), f1.zero(), -admissible.front(), true);
  if (qs.roots.empty()) return reject("no_q_in_extensions", "no square root of " + admissible.front().to_string());
  const Field& f2 = qs.field;
  FieldElement s = qs.roots.front();
  std::vector<FieldElement> candidates{s, -s, s.inverse(), -s.inverse()};
  std::sort(candidates.begin(), candidates.end(), canonical_less);
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto th = embed_all(theta, f2), ts = embed_all(theta_star, f2);
  std::string last_reason = "linear_system_inconsistent", last_detail;
  for (const auto& q : candidates) {
    auto abc = solve_abc(th, q);
    auto abc_star = solve_abc(ts, q);
    if (!abc || !abc_star) {
      last_detail = "no a, b, c for q = " + q.to_string();
      continue;
    }
    QRacahParameters p{d, q, (*abc)[0], (*abc)[1], (*abc)[2], (*abc_star)[0], (*abc_star)[1], (*abc_star)[2]};
    std::string bad = p.constraint_violation();
    if (!bad.empty()) {
      last_reason = "constraint_violated";
      last_detail = bad + " fails for q = " + q.to_string();
      continue;
    }
    r.solutions.push_back(p);
  }
  if (r.solutions.empty()) return reject(last_reason.c_str(), last_detail);
  std::sort(r.solutions.begin(), r.solutions.end(), params_less);
  r.status = FitStatus::fitted;
  return r;
}

}  // namespace tdp
