#include "tdpkit/synthesis.hpp"

#include <random>

namespace tdp {

namespace {

const Field& common_field(const std::vector<FieldElement>& theta, const std::vector<FieldElement>& theta_star,
                          const std::vector<FieldElement>& phi) {
  if (theta.empty()) fail(ErrorKind::DimensionMismatch, "theta must be nonempty");
  const Field& f = theta.front().field();
  for (const auto* s : {&theta, &theta_star, &phi})
    for (const auto& x : *s)
      if (x.field() != f) fail(ErrorKind::MixedFields, "candidate data in different fields");
  return f;
}

void require_distinct(const std::vector<FieldElement>& s, const char* name) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i] == s[j])
        fail(ErrorKind::RepeatedEigenvalue,
             std::string(name) + "_" + std::to_string(i) + " = " + name + "_" + std::to_string(j));
}

// s with m = s * e, using the first nonzero entry of e as pivot.
std::optional<FieldElement> scalar_multiple(const ExactMatrix& m, const ExactMatrix& e) {
  for (std::size_t r = 0; r < e.rows(); ++r)
    for (std::size_t c = 0; c < e.cols(); ++c)
      if (!e(r, c).is_zero()) {
        FieldElement s = m(r, c) / e(r, c);
        if (m != s * e) return std::nullopt;
        return s;
      }
  return std::nullopt;
}

ExactMatrix seeded_invertible(const Field& f, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  while (true) {
    ExactMatrix m(f, n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = random_element(f, rng, 5);
    if (rank(m) == n) return m;
  }
}

std::string first_failure(const ValidationReport& r) {
  for (auto [c, name] : {std::pair{&r.diagonalizable, "(i) diagonalizable"},
                         std::pair{&r.standard_a, "(ii) A* tridiagonal on eigenspaces of A"},
                         std::pair{&r.standard_a_star, "(iii) A tridiagonal on eigenspaces of A*"},
                         std::pair{&r.irreducible, "(iv) irreducible"}}) {
    if (c->verdict != Verdict::pass)
      return std::string(name) + " " + std::string(to_string(c->verdict)) + (c->detail.empty() ? "" : ": " + c->detail);
  }
  if (!r.diameters_agree()) return "diameters of A and A* differ";
  return {};
}

}  // namespace

SplitBasisCandidate construct_candidate(const std::vector<FieldElement>& theta,
                                        const std::vector<FieldElement>& theta_star,
                                        const std::vector<FieldElement>& phi) {
  const Field& f = common_field(theta, theta_star, phi);
  std::size_t n = theta.size();
  if (theta_star.size() != n || phi.size() + 1 != n)
    fail(ErrorKind::DimensionMismatch, "need d+1 theta, d+1 theta* and d phi; got " + std::to_string(theta.size()) +
                                           ", " + std::to_string(theta_star.size()) + ", " +
                                           std::to_string(phi.size()));
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (phi[i].is_zero()) fail(ErrorKind::ZeroPhi, "phi_" + std::to_string(i + 1) + " = 0");
  require_distinct(theta, "theta");
  require_distinct(theta_star, "theta*");

  SplitBasisCandidate c{n - 1, theta, theta_star, phi, ExactMatrix(f, n, n), ExactMatrix(f, n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    c.A(i, i) = theta[i];
    c.Astar(i, i) = theta_star[i];
    if (i + 1 < n) {
      c.A(i + 1, i) = f.one();
      c.Astar(i, i + 1) = phi[i];
    }
  }
  return c;
}

std::vector<FieldElement> leonard_phi(const std::vector<FieldElement>& theta,
                                      const std::vector<FieldElement>& theta_star, const FieldElement& phi1) {
  if (theta.size() != theta_star.size() || theta.empty())
    fail(ErrorKind::DimensionMismatch, "theta and theta* must have equal nonzero length");
  std::size_t d = theta.size() - 1;
  if (d == 0) return {};
  FieldElement span = theta[0] - theta[d];
  if (span.is_zero()) fail(ErrorKind::DivisionByZero, "theta_0 = theta_d");
  FieldElement dual1 = phi1 - (theta_star[1] - theta_star[0]) * span;
  std::vector<FieldElement> phi;
  FieldElement partial = phi1.field().zero();
  for (std::size_t i = 1; i <= d; ++i) {
    partial += theta[i - 1] - theta[d - i + 1];
    phi.push_back(dual1 * partial / span + (theta_star[i] - theta_star[0]) * (theta[i - 1] - theta[d]));
  }
  return phi;
}

VerifiedCandidate construct_and_verify(const std::vector<FieldElement>& theta,
                                       const std::vector<FieldElement>& theta_star,
                                       const std::vector<FieldElement>& phi, std::uint64_t seed) {
  SplitBasisCandidate c = construct_candidate(theta, theta_star, phi);
  NortonOptions opts;
  opts.seed = seed;
  ValidationReport report = verify_td_pair(c.A, c.Astar, opts);
  std::string bad = first_failure(report);
  if (!bad.empty()) fail(ErrorKind::CandidateRejected, bad);

  TriDiagonalSystem sys;
  try {
    sys = build_system(c.A, c.Astar, OrderingChoice{theta, theta_star});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidArgument) throw;
    fail(ErrorKind::CandidateRejected, "given eigenvalue orderings are not standard");
  }
  if (!sys.sharp()) fail(ErrorKind::CandidateRejected, "system is not sharp");
  ParameterArray params = extract_parameter_array(sys);

  TriDiagonalSystem moved = conjugate(sys, seeded_invertible(sys.field(), sys.dim(), seed));
  if (!(extract_parameter_array(moved) == params))
    fail(ErrorKind::InvariantViolation, "parameter array changed under a change of basis");
  return {std::move(c), std::move(report), std::move(sys), std::move(params)};
}

PhiZetaEvidence probe_phi_zeta(const std::vector<FieldElement>& theta, const std::vector<FieldElement>& theta_star,
                               const std::vector<std::vector<FieldElement>>& phi_grid) {
  PhiZetaEvidence ev;
  ev.theta = theta;
  ev.theta_star = theta_star;
  for (const auto& phi : phi_grid) {
    VerifiedCandidate v;
    try {
      v = construct_and_verify(theta, theta_star, phi);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::CandidateRejected || e.kind() == ErrorKind::ZeroPhi) continue;
      throw;
    }
    ++ev.accepted;
    FieldElement running = theta.front().field().one();
    bool agree = v.parameters.zeta.front() == running;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      running *= phi[i];
      agree = agree && v.parameters.zeta[i + 1] == running;
    }
    if (agree) ++ev.agreeing;
  }
  return ev;
}

std::vector<FieldElement> phi_from_zeta(const std::vector<FieldElement>& zeta, const PhiZetaEvidence& evidence) {
  if (!evidence.confirmed())
    fail(ErrorKind::InvalidArgument, "zeta_i = phi_1...phi_i not confirmed (" + std::to_string(evidence.agreeing) +
                                         " of " + std::to_string(evidence.accepted) + " candidates agree)");
  if (zeta.size() != evidence.theta.size())
    fail(ErrorKind::DimensionMismatch, "evidence was gathered for d = " + std::to_string(evidence.theta.size() - 1));
  std::vector<FieldElement> phi;
  for (std::size_t i = 1; i < zeta.size(); ++i) {
    if (zeta[i].is_zero()) fail(ErrorKind::ZeroPhi, "zeta_" + std::to_string(i) + " = 0");
    phi.push_back(zeta[i] / zeta[i - 1]);
  }
  return phi;
}

std::vector<FieldElement> zeta_from_xi(const std::vector<FieldElement>& xi,
                                       const std::vector<FieldElement>& theta_star) {
  if (theta_star.size() != xi.size() + 1) fail(ErrorKind::DimensionMismatch, "need d xi and d+1 theta*");
  const Field& f = theta_star.front().field();
  std::vector<FieldElement> zeta{f.one()};
  FieldElement prod = f.one();
  for (std::size_t i = 1; i < theta_star.size(); ++i) {
    prod *= theta_star[0] - theta_star[i];
    zeta.push_back(xi[i - 1] * prod);
  }
  return zeta;
}

GhValues gh_values(const std::vector<FieldElement>& xi, const std::vector<FieldElement>& theta,
                   const std::vector<FieldElement>& theta_star) {
  std::size_t d = xi.size();
  if (d == 0) fail(ErrorKind::InvalidArgument, "g and h need d >= 1");
  if (theta.size() != d + 1 || theta_star.size() != d + 1)
    fail(ErrorKind::DimensionMismatch, "need d xi, d+1 theta and d+1 theta*");
  auto eta = [&](std::size_t i) { return tau_eta_build(theta, ShiftFamily::eta, i)(theta[0]); };
  auto eta_star = [&](std::size_t i) { return tau_eta_build(theta_star, ShiftFamily::eta_star, i)(theta_star[0]); };

  FieldElement lead = eta_star(d);
  FieldElement inner = eta(d);
  for (std::size_t i = 1; i <= d; ++i) inner += eta(d - i) * xi[i - 1];
  GhValues out{lead * xi[d - 1], lead * inner};

  auto zeta = zeta_from_xi(xi, theta_star);
  if (out.g != zeta[d]) fail(ErrorKind::IdentityViolated, "g(xi) = " + out.g.to_string() + " but zeta_d = " +
                                                             zeta[d].to_string());
  FieldElement sum = theta.front().field().zero();
  for (std::size_t i = 0; i <= d; ++i) sum += eta(d - i) * eta_star(d - i) * zeta[i];
  if (out.h != sum)
    fail(ErrorKind::IdentityViolated, "h(xi) = " + out.h.to_string() + " but the zeta sum is " + sum.to_string());
  return out;
}

MuWitnessReport mu_scalar_action(const TriDiagonalSystem& s, const Polynomial& f) {
  if (!s.sharp()) fail(ErrorKind::NotSharp, "rho_0 = " + std::to_string(s.rho.empty() ? 0 : s.rho.front()));
  if (f.max_variable() > s.d)
    fail(ErrorKind::IndexOutOfRange, "polynomial uses x" + std::to_string(f.max_variable()) + " but d = " +
                                         std::to_string(s.d));
  const ExactMatrix& e0 = s.E_star.front();
  MuWitnessReport rep;
  rep.polynomial = f;

  std::vector<ExactMatrix> ms;
  for (std::size_t i = 1; i <= s.d; ++i) {
    ExactMatrix m = e0 * tau_eta_build(s.theta, ShiftFamily::tau, i)(s.A) * e0;
    auto xi = scalar_multiple(m, e0);
    if (!xi) fail(ErrorKind::ActionMismatch, "E*_0 tau_" + std::to_string(i) + "(A) E*_0 is not a multiple of E*_0");
    rep.xi.push_back(*xi);
    ms.push_back(std::move(m));
  }

  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j)
      if (ms[i] * ms[j] != ms[j] * ms[i])
        fail(ErrorKind::ActionMismatch, "M_" + std::to_string(i + 1) + " and M_" + std::to_string(j + 1) +
                                            " do not commute");
  rep.commuting = true;

  rep.scalar = f.evaluate(rep.xi, s.field());
  if (f.evaluate(ms, e0) != rep.scalar * e0)
    fail(ErrorKind::ActionMismatch, "f(M) != f(xi) E*_0 for f = " + f.to_string());
  rep.scalar_action_verified = true;

  if (s.d >= 1) {
    GhValues gh = gh_values(rep.xi, s.theta, s.theta_star);
    rep.g_value = gh.g;
    rep.h_value = gh.h;
  }
  return rep;
}

}  // namespace tdp
