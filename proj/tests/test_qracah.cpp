#include <doctest.h>

#include <random>

#include "tdpkit/qracah.hpp"

using namespace tdp;

namespace {

const Field Q = Field::rational();

QRacahParameters params(const Field& f, std::size_t d, long long q, long long a, long long b, long long c,
                        long long as, long long bs, long long cs) {
  return {d, f.from_int(q), f.from_int(a), f.from_int(b), f.from_int(c), f.from_int(as), f.from_int(bs), f.from_int(cs)};
}

std::vector<FieldElement> embed_all(const std::vector<FieldElement>& xs, const Field& f) {
  std::vector<FieldElement> out;
  for (const auto& x : xs) out.push_back(embed(x, f));
  return out;
}

bool regenerates(const QRacahParameters& p, const std::vector<FieldElement>& theta,
                 const std::vector<FieldElement>& theta_star) {
  auto g = generate_sequences(p);
  return g.theta == embed_all(theta, p.field()) && g.theta_star == embed_all(theta_star, p.field());
}

// Continue s_0, s_1, s_2 by s_{i+1} = s_{i-2} - beta (s_{i-1} - s_i).
std::vector<FieldElement> recurrence(std::vector<FieldElement> s, const FieldElement& beta, std::size_t d) {
  while (s.size() < d + 1) {
    std::size_t i = s.size() - 1;
    s.push_back(s[i - 2] - beta * (s[i - 1] - s[i]));
  }
  return s;
}

}  // namespace

TEST_CASE("generate_sequences examples") {
  auto g = generate_sequences(params(Q, 2, 2, 0, 1, 2, 0, 1, 2));
  CHECK(g.ok());
  CHECK(g.theta == std::vector<FieldElement>{parse_scalar("33/4", Q), Q.from_int(3), parse_scalar("9/2", Q)});

  auto deg = generate_sequences(params(Q, 2, 2, 0, 1, 1, 0, 1, 2));
  REQUIRE(deg.degenerate);
  CHECK_FALSE(deg.degenerate->dual);
  CHECK(deg.degenerate->i == 0);
  CHECK(deg.degenerate->j == 2);

  auto zero = generate_sequences(params(Q, 0, 3, 5, 7, 11, 1, 2, 3));
  CHECK(zero.theta == std::vector<FieldElement>{Q.from_int(23)});
  CHECK(zero.theta_star == std::vector<FieldElement>{Q.from_int(6)});

  CHECK_THROWS_AS(generate_sequences(params(Q, 3, 1, 0, 1, 2, 0, 1, 2)), Error);
  CHECK_THROWS_AS(generate_sequences(params(Q, 3, 2, 0, 0, 2, 0, 1, 2)), Error);
  CHECK(params(Field::prime(13), 3, 5, 0, 1, 2, 0, 1, 2).constraint_violation() == "q^2 != -1");
}

TEST_CASE("beta examples") {
  CHECK(beta_of(params(Q, 3, 2, 0, 1, 2, 0, 1, 2)) == parse_scalar("21/4", Q));
  QRacahParameters p = params(Q, 3, 2, 0, 1, 2, 0, 1, 2);
  QRacahParameters inv = p;
  inv.q = p.q.inverse();
  CHECK(beta_of(inv) == beta_of(p));
}

TEST_CASE("generated ratios all equal beta") {
  std::mt19937_64 rng(1);
  for (const Field& f : {Q, Field::prime(13)}) {
    for (int t = 0; t < 100; ++t) {
      QRacahParameters p{3 + static_cast<std::size_t>(t % 3), random_element(f, rng), random_element(f, rng),
                         random_element(f, rng),                random_element(f, rng), random_element(f, rng),
                         random_element(f, rng),                random_element(f, rng)};
      if (!p.constraint_violation().empty()) continue;
      auto g = generate_sequences(p);
      if (!g.ok()) continue;
      for (const auto* s : {&g.theta, &g.theta_star})
        for (std::size_t i = 2; i + 1 <= p.d; ++i)
          CHECK(((*s)[i - 2] - (*s)[i + 1]) / ((*s)[i - 1] - (*s)[i]) == p.beta());
    }
  }
}

TEST_CASE("fit recovers generated parameters") {
  QRacahParameters p = params(Q, 3, 2, 0, 1, 2, 1, 3, -1);
  auto g = generate_sequences(p);
  REQUIRE(g.ok());
  auto r = fit(g.theta, g.theta_star);
  REQUIRE(r.status == FitStatus::fitted);
  CHECK(r.beta == p.beta());
  CHECK(std::find(r.solutions.begin(), r.solutions.end(), p) != r.solutions.end());
  CHECK(r.solutions.size() == 4);
  for (const auto& s : r.solutions) {
    CHECK(regenerates(s, g.theta, g.theta_star));
    CHECK(s.constraint_violation().empty());
    QRacahParameters mirrored{s.d, s.q.inverse(), s.a, s.c, s.b, s.a_star, s.c_star, s.b_star};
    CHECK(std::find(r.solutions.begin(), r.solutions.end(), mirrored) != r.solutions.end());
  }
}

TEST_CASE("fit rejects non q-Racah data") {
  std::vector<FieldElement> lin{Q.from_int(0), Q.from_int(1), Q.from_int(2), Q.from_int(3)};
  auto r = fit(lin, lin);
  CHECK(r.status == FitStatus::not_qracah);
  CHECK(r.reason == "constraint_violated");
  CHECK(r.beta == Q.from_int(3));

  auto g = generate_sequences(params(Q, 4, 2, 0, 1, 2, 1, 3, -1));
  auto bent = g.theta;
  bent[4] += Q.one();
  auto rb = fit(bent, g.theta_star);
  CHECK(rb.status == FitStatus::not_qracah);
  CHECK(rb.reason == "ratio_not_constant");

  auto rep = g.theta;
  rep[3] = rep[0];
  CHECK(fit(rep, g.theta_star).reason == "sequence_not_distinct");
}

TEST_CASE("fit reports a parametric family for small diameters") {
  for (std::size_t d = 0; d <= 2; ++d) {
    std::vector<FieldElement> s;
    for (std::size_t i = 0; i <= d; ++i) s.push_back(Q.from_int(static_cast<long long>(i * i)));
    auto r = fit(s, s);
    CHECK(r.status == FitStatus::parametric_family);
    CHECK_FALSE(r.free_parameters.empty());
    CHECK(r.solutions.empty());
  }
}

TEST_CASE("fit round trip over Q and GF(13)") {
  std::mt19937_64 rng(2);
  int fitted = 0;
  for (const Field& f : {Q, Field::prime(13)}) {
    for (int t = 0; t < 100; ++t) {
      QRacahParameters p{3 + static_cast<std::size_t>(t % 2), random_element(f, rng, 5), random_element(f, rng, 5),
                         random_element(f, rng, 5),             random_element(f, rng, 5), random_element(f, rng, 5),
                         random_element(f, rng, 5),             random_element(f, rng, 5)};
      if (!p.constraint_violation().empty()) continue;
      auto g = generate_sequences(p);
      if (!g.ok()) continue;
      auto r = fit(g.theta, g.theta_star);
      REQUIRE(r.status == FitStatus::fitted);
      CHECK(std::find(r.solutions.begin(), r.solutions.end(), p) != r.solutions.end());
      for (const auto& s : r.solutions) CHECK(regenerates(s, g.theta, g.theta_star));
      ++fitted;
    }
  }
  CHECK(fitted > 50);
}

TEST_CASE("fit finds q in an extension of GF(13)") {
  Field f = Field::prime(13);
  std::mt19937_64 rng(3);
  int extended = 0;
  for (long long b = 0; b < 13; ++b) {
    FieldElement beta = f.from_int(b);
    FieldElement disc = (beta - f.one()) * (beta - f.one()) - f.from_int(4);
    if (disc.is_zero() || sqrt_in_field(disc)) continue;
    for (int t = 0; t < 20; ++t) {
      auto theta = recurrence({random_element(f, rng), random_element(f, rng), random_element(f, rng)}, beta, 4);
      auto theta_star = recurrence({random_element(f, rng), random_element(f, rng), random_element(f, rng)}, beta, 4);
      auto r = fit(theta, theta_star);
      if (r.status != FitStatus::fitted) {
        CHECK(r.status == FitStatus::not_qracah);
        continue;
      }
      CHECK(r.solutions.front().field() != f);
      for (const auto& s : r.solutions) CHECK(regenerates(s, theta, theta_star));
      ++extended;
    }
  }
  CHECK(extended > 0);
}

TEST_CASE("fit over Q adjoins square roots when needed") {
  // beta = 4 gives q^2 = (3 +- sqrt(5)) / 2
  FieldElement beta = Q.from_int(4);
  auto theta = recurrence({Q.from_int(0), Q.from_int(1), Q.from_int(5)}, beta, 4);
  auto theta_star = recurrence({Q.from_int(2), Q.from_int(-1), Q.from_int(3)}, beta, 4);
  auto r = fit(theta, theta_star);
  REQUIRE(r.status == FitStatus::fitted);
  CHECK(r.solutions.front().field().height() >= 1);
  for (const auto& s : r.solutions) {
    CHECK(regenerates(s, theta, theta_star));
    CHECK(s.beta() == embed(beta, s.field()));
  }
}
