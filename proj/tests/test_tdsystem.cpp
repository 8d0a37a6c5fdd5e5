#include <doctest.h>

#include <set>

#include "support.hpp"
#include "tdpkit/tdsystem.hpp"

using namespace tdp;
using tdp::testing::bidiagonal_pair;
using tdp::testing::kron_sum;
using tdp::testing::random_diagonalizable;
using tdp::testing::random_invertible;

namespace {

const Field Q = Field::rational();

std::vector<FieldElement> elems(const Field& f, std::initializer_list<long long> xs) {
  std::vector<FieldElement> v;
  for (long long x : xs) v.push_back(f.from_int(x));
  return v;
}

// Split-form pairs hand-checked against the Leonard parameter-array formulas.
std::pair<ExactMatrix, ExactMatrix> d1_pair(const Field& f) { return bidiagonal_pair(f, {0, 1}, {0, 1}, {1}); }
std::pair<ExactMatrix, ExactMatrix> d2_pair(const Field& f) { return bidiagonal_pair(f, {0, 1, 2}, {0, 1, 2}, {1, 1}); }
std::pair<ExactMatrix, ExactMatrix> d3_pair(const Field& f) {
  return bidiagonal_pair(f, {0, 1, 2, 3}, {0, 1, 2, 3}, {3, 4, 3});
}

TriDiagonalSystem build_default(const std::pair<ExactMatrix, ExactMatrix>& p) {
  return build_system(p.first, p.second, default_choice(standard_orderings(p.first, p.second)));
}

}  // namespace

TEST_CASE("primitive idempotent examples") {
  ExactMatrix m = ExactMatrix::from_ints(Q, {{1, 0}, {0, 2}});
  CHECK(primitive_idempotent(m, elems(Q, {1, 2}), 0) == ExactMatrix::from_ints(Q, {{1, 0}, {0, 0}}));

  auto [a, as] = d1_pair(Q);
  CHECK(primitive_idempotent(as, elems(Q, {0, 1}), 0) == ExactMatrix::from_ints(Q, {{1, -1}, {0, 0}}));

  try {
    primitive_idempotent(m, elems(Q, {1, 1}), 0);
    FAIL("expected RepeatedEigenvalue");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::RepeatedEigenvalue);
  }
}

TEST_CASE("primitive idempotents resolve the identity and the operator") {
  std::mt19937_64 rng(1);
  for (const Field& f : {Q, Field::prime(13)}) {
    auto values = elems(f, {-2, 0, 3, 7});
    for (int t = 0; t < 30; ++t) {
      ExactMatrix m = random_diagonalizable(f, 2 + t % 4, values, rng);
      auto e = eigen_decompose(m);
      std::vector<FieldElement> ev;
      for (const auto& p : e.pairs) ev.push_back(p.value);
      auto idem = primitive_idempotents(m, ev);
      ExactMatrix sum(f, m.rows(), m.rows()), lin(f, m.rows(), m.rows());
      for (std::size_t i = 0; i < ev.size(); ++i) {
        sum = sum + idem[i];
        lin = lin + ev[i] * idem[i];
        CHECK(idem[i] * idem[i] == idem[i]);
        CHECK(column_space(idem[i]) == e.pairs[i].space);
      }
      CHECK(sum == ExactMatrix::identity(f, m.rows()));
      CHECK(lin == m);
    }
  }
}

TEST_CASE("standard orderings examples") {
  auto zero = standard_orderings(ExactMatrix::from_ints(Q, {{5}}), ExactMatrix::from_ints(Q, {{7}}));
  CHECK(zero.size() == 1);

  auto [a1, as1] = d1_pair(Q);
  auto one = standard_orderings(a1, as1);
  CHECK(one.size() == 4);

  auto [a2, as2] = d2_pair(Q);
  auto two = standard_orderings(a2, as2);
  REQUIRE(two.size() == 4);
  std::set<std::string> thetas, theta_stars;
  for (const auto& c : two) {
    std::string t, s;
    for (const auto& x : c.theta) t += x.to_string() + " ";
    for (const auto& x : c.theta_star) s += x.to_string() + " ";
    thetas.insert(t);
    theta_stars.insert(s);
  }
  CHECK(thetas == std::set<std::string>{"0 1 2 ", "2 1 0 "});
  CHECK(theta_stars == std::set<std::string>{"0 1 2 ", "2 1 0 "});
  CHECK(default_choice(two).key() == "0,1,2;0,1,2");

  ExactMatrix diag = ExactMatrix::from_ints(Q, {{0, 0, 0}, {0, 1, 0}, {0, 0, 2}});
  ExactMatrix ones = ExactMatrix::from_ints(Q, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  try {
    standard_orderings(diag, ones);
    FAIL("expected NotAPath");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NotAPath);
  }
}

TEST_CASE("verify_td_pair examples") {
  ExactMatrix id = ExactMatrix::identity(Q, 2);
  auto r = verify_td_pair(id, id);
  CHECK(r.diagonalizable.verdict == Verdict::pass);
  CHECK(r.irreducible.verdict == Verdict::fail);
  REQUIRE(r.irreducible.witness_subspace);
  CHECK(r.irreducible.witness_subspace->dim() == 1);
  CHECK_FALSE(r.passed());

  auto nd = verify_td_pair(ExactMatrix::from_ints(Q, {{0, 1}, {0, 0}}), id);
  CHECK(nd.diagonalizable.verdict == Verdict::fail);
  CHECK(nd.irreducible.verdict == Verdict::skipped);
  CHECK_FALSE(nd.passed());

  auto outside = verify_td_pair(ExactMatrix::from_ints(Q, {{0, -1}, {1, 0}}), id);
  CHECK(outside.diagonalizable.verdict == Verdict::fail);

  auto [a, as] = d1_pair(Q);
  auto ok = verify_td_pair(a, as);
  CHECK(ok.passed());
  CHECK(ok.diameter == 1u);
  CHECK(ok.dual_diameter == 1u);
  CHECK(ok.shape == std::vector<std::size_t>{1, 1});
  CHECK(ok.sharp == true);

  ExactMatrix diag = ExactMatrix::from_ints(Q, {{0, 0, 0}, {0, 1, 0}, {0, 0, 2}});
  ExactMatrix ones = ExactMatrix::from_ints(Q, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  auto tri = verify_td_pair(diag, ones);
  CHECK(tri.standard_a.verdict == Verdict::fail);
  CHECK(tri.standard_a.witness_indices == std::vector<std::size_t>{0, 1, 2});
  CHECK_FALSE(tri.passed());
}

TEST_CASE("split-form pairs of diameter two and three verify") {
  for (const Field& f : {Q, Field::prime(13)}) {
    for (const auto& p : {d2_pair(f), d3_pair(f)}) {
      auto r = verify_td_pair(p.first, p.second);
      CHECK(r.passed());
      CHECK(r.shape == std::vector<std::size_t>(p.first.rows(), 1));
    }
  }
}

TEST_CASE("build_system examples") {
  auto s0 = build_default({ExactMatrix::from_ints(Q, {{5}}), ExactMatrix::from_ints(Q, {{7}})});
  CHECK(s0.d == 0);
  CHECK(s0.rho == std::vector<std::size_t>{1});
  CHECK(s0.sharp());

  auto s1 = build_default(d1_pair(Q));
  CHECK(s1.d == 1);
  CHECK(s1.rho == std::vector<std::size_t>{1, 1});
  CHECK(s1.sharp());
  CHECK(s1.theta == elems(Q, {0, 1}));
  CHECK(s1.E_star[0] == ExactMatrix::from_ints(Q, {{1, -1}, {0, 0}}));

  auto [a, as] = d2_pair(Q);
  OrderingChoice bogus{elems(Q, {1, 0, 2}), elems(Q, {0, 1, 2})};
  CHECK_THROWS_AS(build_system(a, as, bogus), Error);
}

TEST_CASE("check_invariants names the broken identity") {
  auto s = build_default(d2_pair(Q));
  auto broken = s;
  broken.E[0] = broken.E[0] + broken.E[1];
  try {
    broken.check_invariants();
    FAIL("expected InvariantViolation");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::InvariantViolation);
    CHECK(std::string(err.what()).find("sum of E_i = I") != std::string::npos);
  }
  auto shape = s;
  shape.rho[0] = 2;
  try {
    shape.check_invariants();
    FAIL("expected InvariantViolation");
  } catch (const Error& err) {
    CHECK(std::string(err.what()).find("rho_i = rank E_i") != std::string::npos);
  }
}

TEST_CASE("triple products vanish and a corrupted idempotent is caught") {
  auto s1 = build_default(d1_pair(Q));
  CHECK((s1.E[0] * s1.E[1]).is_zero());
  for (const auto& p : {d1_pair(Q), d2_pair(Q), d3_pair(Q), d3_pair(Field::prime(13))}) {
    auto s = build_default(p);
    CHECK(triple_product_vanishing(s).holds);
    auto bad = s;
    bad.E_star[1] = bad.E_star[1] + bad.E_star[0];
    auto r = triple_product_vanishing(bad);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witness);
    CHECK(r.witness->family == "E* A^k E*");
    CHECK(r.witness->k < (r.witness->i > r.witness->j ? r.witness->i - r.witness->j : r.witness->j - r.witness->i));
  }
}

TEST_CASE("tensor sums of diameter-one pairs") {
  auto [a1, as1] = bidiagonal_pair(Q, {0, 1}, {0, 1}, {1});
  auto [a2, as2] = bidiagonal_pair(Q, {0, 1}, {0, 1}, {2});
  ExactMatrix a = kron_sum(a1, a2), as = kron_sum(as1, as2);
  auto r = verify_td_pair(a, as);
  CHECK(r.diagonalizable.verdict == Verdict::pass);
  CHECK(r.standard_a.verdict == Verdict::pass);
  CHECK(r.standard_a_star.verdict == Verdict::pass);
  CHECK(r.irreducible.verdict != Verdict::inconclusive);
  if (r.passed()) {
    CHECK(r.shape == std::vector<std::size_t>{1, 2, 1});
    CHECK(r.sharp == true);
    auto s = build_default({a, as});
    CHECK(triple_product_vanishing(s).holds);
    CHECK(s.sharp());
  }
  // identical factors commute with the swap of tensor slots
  ExactMatrix b = kron_sum(a1, a1), bs = kron_sum(as1, as1);
  auto sym = verify_td_pair(b, bs);
  CHECK(sym.irreducible.verdict == Verdict::fail);
}

TEST_CASE("validity, orderings and shape survive change of basis") {
  std::mt19937_64 rng(2);
  for (const Field& f : {Q, Field::prime(13)}) {
    for (const auto& p : {d2_pair(f), d3_pair(f)}) {
      for (int t = 0; t < 5; ++t) {
        ExactMatrix g = random_invertible(f, p.first.rows(), rng, 2);
        ExactMatrix gi = inverse(g);
        ExactMatrix a = g * p.first * gi, as = g * p.second * gi;
        CHECK(verify_td_pair(a, as).passed());
        auto choices = standard_orderings(a, as);
        REQUIRE(choices.size() == 4);
        for (const auto& c : choices) {
          std::vector<FieldElement> rev(c.theta.rbegin(), c.theta.rend());
          bool reversal_present = std::any_of(choices.begin(), choices.end(), [&](const OrderingChoice& o) {
            return o.theta == rev && o.theta_star == c.theta_star;
          });
          CHECK(reversal_present);
          auto s = build_system(a, as, c);
          CHECK(triple_product_vanishing(s).holds);
          for (std::size_t i = 0; i <= s.d; ++i) CHECK(rank(s.E[i]) == rank(s.E_star[i]));
        }
      }
    }
  }
}

TEST_CASE("conjugating a system conjugates every idempotent") {
  std::mt19937_64 rng(3);
  auto s = build_default(d3_pair(Q));
  ExactMatrix g = random_invertible(Q, 4, rng);
  auto t = conjugate(s, g);
  CHECK_NOTHROW(t.check_invariants());
  CHECK(t.theta == s.theta);
  CHECK(triple_product_vanishing(t).holds);
}
