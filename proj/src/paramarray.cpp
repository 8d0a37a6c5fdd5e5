#include "tdpkit/paramarray.hpp"

namespace tdp {

MonicShiftProduct::MonicShiftProduct(Field field, std::vector<FieldElement> roots)
    : field_(field), roots_(std::move(roots)) {
  for (const auto& r : roots_)
    if (r.field() != field_) fail(ErrorKind::MixedFields, "root " + r.to_string() + " not in " + field_.name());
}

FieldElement MonicShiftProduct::operator()(const FieldElement& x) const {
  FieldElement acc = field_.one();
  for (const auto& r : roots_) acc *= x - r;
  return acc;
}

ExactMatrix MonicShiftProduct::operator()(const ExactMatrix& m) const {
  ExactMatrix acc = ExactMatrix::identity(field_, m.rows());
  for (const auto& r : roots_) acc = acc * shift(m, r);
  return acc;
}

std::vector<FieldElement> MonicShiftProduct::coefficients() const {
  std::vector<FieldElement> c{field_.one()};
  for (const auto& r : roots_) {
    std::vector<FieldElement> next(c.size() + 1, field_.zero());
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

MonicShiftProduct tau_eta_build(const std::vector<FieldElement>& sequence, ShiftFamily which, std::size_t i) {
  if (sequence.empty()) fail(ErrorKind::InvalidArgument, "empty eigenvalue sequence");
  std::size_t d = sequence.size() - 1;
  if (i > d) fail(ErrorKind::IndexOutOfRange, "degree " + std::to_string(i) + " exceeds d = " + std::to_string(d));
  std::vector<FieldElement> roots;
  bool ascending = which == ShiftFamily::tau || which == ShiftFamily::tau_star;
  for (std::size_t k = 0; k < i; ++k) roots.push_back(ascending ? sequence[k] : sequence[d - k]);
  return MonicShiftProduct(sequence.front().field(), std::move(roots));
}

std::vector<FieldElement> split_sequence(const TriDiagonalSystem& s) {
  if (!s.sharp())
    fail(ErrorKind::NotSharp, "rho_0 = " + std::to_string(s.rho.empty() ? 0 : s.rho.front()) + ", split sequence needs 1");
  const Field& f = s.field();
  const ExactMatrix& e0 = s.E_star.front();
  std::size_t pr = 0, pc = 0;
  bool found = false;
  for (std::size_t r = 0; r < e0.rows() && !found; ++r)
    for (std::size_t c = 0; c < e0.cols() && !found; ++c)
      if (!e0(r, c).is_zero()) {
        pr = r;
        pc = c;
        found = true;
      }
  if (!found) fail(ErrorKind::InvariantViolation, "E*_0 is zero");
  FieldElement pivot_inv = e0(pr, pc).inverse();

  std::vector<FieldElement> zeta{f.one()};
  ExactMatrix tau = ExactMatrix::identity(f, s.dim());
  FieldElement denom = f.one();
  for (std::size_t i = 1; i <= s.d; ++i) {
    tau = tau * shift(s.A, s.theta[i - 1]);
    denom *= s.theta_star[0] - s.theta_star[i];
    ExactMatrix m = e0 * tau * e0;
    FieldElement scalar = m(pr, pc) * pivot_inv;
    if (m != scalar * e0)
      fail(ErrorKind::NotScalarMultiple, "E*_0 tau_" + std::to_string(i) + "(A) E*_0 is not a multiple of E*_0");
    zeta.push_back(scalar * denom);
  }
  return zeta;
}

namespace {

FieldElement eta_at(const std::vector<FieldElement>& seq, std::size_t i, const FieldElement& x) {
  return tau_eta_build(seq, ShiftFamily::eta, i)(x);
}

}  // namespace

ConditionReport check_conjecture_conditions(const ParameterArray& p) {
  std::size_t d = p.d;
  if (p.theta.size() != d + 1 || p.theta_star.size() != d + 1 || p.zeta.size() != d + 1)
    fail(ErrorKind::DimensionMismatch, "parameter array sequences must have d + 1 entries");
  const Field& f = p.field();
  ConditionReport r;

  r.distinct.verdict = Verdict::pass;
  for (auto [seq, name] : {std::pair{&p.theta, "theta"}, std::pair{&p.theta_star, "theta*"}})
    for (std::size_t i = 0; i <= d && r.distinct.verdict == Verdict::pass; ++i)
      for (std::size_t j = i + 1; j <= d; ++j)
        if ((*seq)[i] == (*seq)[j]) {
          r.distinct.verdict = Verdict::fail;
          r.distinct.detail = std::string(name) + "_" + std::to_string(i) + " = " + name + "_" + std::to_string(j) +
                              " = " + (*seq)[i].to_string();
          break;
        }

  r.ratios.verdict = Verdict::pass;
  if (d >= 3) {
    // (s_{i-2} - s_{i+1}) / (s_{i-1} - s_i), compared by cross-multiplication
    std::optional<std::pair<FieldElement, FieldElement>> ref;
    for (auto [seq, name] : {std::pair{&p.theta, "theta"}, std::pair{&p.theta_star, "theta*"}}) {
      for (std::size_t i = 2; i + 1 <= d; ++i) {
        FieldElement num = (*seq)[i - 2] - (*seq)[i + 1];
        FieldElement den = (*seq)[i - 1] - (*seq)[i];
        if (den.is_zero()) {
          r.ratios.verdict = Verdict::fail;
          r.ratios.detail = std::string(name) + " ratio undefined at i = " + std::to_string(i);
          break;
        }
        if (!ref) {
          ref = std::pair{num, den};
        } else if (num * ref->second != ref->first * den) {
          r.ratios.verdict = Verdict::fail;
          r.ratios.detail = std::string(name) + " ratio at i = " + std::to_string(i) + " is " + (num / den).to_string() +
                            ", expected " + (ref->first / ref->second).to_string();
          break;
        }
      }
      if (r.ratios.verdict == Verdict::fail) break;
    }
    if (r.ratios.verdict == Verdict::pass) r.common_ratio = ref->first / ref->second;
  } else {
    r.ratios.detail = "no ratios for d <= 2";
  }

  r.sum = f.zero();
  for (std::size_t i = 0; i <= d; ++i)
    r.sum += eta_at(p.theta, d - i, p.theta[0]) * eta_at(p.theta_star, d - i, p.theta_star[0]) * p.zeta[i];
  r.split.verdict = Verdict::pass;
  if (!p.zeta[0].is_one()) {
    r.split.verdict = Verdict::fail;
    r.split.detail = "zeta_0 = " + p.zeta[0].to_string();
  } else if (p.zeta[d].is_zero()) {
    r.split.verdict = Verdict::fail;
    r.split.detail = "zeta_d = 0";
  } else if (r.sum.is_zero()) {
    r.split.verdict = Verdict::fail;
    r.split.detail = "sum of eta_{d-i}(theta_0) eta*_{d-i}(theta*_0) zeta_i vanishes";
  }
  return r;
}

ParameterArray extract_parameter_array(const TriDiagonalSystem& s) {
  ParameterArray p{s.d, s.theta, s.theta_star, split_sequence(s)};
  ConditionReport r = check_conjecture_conditions(p);
  if (!r.passed()) {
    std::string what;
    for (const auto* c : {&r.distinct, &r.ratios, &r.split})
      if (c->verdict == Verdict::fail) what += (what.empty() ? "" : "; ") + c->detail;
    fail(ErrorKind::OnlyIfViolated, what);
  }
  return p;
}

}  // namespace tdp
