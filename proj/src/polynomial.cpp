#include "tdpkit/polynomial.hpp"

#include <cctype>
#include <functional>

namespace tdp {

Polynomial Polynomial::constant(const mpq_class& c) {
  Polynomial p;
  p.add_term({}, c);
  return p;
}

Polynomial Polynomial::variable(std::size_t i) {
  if (i == 0) fail(ErrorKind::IndexOutOfRange, "variables are numbered from x1");
  Polynomial p;
  p.add_term({i}, 1);
  return p;
}

void Polynomial::add_term(const Word& w, const mpq_class& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

std::size_t Polynomial::max_variable() const {
  std::size_t m = 0;
  for (const auto& [w, c] : terms_)
    for (std::size_t i : w) m = std::max(m, i);
  return m;
}

std::size_t Polynomial::total_degree() const {
  std::size_t m = 0;
  for (const auto& [w, c] : terms_) m = std::max(m, w.size());
  return m;
}

FieldElement Polynomial::evaluate(const std::vector<FieldElement>& xs, const Field& field) const {
  if (max_variable() > xs.size())
    fail(ErrorKind::IndexOutOfRange, "x" + std::to_string(max_variable()) + " with only " + std::to_string(xs.size()) +
                                         " values");
  FieldElement total = field.zero();
  for (const auto& [w, c] : terms_) {
    FieldElement t = field.from_rational(c);
    for (std::size_t i : w) t *= xs[i - 1];
    total += t;
  }
  return total;
}

ExactMatrix Polynomial::evaluate(const std::vector<ExactMatrix>& ms, const ExactMatrix& unit) const {
  if (max_variable() > ms.size())
    fail(ErrorKind::IndexOutOfRange, "x" + std::to_string(max_variable()) + " with only " + std::to_string(ms.size()) +
                                         " matrices");
  const Field& field = unit.field();
  ExactMatrix total(field, unit.rows(), unit.cols());
  for (const auto& [w, c] : terms_) {
    ExactMatrix t = w.empty() ? unit : ms[w[0] - 1];
    for (std::size_t k = 1; k < w.size(); ++k) t = t * ms[w[k] - 1];
    total = total + field.from_rational(c) * t;
  }
  return total;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    mpq_class mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string body;
    for (std::size_t k = 0; k < w.size();) {
      std::size_t run = 1;
      while (k + run < w.size() && w[k + run] == w[k]) ++run;
      if (!body.empty()) body += "*";
      body += "x" + std::to_string(w[k]);
      if (run > 1) body += "^" + std::to_string(run);
      k += run;
    }
    if (body.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += body;
    } else {
      out += mag.get_str() + "*" + body;
    }
  }
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [w, c] : b.terms_) r.add_term(w, c);
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r;
  for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) {
      Polynomial::Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      r.add_term(w, ca * cb);
    }
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial r = constant(1);
  for (unsigned k = 0; k < e; ++k) r = r * *this;
  return r;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::Parse, what + " at column " + std::to_string(pos_ + 1) + " in \"" + std::string(s_) + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string digits() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }

  Polynomial expr() {
    Polynomial p = term();
    while (true) {
      if (eat('+')) {
        p = p + term();
      } else if (eat('-')) {
        p = p - term();
      } else {
        return p;
      }
    }
  }
  Polynomial term() {
    Polynomial p = factor();
    while (eat('*')) p = p * factor();
    return p;
  }
  Polynomial factor() {
    if (eat('-')) return -factor();
    Polynomial base = primary();
    if (eat('^')) {
      std::string e = digits();
      if (e.size() > 3) error("exponent too large");
      base = base.pow(static_cast<unsigned>(std::stoul(e)));
    }
    return base;
  }
  Polynomial primary() {
    skip();
    if (eat('(')) {
      Polynomial p = expr();
      if (!eat(')')) error("expected ')'");
      return p;
    }
    if (pos_ < s_.size() && s_[pos_] == 'x') {
      ++pos_;
      std::string idx = digits();
      if (idx.size() > 6 || std::stoul(idx) == 0) error("bad variable index");
      return Polynomial::variable(std::stoul(idx));
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      mpz_class num(digits());
      mpz_class den = 1;
      if (eat('/')) {
        den = mpz_class(digits());
        if (den == 0) error("zero denominator");
      }
      mpq_class c(num, den);
      c.canonicalize();
      return Polynomial::constant(c);
    }
    error("expected a number, variable or '('");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text) { return Parser(text).parse(); }

std::vector<Polynomial> monomials_up_to(std::size_t variables, std::size_t max_degree) {
  std::vector<Polynomial> out;
  Polynomial::Word w;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t remaining) {
    if (remaining == 0) {
      Polynomial p;
      p = Polynomial::constant(1);
      for (std::size_t i : w) p = p * Polynomial::variable(i);
      out.push_back(p);
      return;
    }
    for (std::size_t i = start; i <= variables; ++i) {
      w.push_back(i);
      rec(i, remaining - 1);
      w.pop_back();
    }
  };
  for (std::size_t deg = 0; deg <= max_degree; ++deg) {
    if (deg > 0 && variables == 0) break;
    rec(1, deg);
  }
  return out;
}

}  // namespace tdp
