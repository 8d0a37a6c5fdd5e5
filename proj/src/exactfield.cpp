#include "tdpkit/exactfield.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

namespace tdp {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::MixedFields: return "MixedFields";
    case ErrorKind::ExtensionHeightExceeded: return "ExtensionHeightExceeded";
    case ErrorKind::EvenCharacteristic: return "EvenCharacteristic";
    case ErrorKind::NotAnExtension: return "NotAnExtension";
    case ErrorKind::NotInSubfield: return "NotInSubfield";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::EigenvalueSearchFailed: return "EigenvalueSearchFailed";
    case ErrorKind::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::RepeatedEigenvalue: return "RepeatedEigenvalue";
    case ErrorKind::NotAPath: return "NotAPath";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::NotSharp: return "NotSharp";
    case ErrorKind::NotScalarMultiple: return "NotScalarMultiple";
    case ErrorKind::OnlyIfViolated: return "OnlyIfViolated";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ZeroPhi: return "ZeroPhi";
    case ErrorKind::IdentityViolated: return "IdentityViolated";
    case ErrorKind::ActionMismatch: return "ActionMismatch";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::CandidateRejected: return "CandidateRejected";
  }
  return "Unknown";
}

namespace detail {

struct QuadParts {
  FieldElement u;
  FieldElement v;
};

struct FieldData {
  FieldKind kind = FieldKind::rational;
  std::uint64_t p = 0;
  const FieldData* base = nullptr;
  std::optional<FieldElement> delta;  // engaged only for extensions
  int height = 0;
  std::string key;
};

namespace {

// Descriptors live for the whole process; handles are raw pointers into here.
class Registry {
 public:
  static Registry& instance() {
    static Registry r;
    return r;
  }

  const FieldData* intern(FieldData data) {
    std::lock_guard lock(mu_);
    auto it = table_.find(data.key);
    if (it != table_.end()) return it->second.get();
    auto owned = std::make_unique<FieldData>(std::move(data));
    const FieldData* ptr = owned.get();
    table_.emplace(ptr->key, std::move(owned));
    return ptr;
  }

 private:
  Registry() = default;
  std::mutex mu_;
  std::map<std::string, std::unique_ptr<FieldData>> table_;
};

const FieldData* rational_data() {
  static const FieldData* q = [] {
    FieldData d;
    d.kind = FieldKind::rational;
    d.key = "Q";
    return Registry::instance().intern(std::move(d));
  }();
  return q;
}

}  // namespace
}  // namespace detail

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 addmod(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}
u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) {
  if (a == 0) fail(ErrorKind::DivisionByZero, "inverse of 0 mod " + std::to_string(p));
  return powmod(a, p - 2, p);
}

u64 reduce_mpz(const mpz_class& z, u64 p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
  return r.get_ui();
}

// Tonelli-Shanks; p odd prime, a a quadratic residue.
u64 sqrt_mod(u64 a, u64 p) {
  if (a == 0) return 0;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  u64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 m = static_cast<u64>(s);
  u64 c = powmod(z, q, p);
  u64 t = powmod(a, q, p);
  u64 r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0;
    u64 tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

bool is_qr(u64 a, u64 p) {
  if (p == 2 || a == 0) return true;
  return powmod(a, (p - 1) / 2, p) == 1;
}

void require_same(const Field& a, const Field& b) {
  if (a != b) fail(ErrorKind::MixedFields, a.name() + " vs " + b.name());
}

}  // namespace

// ---------------------------------------------------------------------------
// Field

Field::Field() : data_(detail::rational_data()) {}

Field Field::rational() { return Field(detail::rational_data()); }

Field Field::prime(std::uint64_t p) {
  if (p < 2 || p >= (u64{1} << 62)) fail(ErrorKind::InvalidField, "modulus out of range: " + std::to_string(p));
  mpz_class z(static_cast<unsigned long>(p));
  if (mpz_probab_prime_p(z.get_mpz_t(), 40) == 0) fail(ErrorKind::InvalidField, std::to_string(p) + " is not prime");
  detail::FieldData d;
  d.kind = FieldKind::prime;
  d.p = p;
  d.key = "GF(" + std::to_string(p) + ")";
  return Field(detail::Registry::instance().intern(std::move(d)));
}

Field Field::quadratic_extension(const FieldElement& delta) {
  const Field& base = delta.field();
  if (base.characteristic() == 2) fail(ErrorKind::EvenCharacteristic, "quadratic extensions need odd characteristic");
  if (base.height() + 1 > kMaxExtensionHeight)
    fail(ErrorKind::ExtensionHeightExceeded, "cannot extend " + base.name());
  if (sqrt_in_field(delta)) fail(ErrorKind::InvalidField, delta.to_string() + " is a square in " + base.name());
  detail::FieldData d;
  d.kind = FieldKind::quadratic_ext;
  d.p = base.characteristic();
  d.base = base.data_;
  d.delta = delta;
  d.height = base.height() + 1;
  d.key = base.data_->key + "[sqrt(" + delta.to_string() + ")]";
  return Field(detail::Registry::instance().intern(std::move(d)));
}

FieldKind Field::kind() const { return data_->kind; }
std::uint64_t Field::characteristic() const { return data_->p; }
int Field::height() const { return data_->height; }

std::uint64_t Field::modulus() const {
  if (data_->kind != FieldKind::prime) fail(ErrorKind::InvalidField, name() + " is not a prime field");
  return data_->p;
}

Field Field::base() const {
  if (data_->kind != FieldKind::quadratic_ext) fail(ErrorKind::NotAnExtension, name() + " has no base field");
  return Field(data_->base);
}

Field Field::ground() const {
  const detail::FieldData* d = data_;
  while (d->base) d = d->base;
  return Field(d);
}

const FieldElement& Field::delta() const {
  if (data_->kind != FieldKind::quadratic_ext) fail(ErrorKind::NotAnExtension, name() + " has no delta");
  return *data_->delta;
}

std::optional<std::uint64_t> Field::size() const {
  if (!is_finite()) return std::nullopt;
  u128 n = data_->p;
  for (int i = 0; i < height(); ++i) {
    n = n * n;
    if (n >> 64) return std::nullopt;
  }
  return static_cast<u64>(n);
}

bool Field::extends(const Field& sub) const {
  for (const detail::FieldData* d = data_; d; d = d->base)
    if (d == sub.data_) return true;
  return false;
}

FieldElement Field::zero() const { return from_int(0); }
FieldElement Field::one() const { return from_int(1); }

FieldElement Field::from_int(long long v) const {
  if (data_->kind == FieldKind::prime) {
    long long p = static_cast<long long>(data_->p);
    long long r = v % p;
    return FieldElement(*this, static_cast<u64>(r < 0 ? r + p : r));
  }
  return from_rational(mpq_class(mpz_class(std::to_string(v))));
}

FieldElement Field::from_rational(const mpq_class& v) const {
  switch (data_->kind) {
    case FieldKind::rational: {
      mpq_class c(v);
      c.canonicalize();
      return FieldElement(*this, c);
    }
    case FieldKind::prime: {
      u64 p = data_->p;
      u64 den = reduce_mpz(v.get_den(), p);
      if (den == 0) fail(ErrorKind::DivisionByZero, "denominator vanishes mod " + std::to_string(p));
      return FieldElement(*this, mulmod(reduce_mpz(v.get_num(), p), invmod(den, p), p));
    }
    case FieldKind::quadratic_ext: {
      Field b = base();
      return FieldElement::from_parts(*this, b.from_rational(v), b.zero());
    }
  }
  return FieldElement();
}

std::string Field::name() const {
  switch (data_->kind) {
    case FieldKind::rational: return "Q";
    case FieldKind::prime: return "GF(" + std::to_string(data_->p) + ")";
    case FieldKind::quadratic_ext: return base().name() + "(sqrt(" + data_->delta->to_string() + "))";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement() : field_(), value_(mpq_class(0)) {}

FieldElement FieldElement::from_parts(const Field& ext, FieldElement u, FieldElement v) {
  if (ext.kind() != FieldKind::quadratic_ext) fail(ErrorKind::NotAnExtension, ext.name());
  Field b = ext.base();
  require_same(u.field(), b);
  require_same(v.field(), b);
  return FieldElement(ext, std::make_shared<const detail::QuadParts>(detail::QuadParts{std::move(u), std::move(v)}));
}

const mpq_class& FieldElement::rational() const {
  if (auto* q = std::get_if<mpq_class>(&value_)) return *q;
  fail(ErrorKind::InvalidField, "not a rational element");
}

std::uint64_t FieldElement::residue() const {
  if (auto* r = std::get_if<u64>(&value_)) return *r;
  fail(ErrorKind::InvalidField, "not a prime-field element");
}

const FieldElement& FieldElement::ext_u() const {
  if (auto* e = std::get_if<std::shared_ptr<const detail::QuadParts>>(&value_)) return (*e)->u;
  fail(ErrorKind::NotAnExtension, "not an extension element");
}

const FieldElement& FieldElement::ext_v() const {
  if (auto* e = std::get_if<std::shared_ptr<const detail::QuadParts>>(&value_)) return (*e)->v;
  fail(ErrorKind::NotAnExtension, "not an extension element");
}

bool FieldElement::is_zero() const {
  switch (field_.kind()) {
    case FieldKind::rational: return sgn(rational()) == 0;
    case FieldKind::prime: return residue() == 0;
    case FieldKind::quadratic_ext: return ext_u().is_zero() && ext_v().is_zero();
  }
  return false;
}

bool FieldElement::is_one() const {
  switch (field_.kind()) {
    case FieldKind::rational: return rational() == 1;
    case FieldKind::prime: return residue() == 1;
    case FieldKind::quadratic_ext: return ext_u().is_one() && ext_v().is_zero();
  }
  return false;
}

FieldElement FieldElement::operator-() const {
  switch (field_.kind()) {
    case FieldKind::rational: return FieldElement(field_, mpq_class(-rational()));
    case FieldKind::prime: {
      u64 p = field_.modulus();
      return FieldElement(field_, residue() == 0 ? u64{0} : p - residue());
    }
    case FieldKind::quadratic_ext: return from_parts(field_, -ext_u(), -ext_v());
  }
  return *this;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same(a.field_, b.field_);
  switch (a.field_.kind()) {
    case FieldKind::rational: return FieldElement(a.field_, mpq_class(a.rational() + b.rational()));
    case FieldKind::prime: return FieldElement(a.field_, addmod(a.residue(), b.residue(), a.field_.modulus()));
    case FieldKind::quadratic_ext:
      return FieldElement::from_parts(a.field_, a.ext_u() + b.ext_u(), a.ext_v() + b.ext_v());
  }
  return a;
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  require_same(a.field_, b.field_);
  switch (a.field_.kind()) {
    case FieldKind::rational: return FieldElement(a.field_, mpq_class(a.rational() - b.rational()));
    case FieldKind::prime: return FieldElement(a.field_, submod(a.residue(), b.residue(), a.field_.modulus()));
    case FieldKind::quadratic_ext:
      return FieldElement::from_parts(a.field_, a.ext_u() - b.ext_u(), a.ext_v() - b.ext_v());
  }
  return a;
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same(a.field_, b.field_);
  switch (a.field_.kind()) {
    case FieldKind::rational: return FieldElement(a.field_, mpq_class(a.rational() * b.rational()));
    case FieldKind::prime: return FieldElement(a.field_, mulmod(a.residue(), b.residue(), a.field_.modulus()));
    case FieldKind::quadratic_ext: {
      // (u1 + v1 r)(u2 + v2 r) = u1 u2 + delta v1 v2 + (u1 v2 + v1 u2) r
      const FieldElement& delta = a.field_.delta();
      const FieldElement &u1 = a.ext_u(), &v1 = a.ext_v(), &u2 = b.ext_u(), &v2 = b.ext_v();
      return FieldElement::from_parts(a.field_, u1 * u2 + delta * (v1 * v2), u1 * v2 + v1 * u2);
    }
  }
  return a;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) fail(ErrorKind::DivisionByZero, "inverse of zero in " + field_.name());
  switch (field_.kind()) {
    case FieldKind::rational: return FieldElement(field_, mpq_class(1 / rational()));
    case FieldKind::prime: return FieldElement(field_, invmod(residue(), field_.modulus()));
    case FieldKind::quadratic_ext: {
      const FieldElement &u = ext_u(), &v = ext_v();
      FieldElement norm = u * u - field_.delta() * (v * v);
      FieldElement inv = norm.inverse();
      return from_parts(field_, u * inv, -(v * inv));
    }
  }
  return *this;
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  require_same(a.field_, b.field_);
  if (b.is_zero()) fail(ErrorKind::DivisionByZero, a.to_string() + " / 0");
  if (a.field_.kind() == FieldKind::rational) return FieldElement(a.field_, mpq_class(a.rational() / b.rational()));
  return a * b.inverse();
}

FieldElement FieldElement::pow(long long e) const {
  FieldElement base = e < 0 ? inverse() : *this;
  unsigned long long n = e < 0 ? static_cast<unsigned long long>(-(e + 1)) + 1 : static_cast<unsigned long long>(e);
  FieldElement r = field_.one();
  while (n) {
    if (n & 1) r = r * base;
    base = base * base;
    n >>= 1;
  }
  return r;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  if (a.field_ != b.field_) return false;
  switch (a.field_.kind()) {
    case FieldKind::rational: return a.rational() == b.rational();
    case FieldKind::prime: return a.residue() == b.residue();
    case FieldKind::quadratic_ext: return a.ext_u() == b.ext_u() && a.ext_v() == b.ext_v();
  }
  return false;
}

std::string FieldElement::to_string() const {
  switch (field_.kind()) {
    case FieldKind::rational: return rational().get_str();
    case FieldKind::prime: return std::to_string(residue()) + " mod " + std::to_string(field_.modulus());
    case FieldKind::quadratic_ext: {
      bool nested = field_.base().kind() == FieldKind::quadratic_ext;
      auto wrap = [nested](const std::string& s) { return nested ? "(" + s + ")" : s; };
      return wrap(ext_u().to_string()) + " + " + wrap(ext_v().to_string()) + " * sqrt(" +
             field_.delta().to_string() + ")";
    }
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << x.to_string(); }

bool canonical_less(const FieldElement& a, const FieldElement& b) {
  if (a.field() != b.field()) return a.field().name() < b.field().name();
  switch (a.field().kind()) {
    case FieldKind::rational: return a.rational() < b.rational();
    case FieldKind::prime: return a.residue() < b.residue();
    case FieldKind::quadratic_ext:
      if (a.ext_u() != b.ext_u()) return canonical_less(a.ext_u(), b.ext_u());
      return canonical_less(a.ext_v(), b.ext_v());
  }
  return false;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ScalarParser {
 public:
  explicit ScalarParser(std::string_view s) : s_(s) {}

  FieldElement parse_all(const Field& f) {
    FieldElement x = value(f);
    ws();
    if (pos_ != s_.size()) error("trailing characters");
    return x;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::Parse, what + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }

  void ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(std::string_view tok) {
    ws();
    if (s_.substr(pos_, tok.size()) != tok) error("expected '" + std::string(tok) + "'");
    pos_ += tok.size();
  }

  bool accept_word(std::string_view tok) {
    ws();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  mpz_class integer() {
    ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) error("expected integer");
    std::string txt(s_.substr(start, pos_ - start));
    if (txt[0] == '+') txt.erase(0, 1);
    return mpz_class(txt);
  }

  // n, n/m, optionally followed by "mod p"; mapped through the ground field.
  FieldElement atom(const Field& f) {
    mpz_class num = integer();
    mpz_class den = 1;
    if (peek('/')) {
      ++pos_;
      den = integer();
      if (den == 0) error("zero denominator");
    }
    Field ground = f.ground();
    if (accept_word("mod")) {
      mpz_class p = integer();
      if (ground.kind() != FieldKind::prime || p != static_cast<unsigned long>(ground.modulus()))
        error("modulus does not match field " + f.name());
    }
    mpq_class q(num, den);
    q.canonicalize();
    FieldElement x = ground.from_rational(q);
    return f == ground ? x : embed(x, f);
  }

  FieldElement operand(const Field& f) {
    if (peek('(')) {
      ++pos_;
      FieldElement x = value(f);
      expect(")");
      return x;
    }
    return atom(f);
  }

  FieldElement value(const Field& f) {
    if (f.kind() != FieldKind::quadratic_ext) return operand(f);
    Field b = f.base();
    FieldElement u = operand(b);
    if (!peek('+')) return embed(u, f);
    ++pos_;
    FieldElement v = operand(b);
    expect("*");
    expect("sqrt");
    expect("(");
    FieldElement delta = value(b);
    expect(")");
    if (delta != f.delta()) error("sqrt argument does not match field " + f.name());
    return FieldElement::from_parts(f, u, v);
  }
};

}  // namespace

FieldElement parse_scalar(std::string_view text, const Field& field) { return ScalarParser(text).parse_all(field); }

// ---------------------------------------------------------------------------
// Square roots, quadratics, towers

std::optional<FieldElement> sqrt_in_field(const FieldElement& x) {
  const Field& f = x.field();
  switch (f.kind()) {
    case FieldKind::rational: {
      const mpq_class& q = x.rational();
      if (sgn(q) < 0) return std::nullopt;
      const mpz_class &n = q.get_num(), &d = q.get_den();
      if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
      mpz_class rn, rd;
      mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
      mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
      return f.from_rational(mpq_class(rn, rd));
    }
    case FieldKind::prime: {
      u64 p = f.modulus();
      u64 a = x.residue();
      if (p == 2) return x;
      if (!is_qr(a, p)) return std::nullopt;
      return f.from_int(static_cast<long long>(sqrt_mod(a, p)));
    }
    case FieldKind::quadratic_ext: {
      Field b = f.base();
      const FieldElement &u = x.ext_u(), &v = x.ext_v();
      const FieldElement& delta = f.delta();
      if (v.is_zero()) {
        if (auto s = sqrt_in_field(u)) return FieldElement::from_parts(f, *s, b.zero());
        if (auto t = sqrt_in_field(u / delta)) return FieldElement::from_parts(f, b.zero(), *t);
        return std::nullopt;
      }
      auto n = sqrt_in_field(u * u - delta * (v * v));
      if (!n) return std::nullopt;
      FieldElement two_inv = b.from_int(2).inverse();
      for (const FieldElement& sgn_n : {*n, -*n}) {
        FieldElement w = (u + sgn_n) * two_inv;
        if (w.is_zero()) continue;
        if (auto s = sqrt_in_field(w)) return FieldElement::from_parts(f, *s, v / (b.from_int(2) * *s));
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

namespace {

mpz_class strip_square_factors(mpz_class n, mpz_class& root) {
  root = 1;
  for (unsigned long p = 2; p < 10000; ++p) {
    mpz_class pp = mpz_class(p) * p;
    if (pp > n) break;
    while (mpz_divisible_p(n.get_mpz_t(), pp.get_mpz_t())) {
      n /= pp;
      root *= p;
    }
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    root *= r;
    n = 1;
  }
  return n;
}

// Adjoin a square root of the non-square x. Returns the new field and the
// image of sqrt(x) in it. The delta is normalized where cheap: a square-free
// integer over Q, the least non-residue over GF(p).
std::pair<Field, FieldElement> adjoin_sqrt(const FieldElement& x) {
  const Field& f = x.field();
  if (f.characteristic() == 2) fail(ErrorKind::EvenCharacteristic, "cannot adjoin square roots in characteristic 2");
  if (f.height() + 1 > kMaxExtensionHeight)
    fail(ErrorKind::ExtensionHeightExceeded, "sqrt(" + x.to_string() + ") needs a third quadratic step");
  if (f.kind() == FieldKind::rational) {
    const mpq_class& q = x.rational();
    mpz_class prod = q.get_num() * q.get_den();
    int sign = sgn(prod);
    mpz_class root;
    mpz_class core = strip_square_factors(abs(prod), root);
    Field ext = Field::quadratic_extension(f.from_rational(mpq_class(sign * core)));
    FieldElement scale = f.from_rational(mpq_class(root, q.get_den()));
    return {ext, FieldElement::from_parts(ext, f.zero(), scale)};
  }
  if (f.kind() == FieldKind::prime) {
    u64 p = f.modulus();
    u64 n = 2;
    while (is_qr(n, p)) ++n;
    FieldElement nonres = f.from_int(static_cast<long long>(n));
    Field ext = Field::quadratic_extension(nonres);
    auto s = sqrt_in_field(x / nonres);
    if (!s) fail(ErrorKind::InvalidArgument, "unexpected residue structure");
    return {ext, FieldElement::from_parts(ext, f.zero(), *s)};
  }
  Field ext = Field::quadratic_extension(x);
  return {ext, FieldElement::from_parts(ext, f.zero(), f.one())};
}

}  // namespace

QuadraticRoots solve_quadratic(const FieldElement& a2, const FieldElement& a1, const FieldElement& a0,
                               bool extend_finite) {
  require_same(a2.field(), a1.field());
  require_same(a2.field(), a0.field());
  Field f = a2.field();
  if (a2.is_zero()) fail(ErrorKind::InvalidArgument, "leading coefficient is zero");
  if (f.characteristic() == 2) fail(ErrorKind::EvenCharacteristic, "discriminant method needs odd characteristic");

  FieldElement disc = a1 * a1 - f.from_int(4) * a2 * a0;
  FieldElement two_a = f.from_int(2) * a2;
  QuadraticRoots out{f, {}, false};
  auto finish = [&](const Field& g, const FieldElement& s) {
    FieldElement b = embed(-a1, g), den = embed(two_a, g);
    out.field = g;
    out.roots.push_back((b + s) / den);
    if (!s.is_zero()) out.roots.push_back((b - s) / den);
    std::sort(out.roots.begin(), out.roots.end(), canonical_less);
  };

  if (auto s = sqrt_in_field(disc)) {
    finish(f, *s);
    return out;
  }
  if (f.kind() == FieldKind::prime && !extend_finite) return out;
  auto [ext, root] = adjoin_sqrt(disc);
  out.extended = true;
  finish(ext, root);
  return out;
}

FieldElement embed(const FieldElement& x, const Field& target) {
  if (x.field() == target) return x;
  if (target.kind() != FieldKind::quadratic_ext || !target.extends(x.field()))
    fail(ErrorKind::NotAnExtension, target.name() + " is not built over " + x.field().name());
  Field b = target.base();
  return FieldElement::from_parts(target, embed(x, b), b.zero());
}

bool lies_in(const FieldElement& x, const Field& sub) {
  if (x.field() == sub) return true;
  if (x.field().kind() != FieldKind::quadratic_ext || !x.field().extends(sub)) return false;
  return x.ext_v().is_zero() && lies_in(x.ext_u(), sub);
}

FieldElement project(const FieldElement& x, const Field& sub) {
  if (x.field() == sub) return x;
  if (x.field().kind() != FieldKind::quadratic_ext || !x.field().extends(sub))
    fail(ErrorKind::NotAnExtension, x.field().name() + " is not built over " + sub.name());
  if (!x.ext_v().is_zero()) fail(ErrorKind::NotInSubfield, x.to_string() + " does not lie in " + sub.name());
  return project(x.ext_u(), sub);
}

FieldElement random_element(const Field& field, std::mt19937_64& rng, int magnitude) {
  switch (field.kind()) {
    case FieldKind::rational: {
      std::uniform_int_distribution<int> num(-magnitude, magnitude), den(1, std::max(1, magnitude));
      return field.from_rational(mpq_class(num(rng), den(rng)));
    }
    case FieldKind::prime: {
      std::uniform_int_distribution<u64> r(0, field.modulus() - 1);
      return field.from_rational(mpq_class(mpz_class(std::to_string(r(rng)))));
    }
    case FieldKind::quadratic_ext: {
      Field b = field.base();
      FieldElement u = random_element(b, rng, magnitude);
      FieldElement v = random_element(b, rng, magnitude);
      return FieldElement::from_parts(field, u, v);
    }
  }
  return field.zero();
}

std::vector<FieldElement> enumerate_elements(const Field& field, std::uint64_t cap) {
  auto n = field.size();
  if (!n || *n > cap) fail(ErrorKind::TooLarge, "cannot enumerate " + field.name());
  std::vector<FieldElement> out;
  out.reserve(*n);
  if (field.kind() == FieldKind::prime) {
    for (u64 r = 0; r < field.modulus(); ++r) out.push_back(field.from_int(static_cast<long long>(r)));
    return out;
  }
  auto base = enumerate_elements(field.base(), cap);
  for (const auto& u : base)
    for (const auto& v : base) out.push_back(FieldElement::from_parts(field, u, v));
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

}  // namespace tdp
