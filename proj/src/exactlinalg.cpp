#include "tdpkit/exactlinalg.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <ostream>
#include <random>

namespace tdp {

namespace {

void require_same_field(const Field& a, const Field& b) {
  if (a != b) fail(ErrorKind::MixedFields, a.name() + " vs " + b.name());
}

void require_square(const ExactMatrix& m, const char* what) {
  if (!m.is_square())
    fail(ErrorKind::DimensionMismatch, std::string(what) + " needs a square matrix, got " + std::to_string(m.rows()) +
                                           "x" + std::to_string(m.cols()));
}

}  // namespace

// ---------------------------------------------------------------------------
// ExactMatrix

ExactMatrix::ExactMatrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

ExactMatrix ExactMatrix::identity(const Field& field, std::size_t n) {
  ExactMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
  return m;
}

ExactMatrix ExactMatrix::from_rows(const Field& field, const std::vector<Vector>& rows) {
  std::size_t r = rows.size();
  std::size_t c = r ? rows[0].size() : 0;
  ExactMatrix m(field, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) fail(ErrorKind::DimensionMismatch, "ragged rows");
    for (std::size_t j = 0; j < c; ++j) {
      require_same_field(rows[i][j].field(), field);
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

ExactMatrix ExactMatrix::from_ints(const Field& field, const std::vector<std::vector<long long>>& rows) {
  std::vector<Vector> conv;
  for (const auto& r : rows) {
    Vector v;
    for (long long x : r) v.push_back(field.from_int(x));
    conv.push_back(std::move(v));
  }
  return from_rows(field, conv);
}

ExactMatrix ExactMatrix::diagonal(const Field& field, std::span<const FieldElement> entries) {
  ExactMatrix m(field, entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    require_same_field(entries[i].field(), field);
    m(i, i) = entries[i];
  }
  return m;
}

ExactMatrix ExactMatrix::from_columns(const Field& field, std::size_t rows, const std::vector<Vector>& columns) {
  ExactMatrix m(field, rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) fail(ErrorKind::DimensionMismatch, "column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

Vector ExactMatrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector ExactMatrix::column(std::size_t c) const {
  Vector v;
  v.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
  return v;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool ExactMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const FieldElement& x) { return x.is_zero(); });
}

ExactMatrix ExactMatrix::embedded(const Field& target) const {
  ExactMatrix m(target, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = embed(data_[i], target);
  return m;
}

ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
  require_same_field(a.field_, b.field_);
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::DimensionMismatch, "matrix sum");
  ExactMatrix s = a;
  for (std::size_t i = 0; i < s.data_.size(); ++i) s.data_[i] += b.data_[i];
  return s;
}

ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
  require_same_field(a.field_, b.field_);
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::DimensionMismatch, "matrix difference");
  ExactMatrix s = a;
  for (std::size_t i = 0; i < s.data_.size(); ++i) s.data_[i] -= b.data_[i];
  return s;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  require_same_field(a.field_, b.field_);
  if (a.cols_ != b.rows_) fail(ErrorKind::DimensionMismatch, "matrix product");
  ExactMatrix p(a.field_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const FieldElement& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const FieldElement& y = b(k, j);
        if (!y.is_zero()) p(i, j) += x * y;
      }
    }
  return p;
}

ExactMatrix operator*(const FieldElement& s, const ExactMatrix& m) {
  require_same_field(s.field(), m.field_);
  ExactMatrix r = m;
  for (auto& x : r.data_) x *= s;
  return r;
}

Vector operator*(const ExactMatrix& m, const Vector& v) {
  if (v.size() != m.cols_) fail(ErrorKind::DimensionMismatch, "matrix-vector product");
  Vector out(m.rows_, m.field_.zero());
  for (std::size_t i = 0; i < m.rows_; ++i)
    for (std::size_t j = 0; j < m.cols_; ++j) {
      const FieldElement& x = m(i, j);
      if (!x.is_zero() && !v[j].is_zero()) out[i] += x * v[j];
    }
  return out;
}

bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
  return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::ostream& operator<<(std::ostream& os, const ExactMatrix& m) {
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << "]";
  }
  return os << "]";
}

ExactMatrix shift(const ExactMatrix& m, const FieldElement& s) {
  require_square(m, "shift");
  ExactMatrix r = m;
  for (std::size_t i = 0; i < m.rows(); ++i) r(i, i) -= s;
  return r;
}

// ---------------------------------------------------------------------------
// Elimination

EchelonForm rref(const ExactMatrix& m) {
  EchelonForm out{m, {}};
  ExactMatrix& r = out.reduced;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < r.cols() && lead < r.rows(); ++c) {
    std::size_t piv = lead;
    while (piv < r.rows() && r(piv, c).is_zero()) ++piv;
    if (piv == r.rows()) continue;
    if (piv != lead)
      for (std::size_t j = 0; j < r.cols(); ++j) std::swap(r(piv, j), r(lead, j));
    FieldElement inv = r(lead, c).inverse();
    for (std::size_t j = c; j < r.cols(); ++j) r(lead, j) *= inv;
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i == lead || r(i, c).is_zero()) continue;
      FieldElement f = r(i, c);
      for (std::size_t j = c; j < r.cols(); ++j)
        if (!r(lead, j).is_zero()) r(i, j) -= f * r(lead, j);
    }
    out.pivots.push_back(c);
    ++lead;
  }
  return out;
}

std::size_t rank(const ExactMatrix& m) { return rref(m).pivots.size(); }

FieldElement determinant(const ExactMatrix& m) {
  require_square(m, "determinant");
  ExactMatrix a = m;
  std::size_t n = a.rows();
  FieldElement det = a.field().one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a(piv, c).is_zero()) ++piv;
    if (piv == n) return a.field().zero();
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    FieldElement inv = a(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c).is_zero()) continue;
      FieldElement f = a(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

ExactMatrix inverse(const ExactMatrix& m) {
  require_square(m, "inverse");
  std::size_t n = m.rows();
  ExactMatrix aug(m.field(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = m.field().one();
  }
  EchelonForm e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) fail(ErrorKind::DivisionByZero, "matrix is singular");
  ExactMatrix inv(m.field(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

LinearSolution solve_linear(const ExactMatrix& m, const Vector& rhs) {
  if (rhs.size() != m.rows()) fail(ErrorKind::DimensionMismatch, "right-hand side length");
  ExactMatrix aug(m.field(), m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = rhs[i];
  }
  EchelonForm e = rref(aug);
  LinearSolution out;
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return out;
  out.consistent = true;
  out.unique = e.pivots.size() == m.cols();
  out.particular.assign(m.cols(), m.field().zero());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) out.particular[e.pivots[r]] = e.reduced(r, m.cols());
  return out;
}

// ---------------------------------------------------------------------------
// Subspaces

Vector EchelonBasis::reduce(Vector v) const {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const FieldElement f = v[pivots_[k]];
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < ambient_; ++j)
      if (!rows_[k][j].is_zero()) v[j] -= f * rows_[k][j];
  }
  return v;
}

bool EchelonBasis::insert(const Vector& v) {
  if (v.size() != ambient_) fail(ErrorKind::DimensionMismatch, "vector length");
  Vector w = reduce(v);
  auto it = std::find_if(w.begin(), w.end(), [](const FieldElement& x) { return !x.is_zero(); });
  if (it == w.end()) return false;
  std::size_t p = static_cast<std::size_t>(it - w.begin());
  FieldElement inv = w[p].inverse();
  for (auto& x : w) x *= inv;
  for (auto& row : rows_) {
    FieldElement f = row[p];
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < ambient_; ++j)
      if (!w[j].is_zero()) row[j] -= f * w[j];
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, p);
  rows_.insert(rows_.begin() + pos, std::move(w));
  return true;
}

Subspace EchelonBasis::to_subspace() const {
  Subspace s;
  s.field_ = field_;
  s.ambient_ = ambient_;
  s.basis_ = rows_;
  s.pivots_ = pivots_;
  return s;
}

Subspace Subspace::zero(const Field& field, std::size_t ambient_dim) {
  return EchelonBasis(field, ambient_dim).to_subspace();
}

Subspace Subspace::full(const Field& field, std::size_t ambient_dim) {
  EchelonBasis b(field, ambient_dim);
  for (std::size_t i = 0; i < ambient_dim; ++i) {
    Vector e(ambient_dim, field.zero());
    e[i] = field.one();
    b.insert(e);
  }
  return b.to_subspace();
}

Subspace Subspace::span(const Field& field, std::size_t ambient_dim, const std::vector<Vector>& vectors) {
  EchelonBasis b(field, ambient_dim);
  for (const auto& v : vectors) b.insert(v);
  return b.to_subspace();
}

bool Subspace::contains(const Vector& v) const {
  if (v.size() != ambient_) fail(ErrorKind::DimensionMismatch, "vector length");
  Vector w = v;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const FieldElement f = w[pivots_[k]];
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < ambient_; ++j)
      if (!basis_[k][j].is_zero()) w[j] -= f * basis_[k][j];
  }
  return std::all_of(w.begin(), w.end(), [](const FieldElement& x) { return x.is_zero(); });
}

bool Subspace::contains(const Subspace& other) const {
  return std::all_of(other.basis_.begin(), other.basis_.end(), [this](const Vector& v) { return contains(v); });
}

bool Subspace::is_invariant_under(const ExactMatrix& m) const {
  return std::all_of(basis_.begin(), basis_.end(), [&](const Vector& v) { return contains(m * v); });
}

ExactMatrix Subspace::as_columns() const { return ExactMatrix::from_columns(field_, ambient_, basis_); }

Subspace kernel(const ExactMatrix& m) {
  EchelonForm e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> vecs;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols(), m.field().zero());
    v[f] = m.field().one();
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
    vecs.push_back(std::move(v));
  }
  return Subspace::span(m.field(), m.cols(), vecs);
}

Subspace column_space(const ExactMatrix& m) {
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
  return Subspace::span(m.field(), m.rows(), cols);
}

Subspace annihilator(const Subspace& s) {
  if (s.dim() == 0) return Subspace::full(s.field(), s.ambient_dim());
  return kernel(ExactMatrix::from_rows(s.field(), s.basis()));
}

// ---------------------------------------------------------------------------
// Characteristic polynomial and roots

std::vector<FieldElement> characteristic_polynomial(const ExactMatrix& m) {
  require_square(m, "characteristic polynomial");
  const Field& f = m.field();
  std::size_t n = m.rows();
  ExactMatrix h = m;
  // Similarity transform to upper Hessenberg form.
  for (std::size_t k = 1; k + 1 < n; ++k) {
    std::size_t piv = k;
    while (piv < n && h(piv, k - 1).is_zero()) ++piv;
    if (piv == n) continue;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h(piv, j), h(k, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(h(i, piv), h(i, k));
    }
    FieldElement t_inv = h(k, k - 1).inverse();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (h(i, k - 1).is_zero()) continue;
      FieldElement u = h(i, k - 1) * t_inv;
      for (std::size_t j = 0; j < n; ++j) h(i, j) -= u * h(k, j);
      for (std::size_t j = 0; j < n; ++j) h(j, k) += u * h(j, i);
    }
  }
  // p_m(x) = (x - h_{m-1,m-1}) p_{m-1} - sum_i (prod subdiag) h_{m-i-1,m-1} p_{m-i-1}
  std::vector<std::vector<FieldElement>> p(n + 1);
  p[0] = {f.one()};
  for (std::size_t m1 = 1; m1 <= n; ++m1) {
    std::vector<FieldElement> cur(m1 + 1, f.zero());
    const auto& prev = p[m1 - 1];
    for (std::size_t k = 0; k < prev.size(); ++k) {
      cur[k + 1] += prev[k];
      cur[k] -= h(m1 - 1, m1 - 1) * prev[k];
    }
    FieldElement t = f.one();
    for (std::size_t i = 1; i < m1; ++i) {
      t *= h(m1 - i, m1 - i - 1);
      if (t.is_zero()) break;
      FieldElement c = t * h(m1 - i - 1, m1 - 1);
      const auto& q = p[m1 - i - 1];
      for (std::size_t k = 0; k < q.size(); ++k) cur[k] -= c * q[k];
    }
    p[m1] = std::move(cur);
  }
  return p[n];
}

namespace {

FieldElement horner(const std::vector<FieldElement>& c, const FieldElement& x) {
  FieldElement acc = x.field().zero();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Divide by (x - r); caller guarantees r is a root.
std::vector<FieldElement> deflate(const std::vector<FieldElement>& c, const FieldElement& r) {
  std::size_t n = c.size() - 1;
  std::vector<FieldElement> q(n, r.field().zero());
  FieldElement carry = r.field().zero();
  for (std::size_t k = n; k >= 1; --k) {
    carry = c[k] + carry * r;
    q[k - 1] = carry;
  }
  return q;
}

void trim(std::vector<FieldElement>& c) {
  while (c.size() > 1 && c.back().is_zero()) c.pop_back();
}

std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<std::pair<mpz_class, int>> factors;
  for (unsigned long p = 2; p <= 1000000; ++p) {
    if (mpz_class(p) * p > n) break;
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= p;
      ++e;
    }
    if (e) factors.emplace_back(mpz_class(p), e);
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      fail(ErrorKind::EigenvalueSearchFailed, "cannot enumerate divisors of " + n.get_str());
    factors.emplace_back(n, 1);
  }
  std::vector<mpz_class> out{1};
  for (auto& [p, e] : factors) {
    std::size_t sz = out.size();
    mpz_class pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

std::vector<FieldElement> rational_root_candidates(const std::vector<FieldElement>& c) {
  const Field& f = c[0].field();
  mpz_class l = 1;
  for (const auto& x : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.rational().get_den_mpz_t());
  std::vector<mpz_class> ints;
  for (const auto& x : c) ints.push_back(mpz_class(x.rational() * l));
  std::size_t low = 0;
  while (low < ints.size() && ints[low] == 0) ++low;
  std::vector<FieldElement> out;
  if (low > 0) out.push_back(f.zero());
  if (low + 1 >= ints.size()) return out;
  auto ps = divisors(ints[low]);
  auto qs = divisors(ints.back());
  std::vector<mpq_class> cand;
  for (const auto& p : ps)
    for (const auto& q : qs) {
      mpq_class r(p, q);
      r.canonicalize();
      cand.push_back(r);
      cand.push_back(-r);
    }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  for (auto& r : cand) out.push_back(f.from_rational(r));
  return out;
}

}  // namespace

PolynomialRoots roots_in_field(const std::vector<FieldElement>& coeffs) {
  if (coeffs.empty()) fail(ErrorKind::InvalidArgument, "empty polynomial");
  std::vector<FieldElement> c = coeffs;
  trim(c);
  const Field f = c[0].field();
  if (c.size() == 1) {
    if (c[0].is_zero()) fail(ErrorKind::InvalidArgument, "zero polynomial has every element as a root");
    return {};
  }

  std::vector<FieldElement> candidates;
  bool via_subfield = false;
  Field sub = f;
  if (f.kind() == FieldKind::quadratic_ext) {
    Field b = f.base();
    while (true) {
      if (std::all_of(c.begin(), c.end(), [&](const FieldElement& x) { return lies_in(x, b); })) {
        sub = b;
        via_subfield = true;
      }
      if (b.kind() != FieldKind::quadratic_ext) break;
      b = b.base();
    }
  }
  auto size = f.size();
  if (size && *size <= (1u << 16)) {
    candidates = enumerate_elements(f);
  } else if (via_subfield) {
    std::vector<FieldElement> projected;
    for (const auto& x : c) projected.push_back(project(x, sub));
    for (const auto& r : roots_in_field(projected).roots) candidates.push_back(embed(r, f));
  } else if (f.kind() == FieldKind::rational) {
    candidates = rational_root_candidates(c);
  }

  PolynomialRoots out;
  for (const auto& r : candidates) {
    if (c.size() == 1) break;
    std::size_t mult = 0;
    while (c.size() > 1 && horner(c, r).is_zero()) {
      c = deflate(c, r);
      ++mult;
    }
    if (mult) {
      out.roots.push_back(r);
      out.multiplicities.push_back(mult);
    }
  }
  out.residual_degree = c.size() - 1;
  // keep roots and multiplicities aligned in canonical order
  std::vector<std::size_t> idx(out.roots.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return canonical_less(out.roots[a], out.roots[b]); });
  PolynomialRoots sorted;
  for (std::size_t i : idx) {
    sorted.roots.push_back(out.roots[i]);
    sorted.multiplicities.push_back(out.multiplicities[i]);
  }
  sorted.residual_degree = out.residual_degree;
  return sorted;
}

namespace {

EigenDecomposition decompose_with_roots(const ExactMatrix& m, const PolynomialRoots& roots) {
  if (roots.residual_degree > 0)
    fail(ErrorKind::EigenvalueSearchFailed, "characteristic polynomial keeps a factor of degree " +
                                                std::to_string(roots.residual_degree) + " without roots in " +
                                                m.field().name());
  EigenDecomposition out;
  std::size_t total = 0;
  for (const auto& r : roots.roots) {
    Subspace s = kernel(shift(m, r));
    total += s.dim();
    out.pairs.push_back({r, std::move(s)});
  }
  out.diagonalizable = total == m.rows();
  return out;
}

}  // namespace

EigenDecomposition eigen_decompose(const ExactMatrix& m) {
  require_square(m, "eigen_decompose");
  return decompose_with_roots(m, roots_in_field(characteristic_polynomial(m)));
}

EigenDecomposition eigen_decompose(const ExactMatrix& m, std::span<const FieldElement> candidates) {
  require_square(m, "eigen_decompose");
  std::vector<FieldElement> c = characteristic_polynomial(m);
  std::vector<FieldElement> cand(candidates.begin(), candidates.end());
  for (const auto& x : cand) require_same_field(x.field(), m.field());
  std::sort(cand.begin(), cand.end(), canonical_less);
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  PolynomialRoots roots;
  for (const auto& r : cand) {
    std::size_t mult = 0;
    while (c.size() > 1 && horner(c, r).is_zero()) {
      c = deflate(c, r);
      ++mult;
    }
    if (mult) {
      roots.roots.push_back(r);
      roots.multiplicities.push_back(mult);
    }
  }
  roots.residual_degree = c.size() - 1;
  return decompose_with_roots(m, roots);
}

// ---------------------------------------------------------------------------
// Spin-up and irreducibility

Subspace spin_up(const Vector& v, std::span<const ExactMatrix> generators) {
  if (std::all_of(v.begin(), v.end(), [](const FieldElement& x) { return x.is_zero(); }))
    fail(ErrorKind::ZeroVector, "spin_up needs a nonzero vector");
  const Field& f = v.front().field();
  for (const auto& g : generators) {
    require_square(g, "spin_up generator");
    require_same_field(g.field(), f);
    if (g.rows() != v.size()) fail(ErrorKind::DimensionMismatch, "generator size");
  }
  EchelonBasis basis(f, v.size());
  std::deque<Vector> queue;
  basis.insert(v);
  queue.push_back(v);
  while (!queue.empty() && basis.dim() < v.size()) {
    Vector w = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : generators) {
      Vector img = g * w;
      if (basis.insert(img)) queue.push_back(std::move(img));
    }
  }
  return basis.to_subspace();
}

std::string_view to_string(Irreducibility v) noexcept {
  switch (v) {
    case Irreducibility::irreducible: return "irreducible";
    case Irreducibility::reducible: return "reducible";
    case Irreducibility::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Projective points of a subspace over a finite field: every nonzero
// combination whose first nonzero coefficient is 1.
std::vector<Vector> projective_points(const Subspace& s) {
  auto elems = enumerate_elements(s.field());
  std::size_t k = s.dim(), q = elems.size();
  std::vector<Vector> out;
  std::vector<std::size_t> digits(k, 0);
  std::size_t one_idx = static_cast<std::size_t>(
      std::find(elems.begin(), elems.end(), s.field().one()) - elems.begin());
  while (true) {
    // first nonzero digit must be the unit
    auto first = std::find_if(digits.begin(), digits.end(), [&](std::size_t d) { return !elems[d].is_zero(); });
    if (first != digits.end() && *first == one_idx) {
      Vector v(s.ambient_dim(), s.field().zero());
      for (std::size_t i = 0; i < k; ++i)
        if (!elems[digits[i]].is_zero())
          for (std::size_t j = 0; j < v.size(); ++j) v[j] += elems[digits[i]] * s.basis()[i][j];
      out.push_back(std::move(v));
    }
    std::size_t pos = 0;
    while (pos < k && ++digits[pos] == q) digits[pos++] = 0;
    if (pos == k) break;
  }
  return out;
}

struct PivotOutcome {
  Irreducibility verdict = Irreducibility::inconclusive;
  std::optional<Subspace> witness;
};

PivotOutcome try_pivot(const ExactMatrix& pivot, std::span<const ExactMatrix> gens,
                       std::span<const ExactMatrix> gens_t, const NortonOptions& opt) {
  std::size_t n = pivot.rows();
  PivotOutcome out;
  Subspace null = kernel(pivot);
  if (null.dim() == 0) return out;
  for (const auto& v : null.basis()) {
    Subspace s = spin_up(v, gens);
    if (s.dim() < n) {
      out.verdict = Irreducibility::reducible;
      out.witness = s;
      return out;
    }
  }
  bool covered = null.dim() == 1;
  if (!covered && pivot.field().is_finite()) {
    auto q = *pivot.field().size();
    long double points = 1;
    for (std::size_t i = 0; i < null.dim(); ++i) points *= static_cast<long double>(q);
    if (points <= static_cast<long double>(opt.projective_point_cap)) {
      for (const auto& v : projective_points(null)) {
        Subspace s = spin_up(v, gens);
        if (s.dim() < n) {
          out.verdict = Irreducibility::reducible;
          out.witness = s;
          return out;
        }
      }
      covered = true;
    }
  }
  Subspace dual_null = kernel(pivot.transpose());
  Subspace dual = spin_up(dual_null.basis().front(), gens_t);
  if (dual.dim() < n) {
    out.verdict = Irreducibility::reducible;
    out.witness = annihilator(dual);
    return out;
  }
  if (covered) out.verdict = Irreducibility::irreducible;
  return out;
}

ExactMatrix random_algebra_element(std::span<const ExactMatrix> gens, std::mt19937_64& rng) {
  const Field& f = gens.front().field();
  std::size_t n = gens.front().rows();
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::uniform_int_distribution<int> len(1, 3);
  ExactMatrix x(f, n, n);
  for (int term = 0; term < 3; ++term) {
    ExactMatrix w = gens[pick(rng)];
    for (int l = len(rng); l > 1; --l) w = w * gens[pick(rng)];
    FieldElement c = random_element(f, rng, 3);
    if (c.is_zero()) c = f.one();
    x = x + c * w;
  }
  return x;
}

}  // namespace

IrreducibilityResult norton_test(std::span<const ExactMatrix> generators, std::span<const ExactMatrix> pivots,
                                 const NortonOptions& options) {
  if (generators.empty()) fail(ErrorKind::InvalidArgument, "no generators");
  const ExactMatrix& g0 = generators.front();
  require_square(g0, "norton_test");
  for (const auto& g : generators) {
    require_same_field(g.field(), g0.field());
    if (g.rows() != g0.rows() || !g.is_square()) fail(ErrorKind::DimensionMismatch, "generator sizes differ");
  }
  IrreducibilityResult result;
  result.seed = options.seed;
  if (g0.rows() == 1) {
    result.verdict = Irreducibility::irreducible;
    result.pivot = "dimension one";
    return result;
  }
  std::vector<ExactMatrix> gens_t;
  for (const auto& g : generators) gens_t.push_back(g.transpose());

  for (std::size_t i = 0; i < pivots.size(); ++i) {
    PivotOutcome o = try_pivot(pivots[i], generators, gens_t, options);
    if (o.verdict != Irreducibility::inconclusive) {
      result.verdict = o.verdict;
      result.witness = std::move(o.witness);
      result.pivot = "supplied pivot " + std::to_string(i);
      return result;
    }
  }

  std::mt19937_64 rng(options.seed);
  for (int w = 0; w < options.random_words; ++w) {
    ExactMatrix x = random_algebra_element(generators, rng);
    result.random_words_tried = w + 1;
    PolynomialRoots roots;
    try {
      roots = roots_in_field(characteristic_polynomial(x));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EigenvalueSearchFailed) throw;
      continue;
    }
    for (const auto& r : roots.roots) {
      PivotOutcome o = try_pivot(shift(x, r), generators, gens_t, options);
      if (o.verdict != Irreducibility::inconclusive) {
        result.verdict = o.verdict;
        result.witness = std::move(o.witness);
        result.pivot = "random word " + std::to_string(w) + " shifted by " + r.to_string();
        return result;
      }
    }
  }
  return result;
}

IrreducibilityResult is_irreducible_pair(const ExactMatrix& a, const ExactMatrix& a_star,
                                         const NortonOptions& options) {
  require_square(a, "is_irreducible_pair");
  require_square(a_star, "is_irreducible_pair");
  require_same_field(a.field(), a_star.field());
  if (a.rows() != a_star.rows()) fail(ErrorKind::DimensionMismatch, "A and A* differ in size");
  EigenDecomposition ea = eigen_decompose(a);
  EigenDecomposition es = eigen_decompose(a_star);
  if (!ea.diagonalizable || !es.diagonalizable)
    fail(ErrorKind::NotDiagonalizable, "irreducibility test needs both operators diagonalizable");

  struct Candidate {
    std::size_t nullity;
    int order;
    ExactMatrix m;
  };
  std::vector<Candidate> cands;
  int order = 0;
  for (const auto& p : es.pairs) cands.push_back({p.space.dim(), order++, shift(a_star, p.value)});
  for (const auto& p : ea.pairs) cands.push_back({p.space.dim(), order++, shift(a, p.value)});
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    return x.nullity != y.nullity ? x.nullity < y.nullity : x.order < y.order;
  });
  std::vector<ExactMatrix> pivots;
  for (auto& c : cands) pivots.push_back(std::move(c.m));
  std::vector<ExactMatrix> gens{a, a_star};
  return norton_test(gens, pivots, options);
}

std::vector<Subspace> brute_force_invariant_subspaces(const ExactMatrix& a, const ExactMatrix& a_star) {
  require_square(a, "brute_force_invariant_subspaces");
  require_same_field(a.field(), a_star.field());
  if (a.rows() != a_star.rows()) fail(ErrorKind::DimensionMismatch, "A and A* differ in size");
  const Field& f = a.field();
  std::size_t n = a.rows();
  if (f.kind() != FieldKind::prime || f.modulus() > 3 || n > 4)
    fail(ErrorKind::TooLarge, "exhaustive enumeration limited to GF(2)/GF(3) and dimension <= 4");
  auto elems = enumerate_elements(f);
  std::size_t q = elems.size();
  std::vector<Subspace> out;

  for (std::size_t k = 0; k <= n; ++k) {
    // pivot column sets as increasing k-subsets of {0..n-1}
    std::vector<std::size_t> piv(k);
    for (std::size_t i = 0; i < k; ++i) piv[i] = i;
    while (true) {
      std::vector<std::pair<std::size_t, std::size_t>> free_slots;
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = piv[r] + 1; c < n; ++c)
          if (std::find(piv.begin(), piv.end(), c) == piv.end()) free_slots.emplace_back(r, c);
      std::vector<std::size_t> digits(free_slots.size(), 0);
      while (true) {
        std::vector<Vector> rows(k, Vector(n, f.zero()));
        for (std::size_t r = 0; r < k; ++r) rows[r][piv[r]] = f.one();
        for (std::size_t s = 0; s < free_slots.size(); ++s)
          rows[free_slots[s].first][free_slots[s].second] = elems[digits[s]];
        Subspace sub = Subspace::span(f, n, rows);
        if (sub.is_invariant_under(a) && sub.is_invariant_under(a_star)) out.push_back(std::move(sub));
        std::size_t pos = 0;
        while (pos < digits.size() && ++digits[pos] == q) digits[pos++] = 0;
        if (pos == digits.size()) break;
      }
      // next k-subset
      std::size_t i = k;
      while (i > 0 && piv[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++piv[i - 1];
      for (std::size_t j = i; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace tdp
