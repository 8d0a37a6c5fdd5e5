#pragma once

// Generators and slow reference computations shared by the test binaries.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "tdpkit/exactlinalg.hpp"

namespace tdp::testing {

inline ExactMatrix random_matrix(const Field& f, std::size_t n, std::mt19937_64& rng, int magnitude = 4) {
  ExactMatrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = random_element(f, rng, magnitude);
  return m;
}

inline ExactMatrix random_invertible(const Field& f, std::size_t n, std::mt19937_64& rng, int magnitude = 4) {
  while (true) {
    ExactMatrix m = random_matrix(f, n, rng, magnitude);
    if (rank(m) == n) return m;
  }
}

/// Leibniz expansion; only for small n.
inline FieldElement leibniz_determinant(const ExactMatrix& m) {
  std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  FieldElement total = m.field().zero();
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    FieldElement term = m.field().one();
    for (std::size_t i = 0; i < n; ++i) term *= m(i, perm[i]);
    total = inversions % 2 ? total - term : total + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline FieldElement poly_eval(const std::vector<FieldElement>& c, const FieldElement& x) {
  FieldElement acc = x.field().zero();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Random diagonalizable matrix P D P^-1 with eigenvalues drawn from `values`.
inline ExactMatrix random_diagonalizable(const Field& f, std::size_t n, const std::vector<FieldElement>& values,
                                         std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<FieldElement> d;
  for (std::size_t i = 0; i < n; ++i) d.push_back(values[pick(rng)]);
  ExactMatrix p = random_invertible(f, n, rng);
  return p * ExactMatrix::diagonal(f, d) * inverse(p);
}

/// Lower bidiagonal A (theta on the diagonal, ones below) and upper
/// bidiagonal A* (theta* on the diagonal, phi above), built entry by entry.
inline std::pair<ExactMatrix, ExactMatrix> bidiagonal_pair(const Field& f, const std::vector<long long>& theta,
                                                          const std::vector<long long>& theta_star,
                                                          const std::vector<long long>& phi) {
  std::size_t n = theta.size();
  ExactMatrix a(f, n, n), as(f, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = f.from_int(theta[i]);
    as(i, i) = f.from_int(theta_star[i]);
    if (i + 1 < n) {
      a(i + 1, i) = f.one();
      as(i, i + 1) = f.from_int(phi[i]);
    }
  }
  return {a, as};
}

inline ExactMatrix kron(const ExactMatrix& x, const ExactMatrix& y) {
  ExactMatrix m(x.field(), x.rows() * y.rows(), x.cols() * y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      for (std::size_t k = 0; k < y.rows(); ++k)
        for (std::size_t l = 0; l < y.cols(); ++l) m(i * y.rows() + k, j * y.cols() + l) = x(i, j) * y(k, l);
  return m;
}

/// X (x) I + I (x) Y.
inline ExactMatrix kron_sum(const ExactMatrix& x, const ExactMatrix& y) {
  return kron(x, ExactMatrix::identity(x.field(), y.rows())) + kron(ExactMatrix::identity(x.field(), x.rows()), y);
}

}  // namespace tdp::testing
