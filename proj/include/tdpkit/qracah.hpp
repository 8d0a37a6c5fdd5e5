#pragma once

// Eigenvalue sequences of q-Racah type:
//   theta_i  = a  + b  q^(2i-d) + c  q^(d-2i)
//   theta*_i = a* + b* q^(2i-d) + c* q^(d-2i)

#include <optional>
#include <string>
#include <vector>

#include "tdpkit/exactfield.hpp"

namespace tdp {

struct QRacahParameters {
  std::size_t d = 0;
  FieldElement q, a, b, c, a_star, b_star, c_star;

  const Field& field() const { return q.field(); }
  /// q^2 + q^-2 + 1.
  FieldElement beta() const;
  /// Name of the first violated constraint among q != 0, q^2 != 1,
  /// q^2 != -1, b b* c c* != 0 and "all values in one field"; empty if none.
  std::string constraint_violation() const;

  friend bool operator==(const QRacahParameters& x, const QRacahParameters& y) {
    return x.d == y.d && x.q == y.q && x.a == y.a && x.b == y.b && x.c == y.c && x.a_star == y.a_star &&
           x.b_star == y.b_star && x.c_star == y.c_star;
  }
};

FieldElement beta_of(const QRacahParameters& p);

struct SpectrumCollision {
  bool dual = false;  // true for theta*
  std::size_t i = 0, j = 0;
};

struct GeneratedSequences {
  std::vector<FieldElement> theta, theta_star;
  std::optional<SpectrumCollision> degenerate;  // first equal pair, if any

  bool ok() const { return !degenerate; }
};

/// Both sequences; InvalidArgument when a constraint of the parameters fails.
GeneratedSequences generate_sequences(const QRacahParameters& p);

enum class FitStatus { fitted, not_qracah, parametric_family };
std::string_view to_string(FitStatus s) noexcept;

struct FitResult {
  FitStatus status = FitStatus::not_qracah;
  /// For not_qracah: sequence_not_distinct, ratio_not_constant,
  /// no_q_in_extensions, linear_system_inconsistent or constraint_violated.
  std::string reason;
  std::string detail;
  std::optional<FieldElement> beta;  // in the input field, when determined
  /// Every consistent tuple, in canonical order of q. Closed under
  /// q -> 1/q (swapping b with c and b* with c*) and q -> -q.
  std::vector<QRacahParameters> solutions;
  /// For parametric_family: the parameters left free for d <= 2.
  std::vector<std::string> free_parameters;
};

/// Fit q-Racah parameters to both sequences (equal length d + 1, one field).
/// Over prime fields q may be found in a quadratic extension or a second one
/// above it; ExtensionHeightExceeded if a root needs more.
FitResult fit(const std::vector<FieldElement>& theta, const std::vector<FieldElement>& theta_star);

}  // namespace tdp
