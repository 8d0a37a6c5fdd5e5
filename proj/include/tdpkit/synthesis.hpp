#pragma once

// Split-basis candidates built from eigenvalue data, and witnesses for the
// scalar action of polynomials in the E*_0 tau_i(A) E*_0 on E*_0 V.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdpkit/paramarray.hpp"
#include "tdpkit/polynomial.hpp"

namespace tdp {

struct SplitBasisCandidate {
  std::size_t d = 0;
  std::vector<FieldElement> theta, theta_star, phi;
  ExactMatrix A;      // lower bidiagonal: A[i][i] = theta_i, A[i+1][i] = 1
  ExactMatrix Astar;  // upper bidiagonal: A*[i][i] = theta*_i, A*[i][i+1] = phi_{i+1}
};

/// ZeroPhi if some phi_i vanishes, RepeatedEigenvalue if theta or theta*
/// repeats, DimensionMismatch on inconsistent lengths.
SplitBasisCandidate construct_candidate(const std::vector<FieldElement>& theta,
                                        const std::vector<FieldElement>& theta_star,
                                        const std::vector<FieldElement>& phi);

/// phi_1, ..., phi_d from the Leonard-system formulas for a chosen phi_1.
/// Only a proposal: the candidate it yields still has to pass verification.
/// DivisionByZero when theta_0 = theta_d.
std::vector<FieldElement> leonard_phi(const std::vector<FieldElement>& theta,
                                      const std::vector<FieldElement>& theta_star, const FieldElement& phi1);

struct VerifiedCandidate {
  SplitBasisCandidate candidate;
  ValidationReport report;
  TriDiagonalSystem system;
  ParameterArray parameters;
};

/// Verify the candidate, build its system in the given ordering and extract
/// the parameter array. CandidateRejected names the failing condition. A
/// seeded random change of basis must reproduce the same parameter array
/// (InvariantViolation otherwise).
VerifiedCandidate construct_and_verify(const std::vector<FieldElement>& theta,
                                       const std::vector<FieldElement>& theta_star,
                                       const std::vector<FieldElement>& phi, std::uint64_t seed = 0);

/// Observations of zeta_i = phi_1 ... phi_i over accepted candidates.
struct PhiZetaEvidence {
  std::vector<FieldElement> theta, theta_star;
  std::size_t accepted = 0;
  std::size_t agreeing = 0;
  bool confirmed() const { return accepted > 0 && accepted == agreeing; }
};

/// Run every phi in the grid through construct_and_verify and record whether
/// the extracted zeta equals the running products of phi.
PhiZetaEvidence probe_phi_zeta(const std::vector<FieldElement>& theta, const std::vector<FieldElement>& theta_star,
                               const std::vector<std::vector<FieldElement>>& phi_grid);

/// phi_i = zeta_i / zeta_{i-1}; refused (InvalidArgument) unless the evidence
/// is confirmed and was gathered for the same d, ZeroPhi if some zeta_i vanishes.
std::vector<FieldElement> phi_from_zeta(const std::vector<FieldElement>& zeta, const PhiZetaEvidence& evidence);

/// zeta_0 = 1, zeta_i = xi_i (theta*_0 - theta*_1)...(theta*_0 - theta*_i).
std::vector<FieldElement> zeta_from_xi(const std::vector<FieldElement>& xi,
                                       const std::vector<FieldElement>& theta_star);

struct GhValues {
  FieldElement g, h;
};

/// g = eta*_d(theta*_0) x_d and
/// h = eta*_d(theta*_0) (eta_d(theta_0) + sum_{i=1}^d eta_{d-i}(theta_0) x_i) at x = xi,
/// checked against zeta_d and sum_i eta_{d-i}(theta_0) eta*_{d-i}(theta*_0) zeta_i
/// (IdentityViolated on mismatch).
GhValues gh_values(const std::vector<FieldElement>& xi, const std::vector<FieldElement>& theta,
                   const std::vector<FieldElement>& theta_star);

struct MuWitnessReport {
  std::vector<FieldElement> xi;  // xi_1..xi_d
  Polynomial polynomial;
  bool commuting = false;
  bool scalar_action_verified = false;
  FieldElement scalar;  // f(xi)
  std::optional<FieldElement> g_value, h_value;  // absent for d = 0
};

/// M_i = E*_0 tau_i(A) E*_0 = xi_i E*_0; checks that the M_i commute and that
/// f(M_1, ..., M_d) = f(xi) E*_0. NotSharp for rho_0 > 1, ActionMismatch when
/// an identity fails, IndexOutOfRange if f uses x_i with i > d.
MuWitnessReport mu_scalar_action(const TriDiagonalSystem& s, const Polynomial& f);

}  // namespace tdp
