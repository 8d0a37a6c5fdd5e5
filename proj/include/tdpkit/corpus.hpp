#pragma once

// Deterministic grids of candidate systems: q-Racah eigenvalue data with
// Leonard-type phi proposals, plus tensor sums of d = 1 pairs.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdpkit/qracah.hpp"
#include "tdpkit/synthesis.hpp"

namespace tdp {

struct CorpusGrid {
  std::vector<Field> fields;
  std::vector<std::size_t> diameters;
  std::vector<long long> q;
  std::vector<std::array<long long, 3>> abc, abc_star;
  std::vector<long long> phi1;
  /// phi pairs (phi, phi') giving kron_sum of the d = 1 pairs with those phi.
  std::vector<std::array<long long, 2>> tensor_phi;

  static CorpusGrid default_grid();
  bool empty() const { return size() == 0; }
  std::size_t size() const;
};

struct CorpusInstance {
  std::string key;
  Field field;
  std::size_t d = 0;
  std::string origin;  // "qracah" or "tensor"
  std::optional<QRacahParameters> qracah;
  std::vector<FieldElement> theta, theta_star, phi;
  std::optional<ExactMatrix> A, Astar;
  bool valid = false;
  bool sharp = false;
  bool qracah_fit_ok = false;
  std::string reason;  // why an instance is not valid
  std::optional<TriDiagonalSystem> system;
  std::optional<ParameterArray> parameters;
};

/// CapExceeded when the grid has more than `cap` points. Instances are sorted
/// by key; the result depends only on (grid, seed).
std::vector<CorpusInstance> build_corpus(const CorpusGrid& grid, std::uint64_t seed = 0, std::size_t cap = 500);

}  // namespace tdp
