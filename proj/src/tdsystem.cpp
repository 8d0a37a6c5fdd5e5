#include "tdpkit/tdsystem.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace tdp {

ExactMatrix primitive_idempotent(const ExactMatrix& m, const std::vector<FieldElement>& eigenvalues, std::size_t i) {
  if (!m.is_square()) fail(ErrorKind::DimensionMismatch, "primitive_idempotent needs a square matrix");
  if (i >= eigenvalues.size())
    fail(ErrorKind::IndexOutOfRange, "index " + std::to_string(i) + " with " + std::to_string(eigenvalues.size()) +
                                         " eigenvalues");
  ExactMatrix e = ExactMatrix::identity(m.field(), m.rows());
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
    if (j == i) continue;
    FieldElement gap = eigenvalues[i] - eigenvalues[j];
    if (gap.is_zero())
      fail(ErrorKind::RepeatedEigenvalue, "eigenvalue " + eigenvalues[i].to_string() + " listed at positions " +
                                              std::to_string(i) + " and " + std::to_string(j));
    e = gap.inverse() * (e * shift(m, eigenvalues[j]));
  }
  return e;
}

std::vector<ExactMatrix> primitive_idempotents(const ExactMatrix& m, const std::vector<FieldElement>& eigenvalues) {
  std::vector<ExactMatrix> out;
  out.reserve(eigenvalues.size());
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) out.push_back(primitive_idempotent(m, eigenvalues, i));
  return out;
}

std::string OrderingChoice::key() const {
  std::string k;
  for (std::size_t i = 0; i < theta.size(); ++i) k += (i ? "," : "") + theta[i].to_string();
  k += ";";
  for (std::size_t i = 0; i < theta_star.size(); ++i) k += (i ? "," : "") + theta_star[i].to_string();
  return k;
}

const OrderingChoice& default_choice(const std::vector<OrderingChoice>& choices) {
  if (choices.empty()) fail(ErrorKind::InvalidArgument, "no ordering to choose from");
  return *std::min_element(choices.begin(), choices.end(),
                           [](const OrderingChoice& x, const OrderingChoice& y) { return x.key() < y.key(); });
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::skipped: return "skipped";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

using Graph = std::vector<std::vector<std::size_t>>;

Graph adjacency(const std::vector<ExactMatrix>& e, const ExactMatrix& b) {
  std::size_t n = e.size();
  Graph g(n);
  std::vector<ExactMatrix> right;
  for (const auto& ej : e) right.push_back(b * ej);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!(e[i] * right[j]).is_zero() || !(e[j] * right[i]).is_zero()) {
        g[i].push_back(j);
        g[j].push_back(i);
      }
  return g;
}

std::vector<std::size_t> component_of(const Graph& g, std::size_t start, std::vector<bool>& seen) {
  std::vector<std::size_t> comp{start}, stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : g[v])
      if (!seen[w]) {
        seen[w] = true;
        comp.push_back(w);
        stack.push_back(w);
      }
  }
  std::sort(comp.begin(), comp.end());
  return comp;
}

// Whether some vertex ordering places every edge between neighbours, that is
// whether the graph is a disjoint union of paths. On failure `witness` holds a
// vertex with its neighbours, or the vertices of a component with a cycle.
bool linear_forest(const Graph& g, std::vector<std::size_t>& witness) {
  for (std::size_t v = 0; v < g.size(); ++v)
    if (g[v].size() > 2) {
      witness = {v};
      witness.insert(witness.end(), g[v].begin(), g[v].end());
      return false;
    }
  std::vector<bool> seen(g.size(), false);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (seen[v]) continue;
    auto comp = component_of(g, v, seen);
    std::size_t degree_sum = 0;
    for (std::size_t w : comp) degree_sum += g[w].size();
    if (degree_sum / 2 >= comp.size()) {
      witness = comp;
      return false;
    }
  }
  return true;
}

// Both traversals of a Hamiltonian path, or nothing.
std::vector<std::vector<std::size_t>> path_orderings(const Graph& g) {
  std::size_t n = g.size();
  std::vector<std::size_t> dummy;
  if (!linear_forest(g, dummy)) return {};
  std::vector<bool> seen(n, false);
  if (component_of(g, 0, seen).size() != n) return {};
  std::size_t start = 0;
  while (g[start].size() > 1) ++start;
  std::vector<std::size_t> order{start};
  std::size_t prev = n, cur = start;
  while (order.size() < n) {
    std::size_t next = g[cur][0] != prev ? g[cur][0] : g[cur][1];
    order.push_back(next);
    prev = cur;
    cur = next;
  }
  std::vector<std::size_t> rev(order.rbegin(), order.rend());
  return {order, rev};
}

std::vector<std::vector<std::size_t>> standard_index_orderings(const Graph& g, const char* which) {
  std::size_t n = g.size();
  if (n <= 2) {
    std::vector<std::size_t> id(n);
    std::iota(id.begin(), id.end(), 0);
    if (n < 2) return {id};
    return {id, {1, 0}};
  }
  auto out = path_orderings(g);
  if (out.empty()) fail(ErrorKind::NotAPath, std::string("eigenspace adjacency graph of ") + which + " is not a path");
  return out;
}

std::vector<FieldElement> eigenvalue_list(const EigenDecomposition& e) {
  std::vector<FieldElement> out;
  for (const auto& p : e.pairs) out.push_back(p.value);
  return out;
}

std::vector<FieldElement> permute(const std::vector<FieldElement>& xs, const std::vector<std::size_t>& order) {
  std::vector<FieldElement> out;
  for (std::size_t i : order) out.push_back(xs[i]);
  return out;
}

void require_pair(const ExactMatrix& a, const ExactMatrix& a_star) {
  if (!a.is_square() || !a_star.is_square() || a.rows() != a_star.rows())
    fail(ErrorKind::DimensionMismatch, "A and A* must be square of equal size");
  if (a.field() != a_star.field()) fail(ErrorKind::MixedFields, "A and A* over different fields");
}

EigenDecomposition diagonalize(const ExactMatrix& m, const char* which) {
  EigenDecomposition e = eigen_decompose(m);
  if (!e.diagonalizable) fail(ErrorKind::NotDiagonalizable, std::string(which) + " is not diagonalizable");
  return e;
}

std::string index_list(const std::vector<std::size_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + std::to_string(xs[i]);
  return s;
}

}  // namespace

std::vector<OrderingChoice> standard_orderings(const ExactMatrix& a, const ExactMatrix& a_star) {
  require_pair(a, a_star);
  EigenDecomposition ea = diagonalize(a, "A"), es = diagonalize(a_star, "A*");
  auto theta = eigenvalue_list(ea), theta_star = eigenvalue_list(es);
  auto ga = adjacency(primitive_idempotents(a, theta), a_star);
  auto gs = adjacency(primitive_idempotents(a_star, theta_star), a);
  std::vector<OrderingChoice> out;
  for (const auto& oa : standard_index_orderings(ga, "A"))
    for (const auto& os : standard_index_orderings(gs, "A*")) out.push_back({permute(theta, oa), permute(theta_star, os)});
  std::sort(out.begin(), out.end(), [](const OrderingChoice& x, const OrderingChoice& y) { return x.key() < y.key(); });
  return out;
}

bool ValidationReport::passed() const {
  return diagonalizable.verdict == Verdict::pass && standard_a.verdict == Verdict::pass &&
         standard_a_star.verdict == Verdict::pass && irreducible.verdict == Verdict::pass && diameters_agree();
}

ValidationReport verify_td_pair(const ExactMatrix& a, const ExactMatrix& a_star, const NortonOptions& options) {
  require_pair(a, a_star);
  ValidationReport r;
  std::optional<EigenDecomposition> ea, es;
  std::string problems;
  for (auto [m, slot, name] : {std::tuple{&a, &ea, "A"}, std::tuple{&a_star, &es, "A*"}}) {
    try {
      *slot = eigen_decompose(*m);
      if (!(*slot)->diagonalizable) {
        problems += std::string(problems.empty() ? "" : "; ") + name + " is not diagonalizable";
        std::vector<Vector> sum;
        for (const auto& p : (*slot)->pairs) sum.insert(sum.end(), p.space.basis().begin(), p.space.basis().end());
        if (!r.diagonalizable.witness_subspace)
          r.diagonalizable.witness_subspace = Subspace::span(m->field(), m->rows(), sum);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EigenvalueSearchFailed) throw;
      problems += std::string(problems.empty() ? "" : "; ") + name + ": " + e.what();
    }
  }
  if (!problems.empty()) {
    r.diagonalizable.verdict = Verdict::fail;
    r.diagonalizable.detail = problems;
    return r;
  }
  r.diagonalizable.verdict = Verdict::pass;
  r.eigenvalues = eigenvalue_list(*ea);
  r.dual_eigenvalues = eigenvalue_list(*es);
  r.diameter = r.eigenvalues.size() - 1;
  r.dual_diameter = r.dual_eigenvalues.size() - 1;

  auto e = primitive_idempotents(a, r.eigenvalues);
  auto es_idem = primitive_idempotents(a_star, r.dual_eigenvalues);
  Graph ga = adjacency(e, a_star), gs = adjacency(es_idem, a);
  auto tridiagonal = [](const Graph& g, ConditionResult& out, const char* acting, const char* on) {
    std::vector<std::size_t> witness;
    if (linear_forest(g, witness)) {
      out.verdict = Verdict::pass;
      return;
    }
    out.verdict = Verdict::fail;
    out.witness_indices = witness;
    out.detail = std::string(acting) + " links eigenspaces {" + index_list(witness) + "} of " + on +
                 " in a pattern no ordering makes tridiagonal";
  };
  tridiagonal(ga, r.standard_a, "A*", "A");
  tridiagonal(gs, r.standard_a_star, "A", "A*");

  IrreducibilityResult irr = is_irreducible_pair(a, a_star, options);
  switch (irr.verdict) {
    case Irreducibility::irreducible: r.irreducible.verdict = Verdict::pass; break;
    case Irreducibility::reducible: r.irreducible.verdict = Verdict::fail; break;
    case Irreducibility::inconclusive: r.irreducible.verdict = Verdict::inconclusive; break;
  }
  r.irreducible.witness_subspace = irr.witness;
  r.irreducible.detail = irr.verdict == Irreducibility::inconclusive
                             ? "no deciding algebra element after " + std::to_string(irr.random_words_tried) +
                                   " random words (seed " + std::to_string(irr.seed) + ")"
                             : "decided by " + irr.pivot;

  if (r.standard_a.verdict == Verdict::pass && r.standard_a_star.verdict == Verdict::pass && r.diameters_agree()) {
    std::vector<std::vector<std::size_t>> orders;
    if (ga.size() <= 2) {
      orders.push_back(std::vector<std::size_t>(ga.size()));
      std::iota(orders[0].begin(), orders[0].end(), 0);
    } else {
      orders = path_orderings(ga);
    }
    if (!orders.empty()) {
      for (std::size_t i : orders[0]) r.shape.push_back(rank(e[i]));
      r.sharp = r.shape.front() == 1;
    }
  }
  return r;
}

void TriDiagonalSystem::check_invariants() const {
  auto violated = [](const std::string& what) { fail(ErrorKind::InvariantViolation, what); };
  std::size_t n = A.rows();
  if (!A.is_square() || Astar.rows() != n || Astar.cols() != n) violated("A and A* square of equal size");
  if (A.field() != Astar.field()) violated("A and A* over one field");
  if (theta.size() != d + 1 || E.size() != d + 1) violated("d + 1 eigenvalues and idempotents of A");
  if (theta_star.size() != d + 1 || E_star.size() != d + 1) violated("diameter of A* equals diameter of A");
  if (rho.size() != d + 1) violated("shape has d + 1 entries");
  for (std::size_t i = 0; i <= d; ++i)
    for (std::size_t j = i + 1; j <= d; ++j) {
      if (theta[i] == theta[j]) violated("theta_i pairwise distinct");
      if (theta_star[i] == theta_star[j]) violated("theta*_i pairwise distinct");
    }
  ExactMatrix id = ExactMatrix::identity(A.field(), n);
  auto family = [&](const std::vector<ExactMatrix>& idem, const std::vector<FieldElement>& values,
                    const ExactMatrix& op, const ExactMatrix& other, const std::string& e, const std::string& th,
                    const std::string& opname, const std::string& othername) {
    ExactMatrix sum(A.field(), n, n), lin(A.field(), n, n);
    for (std::size_t i = 0; i <= d; ++i) {
      sum = sum + idem[i];
      lin = lin + values[i] * idem[i];
    }
    if (sum != id) violated("sum of " + e + "_i = I");
    if (lin != op) violated(opname + " = sum " + th + "_i " + e + "_i");
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = 0; j <= d; ++j) {
        ExactMatrix p = idem[i] * idem[j];
        if (i == j ? p != idem[i] : !p.is_zero()) violated(e + "_i " + e + "_j = delta_ij " + e + "_i");
        if ((i > j + 1 || j > i + 1) && !(idem[i] * other * idem[j]).is_zero())
          violated(e + "_i " + othername + " " + e + "_j = 0 for |i - j| > 1");
      }
  };
  family(E, theta, A, Astar, "E", "theta", "A", "A*");
  family(E_star, theta_star, Astar, A, "E*", "theta*", "A*", "A");
  for (std::size_t i = 0; i <= d; ++i) {
    if (rank(E[i]) != rho[i]) violated("rho_i = rank E_i");
    if (rank(E_star[i]) != rho[i]) violated("rank E_i = rank E*_i");
    if (rho[i] != rho[d - i]) violated("shape symmetric");
    if (i >= 1 && 2 * i <= d && rho[i - 1] > rho[i]) violated("shape unimodal");
  }
}

TriDiagonalSystem build_system(const ExactMatrix& a, const ExactMatrix& a_star, const OrderingChoice& choice) {
  auto choices = standard_orderings(a, a_star);
  if (std::find(choices.begin(), choices.end(), choice) == choices.end())
    fail(ErrorKind::InvalidArgument, "ordering " + choice.key() + " is not standard");
  TriDiagonalSystem s;
  s.d = choice.theta.size() - 1;
  s.A = a;
  s.Astar = a_star;
  s.theta = choice.theta;
  s.theta_star = choice.theta_star;
  s.E = primitive_idempotents(a, s.theta);
  s.E_star = primitive_idempotents(a_star, s.theta_star);
  for (const auto& e : s.E) s.rho.push_back(rank(e));
  s.check_invariants();
  return s;
}

TriDiagonalSystem conjugate(const TriDiagonalSystem& s, const ExactMatrix& p) {
  ExactMatrix p_inv = inverse(p);
  auto conj = [&](const ExactMatrix& x) { return p * x * p_inv; };
  TriDiagonalSystem t = s;
  t.A = conj(s.A);
  t.Astar = conj(s.Astar);
  for (auto& e : t.E) e = conj(e);
  for (auto& e : t.E_star) e = conj(e);
  return t;
}

VanishingResult triple_product_vanishing(const TriDiagonalSystem& s) {
  auto scan = [&](const std::vector<ExactMatrix>& idem, const ExactMatrix& op,
                  const char* family) -> std::optional<VanishingWitness> {
    std::vector<ExactMatrix> powers{ExactMatrix::identity(s.field(), s.dim())};
    for (std::size_t k = 1; k < s.d; ++k) powers.push_back(powers.back() * op);
    for (std::size_t i = 0; i <= s.d; ++i)
      for (std::size_t j = 0; j <= s.d; ++j) {
        std::size_t gap = i > j ? i - j : j - i;
        for (std::size_t k = 0; k < gap; ++k)
          if (!(idem[i] * powers[k] * idem[j]).is_zero()) return VanishingWitness{i, j, k, family};
      }
    return std::nullopt;
  };
  VanishingResult r;
  r.witness = scan(s.E, s.Astar, "E A*^k E");
  if (!r.witness) r.witness = scan(s.E_star, s.A, "E* A^k E*");
  r.holds = !r.witness;
  return r;
}

}  // namespace tdp
