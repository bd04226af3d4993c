#pragma once

// Phi-graded group-ring matrices, the lowest-term structure of Jacobians of
// minimum-condition tuples, and truncated Neumann-series inverses.

#include <fewrel/abelian.hpp>
#include <fewrel/errors.hpp>
#include <fewrel/fox.hpp>
#include <fewrel/mincond.hpp>
#include <fewrel/presentation.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fewrel {

/// Components of a group-ring element split by the phi-value of their words.
struct GradedElement {
  std::map<std::int64_t, GroupRingElement> components;
  Slope slope;

  std::optional<std::int64_t> min_degree() const {
    if (components.empty()) return std::nullopt;
    return components.begin()->first;
  }

  GroupRingElement reassemble(int rank) const {
    GroupRingElement e(rank);
    for (const auto& [d, c] : components) e += c;
    return e;
  }
};

inline GradedElement grade(const GroupRingElement& e, const Slope& phi) {
  GradedElement g{{}, phi};
  for (const auto& [w, c] : e.terms()) {
    auto [it, fresh] = g.components.try_emplace(phi(w), e.rank());
    it->second.add_term(w, c);
  }
  return g;
}

inline std::optional<std::int64_t> min_degree(const GroupRingElement& e, const Slope& phi) {
  std::optional<std::int64_t> d;
  for (const auto& [w, c] : e.terms()) {
    const auto v = phi(w);
    if (!d || v < *d) d = v;
  }
  return d;
}

inline std::optional<std::int64_t> min_degree(const GroupRingMatrix& a, const Slope& phi) {
  std::optional<std::int64_t> d;
  for (const auto& row : a) {
    for (const auto& e : row) {
      const auto v = min_degree(e, phi);
      if (v && (!d || *v < *d)) d = v;
    }
  }
  return d;
}

/// The four local pictures at the minimum of r_i in standard form.
enum class LowestTermCase { vertex_ascending, vertex_descending, edge_forward, edge_backward };

inline const char* to_string(LowestTermCase c) {
  switch (c) {
    case LowestTermCase::vertex_ascending: return "vertex x_n x_i";
    case LowestTermCase::vertex_descending: return "vertex x_i^-1 x_n^-1";
    case LowestTermCase::edge_forward: return "edge x_i";
    case LowestTermCase::edge_backward: return "edge x_i^-1";
  }
  return "unknown";
}

struct LowestTermRow {
  std::int64_t P = 0;
  Word k;
  Rational coefficient;  // +1 or -1
  std::vector<std::optional<std::int64_t>> off_diagonal_min;  // by column; nullopt for zero entries and the diagonal
  LowestTermCase local_case = LowestTermCase::vertex_ascending;
};

struct LowestTermReport {
  std::vector<LowestTermRow> rows;
};

/// Checks the graded shape of the Jacobian of a tuple in standard minimum
/// form. Throws StructureViolation when the shape fails.
inline LowestTermReport verify_fox_lowest_terms(const Presentation& t, const Slope& phi) {
  if (!is_standard_minimum(t, phi)) throw std::invalid_argument("verify_fox_lowest_terms: tuple is not in standard minimum form");
  const auto jac = jacobian(t);
  const int n = t.rank;
  LowestTermReport rep;
  for (int i = 1; i <= t.relator_count(); ++i) {
    const auto& r = t.relators[static_cast<std::size_t>(i - 1)];
    const auto& row = jac[static_cast<std::size_t>(i - 1)];
    LowestTermRow out;
    out.P = height_profile(r, phi).minimum;
    const auto diag = grade(row[static_cast<std::size_t>(i - 1)], phi);
    const auto dmin = diag.min_degree();
    if (!dmin || *dmin != out.P) {
      throw StructureViolation("row " + std::to_string(i) + ": diagonal lowest degree differs from the height minimum");
    }
    const auto& low = diag.components.at(out.P);
    if (low.term_count() != 1) throw StructureViolation("row " + std::to_string(i) + ": diagonal has several lowest terms");
    out.k = low.terms().begin()->first;
    out.coefficient = low.terms().begin()->second;
    if (abs(out.coefficient) != 1) throw StructureViolation("row " + std::to_string(i) + ": lowest coefficient is not a unit");
    for (int j = 1; j <= n; ++j) {
      if (j == i) {
        out.off_diagonal_min.push_back(std::nullopt);
        continue;
      }
      const auto d = min_degree(row[static_cast<std::size_t>(j - 1)], phi);
      if (d && *d < out.P + 1) {
        throw StructureViolation("row " + std::to_string(i) + ", column " + std::to_string(j) + ": off-diagonal degree below P+1");
      }
      out.off_diagonal_min.push_back(d);
    }
    const auto s = lower_section(r, phi);
    const std::size_t l = r.size();
    if (s.flat_edges.size() == 1) {
      out.local_case = r[s.flat_edges[0]].sign() > 0 ? LowestTermCase::edge_forward : LowestTermCase::edge_backward;
    } else {
      const Letter in = r[(s.min_vertices[0] + l - 1) % l];
      out.local_case = in.generator() == n ? LowestTermCase::vertex_ascending : LowestTermCase::vertex_descending;
    }
    rep.rows.push_back(std::move(out));
  }
  return rep;
}

/// Row i left-multiplied by (c_i k_i)^{-1}, where c_i k_i is the lowest
/// diagonal term; the diagonal then starts with 1 in degree 0.
struct RowNormalization {
  GroupRingMatrix matrix;
  std::vector<Word> units;
  std::vector<Rational> coefficients;
};

inline RowNormalization normalize_rows(const GroupRingMatrix& a, const Slope& phi) {
  RowNormalization out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto g = grade(a[i].at(i), phi);
    if (g.components.empty()) throw HypothesisError("normalize_rows: zero diagonal entry in row " + std::to_string(i + 1));
    const auto& low = g.components.begin()->second;
    if (low.term_count() != 1) throw HypothesisError("normalize_rows: diagonal lowest component of row " + std::to_string(i + 1) + " is not a single term");
    const Word k = low.terms().begin()->first;
    const Rational c = low.terms().begin()->second;
    const Word kinv = k.inverse();
    const Rational cinv = 1 / c;
    std::vector<GroupRingElement> row;
    for (const auto& e : a[i]) row.push_back(cinv * e.left_shift(kinv));
    out.matrix.push_back(std::move(row));
    out.units.push_back(k);
    out.coefficients.push_back(c);
  }
  return out;
}

struct GradedCertificate {
  GroupRingMatrix a_prime;
  int order = 1;
  GroupRingMatrix inverse;  // C_K
  GroupRingMatrix error;    // A' C_K - I
  std::optional<std::int64_t> error_min_degree;  // nullopt when E = 0
  bool left_telescopes = false;   // A' C_K - I == -(-B)^K
  bool right_telescopes = false;  // C_K A' - I == -(-B)^K
  std::size_t inverse_terms = 0;
  std::size_t error_terms = 0;

  bool passes() const {
    return left_telescopes && right_telescopes && (!error_min_degree || *error_min_degree >= order);
  }
};

namespace detail {

inline GroupRingMatrix identity_matrix(std::size_t m, int rank) {
  GroupRingMatrix id(m, std::vector<GroupRingElement>(m, GroupRingElement(rank)));
  for (std::size_t i = 0; i < m; ++i) id[i][i] = GroupRingElement::one(rank);
  return id;
}

inline GroupRingMatrix matmul(const GroupRingMatrix& a, const GroupRingMatrix& b, int rank) {
  const std::size_t m = a.size(), k = b.size(), n = b.empty() ? 0 : b[0].size();
  GroupRingMatrix c(m, std::vector<GroupRingElement>(n, GroupRingElement(rank)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t t = 0; t < k; ++t) {
        if (a[i][t].is_zero() || b[t][j].is_zero()) continue;
        c[i][j] += a[i][t] * b[t][j];
      }
    }
  }
  return c;
}

inline std::size_t term_count(const GroupRingMatrix& a) {
  std::size_t s = 0;
  for (const auto& row : a) {
    for (const auto& e : row) s += e.term_count();
  }
  return s;
}

inline GroupRingMatrix sub(GroupRingMatrix a, const GroupRingMatrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= b[i][j];
  }
  return a;
}

}  // namespace detail

inline constexpr std::size_t kDefaultTermCap = 1'000'000;

/// C_K = sum_{k<K} (-B)^k for B = A - I, with both one-sided errors compared
/// against -(-B)^K exactly. A must already be normalized.
inline GradedCertificate truncated_neumann_inverse(const GroupRingMatrix& a, const Slope& phi, int order,
                                                   std::size_t term_cap = kDefaultTermCap) {
  if (order < 1) throw std::invalid_argument("truncated_neumann_inverse: order must be >= 1");
  const std::size_t m = a.size();
  for (const auto& row : a) {
    if (row.size() != m) throw std::invalid_argument("truncated_neumann_inverse: matrix is not square");
  }
  const int rank = phi.rank();
  const auto id = detail::identity_matrix(m, rank);
  const auto b = detail::sub(a, id);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto d = min_degree(b[i][j], phi);
      if (d && *d < 1) {
        throw HypothesisError("truncated_neumann_inverse: entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                              ") of A - I has degree " + std::to_string(*d) + " < 1");
      }
    }
  }
  GroupRingMatrix neg_b = b;
  for (auto& row : neg_b) {
    for (auto& e : row) e = -e;
  }
  GradedCertificate cert;
  cert.a_prime = a;
  cert.order = order;
  GroupRingMatrix power = id;
  GroupRingMatrix c = id;
  auto guard = [&](const GroupRingMatrix& x) {
    if (detail::term_count(x) + detail::term_count(c) > term_cap) {
      throw ResourceLimitError("truncated_neumann_inverse: more than " + std::to_string(term_cap) + " stored terms");
    }
  };
  for (int k = 1; k < order; ++k) {
    power = detail::matmul(power, neg_b, rank);
    guard(power);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) c[i][j] += power[i][j];
    }
  }
  power = detail::matmul(power, neg_b, rank);  // (-B)^K
  guard(power);
  GroupRingMatrix minus_power = power;
  for (auto& row : minus_power) {
    for (auto& e : row) e = -e;
  }
  cert.error = detail::sub(detail::matmul(a, c, rank), id);
  cert.left_telescopes = cert.error == minus_power;
  cert.right_telescopes = detail::sub(detail::matmul(c, a, rank), id) == minus_power;
  cert.error_min_degree = min_degree(cert.error, phi);
  cert.inverse_terms = detail::term_count(c);
  cert.error_terms = detail::term_count(cert.error);
  cert.inverse = std::move(c);
  return cert;
}

struct InjectivityCertificate {
  Standardized standard;
  LowestTermReport lowest_terms;
  RowNormalization normalization;
  GradedCertificate certificate;
};

/// Standardize, take the Jacobian columns of the i-role generators, normalize
/// rows and certify to order K.
inline InjectivityCertificate injectivity_certificate(const Presentation& p, const Slope& phi, int order,
                                                      std::size_t term_cap = kDefaultTermCap) {
  const auto mc = check_minimum_condition(p, phi);
  if (!mc) throw HypothesisError(std::string("injectivity_certificate: minimum condition fails (") + to_string(mc.failure().reason) + ")");
  auto st = standardize(p, phi, mc.witness());
  auto report = verify_fox_lowest_terms(st.tuple, st.phi);
  const auto jac = jacobian(st.tuple);
  const std::size_t m = st.tuple.relators.size();
  GroupRingMatrix square(m);
  for (std::size_t i = 0; i < m; ++i) square[i].assign(jac[i].begin(), jac[i].begin() + static_cast<std::ptrdiff_t>(m));
  auto norm = normalize_rows(square, st.phi);
  auto cert = truncated_neumann_inverse(norm.matrix, st.phi, order, term_cap);
  return {std::move(st), std::move(report), std::move(norm), std::move(cert)};
}

}  // namespace fewrel
