#pragma once

// Height profiles, lower sections, the minimum condition, standardization and
// the commutator-insertion maps.

#include <fewrel/abelian.hpp>
#include <fewrel/detail/matching.hpp>
#include <fewrel/presentation.hpp>
#include <fewrel/words.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fewrel {

struct HeightProfile {
  std::vector<std::int64_t> heights;  // heights[k] = phi(first k letters)
  std::int64_t minimum = 0;
};

inline HeightProfile height_profile(const CyclicWord& r, const Slope& phi) {
  if (phi.rank() != r.rank()) throw std::invalid_argument("height_profile: slope rank differs from relator rank");
  HeightProfile h;
  h.heights.reserve(r.size());
  std::int64_t cur = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    h.heights.push_back(cur);
    cur += phi(r[k]);
  }
  if (cur != 0) throw std::invalid_argument("height_profile: phi(r) != 0 for " + r.to_string());
  h.minimum = *std::min_element(h.heights.begin(), h.heights.end());
  return h;
}

struct LowerSection {
  std::vector<std::size_t> min_vertices;
  std::vector<std::size_t> flat_edges;  // edge k joins vertex k and k+1 (mod l)

  bool operator==(const LowerSection&) const = default;
  auto operator<=>(const LowerSection&) const = default;
};

inline LowerSection lower_section(const CyclicWord& r, const Slope& phi) {
  const auto h = height_profile(r, phi);
  const std::size_t l = r.size();
  LowerSection s;
  for (std::size_t k = 0; k < l; ++k) {
    if (h.heights[k] == h.minimum) s.min_vertices.push_back(k);
  }
  for (std::size_t k = 0; k < l; ++k) {
    if (h.heights[k] == h.minimum && h.heights[(k + 1) % l] == h.minimum && phi(r[k]) == 0) s.flat_edges.push_back(k);
  }
  return s;
}

enum class MinimumShape { vertex, edge };

inline const char* to_string(MinimumShape s) { return s == MinimumShape::vertex ? "vertex" : "edge"; }

enum class MinConditionFailure {
  multi_component,    // lower section is disconnected
  bad_shape,          // connected but more than one vertex or edge
  bad_flank_labels,   // flanking edges do not fit the pattern
  matching_infeasible,
  too_many_relators,  // m >= n
};

inline const char* to_string(MinConditionFailure f) {
  switch (f) {
    case MinConditionFailure::multi_component: return "multi_component";
    case MinConditionFailure::bad_shape: return "bad_shape";
    case MinConditionFailure::bad_flank_labels: return "bad_flank_labels";
    case MinConditionFailure::matching_infeasible: return "matching_infeasible";
    case MinConditionFailure::too_many_relators: return "too_many_relators";
  }
  return "unknown";
}

/// Minimum location in one relator and the (i-role, n-role) pairs it admits.
struct RelatorMinimum {
  MinimumShape shape = MinimumShape::vertex;
  std::size_t location = 0;  // vertex index, or edge index
  std::vector<std::pair<int, int>> admissible;
};

struct MinConditionWitness {
  int n_role = 0;
  std::vector<int> i_roles;  // generator for relator i (0-based index)
  std::vector<RelatorMinimum> minima;
  std::vector<int> signs;  // sign of phi on each generator, -1/0/+1

  bool is_identity() const {
    if (n_role != static_cast<int>(signs.size())) return false;
    for (std::size_t i = 0; i < i_roles.size(); ++i) {
      if (i_roles[i] != static_cast<int>(i) + 1) return false;
    }
    return true;
  }
};

struct MinConditionFailureInfo {
  MinConditionFailure reason = MinConditionFailure::bad_shape;
  std::optional<std::size_t> relator;
  std::string detail;
};

class MinConditionResult {
 public:
  MinConditionResult(MinConditionWitness w) : witness_(std::move(w)) {}
  MinConditionResult(MinConditionFailureInfo f) : failure_(std::move(f)) {}

  explicit operator bool() const { return witness_.has_value(); }
  bool holds() const { return witness_.has_value(); }
  const MinConditionWitness& witness() const { return witness_.value(); }
  const MinConditionFailureInfo& failure() const { return failure_.value(); }

 private:
  std::optional<MinConditionWitness> witness_;
  std::optional<MinConditionFailureInfo> failure_;
};

namespace detail {

inline int sign_of(std::int64_t v) { return (v > 0) - (v < 0); }

// Classifies one relator's lower section. Returns the failure reason instead
// when the section is not a lone vertex or a lone edge with the right flanks.
inline std::variant<RelatorMinimum, MinConditionFailure> classify_minimum(const CyclicWord& r, const Slope& phi) {
  const auto s = lower_section(r, phi);
  const std::size_t l = r.size();
  if (s.min_vertices.size() == 1) {
    const std::size_t v = s.min_vertices[0];
    const int a = r[(v + l - 1) % l].generator();
    const int b = r[v].generator();
    if (a == b) return MinConditionFailure::bad_flank_labels;
    return RelatorMinimum{MinimumShape::vertex, v, {{a, b}, {b, a}}};
  }
  if (s.min_vertices.size() == 2 && s.flat_edges.size() == 1 && l >= 3) {
    const std::size_t e = s.flat_edges[0];
    const int a = r[e].generator();
    const int b1 = r[(e + l - 1) % l].generator();
    const int b2 = r[(e + 1) % l].generator();
    if (b1 != b2 || b1 == a) return MinConditionFailure::bad_flank_labels;
    return RelatorMinimum{MinimumShape::edge, e, {{a, b1}}};
  }
  // count maximal cyclic runs of consecutive minimal vertices
  if (s.min_vertices.size() == l) return MinConditionFailure::bad_shape;
  std::vector<char> low(l, 0);
  for (auto v : s.min_vertices) low[v] = 1;
  std::size_t runs = 0;
  for (std::size_t k = 0; k < l; ++k) {
    if (low[k] && !low[(k + l - 1) % l]) ++runs;
  }
  return runs >= 2 ? MinConditionFailure::multi_component : MinConditionFailure::bad_shape;
}

}  // namespace detail

/// Searches n-role generators in ascending order; for each, a perfect matching
/// of relators to distinct i-role generators.
inline MinConditionResult check_minimum_condition(const Presentation& t, const Slope& phi) {
  if (phi.rank() != t.rank) throw std::invalid_argument("check_minimum_condition: slope rank differs from presentation rank");
  for (const auto& r : t.relators) {
    if (phi(r) != 0) throw std::invalid_argument("check_minimum_condition: phi(r) != 0 for " + r.to_string());
  }
  const std::size_t m = t.relators.size();
  if (static_cast<int>(m) >= t.rank) {
    return MinConditionFailureInfo{MinConditionFailure::too_many_relators, std::nullopt, "need fewer relators than generators"};
  }
  std::vector<RelatorMinimum> minima;
  for (std::size_t i = 0; i < m; ++i) {
    auto c = detail::classify_minimum(t.relators[i], phi);
    if (auto* f = std::get_if<MinConditionFailure>(&c)) {
      return MinConditionFailureInfo{*f, i, "relator " + std::to_string(i + 1)};
    }
    minima.push_back(std::get<RelatorMinimum>(std::move(c)));
  }
  for (int g = 1; g <= t.rank; ++g) {
    std::vector<std::vector<int>> adj(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (auto [a, b] : minima[i].admissible) {
        if (b == g && a != g) adj[i].push_back(a - 1);
      }
      std::sort(adj[i].begin(), adj[i].end());
    }
    const auto match = detail::bipartite_matching(adj, t.rank);
    if (std::all_of(match.begin(), match.end(), [](int v) { return v >= 0; })) {
      MinConditionWitness w;
      w.n_role = g;
      for (int v : match) w.i_roles.push_back(v + 1);
      w.minima = std::move(minima);
      for (auto v : phi.values) w.signs.push_back(detail::sign_of(v));
      return w;
    }
  }
  return MinConditionFailureInfo{MinConditionFailure::matching_infeasible, std::nullopt, "no n-role admits a perfect matching"};
}

/// True when the pattern holds with the given n-role and i-roles.
inline bool satisfies_with_roles(const Presentation& t, const Slope& phi, int n_role, const std::vector<int>& i_roles) {
  if (i_roles.size() != t.relators.size()) return false;
  std::set<int> used{n_role};
  for (std::size_t i = 0; i < t.relators.size(); ++i) {
    if (phi(t.relators[i]) != 0) return false;
    if (!used.insert(i_roles[i]).second) return false;
    auto c = detail::classify_minimum(t.relators[i], phi);
    const auto* rm = std::get_if<RelatorMinimum>(&c);
    if (!rm) return false;
    const std::pair want{i_roles[i], n_role};
    if (std::find(rm->admissible.begin(), rm->admissible.end(), want) == rm->admissible.end()) return false;
  }
  return true;
}

/// True when phi is in the standard sign pattern and the identity witness fits.
inline bool is_standard_minimum(const Presentation& t, const Slope& phi) {
  const int n = t.rank;
  for (int k = 1; k < n; ++k) {
    if (phi.at(k) < 0) return false;
  }
  if (phi.at(n) >= 0) return false;
  std::vector<int> roles;
  for (int i = 1; i <= t.relator_count(); ++i) roles.push_back(i);
  return satisfies_with_roles(t, phi, n, roles);
}

struct Standardized {
  Presentation tuple;
  Slope phi;
  Substitution relabeling;  // old generators -> new words (x_k or x_k^{-1})
  std::vector<int> new_index;  // old generator g -> new generator new_index[g-1]
  std::vector<bool> inverted;  // by old generator
};

inline Standardized standardize(const Presentation& t, const Slope& phi, const MinConditionWitness& w) {
  const int n = t.rank;
  const int m = t.relator_count();
  if (phi.at(w.n_role) == 0) throw std::logic_error("standardize: phi vanishes on the n-role generator");
  std::vector<int> new_index(static_cast<std::size_t>(n), 0);
  new_index[static_cast<std::size_t>(w.n_role - 1)] = n;
  for (int i = 0; i < m; ++i) new_index[static_cast<std::size_t>(w.i_roles[static_cast<std::size_t>(i)] - 1)] = i + 1;
  int next = m + 1;
  for (int g = 1; g <= n; ++g) {
    if (new_index[static_cast<std::size_t>(g - 1)] == 0) new_index[static_cast<std::size_t>(g - 1)] = next++;
  }
  std::vector<Word> images;
  std::vector<bool> inverted;
  std::vector<std::int64_t> new_phi(static_cast<std::size_t>(n), 0);
  for (int g = 1; g <= n; ++g) {
    const int k = new_index[static_cast<std::size_t>(g - 1)];
    const std::int64_t v = phi.at(g);
    const bool flip = k < n ? v < 0 : v > 0;
    inverted.push_back(flip);
    images.push_back(Word::from_reduced({Letter(k, flip ? -1 : 1)}, n));
    new_phi[static_cast<std::size_t>(k - 1)] = flip ? -v : v;
  }
  Substitution sub(std::move(images), n);
  Presentation out{n, {}};
  for (const auto& r : t.relators) out.relators.emplace_back(sub(r.word()));
  Standardized s{std::move(out), Slope(std::move(new_phi)), std::move(sub), std::move(new_index), std::move(inverted)};
  if (!is_standard_minimum(s.tuple, s.phi)) throw std::logic_error("standardize: output is not in standard minimum form");
  return s;
}

namespace detail {

// r[0..v) + c + r[v..), or nothing when the result is not cyclically reduced.
inline std::optional<CyclicWord> insert_at_vertex(const CyclicWord& r, std::size_t v, const std::vector<Letter>& c) {
  std::vector<Letter> out(r.letters().begin(), r.letters().begin() + static_cast<std::ptrdiff_t>(v));
  out.insert(out.end(), c.begin(), c.end());
  out.insert(out.end(), r.letters().begin() + static_cast<std::ptrdiff_t>(v), r.letters().end());
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    if (is_inverse_pair(out[k], out[k + 1])) return std::nullopt;
  }
  if (is_inverse_pair(out.front(), out.back())) return std::nullopt;
  return CyclicWord(Word::from_reduced(std::move(out), r.rank()));
}

inline std::optional<CyclicWord> remove_range(const CyclicWord& r, std::size_t start, std::size_t count) {
  if (start + count > r.size() || count >= r.size()) return std::nullopt;
  std::vector<Letter> out(r.letters().begin(), r.letters().begin() + static_cast<std::ptrdiff_t>(start));
  out.insert(out.end(), r.letters().begin() + static_cast<std::ptrdiff_t>(start + count), r.letters().end());
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    if (is_inverse_pair(out[k], out[k + 1])) return std::nullopt;
  }
  if (is_inverse_pair(out.front(), out.back())) return std::nullopt;
  return CyclicWord(Word::from_reduced(std::move(out), r.rank()));
}

inline std::size_t first_minimal_vertex(const CyclicWord& r, const Slope& phi) {
  const auto h = height_profile(r, phi);
  return static_cast<std::size_t>(std::find(h.heights.begin(), h.heights.end(), h.minimum) - h.heights.begin());
}

}  // namespace detail

struct TauResult {
  Presentation tuple;
  Slope phi;
  int j = 0;                               // first generator with phi != 0
  std::vector<std::size_t> insertion_vertex;  // per relator
  std::vector<int> epsilon;                // per relator
};

/// Inserts x_j x_{i'}^e x_j^{-1} x_{i'}^{-e} at the first minimal vertex of
/// each relator r_i, where i' = i for i < j and i + 1 otherwise.
inline TauResult tau_deficiency_one(const Presentation& t) {
  const int n = t.rank;
  if (t.relator_count() != n - 1) throw std::invalid_argument("tau_deficiency_one: need n-1 relators");
  const auto basis = slope_basis(t);
  if (basis.size() != 1) throw std::domain_error("tau_deficiency_one: first Betti number is " + std::to_string(basis.size()) + ", not 1");
  TauResult res{Presentation{n, {}}, basis[0], 0, {}, {}};
  const Slope& phi = res.phi;
  for (int g = 1; g <= n; ++g) {
    if (phi.at(g) != 0) {
      res.j = g;
      break;
    }
  }
  const int j = res.j;
  for (int i = 1; i <= t.relator_count(); ++i) {
    const auto& r = t.relators[static_cast<std::size_t>(i - 1)];
    const int ip = i < j ? i : i + 1;
    const std::size_t v = detail::first_minimal_vertex(r, phi);
    auto build = [&](int eps) {
      return detail::insert_at_vertex(r, v, {Letter(j, 1), Letter(ip, eps), Letter(j, -1), Letter(ip, -eps)});
    };
    const std::int64_t pv = phi.at(ip);
    int eps = pv > 0 ? -1 : 1;
    auto out = build(eps);
    if (!out && pv == 0) {
      eps = -1;
      out = build(eps);
    }
    if (!out) throw std::logic_error("tau_deficiency_one: insertion produced a non-reduced word");
    res.tuple.relators.push_back(std::move(*out));
    res.insertion_vertex.push_back(v);
    res.epsilon.push_back(eps);
  }
  return res;
}

/// Recovers t from tau_deficiency_one(t), or nothing when t' is not an image.
inline std::optional<Presentation> tau_inverse(const Presentation& tp) {
  const int n = tp.rank;
  if (tp.relator_count() != n - 1 || n < 2) return std::nullopt;
  const auto basis = slope_basis(tp);
  if (basis.size() != 1) return std::nullopt;
  const Slope& phi = basis[0];
  Presentation cand{n, {}};
  for (const auto& r : tp.relators) {
    if (r.size() < 5) return std::nullopt;
    const auto s = lower_section(r, phi);
    std::optional<CyclicWord> back;
    if (s.min_vertices.size() == 1 && s.flat_edges.empty()) {
      const std::size_t p = s.min_vertices[0];
      if (p >= 2) back = detail::remove_range(r, p - 2, 4);
    } else if (s.min_vertices.size() == 2 && s.flat_edges.size() == 1) {
      const std::size_t e = s.flat_edges[0];
      if (e >= 1) back = detail::remove_range(r, e - 1, 4);
    }
    if (!back) return std::nullopt;
    cand.relators.push_back(std::move(*back));
  }
  try {
    if (tau_deficiency_one(cand).tuple == tp) return cand;
  } catch (const std::domain_error&) {
  }
  return std::nullopt;
}

/// A valid slope: nonzero on every generator and zero on every relator.
inline bool is_valid_slope(const Presentation& t, const Slope& phi) {
  if (phi.rank() != t.rank || !phi.all_nonzero()) return false;
  return std::all_of(t.relators.begin(), t.relators.end(), [&](const CyclicWord& r) { return phi(r) == 0; });
}

/// Inserts x_n^{-s_n} x_i^{-s_i} x_n^{s_n} x_i^{s_i} (s_k = sign phi(x_k)) at
/// the first minimal vertex of each relator r_i.
inline Presentation tau_slope(const Presentation& t, const Slope& phi) {
  if (!is_valid_slope(t, phi)) throw std::invalid_argument("tau_slope: slope is not valid for this tuple");
  const int n = t.rank;
  if (t.relator_count() >= n) throw std::invalid_argument("tau_slope: need fewer relators than generators");
  const int sn = detail::sign_of(phi.at(n));
  Presentation out{n, {}};
  for (int i = 1; i <= t.relator_count(); ++i) {
    const auto& r = t.relators[static_cast<std::size_t>(i - 1)];
    const int si = detail::sign_of(phi.at(i));
    const std::size_t v = detail::first_minimal_vertex(r, phi);
    auto w = detail::insert_at_vertex(r, v, {Letter(n, -sn), Letter(i, -si), Letter(n, sn), Letter(i, si)});
    if (!w) throw std::logic_error("tau_slope: insertion produced a non-reduced word");
    out.relators.push_back(std::move(*w));
  }
  return out;
}

/// Removes the commutator around the unique minimal vertex, checking that
/// tau_slope maps the result back to t'.
inline std::optional<Presentation> tau_slope_inverse(const Presentation& tp, const Slope& phi) {
  if (!is_valid_slope(tp, phi) || tp.relator_count() >= tp.rank) return std::nullopt;
  Presentation cand{tp.rank, {}};
  for (const auto& r : tp.relators) {
    if (r.size() < 5) return std::nullopt;
    const auto s = lower_section(r, phi);
    if (s.min_vertices.size() != 1) return std::nullopt;
    const std::size_t p = s.min_vertices[0];
    if (p < 2) return std::nullopt;
    auto back = detail::remove_range(r, p - 2, 4);
    if (!back) return std::nullopt;
    cand.relators.push_back(std::move(*back));
  }
  if (tau_slope(cand, phi) == tp) return cand;
  return std::nullopt;
}

/// First kernel slope in the box (primitive vectors only, lexicographic
/// order) for which the minimum condition holds.
struct SlopeWitness {
  Slope phi;
  MinConditionWitness witness;
};

inline std::optional<SlopeWitness> find_minimum_condition_slope(const Presentation& t, std::int64_t box) {
  if (t.relator_count() >= t.rank) return std::nullopt;
  for (const auto& phi : enumerate_kernel_slopes(t, box, false)) {
    std::int64_t g = 0;
    for (auto v : phi.values) g = std::gcd(g, v < 0 ? -v : v);
    if (g != 1) continue;
    auto res = check_minimum_condition(t, phi);
    if (res) return SlopeWitness{phi, res.witness()};
  }
  return std::nullopt;
}

/// Classes of slopes that induce the same lower section on every relator,
/// with the first slope of each class as representative.
struct SlopeClasses {
  std::size_t count = 0;
  std::vector<Slope> representatives;
};

inline SlopeClasses count_slope_classes(const Presentation& p, const std::vector<Slope>& slopes) {
  std::set<std::vector<LowerSection>> seen;
  SlopeClasses out;
  for (const auto& phi : slopes) {
    std::vector<LowerSection> key;
    for (const auto& r : p.relators) {
      if (phi(r) != 0) throw std::invalid_argument("count_slope_classes: slope " + phi.to_string() + " does not annihilate " + r.to_string());
      key.push_back(lower_section(r, phi));
    }
    if (seen.insert(std::move(key)).second) out.representatives.push_back(phi);
  }
  out.count = out.representatives.size();
  return out;
}

}  // namespace fewrel
