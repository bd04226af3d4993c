#pragma once

// Embedding a minimum-condition presentation into an (m+1)-generator one by
// substituting long words w_i over y_1..y_m, z.

#include <fewrel/abelian.hpp>
#include <fewrel/errors.hpp>
#include <fewrel/mincond.hpp>
#include <fewrel/presentation.hpp>
#include <fewrel/smallcanc.hpp>
#include <fewrel/words.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

namespace fewrel {

namespace detail {

inline void append_power(std::vector<Letter>& out, int generator, std::int64_t e) {
  const int sign = e < 0 ? -1 : 1;
  for (std::int64_t k = 0; k < std::llabs(e); ++k) out.emplace_back(generator, sign);
}

// blocks z^{e_0}, z^{e_1}, ... with y^{height} after each block
inline Word interleave(const std::vector<std::int64_t>& z_exponents, int y, int height, int z, int rank) {
  std::vector<Letter> out;
  for (auto e : z_exponents) {
    append_power(out, z, e);
    append_power(out, y, height);
  }
  return Word::from_reduced(std::move(out), rank);
}

}  // namespace detail

/// w_1..w_n over y_1..y_m (generators 1..m) and z (generator m+1).
inline std::vector<Word> build_w_words(int n, int m, const Slope& phi, int N) {
  if (m < 1 || m > n - 2) throw HypothesisError("build_w_words: need 1 <= m <= n-2");
  if (phi.rank() != n) throw std::invalid_argument("build_w_words: slope rank differs from n");
  for (int i = 1; i < n; ++i) {
    if (phi.at(i) < 0) throw HypothesisError("build_w_words: slope is not standard (phi(x_i) < 0 for i < n)");
  }
  if (phi.at(n) >= 0) throw HypothesisError("build_w_words: slope is not standard (phi(x_n) >= 0)");
  std::int64_t max_abs = 0;
  for (auto v : phi.values) max_abs = std::max<std::int64_t>(max_abs, std::llabs(v));
  if (N <= max_abs) throw HypothesisError("build_w_words: N must exceed max |phi(x_i)|");
  const int rank = m + 1;
  const int z = m + 1;
  std::vector<Word> w;
  for (int i = 1; i < n; ++i) {
    std::vector<std::int64_t> blocks;
    for (int k = 1; k <= N; ++k) blocks.push_back(k);
    for (int k = N; k >= 1; --k) blocks.push_back(-k);
    blocks.push_back(-phi.at(i));
    if (i <= m) {
      w.push_back(detail::interleave(blocks, i, 1, z, rank));
    } else {
      w.push_back(detail::interleave(blocks, 1, i - m + 1, z, rank));
    }
  }
  std::vector<std::int64_t> blocks{-phi.at(n)};
  for (int k = 1; k <= N - 1; ++k) blocks.push_back(k);
  for (int k = N - 1; k >= 1; --k) blocks.push_back(-k);
  w.push_back(detail::interleave(blocks, 1, n - m + 1, z, rank));
  return w;
}

/// psi: z -> -1, y_i -> 0.
inline Slope embedding_psi(int m) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(m + 1), 0);
  v.back() = -1;
  return Slope(std::move(v));
}

/// Least psi-value over the prefixes of a word (the empty prefix included).
inline std::int64_t prefix_minimum(const Word& w, const Slope& psi) {
  std::int64_t cur = 0, lo = 0;
  for (Letter a : w.letters()) {
    cur += psi(a);
    lo = std::min(lo, cur);
  }
  return lo;
}

struct EmbeddingOptions {
  bool guarantee_c16 = false;
  Ratio epsilon{1, 1};
  int n_cap = 64;
};

struct EmbeddingPlan {
  Presentation source;  // standardized
  Slope phi;            // standard
  Substitution standardization;
  int N = 0;
  int target_rank = 0;
  std::vector<Word> w;
  Slope psi;
};

struct EmbeddingReport {
  Presentation target;  // s_1..s_m
  std::vector<Word> unreduced;  // f(r_i) before cyclic reduction
  PieceReport w_pieces;
  bool w_c12 = false;
  PieceReport s_pieces;
  bool s_c16 = false;
  bool psi_minimum_condition = false;
  std::vector<std::int64_t> phi_min;
  std::vector<std::int64_t> psi_min;  // on f(r_i)
  std::vector<std::int64_t> psi_min_reduced;  // on s_i, measured from the start of f(r_i)
  std::vector<std::size_t> cancellation;  // letters removed from f(r_i) by free and cyclic reduction
  double delta = 0;
  bool length_bounds = false;  // N^2 l (1-3 delta) <= |s_i| <= N^2 l (1+2 delta)
  std::vector<int> tried;      // N values rejected before the chosen one
};

struct Embedding {
  EmbeddingPlan plan;
  EmbeddingReport report;
};

/// Smallest N >= max(2, max|phi|+1) for which the w-tuple is C'(1/12), the
/// images satisfy the psi-minimum condition with roles (y_i, z), and, when a
/// guarantee is requested, the images are C'(1/6).
inline Embedding embed_presentation(const Presentation& p, const Slope& phi, const EmbeddingOptions& opt = {}) {
  const int n = p.rank;
  const int m = p.relator_count();
  if (m < 1 || m > n - 2) throw HypothesisError("embed_presentation: need 1 <= m <= n-2");
  const auto mc = check_minimum_condition(p, phi);
  if (!mc) throw HypothesisError(std::string("embed_presentation: minimum condition fails (") + to_string(mc.failure().reason) + ")");
  auto st = standardize(p, phi, mc.witness());
  if (opt.guarantee_c16) {
    const auto& e = opt.epsilon;
    if (e.num <= 0) throw std::invalid_argument("embed_presentation: epsilon must be positive");
    // 1/(6 + P/Q) = Q/(6Q + P)
    const Ratio lambda{e.den, 6 * e.den + e.num};
    if (!check_small_cancellation(st.tuple, lambda).holds) {
      throw HypothesisError("embed_presentation: relators are not C'(" + lambda.to_string() + ")");
    }
    for (const auto& r : st.tuple.relators) {
      const auto l = static_cast<std::int64_t>(r.size());
      if (!(l * e.num > 12 * e.num + 72 * e.den)) {
        throw HypothesisError("embed_presentation: relator length " + std::to_string(l) + " is not above 12 + 72/epsilon");
      }
    }
  }
  std::int64_t max_abs = 0;
  for (auto v : st.phi.values) max_abs = std::max<std::int64_t>(max_abs, std::llabs(v));
  const int n_min = static_cast<int>(std::max<std::int64_t>(2, max_abs + 1));
  const Slope psi = embedding_psi(m);
  std::vector<int> roles;
  for (int i = 1; i <= m; ++i) roles.push_back(i);

  Embedding out;
  for (int N = n_min; N <= opt.n_cap; ++N) {
    auto w = build_w_words(n, m, st.phi, N);
    std::vector<CyclicWord> wc;
    for (const auto& x : w) wc.emplace_back(x);
    const auto wsc = check_small_cancellation(std::span<const CyclicWord>(wc), Ratio{1, 12});
    if (!wsc.holds) {
      out.report.tried.push_back(N);
      continue;
    }
    Substitution f(w, m + 1);
    Presentation target{m + 1, {}};
    std::vector<Word> unreduced;
    std::vector<std::int64_t> psi_min_reduced;
    for (const auto& r : st.tuple.relators) {
      Word fr = f(r.word());
      auto cr = cyclic_reduce(fr);
      psi_min_reduced.push_back(psi(cr.conjugator) + height_profile(cr.base, psi).minimum);
      target.relators.push_back(std::move(cr.base));
      unreduced.push_back(std::move(fr));
    }
    const bool psi_ok = is_standard_minimum(target, psi) && satisfies_with_roles(target, psi, m + 1, roles);
    if (!psi_ok) {
      out.report.tried.push_back(N);
      continue;
    }
    const auto ssc = check_small_cancellation(target, Ratio{1, 6});
    if (opt.guarantee_c16 && !ssc.holds) {
      out.report.tried.push_back(N);
      continue;
    }
    auto& rep = out.report;
    rep.w_pieces = wsc.report;
    rep.w_c12 = true;
    rep.s_pieces = ssc.report;
    rep.s_c16 = ssc.holds;
    rep.psi_minimum_condition = true;
    const double n2 = static_cast<double>(N) * N;
    for (const auto& x : w) rep.delta = std::max(rep.delta, std::abs(static_cast<double>(x.size()) - n2) / n2);
    rep.length_bounds = true;
    for (int i = 0; i < m; ++i) {
      const auto& r = st.tuple.relators[static_cast<std::size_t>(i)];
      const auto& s = target.relators[static_cast<std::size_t>(i)];
      rep.phi_min.push_back(height_profile(r, st.phi).minimum);
      rep.psi_min.push_back(prefix_minimum(unreduced[static_cast<std::size_t>(i)], psi));
      std::size_t full = 0;
      for (Letter a : r.letters()) full += w[static_cast<std::size_t>(a.generator() - 1)].size();
      rep.cancellation.push_back(full - s.size());
      const double l = static_cast<double>(r.size());
      const double len = static_cast<double>(s.size());
      if (len < n2 * l * (1 - 3 * rep.delta) || len > n2 * l * (1 + 2 * rep.delta)) rep.length_bounds = false;
    }
    rep.psi_min_reduced = std::move(psi_min_reduced);
    rep.unreduced = std::move(unreduced);
    rep.target = std::move(target);
    out.plan = EmbeddingPlan{std::move(st.tuple), std::move(st.phi), std::move(st.relabeling), N, m + 1, std::move(w), psi};
    return out;
  }
  throw ResourceLimitError("embed_presentation: no N up to " + std::to_string(opt.n_cap) + " passes every check");
}

}  // namespace fewrel
