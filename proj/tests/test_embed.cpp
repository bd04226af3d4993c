#include "support.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace fewrel;
using fewrel::testing::P;

namespace {

// Letter-by-letter builder for y/z words over rank m+1.
struct Spell {
  int rank;
  std::vector<Letter> v;
  Spell& z(int e) {
    for (int k = 0; k < std::abs(e); ++k) v.emplace_back(rank, e < 0 ? -1 : 1);
    return *this;
  }
  Spell& y(int g, int e = 1) {
    for (int k = 0; k < e; ++k) v.emplace_back(g, 1);
    return *this;
  }
  Word word() const { return reduce(v, rank); }
};

std::int64_t profile_min(const Word& w, const Slope& psi) {
  std::int64_t h = 0, lo = 0;
  for (Letter a : w.letters()) lo = std::min(lo, h += psi(a));
  return lo;
}

}  // namespace

TEST(WWords, SmallExample) {
  const Slope phi({0, 2, -1});
  const auto w = build_w_words(3, 1, phi, 3);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0], Spell{2}.z(1).y(1).z(2).y(1).z(3).y(1).z(-3).y(1).z(-2).y(1).z(-1).y(1).y(1).word());
  EXPECT_EQ(w[1], Spell{2}.z(1).y(1, 2).z(2).y(1, 2).z(3).y(1, 2).z(-3).y(1, 2).z(-2).y(1, 2).z(-1).y(1, 2).z(-2).y(1, 2).word());
  EXPECT_EQ(w[2], Spell{2}.z(1).y(1, 3).z(1).y(1, 3).z(2).y(1, 3).z(-2).y(1, 3).z(-1).y(1, 3).word());
  const Slope psi = embedding_psi(1);
  EXPECT_EQ(psi, Slope({0, -1}));
  EXPECT_EQ(psi(w[0]), 0);
  EXPECT_EQ(psi(w[1]), 2);
  EXPECT_EQ(psi(w[2]), -1);
  EXPECT_EQ(prefix_minimum(w[0], psi), -6);
  EXPECT_EQ(prefix_minimum(w[2], psi), -4);
}

TEST(WWords, RejectsBadInput) {
  EXPECT_THROW(build_w_words(3, 2, Slope({0, 0, -1}), 3), HypothesisError);
  EXPECT_THROW(build_w_words(3, 1, Slope({0, 2, -1}), 2), HypothesisError);
  EXPECT_THROW(build_w_words(3, 1, Slope({0, -2, -1}), 3), HypothesisError);
  EXPECT_THROW(build_w_words(3, 1, Slope({0, 2, 1}), 3), HypothesisError);
}

TEST(WWords, PsiValuesAndProfileMinima) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 3;
    const int m = 1 + trial % (n - 2);
    std::vector<std::int64_t> v;
    for (int k = 1; k < n; ++k) v.push_back(static_cast<std::int64_t>(rng() % 4));
    v.push_back(-1 - static_cast<std::int64_t>(rng() % 3));
    const Slope phi(v);
    std::int64_t max_abs = 0;
    for (auto x : v) max_abs = std::max<std::int64_t>(max_abs, std::llabs(x));
    const int N = static_cast<int>(max_abs) + 1 + static_cast<int>(rng() % 4);
    const auto w = build_w_words(n, m, phi, N);
    const Slope psi = embedding_psi(m);
    for (int i = 1; i <= n; ++i) {
      const Word& wi = w[static_cast<std::size_t>(i - 1)];
      EXPECT_EQ(psi(wi), phi.at(i));
      EXPECT_TRUE(is_cyclically_reduced(wi));
      if (i < n) {
        EXPECT_EQ(profile_min(wi, psi), -N * (N + 1) / 2);
        // the minimum is reached only on the y-block right after z^N
        std::int64_t h = 0;
        std::vector<std::size_t> at_min;
        for (std::size_t k = 0; k < wi.size(); ++k) {
          h += psi(wi[k]);
          if (h == -N * (N + 1) / 2) at_min.push_back(k);
        }
        const std::size_t z_before = static_cast<std::size_t>(N * (N + 1) / 2);
        const std::size_t block = static_cast<std::size_t>(i <= m ? 1 : i - m + 1);
        ASSERT_FALSE(at_min.empty());
        EXPECT_EQ(at_min.front(), z_before + (N - 1) * block - 1);
        EXPECT_EQ(at_min.size(), block + 1);
      } else {
        EXPECT_EQ(profile_min(wi, psi), phi.at(n) - N * (N - 1) / 2);
      }
    }
  }
}

TEST(WWords, LongSubwordsAreDiagnosable) {
  struct Case {
    int n, m;
    Slope phi;
  };
  for (const auto& c : {Case{3, 1, Slope({1, 2, -1})}, Case{4, 1, Slope({1, 3, 2, -2})}, Case{4, 2, Slope({2, 1, 1, -1})}}) {
    for (int N = 4; N <= 6; ++N) {
      const auto w = build_w_words(c.n, c.m, c.phi, N);
      const std::size_t len = static_cast<std::size_t>(2 * N + 3 * (c.n - c.m) + 1);
      std::map<std::vector<int>, std::set<std::pair<int, int>>> owners;
      for (int i = 0; i < c.n; ++i) {
        const CyclicWord cw(w[static_cast<std::size_t>(i)]);
        for (int dir = 0; dir < 2; ++dir) {
          const CyclicWord r = dir == 0 ? cw : cw.inverse();
          if (r.size() < len) continue;
          for (std::size_t o = 0; o < r.size(); ++o) {
            std::vector<int> key;
            for (std::size_t k = 0; k < len; ++k) key.push_back(r[(o + k) % r.size()].code());
            owners[key].insert({i, dir});
          }
        }
      }
      for (const auto& [key, who] : owners) EXPECT_EQ(who.size(), 1u) << "n=" << c.n << " m=" << c.m << " N=" << N;
    }
  }
}

TEST(WWords, PieceRatioShrinksWithN) {
  const Slope phi({1, 2, 1, -1});
  double prev = 2;
  for (int N : {4, 6, 8, 12}) {
    std::vector<CyclicWord> t;
    std::size_t shortest = SIZE_MAX;
    for (const auto& x : build_w_words(4, 2, phi, N)) {
      t.emplace_back(x);
      shortest = std::min(shortest, x.size());
    }
    const double ratio = static_cast<double>(longest_piece(t).longest_piece_length) / static_cast<double>(shortest);
    EXPECT_LT(ratio, prev) << "N=" << N;
    prev = ratio;
  }
}

TEST(Embed, EndToEndExample) {
  const auto p = P(3, {"x3 x1 X3 X1"});
  const Slope phi({0, 2, -1});
  const auto e = embed_presentation(p, phi);
  const auto& plan = e.plan;
  const auto& rep = e.report;
  EXPECT_EQ(plan.target_rank, 2);
  EXPECT_GE(plan.N, 3);
  EXPECT_EQ(plan.source, p);
  EXPECT_EQ(plan.phi, phi);
  // s_1 is the cyclic reduction of w_3 w_1 w_3^{-1} w_1^{-1}
  const auto& w = plan.w;
  const Word f = w[2] * w[0] * w[2].inverse() * w[0].inverse();
  EXPECT_EQ(rep.target.relators[0], cyclic_reduce(f).base);
  EXPECT_EQ(plan.psi(rep.target.relators[0]), 0);
  const auto mc = check_minimum_condition(rep.target, plan.psi);
  ASSERT_TRUE(mc.holds());
  EXPECT_TRUE(satisfies_with_roles(rep.target, plan.psi, 2, {1}));
  EXPECT_TRUE(check_small_cancellation(std::span<const CyclicWord>(std::vector<CyclicWord>{CyclicWord(w[0]), CyclicWord(w[1]), CyclicWord(w[2])}), Ratio{1, 12}).holds);
  // length accounting
  std::size_t full = 2 * (w[0].size() + w[2].size());
  EXPECT_EQ(rep.target.relators[0].size() + rep.cancellation[0], full);
  EXPECT_TRUE(rep.length_bounds);
  const double n2 = static_cast<double>(plan.N) * plan.N;
  EXPECT_GE(static_cast<double>(rep.target.relators[0].size()), n2 * 4 * (1 - 3 * rep.delta));
  EXPECT_LE(static_cast<double>(rep.target.relators[0].size()), n2 * 4 * (1 + 2 * rep.delta));
  // minima
  EXPECT_EQ(rep.psi_min[0], rep.phi_min[0] - plan.N * (plan.N + 1) / 2);
  EXPECT_EQ(rep.psi_min_reduced[0], rep.psi_min[0]);
  for (int N : rep.tried) EXPECT_LT(N, plan.N);
}

TEST(Embed, Rejections) {
  EXPECT_THROW(embed_presentation(P(3, {"x3 x1 X3 X1", "x3 x2 X3 X2"}), Slope({0, 0, -1})), HypothesisError);
  EXPECT_THROW(embed_presentation(P(3, {"x1 x2 X1 X2 x1 x2 X1 X2"}), Slope({1, -1, 0})), HypothesisError);
  EmbeddingOptions opt;
  opt.guarantee_c16 = true;
  EXPECT_THROW(embed_presentation(P(3, {"x3 x1 X3 X1"}), Slope({0, 2, -1}), opt), HypothesisError);
  EmbeddingOptions tight;
  tight.n_cap = 2;
  EXPECT_THROW(embed_presentation(P(3, {"x3 x1 X3 X1"}), Slope({0, 2, -1}), tight), ResourceLimitError);
}

TEST(Embed, RandomSourcesReverify) {
  std::mt19937_64 rng(72);
  int done = 0;
  for (int trial = 0; trial < 400 && done < 15; ++trial) {
    const auto t = sample_presentation(4, 1 + trial % 2, 12 + trial % 10, rng);
    const auto sw = find_minimum_condition_slope(t, 3);
    if (!sw) continue;
    const auto e = embed_presentation(t, sw->phi);
    ++done;
    const auto& plan = e.plan;
    for (int i = 1; i <= 4; ++i) EXPECT_EQ(plan.psi(plan.w[static_cast<std::size_t>(i - 1)]), plan.phi.at(i));
    EXPECT_TRUE(is_standard_minimum(e.report.target, plan.psi));
    std::vector<CyclicWord> wc;
    for (const auto& x : plan.w) wc.emplace_back(x);
    EXPECT_TRUE(check_small_cancellation(std::span<const CyclicWord>(wc), Ratio{1, 12}).holds);
    EXPECT_EQ(e.report.s_c16, check_small_cancellation(e.report.target, Ratio{1, 6}).holds);
    const Substitution f(plan.w, plan.target_rank);
    for (std::size_t i = 0; i < t.relators.size(); ++i) {
      EXPECT_EQ(e.report.target.relators[i], cyclic_reduce(f(plan.source.relators[i].word())).base);
      EXPECT_EQ(e.report.psi_min[i], e.report.phi_min[i] - plan.N * (plan.N + 1) / 2);
    }
  }
  EXPECT_GE(done, 5);
}
