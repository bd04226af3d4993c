#include "support.hpp"

#include <gtest/gtest.h>

#include <gmpxx.h>

#include <set>

using namespace fewrel;
using fewrel::testing::P;

namespace {

// Rank over Q by fraction-exact Gaussian elimination.
int rational_rank(const IntMatrix& a) {
  if (a.empty()) return 0;
  std::vector<std::vector<mpq_class>> m;
  for (const auto& row : a) {
    std::vector<mpq_class> r;
    for (auto v : row) r.emplace_back(static_cast<long>(v));
    m.push_back(r);
  }
  int rank = 0;
  const std::size_t cols = m.front().size();
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[static_cast<std::size_t>(rank)]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == static_cast<std::size_t>(rank) || m[i][c] == 0) continue;
      const mpq_class f = m[i][c] / m[static_cast<std::size_t>(rank)][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[static_cast<std::size_t>(rank)][j];
    }
    ++rank;
  }
  return rank;
}

// Every vector of the box, kept when it annihilates each row.
std::vector<Slope> brute_kernel_box(const Presentation& p, std::int64_t box, bool all_nonzero) {
  const auto a = abelianization_matrix(p);
  std::vector<Slope> out;
  std::vector<std::int64_t> v(static_cast<std::size_t>(p.rank), -box);
  while (true) {
    bool ok = std::any_of(v.begin(), v.end(), [](auto x) { return x != 0; });
    if (all_nonzero) ok = ok && std::all_of(v.begin(), v.end(), [](auto x) { return x != 0; });
    for (const auto& row : a) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < v.size(); ++j) s += row[j] * v[j];
      ok = ok && s == 0;
    }
    if (ok) out.emplace_back(v);
    int pos = p.rank - 1;
    while (pos >= 0 && ++v[static_cast<std::size_t>(pos)] > box) v[static_cast<std::size_t>(pos--)] = -box;
    if (pos < 0) break;
  }
  return out;  // already lexicographic
}

Presentation random_presentation(std::mt19937_64& rng, int n, int m, int l) { return sample_presentation(n, m, l, rng); }

}  // namespace

TEST(Abelianization, Examples) {
  EXPECT_EQ(abelianization_matrix(P(2, {"x1 x2 X1 X2"})), (IntMatrix{{0, 0}}));
  EXPECT_EQ(abelianization_matrix(P(2, {"x1 x2 x1 X2"})), (IntMatrix{{2, 0}}));
  EXPECT_EQ(abelianization_matrix(P(2, {"x1 x2 x2 X1 X2 x1 x1 X2"})), (IntMatrix{{2, 0}}));
}

TEST(Abelianization, RowsMatchLetterCounts) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_presentation(rng, 3, 2, 1 + trial % 15);
    const auto a = abelianization_matrix(p);
    for (std::size_t i = 0; i < p.relators.size(); ++i) {
      std::vector<std::int64_t> count(3, 0);
      for (Letter x : p.relators[i].letters()) count[static_cast<std::size_t>(x.generator() - 1)] += x.sign();
      EXPECT_EQ(a[i], count);
    }
  }
}

TEST(FirstBetti, Examples) {
  EXPECT_EQ(first_betti_number(P(2, {"x1 x2 X1 X2"})), 2);
  EXPECT_EQ(first_betti_number(P(2, {"x1 x2 x1 X2"})), 1);
  EXPECT_EQ(first_betti_number(P(2, {"x1 x1", "x2 x2"})), 0);
  EXPECT_EQ(first_betti_number(Presentation{3, {}}), 3);
}

TEST(FirstBetti, MatchesRationalRank) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 3;
    const int m = 1 + trial % 4;
    const auto p = random_presentation(rng, n, m, 1 + trial % 9);
    EXPECT_EQ(first_betti_number(p), n - rational_rank(abelianization_matrix(p)));
  }
}

TEST(SmithNormalForm, InvariantFactorsDivideAndMultiply) {
  EXPECT_EQ(smith_invariant_factors({{2, 0}, {0, 2}}), (std::vector<std::int64_t>{2, 2}));
  EXPECT_EQ(smith_invariant_factors({{2, 4}, {6, 8}}), (std::vector<std::int64_t>{2, 4}));
  EXPECT_EQ(smith_invariant_factors({{0, 0}}), (std::vector<std::int64_t>{}));
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<int> d(-6, 6);
  for (int trial = 0; trial < 300; ++trial) {
    IntMatrix a(2, std::vector<std::int64_t>(2));
    for (auto& row : a)
      for (auto& v : row) v = d(rng);
    const auto f = smith_invariant_factors(a);
    EXPECT_EQ(static_cast<int>(f.size()), rational_rank(a));
    for (std::size_t k = 0; k + 1 < f.size(); ++k) EXPECT_EQ(f[k + 1] % f[k], 0);
    // the product of the factors of a square matrix is |det|
    if (f.size() == 2) EXPECT_EQ(f[0] * f[1], std::llabs(a[0][0] * a[1][1] - a[0][1] * a[1][0]));
  }
  for (int trial = 0; trial < 2000; ++trial) {
    IntMatrix a(3, std::vector<std::int64_t>(4));
    for (auto& row : a)
      for (auto& v : row) v = d(rng) / 2;
    const auto f = smith_invariant_factors(a);
    EXPECT_EQ(static_cast<int>(f.size()), rational_rank(a));
    for (std::size_t k = 0; k + 1 < f.size(); ++k) EXPECT_EQ(f[k + 1] % f[k], 0);
  }
}

TEST(SlopeBasis, Examples) {
  EXPECT_EQ(slope_basis(P(2, {"x1 x2"})), (std::vector<Slope>{Slope({-1, 1})}));
  EXPECT_EQ(slope_basis(P(2, {"x1 x2 x1 X2"})), (std::vector<Slope>{Slope({0, -1})}));
  EXPECT_EQ(slope_basis(P(2, {"x1 x2 X1 X2"})), (std::vector<Slope>{Slope({-1, 0}), Slope({0, -1})}));
  EXPECT_TRUE(slope_basis(P(2, {"x1 x1", "x2 x2"})).empty());
}

TEST(SlopeBasis, AnnihilatesRelatorsAndSpansTheBox) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + trial % 2;
    const auto p = random_presentation(rng, n, 1 + trial % 2, 2 + trial % 7);
    const auto basis = slope_basis(p);
    EXPECT_EQ(static_cast<int>(basis.size()), first_betti_number(p));
    for (const auto& b : basis) {
      auto first = std::find_if(b.values.begin(), b.values.end(), [](auto v) { return v != 0; });
      ASSERT_NE(first, b.values.end());
      EXPECT_LT(*first, 0);
      for (const auto& r : p.relators) EXPECT_EQ(b(r), 0);
    }
    EXPECT_EQ(enumerate_kernel_slopes(p, 3, false), brute_kernel_box(p, 3, false)) << to_text(p);
  }
}

TEST(ValidSlopes, Examples) {
  EXPECT_EQ(enumerate_valid_slopes(P(2, {"x1 x2"}), 2),
            (std::vector<Slope>{Slope({-2, 2}), Slope({-1, 1}), Slope({1, -1}), Slope({2, -2})}));
  EXPECT_TRUE(enumerate_valid_slopes(P(2, {"x1 x2 x1 X2"}), 5).empty());
  EXPECT_EQ(enumerate_valid_slopes(P(2, {"x1 x2 X1 X2"}), 1),
            (std::vector<Slope>{Slope({-1, -1}), Slope({-1, 1}), Slope({1, -1}), Slope({1, 1})}));
  EXPECT_THROW(enumerate_valid_slopes(P(2, {"x1 x2"}), 0), std::invalid_argument);
}

TEST(ValidSlopes, MatchBruteForceAndCloseUnderNegation) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 150; ++trial) {
    const auto p = random_presentation(rng, 3, 1, 2 + trial % 10);
    const auto v = enumerate_valid_slopes(p, 4);
    EXPECT_EQ(v, brute_kernel_box(p, 4, true));
    const std::set<Slope> s(v.begin(), v.end());
    for (const auto& phi : v) EXPECT_TRUE(s.count(-phi));
  }
}

TEST(SlopeClasses, Examples) {
  const Slope phi({1, -1});
  EXPECT_EQ(count_slope_classes(P(2, {"x1 x2"}), {phi, phi.scaled(2)}).count, 1u);
  EXPECT_EQ(count_slope_classes(P(2, {"x1 x2"}), {Slope({1, -1}), Slope({-1, 1})}).count, 2u);
  EXPECT_EQ(count_slope_classes(P(2, {"x1 x2 X1 X2"}), {Slope({1, -1}), Slope({1, 1})}).count, 2u);
  EXPECT_THROW(count_slope_classes(P(2, {"x1 x2"}), {Slope({1, 1})}), std::invalid_argument);
}

TEST(SlopeClasses, InvariantUnderPositiveScaling) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_presentation(rng, 3, 1, 6 + trial % 20);
    auto slopes = enumerate_valid_slopes(p, 3);
    if (slopes.empty()) continue;
    const auto base = count_slope_classes(p, slopes).count;
    for (std::size_t k = 0; k < slopes.size(); k += 2) slopes[k] = slopes[k].scaled(1 + static_cast<std::int64_t>(k % 3) + 1);
    EXPECT_EQ(count_slope_classes(p, slopes).count, base);
  }
}

TEST(FirstBetti, GenericValueMoreFrequentForLongerRelators) {
  // n = 2, m = 2: b1 = 0 unless the exponent-sum matrix is singular
  std::mt19937_64 rng(37);
  double prev = -1;
  for (int l : {4, 8, 16}) {
    int hits = 0;
    const int trials = 4000;
    for (int k = 0; k < trials; ++k) hits += first_betti_number(random_presentation(rng, 2, 2, l)) == 0;
    const double f = static_cast<double>(hits) / trials;
    EXPECT_GT(f, prev) << "l = " << l;
    prev = f;
  }
}
