#pragma once

// Seeded generators and small helpers shared by the test binaries.

#include <fewrel/fewrel.hpp>

#include <random>
#include <string>
#include <vector>

namespace fewrel::testing {

inline Word W(const std::string& text, int rank) { return parse_word(text, rank); }
inline CyclicWord C(const std::string& text, int rank) { return parse_cyclic_word(text, rank); }

inline Presentation P(int rank, std::initializer_list<const char*> relators) {
  Presentation p{rank, {}};
  for (const char* r : relators) p.relators.push_back(parse_cyclic_word(r, rank));
  return p;
}

/// Uniform letter sequence of length l (not reduced).
inline std::vector<Letter> random_letters(std::mt19937_64& rng, int n, int l) {
  std::uniform_int_distribution<int> g(1, n), s(0, 1);
  std::vector<Letter> v;
  for (int k = 0; k < l; ++k) v.emplace_back(g(rng), s(rng) ? 1 : -1);
  return v;
}

/// Reduced word of exact length l.
inline Word random_reduced(std::mt19937_64& rng, int n, int l) {
  if (l == 0) return Word(n);
  std::uniform_int_distribution<int> g(1, n), s(0, 1);
  std::vector<Letter> v;
  while (static_cast<int>(v.size()) < l) {
    Letter a(g(rng), s(rng) ? 1 : -1);
    if (!v.empty() && is_inverse_pair(v.back(), a)) continue;
    v.push_back(a);
  }
  return Word::from_reduced(std::move(v), n);
}

/// Every ordered m-tuple of cyclically reduced words of length l.
template <typename F>
void for_each_tuple(int n, int m, int l, F&& f) {
  const auto words = enumerate_cyclically_reduced(n, l);
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    Presentation p{n, {}};
    for (auto k : idx) p.relators.push_back(words[k]);
    f(p);
    int pos = m - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == words.size()) idx[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) return;
  }
}

}  // namespace fewrel::testing
