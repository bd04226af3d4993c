#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace fewrel::detail {

// Suffix array by prefix doubling over cyclic shifts. `s` must end with a
// unique smallest symbol (0) so that cyclic order agrees with suffix order.
// Symbols lie in [0, alphabet).
inline std::vector<int> suffix_array(const std::vector<int>& s, int alphabet) {
  const int n = static_cast<int>(s.size());
  std::vector<int> p(static_cast<std::size_t>(n)), c(static_cast<std::size_t>(n));
  std::vector<int> cnt(static_cast<std::size_t>(std::max(alphabet, n)), 0);
  for (int x : s) ++cnt[static_cast<std::size_t>(x)];
  for (int i = 1; i < alphabet; ++i) cnt[i] += cnt[i - 1];
  for (int i = n - 1; i >= 0; --i) p[static_cast<std::size_t>(--cnt[static_cast<std::size_t>(s[i])])] = i;
  int classes = 1;
  c[p[0]] = 0;
  for (int i = 1; i < n; ++i) {
    if (s[p[i]] != s[p[i - 1]]) ++classes;
    c[p[i]] = classes - 1;
  }
  std::vector<int> pn(static_cast<std::size_t>(n)), cn(static_cast<std::size_t>(n));
  for (int h = 1; h < n && classes < n; h <<= 1) {
    for (int i = 0; i < n; ++i) {
      pn[i] = p[i] - h;
      if (pn[i] < 0) pn[i] += n;
    }
    std::fill(cnt.begin(), cnt.begin() + classes, 0);
    for (int i = 0; i < n; ++i) ++cnt[c[pn[i]]];
    for (int i = 1; i < classes; ++i) cnt[i] += cnt[i - 1];
    for (int i = n - 1; i >= 0; --i) p[--cnt[c[pn[i]]]] = pn[i];
    cn[p[0]] = 0;
    classes = 1;
    for (int i = 1; i < n; ++i) {
      const std::pair cur{c[p[i]], c[(p[i] + h) % n]};
      const std::pair prev{c[p[i - 1]], c[(p[i - 1] + h) % n]};
      if (cur != prev) ++classes;
      cn[p[i]] = classes - 1;
    }
    c.swap(cn);
  }
  return p;
}

// Kasai: lcp[i] = LCP(suffix sa[i-1], suffix sa[i]); lcp[0] = 0.
inline std::vector<int> lcp_array(const std::vector<int>& s, const std::vector<int>& sa) {
  const int n = static_cast<int>(s.size());
  std::vector<int> rank(static_cast<std::size_t>(n)), lcp(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) rank[sa[i]] = i;
  int k = 0;
  for (int i = 0; i < n; ++i) {
    if (rank[i] == 0) {
      k = 0;
      continue;
    }
    const int j = sa[rank[i] - 1];
    while (i + k < n && j + k < n && s[i + k] == s[j + k]) ++k;
    lcp[rank[i]] = k;
    if (k > 0) --k;
  }
  return lcp;
}

}  // namespace fewrel::detail
