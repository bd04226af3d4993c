#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fewrel::detail {

// Maximum bipartite matching by augmenting paths (Kuhn). adj[u] lists right
// vertices in preference order; returns match_of_left (-1 when unmatched).
inline std::vector<int> bipartite_matching(const std::vector<std::vector<int>>& adj, int right_count) {
  std::vector<int> left_of(static_cast<std::size_t>(right_count), -1);
  std::vector<int> right_of(adj.size(), -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int u) {
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (seen[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = 1;
      const int owner = left_of[static_cast<std::size_t>(v)];
      if (owner < 0 || augment(owner)) {
        left_of[static_cast<std::size_t>(v)] = u;
        right_of[static_cast<std::size_t>(u)] = v;
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < adj.size(); ++u) {
    seen.assign(static_cast<std::size_t>(right_count), 0);
    augment(static_cast<int>(u));
  }
  return right_of;
}

}  // namespace fewrel::detail
