#pragma once

#include <fewrel/words.hpp>

#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace fewrel {

/// <x_1..x_rank | relators>.
struct Presentation {
  int rank = 0;
  std::vector<CyclicWord> relators;

  int relator_count() const { return static_cast<int>(relators.size()); }
  int deficiency() const { return rank - relator_count(); }

  void validate() const {
    if (rank < 1) throw std::invalid_argument("Presentation: rank must be >= 1");
    for (const auto& r : relators) {
      if (r.rank() != rank) throw std::invalid_argument("Presentation: relator rank mismatch");
    }
  }

  bool operator==(const Presentation&) const = default;
  auto operator<=>(const Presentation&) const = default;
};

inline Presentation make_presentation(int rank, std::vector<CyclicWord> relators) {
  Presentation p{rank, std::move(relators)};
  p.validate();
  return p;
}

/// Relators one per line; blank lines and '#' comments are skipped. rank < 0
/// infers the rank from the largest generator index present.
inline Presentation read_presentation(std::istream& in, int rank = -1) {
  std::vector<std::vector<Letter>> rows;
  std::string line;
  int seen = 0;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(parse_letters(line));
    seen = std::max(seen, max_generator(rows.back()));
  }
  if (rank < 0) rank = seen;
  if (seen > rank) throw std::out_of_range("read_presentation: generator index exceeds rank");
  Presentation p;
  p.rank = rank;
  for (auto& row : rows) p.relators.emplace_back(Word::from_reduced(std::move(row), rank));
  p.validate();
  return p;
}

inline Presentation parse_presentation(const std::string& text, int rank = -1) {
  std::istringstream in(text);
  return read_presentation(in, rank);
}

inline std::string to_text(const Presentation& p) {
  std::string s;
  for (const auto& r : p.relators) s += r.to_string() + "\n";
  return s;
}

/// m independent uniform cyclically reduced words of length l.
template <typename Rng>
Presentation sample_presentation(int n, int m, int l, Rng& rng) {
  Presentation p;
  p.rank = n;
  for (int i = 0; i < m; ++i) p.relators.push_back(sample_cyclically_reduced(n, l, rng));
  return p;
}

}  // namespace fewrel
