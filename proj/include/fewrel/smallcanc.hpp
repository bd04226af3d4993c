#pragma once

// Pieces and the C'(lambda) small cancellation condition.
//
// An occurrence of a word w is a segment of the cycle of some relator read in
// either direction (forward spells a subword of r, backward a subword of
// r^{-1}). A piece is a word with occurrences on two different segments. All
// segments of full length in one relator cover the same cycle and count as one
// segment, so within a single relator pieces are shorter than the relator.

#include <fewrel/detail/suffix_array.hpp>
#include <fewrel/presentation.hpp>
#include <fewrel/words.hpp>

#include <charconv>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fewrel {

/// Exact positive fraction num/den.
struct Ratio {
  std::int64_t num = 1;
  std::int64_t den = 1;

  static Ratio parse(std::string_view text) {
    const auto slash = text.find('/');
    Ratio r;
    auto parse_int = [](std::string_view t, std::int64_t& out) {
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
      if (ec != std::errc() || ptr != t.data() + t.size()) throw std::invalid_argument("Ratio: bad integer");
    };
    if (slash == std::string_view::npos) {
      parse_int(text, r.num);
      r.den = 1;
    } else {
      parse_int(text.substr(0, slash), r.num);
      parse_int(text.substr(slash + 1), r.den);
    }
    if (r.den <= 0) throw std::invalid_argument("Ratio: denominator must be positive");
    const auto g = std::gcd(r.num, r.den);
    if (g > 1) {
      r.num /= g;
      r.den /= g;
    }
    return r;
  }

  Ratio reciprocal() const {
    if (num <= 0) throw std::invalid_argument("Ratio: reciprocal of non-positive");
    return {den, num};
  }

  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
};

/// Where a piece occurs: relator index (0-based), whether it is read in the
/// inverse relator, and the start offset in the word being read.
struct PieceLocation {
  std::size_t relator = 0;
  bool inverted = false;
  std::size_t offset = 0;

  bool operator==(const PieceLocation&) const = default;
};

struct PieceWitness {
  Word subword;
  PieceLocation first;
  PieceLocation second;
};

struct PieceReport {
  std::size_t longest_piece_length = 0;
  std::optional<PieceWitness> witness;  // empty when no piece of length >= 1
};

/// Longest piece for every pair of relators (including a relator with itself).
struct PieceTable {
  std::size_t relators = 0;
  std::vector<PieceReport> cells;  // row-major, symmetric

  const PieceReport& at(std::size_t i, std::size_t j) const { return cells[i * relators + j]; }
};

/// Reads `length` letters of relator (or its inverse) from a cyclic offset.
inline Word read_cyclic(const CyclicWord& r, bool inverted, std::size_t offset, std::size_t length) {
  const auto l = r.size();
  std::vector<Letter> v;
  v.reserve(length);
  for (std::size_t k = 0; k < length; ++k) {
    if (!inverted) {
      v.push_back(r[(offset + k) % l]);
    } else {
      // position p of r^{-1} is r[l-1-p]^{-1}
      v.push_back(r[l - 1 - ((offset + k) % l)].inverse());
    }
  }
  return Word::from_reduced(std::move(v), r.rank());
}

inline PieceTable piece_table(std::span<const CyclicWord> tuple) {
  if (tuple.empty()) throw std::invalid_argument("longest_piece: empty tuple");
  const int rank = tuple.front().rank();
  for (const auto& r : tuple) {
    if (r.rank() != rank) throw std::invalid_argument("longest_piece: relators of different rank");
  }
  const std::size_t m = tuple.size();
  const int letter_symbols = 2 * rank;
  const int texts = static_cast<int>(2 * m);

  // text t = 2*i + dir holds (r_i)^{±1} twice, then a unique separator
  std::vector<int> s;
  std::vector<int> text_of, offset_of;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = tuple[i];
    const std::size_t l = r.size();
    for (int dir = 0; dir < 2; ++dir) {
      for (std::size_t k = 0; k < 2 * l; ++k) {
        const std::size_t p = k % l;
        const Letter a = dir == 0 ? r[p] : r[l - 1 - p].inverse();
        s.push_back(a.order_key() + 1);
        text_of.push_back(static_cast<int>(2 * i) + dir);
        offset_of.push_back(static_cast<int>(k));
      }
      s.push_back(letter_symbols + 1 + static_cast<int>(2 * i) + dir);
      text_of.push_back(-1);
      offset_of.push_back(-1);
    }
  }
  s.push_back(0);
  text_of.push_back(-1);
  offset_of.push_back(-1);

  const auto sa = detail::suffix_array(s, letter_symbols + texts + 1);
  const auto lcp = detail::lcp_array(s, sa);

  struct Best {
    int length = 0;
    int a = -1, b = -1;
  };
  std::vector<Best> best(m * m);
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> running(m, kInf), last(m, -1);

  for (std::size_t p = 1; p < sa.size(); ++p) {
    for (std::size_t g = 0; g < m; ++g) {
      if (last[g] >= 0) running[g] = std::min(running[g], lcp[p]);
    }
    const int pos = sa[p];
    const int t = text_of[static_cast<std::size_t>(pos)];
    if (t < 0) continue;
    const std::size_t g = static_cast<std::size_t>(t / 2);
    if (offset_of[static_cast<std::size_t>(pos)] >= static_cast<int>(tuple[g].size())) continue;
    for (std::size_t h = 0; h < m; ++h) {
      if (last[h] < 0) continue;
      const int cap = h == g ? static_cast<int>(tuple[g].size()) - 1
                             : static_cast<int>(std::min(tuple[g].size(), tuple[h].size()));
      const int len = std::min(running[h], cap);
      Best& cell = best[std::min(g, h) * m + std::max(g, h)];
      if (len > cell.length) {
        // store the lower relator's position first
        cell = g <= h ? Best{len, pos, last[h]} : Best{len, last[h], pos};
      }
    }
    last[g] = pos;
    running[g] = kInf;
  }

  auto location = [&](int pos) {
    const int t = text_of[static_cast<std::size_t>(pos)];
    return PieceLocation{static_cast<std::size_t>(t / 2), t % 2 == 1,
                         static_cast<std::size_t>(offset_of[static_cast<std::size_t>(pos)])};
  };

  PieceTable table;
  table.relators = m;
  table.cells.resize(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const Best& b = best[i * m + j];
      PieceReport rep;
      rep.longest_piece_length = static_cast<std::size_t>(b.length);
      if (b.length > 0) {
        const auto la = location(b.a), lb = location(b.b);
        rep.witness = PieceWitness{read_cyclic(tuple[la.relator], la.inverted, la.offset, rep.longest_piece_length),
                                   la, lb};
      }
      table.cells[i * m + j] = rep;
      table.cells[j * m + i] = rep;
    }
  }
  return table;
}

inline PieceReport longest_piece(std::span<const CyclicWord> tuple) {
  const auto table = piece_table(tuple);
  PieceReport out;
  for (std::size_t i = 0; i < table.relators; ++i) {
    for (std::size_t j = i; j < table.relators; ++j) {
      const auto& c = table.at(i, j);
      if (c.longest_piece_length > out.longest_piece_length) out = c;
    }
  }
  return out;
}

struct SmallCancellationResult {
  bool holds = true;
  PieceReport report;  // the first violating pair, or the longest piece overall
};

/// |w| < lambda |r| for both relators containing each piece, compared as
/// |w| * den < num * |r| in integers.
inline SmallCancellationResult check_small_cancellation(std::span<const CyclicWord> tuple, Ratio lambda) {
  if (lambda.num <= 0 || lambda.num > lambda.den) throw std::invalid_argument("check_small_cancellation: need 0 < lambda <= 1");
  const auto table = piece_table(tuple);
  SmallCancellationResult res;
  for (std::size_t i = 0; i < table.relators; ++i) {
    for (std::size_t j = i; j < table.relators; ++j) {
      const auto& c = table.at(i, j);
      const auto w = static_cast<std::int64_t>(c.longest_piece_length);
      const auto li = static_cast<std::int64_t>(tuple[i].size());
      const auto lj = static_cast<std::int64_t>(tuple[j].size());
      const bool ok = w * lambda.den < lambda.num * li && w * lambda.den < lambda.num * lj;
      if (!ok && res.holds) {
        res.holds = false;
        res.report = c;
      }
      if (res.holds && c.longest_piece_length > res.report.longest_piece_length) res.report = c;
    }
  }
  return res;
}

inline SmallCancellationResult check_small_cancellation(const Presentation& p, Ratio lambda) {
  return check_small_cancellation(std::span<const CyclicWord>(p.relators), lambda);
}

}  // namespace fewrel
