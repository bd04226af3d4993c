#pragma once

// The rational group ring of a free group and Fox derivatives.

#include <fewrel/presentation.hpp>
#include <fewrel/words.hpp>

#include <gmpxx.h>

#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fewrel {

using Rational = mpq_class;

/// Finite formal sum of reduced words with nonzero rational coefficients.
class GroupRingElement {
 public:
  using Terms = std::map<Word, Rational>;

  explicit GroupRingElement(int rank = 0) : rank_(rank) {}

  static GroupRingElement one(int rank) { return monomial(Word(rank), Rational(1)); }
  static GroupRingElement monomial(const Word& w, const Rational& c) {
    GroupRingElement e(w.rank());
    e.add_term(w, c);
    return e;
  }

  int rank() const { return rank_; }
  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// this += c * w
  void add_term(const Word& w, const Rational& c) {
    if (w.rank() != rank_) throw std::invalid_argument("GroupRingElement: rank mismatch");
    Rational cc(c);
    cc.canonicalize();
    if (cc == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, cc);
    if (!inserted) {
      it->second += cc;
      if (it->second == 0) terms_.erase(it);
    }
  }

  GroupRingElement& operator+=(const GroupRingElement& o) {
    check_rank(o);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  GroupRingElement& operator-=(const GroupRingElement& o) {
    check_rank(o);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
  friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
  GroupRingElement operator-() const {
    GroupRingElement e = *this;
    for (auto& [w, c] : e.terms_) c = -c;
    return e;
  }
  friend GroupRingElement operator*(const Rational& s, GroupRingElement a) {
    if (s == 0) return GroupRingElement(a.rank_);
    for (auto& [w, c] : a.terms_) c *= s;
    return a;
  }

  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
    a.check_rank(b);
    std::unordered_map<Word, Rational> acc;
    acc.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [u, cu] : a.terms_) {
      for (const auto& [v, cv] : b.terms_) acc[u * v] += cu * cv;
    }
    GroupRingElement out(a.rank_);
    for (auto& [w, c] : acc) {
      if (c != 0) out.terms_.emplace(w, std::move(c));
    }
    return out;
  }

  /// Left multiplication by a group element.
  GroupRingElement left_shift(const Word& g) const {
    GroupRingElement out(rank_);
    for (const auto& [w, c] : terms_) out.terms_.emplace(g * w, c);
    return out;
  }

  bool operator==(const GroupRingElement& o) const { return rank_ == o.rank_ && terms_ == o.terms_; }
  friend std::ostream& operator<<(std::ostream& os, const GroupRingElement& e) { return os << e.to_string(); }

  /// `3/2*[x1 X2] + -1*[]`; zero prints as `0`.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [w, c] : terms_) {
      if (!first) s += " + ";
      first = false;
      s += c.get_str() + "*[" + w.to_string() + "]";
    }
    return s;
  }

 private:
  void check_rank(const GroupRingElement& o) const {
    if (o.rank_ != rank_) throw std::invalid_argument("GroupRingElement: rank mismatch");
  }

  Terms terms_;
  int rank_;
};

inline GroupRingElement ring_multiply(const GroupRingElement& a, const GroupRingElement& b) { return a * b; }

/// Parses `c*[word] + c*[word] ...`; a lone `0` is the zero element.
inline GroupRingElement parse_group_ring_element(std::string_view text, int rank) {
  GroupRingElement e(rank);
  auto trim = [](std::string_view t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    return t;
  };
  text = trim(text);
  if (text == "0") return e;
  std::size_t k = 0;
  while (k < text.size()) {
    const auto star = text.find('*', k);
    const auto open = text.find('[', k);
    const auto close = text.find(']', k);
    if (star == std::string_view::npos || open == std::string_view::npos || close == std::string_view::npos ||
        !(star < open && open < close)) {
      throw std::invalid_argument("parse_group_ring_element: expected c*[word]");
    }
    const std::string coeff(trim(text.substr(k, star - k)));
    if (!trim(text.substr(star + 1, open - star - 1)).empty()) throw std::invalid_argument("parse_group_ring_element: junk before '['");
    Rational c;
    if (c.set_str(coeff, 10) != 0) throw std::invalid_argument("parse_group_ring_element: bad coefficient '" + coeff + "'");
    c.canonicalize();
    e.add_term(parse_word(text.substr(open + 1, close - open - 1), rank), c);
    k = close + 1;
    const auto rest = trim(text.substr(k));
    if (rest.empty()) break;
    if (rest.front() != '+') throw std::invalid_argument("parse_group_ring_element: expected '+'");
    k = text.size() - rest.size() + 1;
  }
  return e;
}

/// d r / d x_j: +u for each r = u x_j v, -u x_j^{-1} for each r = u x_j^{-1} v.
inline GroupRingElement fox_derivative(const Word& r, int j) {
  if (j < 1 || j > r.rank()) throw std::out_of_range("fox_derivative: generator index out of range");
  GroupRingElement d(r.rank());
  for (std::size_t k = 0; k < r.size(); ++k) {
    const Letter a = r[k];
    if (a.generator() != j) continue;
    if (a.sign() > 0) {
      d.add_term(r.subword(0, k), Rational(1));
    } else {
      d.add_term(r.subword(0, k + 1), Rational(-1));
    }
  }
  return d;
}

inline GroupRingElement fox_derivative(const CyclicWord& r, int j) { return fox_derivative(r.word(), j); }

using GroupRingMatrix = std::vector<std::vector<GroupRingElement>>;

/// Entry (i, j) = d r_i / d x_j on the stored basepoint representatives.
inline GroupRingMatrix jacobian(const Presentation& p) {
  GroupRingMatrix a;
  for (const auto& r : p.relators) {
    std::vector<GroupRingElement> row;
    for (int j = 1; j <= p.rank; ++j) row.push_back(fox_derivative(r, j));
    a.push_back(std::move(row));
  }
  return a;
}

}  // namespace fewrel
