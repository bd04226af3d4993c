#pragma once

// Free-group words: letters, freely reduced words, cyclically reduced words,
// substitution homomorphisms, enumeration and uniform sampling.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fewrel {

/// A generator x_g or its inverse. Stored as a signed code (+g or -g).
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(int generator, int sign) : code_(sign > 0 ? generator : -generator) {
    if (generator < 1 || (sign != 1 && sign != -1)) {
      throw std::invalid_argument("Letter: generator must be >= 1 and sign +-1");
    }
  }

  static constexpr Letter from_code(int code) {
    if (code == 0) throw std::invalid_argument("Letter: zero code");
    return Letter(code < 0 ? -code : code, code < 0 ? -1 : 1);
  }

  constexpr int generator() const { return code_ < 0 ? -code_ : code_; }
  constexpr int sign() const { return code_ < 0 ? -1 : 1; }
  constexpr int code() const { return code_; }
  constexpr Letter inverse() const { return from_code(-code_); }

  // x1 < X1 < x2 < X2 < ...
  constexpr int order_key() const { return 2 * (generator() - 1) + (code_ < 0 ? 1 : 0); }

  constexpr bool operator==(const Letter&) const = default;
  constexpr std::strong_ordering operator<=>(const Letter& o) const {
    return order_key() <=> o.order_key();
  }

  std::string to_string() const {
    return (code_ < 0 ? "X" : "x") + std::to_string(generator());
  }

 private:
  int code_ = 1;
};

constexpr bool is_inverse_pair(Letter a, Letter b) { return a.code() == -b.code(); }

class Word;
Word reduce(std::span<const Letter> letters, int rank);

/// Freely reduced word over x_1..x_rank.
class Word {
 public:
  Word() = default;
  explicit Word(int rank) : rank_(rank) {
    if (rank < 0) throw std::invalid_argument("Word: negative rank");
  }

  /// Wraps letters that must already be freely reduced; throws otherwise.
  static Word from_reduced(std::vector<Letter> letters, int rank) {
    Word w(rank);
    for (std::size_t k = 0; k < letters.size(); ++k) {
      if (letters[k].generator() > rank) throw std::out_of_range("Word: generator index exceeds rank");
      if (k > 0 && is_inverse_pair(letters[k - 1], letters[k])) {
        throw std::invalid_argument("Word: letters are not freely reduced");
      }
    }
    w.letters_ = std::move(letters);
    return w;
  }

  int rank() const { return rank_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::span<const Letter> letters() const { return letters_; }
  Letter operator[](std::size_t k) const { return letters_[k]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  Word inverse() const {
    Word w(rank_);
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
    return w;
  }

  /// Plain subword (no wrap-around); the result is reduced since `this` is.
  Word subword(std::size_t start, std::size_t length) const {
    if (start + length > letters_.size()) throw std::out_of_range("Word::subword");
    Word w(rank_);
    w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(start),
                      letters_.begin() + static_cast<std::ptrdiff_t>(start + length));
    return w;
  }

  /// Sum of exponents of x_g.
  long exponent_sum(int g) const {
    long s = 0;
    for (Letter a : letters_) {
      if (a.generator() == g) s += a.sign();
    }
    return s;
  }

  friend Word operator*(const Word& u, const Word& v) {
    if (u.rank_ != v.rank_) throw std::invalid_argument("Word: rank mismatch in product");
    Word w(u.rank_);
    std::size_t cancel = 0;
    while (cancel < u.size() && cancel < v.size() &&
           is_inverse_pair(u.letters_[u.size() - 1 - cancel], v.letters_[cancel])) {
      ++cancel;
    }
    w.letters_.reserve(u.size() + v.size() - 2 * cancel);
    w.letters_.insert(w.letters_.end(), u.letters_.begin(),
                      u.letters_.end() - static_cast<std::ptrdiff_t>(cancel));
    w.letters_.insert(w.letters_.end(), v.letters_.begin() + static_cast<std::ptrdiff_t>(cancel),
                      v.letters_.end());
    return w;
  }

  bool operator==(const Word& o) const { return rank_ == o.rank_ && letters_ == o.letters_; }
  friend std::ostream& operator<<(std::ostream& os, const Word& w) { return os << (w.empty() ? "1" : w.to_string()); }
  std::strong_ordering operator<=>(const Word& o) const {
    return std::lexicographical_compare_three_way(letters_.begin(), letters_.end(),
                                                  o.letters_.begin(), o.letters_.end());
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t k = 0; k < letters_.size(); ++k) {
      if (k) s += ' ';
      s += letters_[k].to_string();
    }
    return s;
  }

 private:
  friend Word reduce(std::span<const Letter>, int);
  std::vector<Letter> letters_;
  int rank_ = 0;
};

/// Free reduction by a single left-to-right stack pass.
inline Word reduce(std::span<const Letter> letters, int rank) {
  Word w(rank);
  w.letters_.reserve(letters.size());
  for (Letter a : letters) {
    if (a.generator() > rank) throw std::out_of_range("reduce: generator index exceeds rank");
    if (!w.letters_.empty() && is_inverse_pair(w.letters_.back(), a)) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(a);
    }
  }
  return w;
}

inline Word reduce(const std::vector<Letter>& letters, int rank) {
  return reduce(std::span<const Letter>(letters), rank);
}

inline bool is_cyclically_reduced(const Word& w) {
  return !w.empty() && !is_inverse_pair(w.front(), w.back());
}

/// Cyclically reduced, nonempty word with a marked basepoint (index 0).
class CyclicWord {
 public:
  explicit CyclicWord(Word w) : word_(std::move(w)) {
    if (word_.empty()) throw std::invalid_argument("CyclicWord: empty word");
    if (!is_cyclically_reduced(word_)) throw std::invalid_argument("CyclicWord: not cyclically reduced");
  }

  const Word& word() const { return word_; }
  int rank() const { return word_.rank(); }
  std::size_t size() const { return word_.size(); }
  std::span<const Letter> letters() const { return word_.letters(); }
  Letter operator[](std::size_t k) const { return word_[k]; }
  /// Letter at cyclic index k (mod length).
  Letter at(std::ptrdiff_t k) const {
    const auto l = static_cast<std::ptrdiff_t>(size());
    return word_[static_cast<std::size_t>(((k % l) + l) % l)];
  }

  CyclicWord inverse() const { return CyclicWord(word_.inverse()); }

  /// Representative starting at vertex k.
  CyclicWord rotate(std::size_t k) const {
    k %= size();
    std::vector<Letter> v(word_.letters().begin(), word_.letters().end());
    std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return CyclicWord(Word::from_reduced(std::move(v), rank()));
  }

  bool operator==(const CyclicWord&) const = default;
  friend std::ostream& operator<<(std::ostream& os, const CyclicWord& w) { return os << w.to_string(); }
  std::strong_ordering operator<=>(const CyclicWord& o) const { return word_ <=> o.word_; }

  std::string to_string() const { return word_.to_string(); }

 private:
  Word word_;
};

struct CyclicReduction {
  CyclicWord base;
  Word conjugator;
};

/// w = conjugator * base * conjugator^{-1}.
inline CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t k = 0;
  while (2 * k + 1 < w.size() && is_inverse_pair(w[k], w[w.size() - 1 - k])) ++k;
  if (w.empty() || 2 * k >= w.size()) throw std::invalid_argument("cyclic_reduce: word is trivial");
  // a nonempty reduced word cannot cancel completely, so the core is nonempty
  return {CyclicWord(w.subword(k, w.size() - 2 * k)), w.subword(0, k)};
}

/// Homomorphism x_i -> images[i-1] into the free group of rank target_rank.
class Substitution {
 public:
  Substitution() = default;
  Substitution(std::vector<Word> images, int target_rank)
      : images_(std::move(images)), target_rank_(target_rank) {
    for (const Word& w : images_) {
      if (w.rank() != target_rank_) throw std::invalid_argument("Substitution: image rank mismatch");
    }
  }

  int domain_rank() const { return static_cast<int>(images_.size()); }
  int target_rank() const { return target_rank_; }
  const std::vector<Word>& images() const { return images_; }
  const Word& image(int generator) const { return images_.at(static_cast<std::size_t>(generator - 1)); }

  Word operator()(const Word& w) const {
    if (w.rank() != domain_rank()) throw std::invalid_argument("substitute: rank mismatch");
    std::vector<Letter> out;
    for (Letter a : w.letters()) {
      const Word& img = image(a.generator());
      if (a.sign() > 0) {
        out.insert(out.end(), img.letters().begin(), img.letters().end());
      } else {
        for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it) out.push_back(it->inverse());
      }
    }
    return reduce(out, target_rank_);
  }

  /// (outer ∘ this): x_i -> outer(this(x_i)).
  Substitution then(const Substitution& outer) const {
    std::vector<Word> imgs;
    imgs.reserve(images_.size());
    for (const Word& w : images_) imgs.push_back(outer(w));
    return Substitution(std::move(imgs), outer.target_rank());
  }

  static Substitution identity(int rank) {
    std::vector<Word> imgs;
    for (int g = 1; g <= rank; ++g) imgs.push_back(Word::from_reduced({Letter(g, 1)}, rank));
    return Substitution(std::move(imgs), rank);
  }

 private:
  std::vector<Word> images_;
  int target_rank_ = 0;
};

inline Word substitute(const Substitution& s, const Word& w) { return s(w); }

// ---------------------------------------------------------------------------
// Text format: letters x3 / X3 (capital = inverse), whitespace ignored.

inline std::vector<Letter> parse_letters(std::string_view text) {
  std::vector<Letter> out;
  std::size_t k = 0;
  while (k < text.size()) {
    const char c = text[k];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++k;
      continue;
    }
    if (c != 'x' && c != 'X') {
      throw std::invalid_argument("parse: expected 'x' or 'X' at offset " + std::to_string(k));
    }
    ++k;
    if (k >= text.size() || text[k] < '1' || text[k] > '9') {
      throw std::invalid_argument("parse: expected generator index at offset " + std::to_string(k));
    }
    long g = 0;
    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
      g = g * 10 + (text[k] - '0');
      if (g > 1'000'000) throw std::invalid_argument("parse: generator index too large");
      ++k;
    }
    out.emplace_back(static_cast<int>(g), c == 'x' ? 1 : -1);
  }
  return out;
}

inline int max_generator(std::span<const Letter> letters) {
  int r = 0;
  for (Letter a : letters) r = std::max(r, a.generator());
  return r;
}

/// Parses and freely reduces. rank < 0 infers the rank from the largest index.
inline Word parse_word(std::string_view text, int rank = -1) {
  auto letters = parse_letters(text);
  if (rank < 0) rank = max_generator(letters);
  return reduce(letters, rank);
}

/// Strict: the text must already spell a cyclically reduced word.
inline CyclicWord parse_cyclic_word(std::string_view text, int rank = -1) {
  auto letters = parse_letters(text);
  if (rank < 0) rank = max_generator(letters);
  Word w = Word::from_reduced(letters, rank);
  return CyclicWord(std::move(w));
}

// ---------------------------------------------------------------------------
// Enumeration and sampling.

/// (2n-1)^l + 1 + (n-1)(1 + (-1)^l), the number of cyclically reduced words of length l.
inline std::uint64_t count_cyclically_reduced(int n, int l) {
  if (n < 1 || l < 1) throw std::invalid_argument("count_cyclically_reduced: n, l >= 1");
  std::uint64_t p = 1;
  for (int k = 0; k < l; ++k) p *= static_cast<std::uint64_t>(2 * n - 1);
  return p + 1 + static_cast<std::uint64_t>(n - 1) * (l % 2 == 0 ? 2 : 0);
}

/// Calls f(const CyclicWord&) for every cyclically reduced word of length l in
/// lexicographic order of letter sequences.
template <typename F>
void for_each_cyclically_reduced(int n, int l, F&& f) {
  if (n < 1 || l < 1) throw std::invalid_argument("enumerate_cyclically_reduced: n, l >= 1");
  std::vector<Letter> alphabet;
  for (int g = 1; g <= n; ++g) {
    alphabet.emplace_back(g, 1);
    alphabet.emplace_back(g, -1);
  }
  std::vector<int> idx(static_cast<std::size_t>(l), -1);
  std::vector<Letter> cur(static_cast<std::size_t>(l));
  std::size_t pos = 0;
  while (true) {
    int& k = idx[pos];
    ++k;
    while (k < 2 * n && pos > 0 && is_inverse_pair(cur[pos - 1], alphabet[static_cast<std::size_t>(k)])) ++k;
    if (k >= 2 * n) {
      k = -1;
      if (pos == 0) return;
      --pos;
      continue;
    }
    cur[pos] = alphabet[static_cast<std::size_t>(k)];
    if (pos + 1 == static_cast<std::size_t>(l)) {
      if (!is_inverse_pair(cur.front(), cur.back())) f(CyclicWord(Word::from_reduced(cur, n)));
    } else {
      ++pos;
    }
  }
}

inline std::vector<CyclicWord> enumerate_cyclically_reduced(int n, int l) {
  std::vector<CyclicWord> out;
  for_each_cyclically_reduced(n, l, [&](const CyclicWord& w) { out.push_back(w); });
  return out;
}

/// Uniform over cyclically reduced words of length l: rejection-sample a
/// non-backtracking walk until its ends do not cancel.
template <typename Rng>
CyclicWord sample_cyclically_reduced(int n, int l, Rng& rng) {
  if (n < 2 || l < 1) throw std::invalid_argument("sample_cyclically_reduced: need n >= 2, l >= 1");
  std::uniform_int_distribution<int> first(0, 2 * n - 1);
  std::uniform_int_distribution<int> next(0, 2 * n - 2);
  std::vector<Letter> v(static_cast<std::size_t>(l));
  auto decode = [](int k) { return Letter(k / 2 + 1, k % 2 == 0 ? 1 : -1); };
  while (true) {
    v[0] = decode(first(rng));
    for (std::size_t k = 1; k < v.size(); ++k) {
      // skip the one letter that would cancel
      const int forbidden = v[k - 1].inverse().order_key();
      int c = next(rng);
      if (c >= forbidden) ++c;
      v[k] = decode(c);
    }
    if (!is_inverse_pair(v.front(), v.back())) return CyclicWord(Word::from_reduced(v, n));
  }
}

inline CyclicWord sample_cyclically_reduced(int n, int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_cyclically_reduced(n, l, rng);
}

}  // namespace fewrel

template <>
struct std::hash<fewrel::Word> {
  std::size_t operator()(const fewrel::Word& w) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (fewrel::Letter a : w.letters()) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(a.code()));
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};
