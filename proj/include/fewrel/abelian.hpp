#pragma once

// Integer linear algebra over the abelianization: exponent-sum matrices,
// Smith normal form, the lattice of slopes annihilating every relator.

#include <fewrel/presentation.hpp>
#include <fewrel/words.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fewrel {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in lattice computation");
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in lattice computation");
  return r;
}

// Extended gcd: returns (g, x, y) with a x + b y = g >= 0.
inline std::array<std::int64_t, 3> ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

// rows a, b <- (x a + y b, -(b0/g) a + (a0/g) b) for pivot entries a0, b0
inline void combine(std::vector<std::int64_t>& a, std::vector<std::int64_t>& b, std::int64_t a0, std::int64_t b0) {
  if (b0 % a0 == 0) {
    // plain elimination leaves row a untouched
    const std::int64_t q = b0 / a0;
    for (std::size_t k = 0; k < a.size(); ++k) b[k] = checked_add(b[k], checked_mul(-q, a[k]));
    return;
  }
  const auto [g, x, y] = ext_gcd(a0, b0);
  const std::int64_t u = a0 / g, v = b0 / g;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::int64_t na = checked_add(checked_mul(x, a[k]), checked_mul(y, b[k]));
    const std::int64_t nb = checked_add(checked_mul(-v, a[k]), checked_mul(u, b[k]));
    a[k] = na;
    b[k] = nb;
  }
}

}  // namespace detail

/// A homomorphism F_n -> Z, stored as the images of the generators.
struct Slope {
  std::vector<std::int64_t> values;

  Slope() = default;
  explicit Slope(std::vector<std::int64_t> v) : values(std::move(v)) {}

  int rank() const { return static_cast<int>(values.size()); }
  std::int64_t operator()(Letter a) const {
    return a.sign() * values.at(static_cast<std::size_t>(a.generator() - 1));
  }
  std::int64_t operator()(const Word& w) const {
    std::int64_t s = 0;
    for (Letter a : w.letters()) s += (*this)(a);
    return s;
  }
  std::int64_t operator()(const CyclicWord& w) const { return (*this)(w.word()); }
  std::int64_t at(int generator) const { return values.at(static_cast<std::size_t>(generator - 1)); }

  bool is_zero() const {
    return std::all_of(values.begin(), values.end(), [](auto v) { return v == 0; });
  }
  /// Nonzero on every generator.
  bool all_nonzero() const {
    return std::none_of(values.begin(), values.end(), [](auto v) { return v == 0; });
  }
  Slope operator-() const {
    Slope s = *this;
    for (auto& v : s.values) v = -v;
    return s;
  }
  Slope scaled(std::int64_t c) const {
    Slope s = *this;
    for (auto& v : s.values) v *= c;
    return s;
  }

  static Slope parse(const std::string& text) {
    Slope s;
    std::size_t k = 0;
    while (k <= text.size()) {
      const auto comma = text.find(',', k);
      const auto part = text.substr(k, comma == std::string::npos ? std::string::npos : comma - k);
      std::size_t used = 0;
      s.values.push_back(std::stoll(part, &used));
      if (part.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("Slope: bad entry '" + part + "'");
      if (comma == std::string::npos) break;
      k = comma + 1;
    }
    return s;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (k) s += ',';
      s += std::to_string(values[k]);
    }
    return s;
  }

  bool operator==(const Slope&) const = default;
  friend std::ostream& operator<<(std::ostream& os, const Slope& s) { return os << '(' << s.to_string() << ')'; }
  auto operator<=>(const Slope&) const = default;
};

/// Row i = exponent sums of r_i.
inline IntMatrix abelianization_matrix(const Presentation& p) {
  IntMatrix a;
  for (const auto& r : p.relators) {
    std::vector<std::int64_t> row(static_cast<std::size_t>(p.rank), 0);
    for (Letter x : r.letters()) row[static_cast<std::size_t>(x.generator() - 1)] += x.sign();
    a.push_back(std::move(row));
  }
  return a;
}

/// Nonzero invariant factors d_1 | d_2 | ... of the Smith normal form.
inline std::vector<std::int64_t> smith_invariant_factors(IntMatrix a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<std::int64_t> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // smallest nonzero entry in the trailing block becomes the pivot
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        if (a[i][j] != 0 && (pr == rows || std::llabs(a[i][j]) < std::llabs(a[pr][pc]))) {
          pr = i;
          pc = j;
        }
      }
    }
    if (pr == rows) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] != 0) {
          detail::combine(a[t], a[i], a[t][t], a[i][t]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] != 0) {
          std::vector<std::int64_t> ct(rows), cj(rows);
          for (std::size_t i = 0; i < rows; ++i) {
            ct[i] = a[i][t];
            cj[i] = a[i][j];
          }
          detail::combine(ct, cj, a[t][t], a[t][j]);
          for (std::size_t i = 0; i < rows; ++i) {
            a[i][t] = ct[i];
            a[i][j] = cj[i];
          }
          clean = false;
        }
      }
      if (clean) {
        // divisibility: fold a non-divisible entry into the pivot row
        for (std::size_t i = t + 1; i < rows && clean; ++i) {
          for (std::size_t j = t + 1; j < cols; ++j) {
            if (a[i][j] % a[t][t] != 0) {
              for (std::size_t k = 0; k < cols; ++k) a[t][k] = detail::checked_add(a[t][k], a[i][k]);
              clean = false;
              break;
            }
          }
        }
      }
    }
    diag.push_back(std::llabs(a[t][t]));
    ++t;
  }
  return diag;
}

inline int matrix_rank(const IntMatrix& a) { return static_cast<int>(smith_invariant_factors(a).size()); }

/// n - rank of the exponent-sum matrix.
inline int first_betti_number(const Presentation& p) {
  return p.rank - matrix_rank(abelianization_matrix(p));
}

/// Row Hermite normal form of a full-row-rank matrix: echelon, positive
/// pivots, entries above each pivot reduced into [0, pivot).
inline IntMatrix hermite_normal_form(IntMatrix rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = rows.size();
    for (std::size_t i = r; i < rows.size(); ++i) {
      if (rows[i][c] != 0) {
        if (piv == rows.size()) {
          piv = i;
        } else {
          detail::combine(rows[piv], rows[i], rows[piv][c], rows[i][c]);
        }
      }
    }
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    if (rows[r][c] < 0) {
      for (auto& v : rows[r]) v = -v;
    }
    for (std::size_t i = 0; i < r; ++i) {
      // floor division keeps the remainder in [0, pivot)
      std::int64_t q = rows[i][c] / rows[r][c];
      if (rows[i][c] - q * rows[r][c] < 0) --q;
      if (q != 0) {
        for (std::size_t k = 0; k < cols; ++k) rows[i][k] = detail::checked_add(rows[i][k], detail::checked_mul(-q, rows[r][k]));
      }
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

namespace detail {

// Integer kernel {v : a v = 0} as the rows of an unnormalized basis.
inline IntMatrix integer_kernel(const IntMatrix& a, std::size_t n) {
  // column operations on a, mirrored on the identity
  IntMatrix at(n, std::vector<std::int64_t>(a.size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) at[j][i] = a[i][j];
  }
  IntMatrix u(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t j = 0; j < n; ++j) u[j][j] = 1;
  // rows of [at | u] are (column j of a, e_j); row-reduce on the first block
  IntMatrix aug(n);
  for (std::size_t j = 0; j < n; ++j) {
    aug[j] = at[j];
    aug[j].insert(aug[j].end(), u[j].begin(), u[j].end());
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.size() && r < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = r; i < n; ++i) {
      if (aug[i][c] != 0) {
        if (piv == n) {
          piv = i;
        } else {
          combine(aug[piv], aug[i], aug[piv][c], aug[i][c]);
        }
      }
    }
    if (piv == n) continue;
    std::swap(aug[r], aug[piv]);
    ++r;
  }
  IntMatrix ker;
  for (std::size_t i = r; i < n; ++i) {
    ker.emplace_back(aug[i].begin() + static_cast<std::ptrdiff_t>(a.size()), aug[i].end());
  }
  return ker;
}

}  // namespace detail

/// Basis of {phi : phi(r_i) = 0 for all i} in Hermite form, each vector then
/// negated so that its first nonzero entry is negative.
inline std::vector<Slope> slope_basis(const Presentation& p) {
  const auto a = abelianization_matrix(p);
  IntMatrix ker = detail::integer_kernel(a, static_cast<std::size_t>(p.rank));
  if (a.empty()) {
    ker.assign(static_cast<std::size_t>(p.rank), std::vector<std::int64_t>(static_cast<std::size_t>(p.rank), 0));
    for (std::size_t j = 0; j < ker.size(); ++j) ker[j][j] = 1;
  }
  const auto hnf = hermite_normal_form(ker);
  std::vector<Slope> out;
  for (const auto& row : hnf) out.push_back(-Slope(row));
  return out;
}

/// Every nonzero kernel vector with max-norm <= box, in lexicographic order.
/// With `all_nonzero` only valid slopes (no generator mapped to 0) are kept.
inline std::vector<Slope> enumerate_kernel_slopes(const Presentation& p, std::int64_t box, bool all_nonzero) {
  if (box < 1) throw std::invalid_argument("enumerate_valid_slopes: box must be >= 1");
  std::vector<Slope> basis = slope_basis(p);
  // back to positive pivots for the search
  IntMatrix rows;
  for (const auto& b : basis) rows.push_back((-b).values);
  const std::size_t k = rows.size();
  const std::size_t n = static_cast<std::size_t>(p.rank);
  std::vector<std::size_t> pivot(k);
  for (std::size_t t = 0; t < k; ++t) {
    pivot[t] = static_cast<std::size_t>(std::find_if(rows[t].begin(), rows[t].end(), [](auto v) { return v != 0; }) - rows[t].begin());
  }
  std::vector<Slope> out;
  std::vector<std::int64_t> phi(n, 0);
  auto floor_div = [](std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  };
  std::function<void(std::size_t)> descend = [&](std::size_t t) {
    if (t == k) {
      bool nonzero = false, ok = true;
      for (auto v : phi) {
        if (v != 0) nonzero = true;
        if (v > box || v < -box) ok = false;
        if (all_nonzero && v == 0) ok = false;
      }
      if (ok && nonzero) out.emplace_back(phi);
      return;
    }
    // phi[pivot t] = rest + c * pivot value must lie in [-box, box]
    const std::int64_t rest = phi[pivot[t]];
    const std::int64_t pv = rows[t][pivot[t]];
    const std::int64_t lo = -floor_div(box + rest, pv);
    const std::int64_t hi = floor_div(box - rest, pv);
    for (std::int64_t c = lo; c <= hi; ++c) {
      for (std::size_t j = 0; j < n; ++j) phi[j] += c * rows[t][j];
      descend(t + 1);
      for (std::size_t j = 0; j < n; ++j) phi[j] -= c * rows[t][j];
    }
  };
  descend(0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<Slope> enumerate_valid_slopes(const Presentation& p, std::int64_t box) {
  return enumerate_kernel_slopes(p, box, true);
}

}  // namespace fewrel
