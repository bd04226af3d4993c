#pragma once

// Seeded Monte Carlo and exhaustive experiments over random presentations.

#include <fewrel/abelian.hpp>
#include <fewrel/errors.hpp>
#include <fewrel/mincond.hpp>
#include <fewrel/novikov.hpp>
#include <fewrel/presentation.hpp>
#include <fewrel/smallcanc.hpp>
#include <fewrel/words.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fewrel {

enum class PredicateKind { c_prime, b1, min_condition, slope_classes, certificate, tau_count };

struct Predicate {
  PredicateKind kind = PredicateKind::b1;
  Ratio lambda{1, 6};  // c-prime
  int k = 1;           // slope-classes threshold, or certificate order

  /// `c-prime:1/6`, `b1`, `min-condition`, `slope-classes:4`, `certificate:3`, `tau-count`
  static Predicate parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    Predicate p;
    auto need = [&](bool want) {
      if (want == arg.empty()) throw std::invalid_argument("predicate '" + text + "': " + (want ? "missing" : "unexpected") + " parameter");
    };
    if (head == "c-prime") {
      need(true);
      p.kind = PredicateKind::c_prime;
      p.lambda = Ratio::parse(arg);
      if (p.lambda.num <= 0 || p.lambda.num > p.lambda.den) throw std::invalid_argument("predicate c-prime: need 0 < lambda <= 1");
    } else if (head == "b1") {
      need(false);
      p.kind = PredicateKind::b1;
    } else if (head == "min-condition") {
      need(false);
      p.kind = PredicateKind::min_condition;
    } else if (head == "slope-classes" || head == "certificate") {
      need(true);
      p.kind = head == "certificate" ? PredicateKind::certificate : PredicateKind::slope_classes;
      p.k = std::stoi(arg);
      if (p.k < 1) throw std::invalid_argument("predicate " + head + ": parameter must be >= 1");
    } else if (head == "tau-count") {
      need(false);
      p.kind = PredicateKind::tau_count;
    } else {
      throw std::invalid_argument("unknown predicate '" + text + "'");
    }
    return p;
  }

  std::string name() const {
    switch (kind) {
      case PredicateKind::c_prime: return "c-prime:" + lambda.to_string();
      case PredicateKind::b1: return "b1";
      case PredicateKind::min_condition: return "min-condition";
      case PredicateKind::slope_classes: return "slope-classes:" + std::to_string(k);
      case PredicateKind::certificate: return "certificate:" + std::to_string(k);
      case PredicateKind::tau_count: return "tau-count";
    }
    return "?";
  }
};

enum class Mode { monte_carlo, exhaustive };

inline const char* to_string(Mode m) { return m == Mode::exhaustive ? "exhaustive" : "monte-carlo"; }

struct ExperimentConfig {
  int n = 2;
  int m = 1;
  std::vector<int> lengths{10};
  int trials = 100;
  std::uint64_t seed = 1;
  Mode mode = Mode::monte_carlo;
  std::vector<Predicate> predicates{Predicate{}};
  std::int64_t box = 8;
  std::string out;
  int workers = 1;
  std::uint64_t budget = 5'000'000;  // tuples in exhaustive mode
  bool timing = false;               // wall_ms stays 0 unless set, so CSV bytes are reproducible

  void validate() const {
    if (n < 2) throw std::invalid_argument("experiment: n must be >= 2");
    if (m < 1) throw std::invalid_argument("experiment: m must be >= 1");
    if (lengths.empty()) throw std::invalid_argument("experiment: no lengths");
    for (int l : lengths) {
      if (l < 1) throw std::invalid_argument("experiment: lengths must be >= 1");
    }
    if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (workers < 1) throw std::invalid_argument("experiment: workers must be >= 1");
    if (box < 1) throw std::invalid_argument("experiment: box must be >= 1");
    if (predicates.empty()) throw std::invalid_argument("experiment: no predicates");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

/// Applies one `key = value` setting.
inline void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "n") {
    cfg.n = std::stoi(value);
  } else if (key == "m") {
    cfg.m = std::stoi(value);
  } else if (key == "lengths") {
    cfg.lengths.clear();
    for (const auto& s : detail::split_list(value)) cfg.lengths.push_back(std::stoi(s));
  } else if (key == "trials") {
    cfg.trials = std::stoi(value);
  } else if (key == "seed") {
    cfg.seed = std::stoull(value);
  } else if (key == "mode") {
    if (value == "monte-carlo") {
      cfg.mode = Mode::monte_carlo;
    } else if (value == "exhaustive") {
      cfg.mode = Mode::exhaustive;
    } else {
      throw std::invalid_argument("config: mode must be monte-carlo or exhaustive");
    }
  } else if (key == "predicates") {
    cfg.predicates.clear();
    for (const auto& s : detail::split_list(value)) cfg.predicates.push_back(Predicate::parse(s));
  } else if (key == "box") {
    cfg.box = std::stoll(value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "workers") {
    cfg.workers = std::stoi(value);
  } else if (key == "budget") {
    cfg.budget = std::stoull(value);
  } else if (key == "timing") {
    cfg.timing = value == "1" || value == "true" || value == "yes";
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

/// Key-value text: one `key = value` per line, `#` starts a comment.
inline ExperimentConfig read_config(std::istream& in, ExperimentConfig cfg = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

/// Seed of trial `trial` at length `l`; depends only on these three values.
inline std::uint64_t trial_seed(std::uint64_t master, int l, std::uint64_t trial) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(master) ^ static_cast<std::uint64_t>(l)) ^ trial);
}

struct WilsonInterval {
  double lo = 0;
  double hi = 0;
};

/// 95% Wilson score interval.
inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  constexpr double z = 1.959964;
  const double t = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / t;
  const double denom = 1 + z * z / t;
  const double centre = (p + z * z / (2 * t)) / denom;
  const double half = z / denom * std::sqrt(p * (1 - p) / t + z * z / (4 * t * t));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Evaluates one predicate on one tuple.
inline bool evaluate_predicate(const Predicate& pred, const Presentation& p, std::int64_t box) {
  switch (pred.kind) {
    case PredicateKind::c_prime:
      return check_small_cancellation(p, pred.lambda).holds;
    case PredicateKind::b1:
      return first_betti_number(p) == std::max(p.rank - p.relator_count(), 0);
    case PredicateKind::min_condition:
      return find_minimum_condition_slope(p, box).has_value();
    case PredicateKind::slope_classes:
      return count_slope_classes(p, enumerate_valid_slopes(p, box)).count >= static_cast<std::size_t>(pred.k);
    case PredicateKind::certificate: {
      const auto s = find_minimum_condition_slope(p, box);
      if (!s) return false;
      try {
        return injectivity_certificate(p, s->phi, pred.k).certificate.passes();
      } catch (const ResourceLimitError&) {
        return false;
      }
    }
    case PredicateKind::tau_count:
      return p.relator_count() == p.rank - 1 && tau_inverse(p).has_value();
  }
  return false;
}

struct ExperimentRow {
  std::string predicate;
  int n = 0, m = 0, l = 0;
  Mode mode = Mode::monte_carlo;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::optional<std::uint64_t> exact_num;  // exhaustive mode: reduced fraction
  std::uint64_t exact_den = 1;
  double point = 0;
  double ci_lo = 0, ci_hi = 0;
  std::uint64_t seed = 0;
  std::int64_t wall_ms = 0;
};

namespace detail {

// Runs `count` independent tasks on `workers` threads; task k writes only
// its own slot, so the output does not depend on the worker count.
template <typename F>
void parallel_for(std::uint64_t count, int workers, F&& f) {
  if (workers <= 1 || count < 2) {
    for (std::uint64_t k = 0; k < count; ++k) f(k);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t k = static_cast<std::uint64_t>(w); k < count; k += static_cast<std::uint64_t>(workers)) f(k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline std::uint64_t checked_power(std::uint64_t base, int exp, std::uint64_t limit) {
  std::uint64_t r = 1;
  for (int k = 0; k < exp; ++k) {
    if (base != 0 && r > limit / base) return limit + 1;
    r *= base;
  }
  return r;
}

}  // namespace detail

inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ExperimentRow> rows;
  const std::size_t np = cfg.predicates.size();
  for (int l : cfg.lengths) {
    const auto start = std::chrono::steady_clock::now();
    std::uint64_t total = 0;
    std::vector<std::uint8_t> hits;  // trial-major, np per trial
    if (cfg.mode == Mode::exhaustive) {
      const auto words = enumerate_cyclically_reduced(cfg.n, l);
      total = detail::checked_power(words.size(), cfg.m, cfg.budget);
      if (total > cfg.budget) {
        throw ResourceLimitError("experiment: exhaustive enumeration at l=" + std::to_string(l) + " exceeds budget " + std::to_string(cfg.budget));
      }
      hits.assign(total * np, 0);
      detail::parallel_for(total, cfg.workers, [&](std::uint64_t idx) {
        Presentation p{cfg.n, {}};
        std::uint64_t rest = idx;
        std::vector<CyclicWord> rel;
        for (int i = 0; i < cfg.m; ++i) {
          rel.push_back(words[rest % words.size()]);
          rest /= words.size();
        }
        // most significant digit first, so index order is lexicographic in the tuple
        p.relators.assign(rel.rbegin(), rel.rend());
        for (std::size_t q = 0; q < np; ++q) hits[idx * np + q] = evaluate_predicate(cfg.predicates[q], p, cfg.box);
      });
    } else {
      total = static_cast<std::uint64_t>(cfg.trials);
      hits.assign(total * np, 0);
      detail::parallel_for(total, cfg.workers, [&](std::uint64_t t) {
        std::mt19937_64 rng(trial_seed(cfg.seed, l, t));
        const auto p = sample_presentation(cfg.n, cfg.m, l, rng);
        for (std::size_t q = 0; q < np; ++q) hits[t * np + q] = evaluate_predicate(cfg.predicates[q], p, cfg.box);
      });
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    for (std::size_t q = 0; q < np; ++q) {
      ExperimentRow row;
      row.predicate = cfg.predicates[q].name();
      row.n = cfg.n;
      row.m = cfg.m;
      row.l = l;
      row.mode = cfg.mode;
      row.trials = total;
      for (std::uint64_t t = 0; t < total; ++t) row.successes += hits[t * np + q];
      row.point = static_cast<double>(row.successes) / static_cast<double>(total);
      if (cfg.mode == Mode::exhaustive) {
        const auto g = std::gcd(row.successes, total);
        row.exact_num = row.successes / g;
        row.exact_den = total / g;
        row.ci_lo = row.ci_hi = row.point;
      } else {
        const auto w = wilson_interval(row.successes, total);
        row.ci_lo = w.lo;
        row.ci_hi = w.hi;
      }
      row.seed = cfg.seed;
      row.wall_ms = cfg.timing ? ms : 0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline constexpr const char* kCsvHeader =
    "predicate,n,m,l,mode,trials,successes,estimate_num,estimate_den_or_point,ci_lo,ci_hi,seed,wall_ms";

inline std::string to_csv(const std::vector<ExperimentRow>& rows) {
  std::string s = std::string(kCsvHeader) + "\n";
  char buf[64];
  auto fixed = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    s += r.predicate + "," + std::to_string(r.n) + "," + std::to_string(r.m) + "," + std::to_string(r.l) + "," +
         to_string(r.mode) + "," + std::to_string(r.trials) + "," + std::to_string(r.successes) + ",";
    if (r.exact_num) {
      s += std::to_string(*r.exact_num) + "," + std::to_string(r.exact_den);
    } else {
      s += "," + fixed(r.point);
    }
    s += "," + fixed(r.ci_lo) + "," + fixed(r.ci_hi) + "," + std::to_string(r.seed) + "," + std::to_string(r.wall_ms) + "\n";
  }
  return s;
}

/// Exact counts around the deficiency-one insertion map at length l.
struct TauCount {
  int n = 0, l = 0;
  std::uint64_t r_l = 0;        // ordered (n-1)-tuples of cyclically reduced words
  std::uint64_t r_prime_l = 0;  // those with first Betti number 1
  std::uint64_t image = 0;      // distinct tau images
  bool injective = false;
  bool images_satisfy = false;  // every image passes the minimum condition
  bool round_trip = false;      // tau_inverse recovers every source
  std::uint64_t r_l4 = 0;       // ordered tuples at length l+4
  std::optional<std::uint64_t> s_l4;  // tuples at l+4 with b1 = 1 and a minimum condition
};

inline TauCount tau_count(int n, int l, std::uint64_t budget = 5'000'000, bool count_s = true) {
  if (n < 2 || l < 1) throw std::invalid_argument("tau_count: need n >= 2, l >= 1");
  TauCount c;
  c.n = n;
  c.l = l;
  const auto words = enumerate_cyclically_reduced(n, l);
  c.r_l = detail::checked_power(words.size(), n - 1, budget);
  if (c.r_l > budget) throw ResourceLimitError("tau_count: |R_l| exceeds budget");
  c.r_l4 = detail::checked_power(count_cyclically_reduced(n, l + 4), n - 1, std::numeric_limits<std::uint64_t>::max() / 2);
  std::set<Presentation> images;
  c.images_satisfy = true;
  c.round_trip = true;
  for (std::uint64_t idx = 0; idx < c.r_l; ++idx) {
    Presentation p{n, {}};
    std::uint64_t rest = idx;
    std::vector<CyclicWord> rel;
    for (int i = 0; i < n - 1; ++i) {
      rel.push_back(words[rest % words.size()]);
      rest /= words.size();
    }
    p.relators.assign(rel.rbegin(), rel.rend());
    if (first_betti_number(p) != 1) continue;
    ++c.r_prime_l;
    auto tau = tau_deficiency_one(p);
    if (!check_minimum_condition(tau.tuple, tau.phi)) c.images_satisfy = false;
    const auto back = tau_inverse(tau.tuple);
    if (!back || !(*back == p)) c.round_trip = false;
    images.insert(std::move(tau.tuple));
  }
  c.image = images.size();
  c.injective = c.image == c.r_prime_l;
  if (count_s && c.r_l4 <= budget) {
    const auto long_words = enumerate_cyclically_reduced(n, l + 4);
    std::uint64_t s = 0;
    for (std::uint64_t idx = 0; idx < c.r_l4; ++idx) {
      Presentation p{n, {}};
      std::uint64_t rest = idx;
      for (int i = 0; i < n - 1; ++i) {
        p.relators.push_back(long_words[rest % long_words.size()]);
        rest /= long_words.size();
      }
      const auto basis = slope_basis(p);
      if (basis.size() != 1) continue;
      if (check_minimum_condition(p, basis[0]) || check_minimum_condition(p, -basis[0])) ++s;
    }
    c.s_l4 = s;
  }
  return c;
}

}  // namespace fewrel
