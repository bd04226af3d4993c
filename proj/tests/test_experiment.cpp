#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace fewrel;

namespace {

ExperimentConfig config_from(const std::string& text) {
  std::istringstream in(text);
  return read_config(in);
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::size_t count_fields(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

}  // namespace

TEST(Config, ParsesKeyValueText) {
  const auto cfg = config_from(
      "# comment\n"
      "n = 3\n"
      "m=2\n"
      "lengths = 4, 8 ,16\n"
      "trials = 50   # trailing comment\n"
      "seed = 99\n"
      "mode = exhaustive\n"
      "predicates = c-prime:2/12, b1, min-condition, slope-classes:4, certificate:3, tau-count\n"
      "box = 6\n"
      "workers = 4\n"
      "\n");
  EXPECT_EQ(cfg.n, 3);
  EXPECT_EQ(cfg.m, 2);
  EXPECT_EQ(cfg.lengths, (std::vector<int>{4, 8, 16}));
  EXPECT_EQ(cfg.trials, 50);
  EXPECT_EQ(cfg.seed, 99u);
  EXPECT_EQ(cfg.mode, Mode::exhaustive);
  ASSERT_EQ(cfg.predicates.size(), 6u);
  EXPECT_EQ(cfg.predicates[0].name(), "c-prime:1/6");
  EXPECT_EQ(cfg.predicates[3].name(), "slope-classes:4");
  EXPECT_EQ(cfg.predicates[4].name(), "certificate:3");
  EXPECT_EQ(cfg.predicates[5].name(), "tau-count");
  EXPECT_EQ(cfg.box, 6);
  EXPECT_EQ(cfg.workers, 4);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(config_from("colour = red\n"), std::invalid_argument);
  EXPECT_THROW(config_from("n 3\n"), std::invalid_argument);
  EXPECT_THROW(config_from("mode = sometimes\n"), std::invalid_argument);
  EXPECT_THROW(Predicate::parse("c-prime"), std::invalid_argument);
  EXPECT_THROW(Predicate::parse("c-prime:3/2"), std::invalid_argument);
  EXPECT_THROW(Predicate::parse("b1:2"), std::invalid_argument);
  EXPECT_THROW(Predicate::parse("slope-classes:0"), std::invalid_argument);
  EXPECT_THROW(Predicate::parse("nonsense"), std::invalid_argument);
  EXPECT_THROW(config_from("trials = 0\n").validate(), std::invalid_argument);
  EXPECT_THROW(config_from("lengths = \n").validate(), std::invalid_argument);
}

TEST(Wilson, TextbookValues) {
  const auto a = wilson_interval(5, 10);
  EXPECT_NEAR(a.lo, 0.2366, 1e-4);
  EXPECT_NEAR(a.hi, 0.7634, 1e-4);
  const auto b = wilson_interval(0, 10);
  EXPECT_NEAR(b.lo, 0.0, 1e-12);
  EXPECT_NEAR(b.hi, 0.2775, 1e-4);
  const auto c = wilson_interval(10, 10);
  EXPECT_NEAR(c.lo, 0.7225, 1e-4);
  EXPECT_NEAR(c.hi, 1.0, 1e-12);
  for (std::uint64_t s = 0; s <= 40; ++s) {
    const auto w = wilson_interval(s, 40);
    const double p = static_cast<double>(s) / 40;
    EXPECT_LE(w.lo, p + 1e-12);
    EXPECT_GE(w.hi, p - 1e-12);
  }
}

TEST(TrialSeed, DependsOnEveryInput) {
  const auto a = trial_seed(1, 10, 0);
  EXPECT_EQ(a, trial_seed(1, 10, 0));
  EXPECT_NE(a, trial_seed(2, 10, 0));
  EXPECT_NE(a, trial_seed(1, 11, 0));
  EXPECT_NE(a, trial_seed(1, 10, 1));
}

TEST(Experiment, CsvShape) {
  auto cfg = config_from("n = 2\nm = 1\nlengths = 6, 8\ntrials = 40\nseed = 5\npredicates = b1, c-prime:1/6\n");
  const auto csv = to_csv(run_experiment(cfg));
  const auto lines = lines_of(csv);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "predicate,n,m,l,mode,trials,successes,estimate_num,estimate_den_or_point,ci_lo,ci_hi,seed,wall_ms");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    EXPECT_EQ(count_fields(lines[k]), 13u) << lines[k];
    EXPECT_NE(lines[k].find(",monte-carlo,40,"), std::string::npos);
    EXPECT_EQ(lines[k].substr(lines[k].size() - 4), ",5,0");
  }
  cfg.mode = Mode::exhaustive;
  cfg.lengths = {3};
  const auto ex = lines_of(to_csv(run_experiment(cfg)));
  // 28 tuples at n = 2, l = 3; every one has b1 = 1
  EXPECT_EQ(ex[1], "b1,2,1,3,exhaustive,28,28,1,1,1.000000,1.000000,5,0");
}

TEST(Experiment, DeterministicAcrossWorkerCounts) {
  auto cfg = config_from("n = 3\nm = 2\nlengths = 8, 12\ntrials = 60\nseed = 17\npredicates = b1, c-prime:1/4, min-condition\nbox = 3\n");
  cfg.workers = 1;
  const auto one = to_csv(run_experiment(cfg));
  cfg.workers = 8;
  const auto eight = to_csv(run_experiment(cfg));
  EXPECT_EQ(one, eight);
  cfg.mode = Mode::exhaustive;
  cfg.n = 2;
  cfg.m = 1;
  cfg.lengths = {5};
  cfg.workers = 1;
  const auto ex1 = to_csv(run_experiment(cfg));
  cfg.workers = 8;
  EXPECT_EQ(ex1, to_csv(run_experiment(cfg)));
  cfg.seed = 18;
  cfg.mode = Mode::monte_carlo;
  cfg.lengths = {8};
  EXPECT_NE(one, to_csv(run_experiment(cfg)));
}

TEST(Experiment, ExhaustiveAndMonteCarloAgree) {
  auto cfg = config_from("n = 2\nm = 1\nlengths = 6\npredicates = b1, min-condition, c-prime:1/3\nbox = 4\n");
  cfg.mode = Mode::exhaustive;
  const auto exact = run_experiment(cfg);
  cfg.mode = Mode::monte_carlo;
  cfg.trials = 3000;
  cfg.seed = 23;
  const auto mc = run_experiment(cfg);
  ASSERT_EQ(exact.size(), mc.size());
  for (std::size_t k = 0; k < exact.size(); ++k) {
    const double p = exact[k].point;
    const double sigma = std::sqrt(std::max(p * (1 - p), 1e-9) / static_cast<double>(mc[k].trials));
    EXPECT_NEAR(mc[k].point, p, 3 * sigma) << exact[k].predicate;
  }
}

TEST(Experiment, ExhaustiveBudgetIsEnforced) {
  auto cfg = config_from("n = 3\nm = 2\nlengths = 6\nmode = exhaustive\nbudget = 1000\n");
  EXPECT_THROW(run_experiment(cfg), ResourceLimitError);
}

TEST(Experiment, MinimumConditionAboveTauBound) {
  // exact fraction at l in {7, 8, 9} is at least |R'_{l-4}| / |R_l|
  auto cfg = config_from("n = 2\nm = 1\nlengths = 7, 8, 9\nmode = exhaustive\npredicates = min-condition\nbox = 8\n");
  const auto rows = run_experiment(cfg);
  for (const auto& row : rows) {
    std::uint64_t r_prime = 0;
    fewrel::testing::for_each_tuple(2, 1, row.l - 4, [&](const Presentation& t) { r_prime += first_betti_number(t) == 1; });
    EXPECT_EQ(row.trials, count_cyclically_reduced(2, row.l));
    EXPECT_GE(row.successes, r_prime) << "l = " << row.l;
  }
}

TEST(TauCount, SmallCasesMatchEnumeration) {
  for (int l : {3, 4, 5}) {
    const auto c = tau_count(2, l);
    std::uint64_t r_prime = 0;
    fewrel::testing::for_each_tuple(2, 1, l, [&](const Presentation& t) { r_prime += first_betti_number(t) == 1; });
    EXPECT_EQ(c.r_l, count_cyclically_reduced(2, l));
    EXPECT_EQ(c.r_prime_l, r_prime);
    EXPECT_EQ(c.image, r_prime);
    EXPECT_TRUE(c.injective);
    EXPECT_TRUE(c.images_satisfy);
    EXPECT_TRUE(c.round_trip);
    EXPECT_EQ(c.r_l4, count_cyclically_reduced(2, l + 4));
    ASSERT_TRUE(c.s_l4.has_value());
    EXPECT_GE(*c.s_l4, c.image);
  }
  const auto c3 = tau_count(2, 3);
  EXPECT_EQ(c3.r_l, 28u);
  EXPECT_EQ(c3.r_l4, 2188u);
  EXPECT_THROW(tau_count(3, 6, 1000), ResourceLimitError);
}

TEST(Predicate, TauCountRecognisesImages) {
  const auto img = tau_deficiency_one(fewrel::testing::P(2, {"x1 x2 x1 X2"})).tuple;
  EXPECT_TRUE(evaluate_predicate(Predicate::parse("tau-count"), img, 8));
  EXPECT_FALSE(evaluate_predicate(Predicate::parse("tau-count"), fewrel::testing::P(2, {"x1 x2 x1 X2"}), 8));
  EXPECT_TRUE(evaluate_predicate(Predicate::parse("certificate:3"), img, 8));
  EXPECT_TRUE(evaluate_predicate(Predicate::parse("min-condition"), img, 8));
}
