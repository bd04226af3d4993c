// fewrel: command-line front end for the few-relator toolkit.

#include <fewrel/fewrel.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;
using namespace fewrel;

Presentation load(const std::string& path, int rank) {
  if (path == "-") return read_presentation(std::cin, rank);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_presentation(in, rank);
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

json relators_json(const Presentation& p) {
  json a = json::array();
  for (const auto& r : p.relators) a.push_back(r.to_string());
  return a;
}

json location_json(const PieceLocation& loc) {
  return {{"relator", loc.relator + 1}, {"inverted", loc.inverted}, {"offset", loc.offset}};
}

json piece_json(const PieceReport& r) {
  json j{{"longest_piece", r.longest_piece_length}};
  if (r.witness) {
    j["witness"] = {{"subword", r.witness->subword.to_string()},
                    {"first", location_json(r.witness->first)},
                    {"second", location_json(r.witness->second)}};
  }
  return j;
}

json witness_json(const MinConditionWitness& w) {
  json rel = json::array();
  for (std::size_t i = 0; i < w.i_roles.size(); ++i) {
    rel.push_back({{"relator", i + 1},
                   {"i_role", w.i_roles[i]},
                   {"shape", to_string(w.minima[i].shape)},
                   {"location", w.minima[i].location}});
  }
  return {{"n_role", w.n_role}, {"relators", rel}, {"signs", w.signs}};
}

json mincond_json(const MinConditionResult& r) {
  if (r) return {{"holds", true}, {"witness", witness_json(r.witness())}};
  json f{{"holds", false}, {"reason", to_string(r.failure().reason)}, {"detail", r.failure().detail}};
  if (r.failure().relator) f["relator"] = *r.failure().relator + 1;
  return f;
}

json slopes_json(const std::vector<Slope>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(s.values);
  return a;
}

std::string optional_degree(const std::optional<std::int64_t>& d) { return d ? std::to_string(*d) : "none"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fewrel: few-relator presentations, small cancellation, minimum conditions"};
  app.require_subcommand(1);

  std::string file = "-", out;
  int rank = -1;
  std::uint64_t seed = 1;

  auto* sample = app.add_subcommand("sample", "Sample a random presentation");
  int s_n = 2, s_m = 1, s_l = 10, s_count = 1;
  sample->add_option("--n", s_n, "Generators")->check(CLI::Range(2, 64));
  sample->add_option("--m", s_m, "Relators")->check(CLI::PositiveNumber);
  sample->add_option("--l", s_l, "Relator length")->check(CLI::PositiveNumber);
  sample->add_option("--count", s_count, "Number of presentations")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "Random seed");
  sample->add_option("--out", out, "Output file");

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("file", file, "Relator file, one relator per line ('-' for stdin)");
    sub->add_option("--rank", rank, "Number of generators (default: largest index seen)");
    sub->add_option("--seed", seed, "Random seed (unused by deterministic commands)");
    sub->add_option("--out", out, "Output file");
  };

  auto* checksc = app.add_subcommand("check-sc", "Check the C'(lambda) condition; exit status 1 when it fails");
  std::string lambda_text = "1/6";
  add_input(checksc);
  checksc->add_option("--lambda", lambda_text, "Small cancellation constant P/Q");

  auto* mincond = app.add_subcommand("mincond", "Check the minimum condition");
  std::string phi_text;
  std::int64_t box = 8;
  add_input(mincond);
  mincond->add_option("--phi", phi_text, "Slope as comma-separated integers (default: search the kernel box)");
  mincond->add_option("--box", box, "Slope box for the search")->check(CLI::PositiveNumber);

  auto* tau = app.add_subcommand("tau", "Apply the deficiency-one commutator insertion");
  bool tau_json = false, tau_invert = false;
  add_input(tau);
  tau->add_flag("--json", tau_json, "JSON output");
  tau->add_flag("--inverse", tau_invert, "Recover the source tuple instead");

  auto* slopes = app.add_subcommand("slopes", "Kernel basis, valid slopes and slope classes");
  add_input(slopes);
  slopes->add_option("--box", box, "Max-norm bound on slopes")->check(CLI::PositiveNumber);

  auto* certify = app.add_subcommand("certify", "Truncated Neumann-series certificate");
  int order = 4;
  std::size_t term_cap = kDefaultTermCap;
  add_input(certify);
  certify->add_option("--phi", phi_text, "Slope")->required();
  certify->add_option("--order", order, "Truncation order K")->check(CLI::PositiveNumber);
  certify->add_option("--term-cap", term_cap, "Maximum number of stored terms");

  auto* embed = app.add_subcommand("embed", "Embed into an (m+1)-generator presentation");
  bool guarantee = false;
  std::string epsilon_text = "1";
  int n_cap = 64;
  add_input(embed);
  embed->add_option("--phi", phi_text, "Slope")->required();
  embed->add_flag("--guarantee-c16", guarantee, "Require C'(1/(6+epsilon)) input and C'(1/6) output");
  embed->add_option("--epsilon", epsilon_text, "epsilon as P/Q");
  embed->add_option("--n-cap", n_cap, "Largest N tried")->check(CLI::PositiveNumber);

  auto* experiment = app.add_subcommand("experiment", "Monte Carlo or exhaustive experiment, CSV output");
  std::string config_path;
  std::vector<std::string> overrides;
  experiment->add_option("--config", config_path, "Key-value config file");
  experiment->add_option("--set", overrides, "Override a config key: key=value (repeatable)");
  experiment->add_option("--seed", seed, "Master seed (overrides config)");
  experiment->add_option("--workers", s_count, "Worker threads (overrides config)")->check(CLI::PositiveNumber);
  experiment->add_option("--out", out, "Output file (overrides config)");

  auto* taucount = app.add_subcommand("tau-count", "Exact counts around the insertion map");
  int t_n = 2, t_l = 3;
  std::uint64_t budget = 5'000'000;
  taucount->add_option("--n", t_n, "Generators")->check(CLI::Range(2, 16));
  taucount->add_option("--l", t_l, "Source relator length")->check(CLI::PositiveNumber);
  taucount->add_option("--budget", budget, "Largest enumeration allowed");
  taucount->add_option("--seed", seed, "Random seed (unused)");
  taucount->add_option("--out", out, "Output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) {
      std::mt19937_64 rng(seed);
      std::string text;
      for (int k = 0; k < s_count; ++k) {
        if (k) text += "\n";
        text += to_text(sample_presentation(s_n, s_m, s_l, rng));
      }
      emit(text, out);
      return 0;
    }
    if (*checksc) {
      const auto p = load(file, rank);
      const auto lambda = Ratio::parse(lambda_text);
      const auto res = check_small_cancellation(p, lambda);
      json j{{"lambda", lambda.to_string()}, {"holds", res.holds}, {"relator_lengths", json::array()}};
      for (const auto& r : p.relators) j["relator_lengths"].push_back(r.size());
      j.update(piece_json(res.report));
      emit(j.dump(2) + "\n", out);
      return res.holds ? 0 : 1;
    }
    if (*mincond) {
      const auto p = load(file, rank);
      json j;
      if (!phi_text.empty()) {
        const auto phi = Slope::parse(phi_text);
        j = mincond_json(check_minimum_condition(p, phi));
        j["phi"] = phi.values;
      } else {
        const auto found = find_minimum_condition_slope(p, box);
        j = {{"holds", found.has_value()}, {"box", box}};
        if (found) {
          j["phi"] = found->phi.values;
          j["witness"] = witness_json(found->witness);
        }
      }
      emit(j.dump(2) + "\n", out);
      return j["holds"].get<bool>() ? 0 : 1;
    }
    if (*tau) {
      const auto p = load(file, rank);
      if (tau_invert) {
        const auto back = tau_inverse(p);
        if (tau_json) {
          json j{{"in_image", back.has_value()}};
          if (back) j["relators"] = relators_json(*back);
          emit(j.dump(2) + "\n", out);
        } else if (back) {
          emit(to_text(*back), out);
        } else {
          std::cerr << "not in the image\n";
        }
        return back ? 0 : 1;
      }
      const auto res = tau_deficiency_one(p);
      if (tau_json) {
        json j{{"phi", res.phi.values}, {"j", res.j}, {"relators", relators_json(res.tuple)},
               {"insertion_vertex", res.insertion_vertex}, {"epsilon", res.epsilon},
               {"minimum_condition", mincond_json(check_minimum_condition(res.tuple, res.phi))}};
        emit(j.dump(2) + "\n", out);
      } else {
        emit(to_text(res.tuple), out);
      }
      return 0;
    }
    if (*slopes) {
      const auto p = load(file, rank);
      const auto valid = enumerate_valid_slopes(p, box);
      const auto classes = count_slope_classes(p, valid);
      json j{{"box", box},
             {"first_betti_number", first_betti_number(p)},
             {"basis", slopes_json(slope_basis(p))},
             {"valid_slopes", slopes_json(valid)},
             {"class_count", classes.count},
             {"class_representatives", slopes_json(classes.representatives)}};
      emit(j.dump(2) + "\n", out);
      return 0;
    }
    if (*certify) {
      const auto p = load(file, rank);
      const auto phi = Slope::parse(phi_text);
      const auto c = injectivity_certificate(p, phi, order, term_cap);
      json rows = json::array();
      for (std::size_t i = 0; i < c.lowest_terms.rows.size(); ++i) {
        const auto& r = c.lowest_terms.rows[i];
        rows.push_back({{"P", r.P}, {"k", r.k.to_string()}, {"coefficient", r.coefficient.get_str()},
                        {"case", to_string(r.local_case)}});
      }
      const auto& g = c.certificate;
      json j{{"order", g.order},
             {"standard_relators", relators_json(c.standard.tuple)},
             {"standard_phi", c.standard.phi.values},
             {"rows", rows},
             {"error_min_degree", optional_degree(g.error_min_degree)},
             {"left_telescopes", g.left_telescopes},
             {"right_telescopes", g.right_telescopes},
             {"inverse_terms", g.inverse_terms},
             {"error_terms", g.error_terms},
             {"passes", g.passes()},
             {"l2_betti_1_if_certified", p.rank - p.relator_count() - 1}};
      emit(j.dump(2) + "\n", out);
      return g.passes() ? 0 : 1;
    }
    if (*embed) {
      const auto p = load(file, rank);
      EmbeddingOptions opt;
      opt.guarantee_c16 = guarantee;
      opt.epsilon = Ratio::parse(epsilon_text);
      opt.n_cap = n_cap;
      const auto e = embed_presentation(p, Slope::parse(phi_text), opt);
      json w = json::array();
      for (const auto& x : e.plan.w) w.push_back(x.to_string());
      const auto& r = e.report;
      json j{{"plan",
              {{"N", e.plan.N},
               {"target_rank", e.plan.target_rank},
               {"source_relators", relators_json(e.plan.source)},
               {"phi", e.plan.phi.values},
               {"psi", e.plan.psi.values},
               {"w", w}}},
             {"report",
              {{"target_relators", relators_json(r.target)},
               {"w_c12", r.w_c12},
               {"w_pieces", piece_json(r.w_pieces)},
               {"s_c16", r.s_c16},
               {"s_pieces", piece_json(r.s_pieces)},
               {"psi_minimum_condition", r.psi_minimum_condition},
               {"phi_min", r.phi_min},
               {"psi_min", r.psi_min},
               {"cancellation", r.cancellation},
               {"delta", r.delta},
               {"length_bounds", r.length_bounds},
               {"rejected_N", r.tried}}}};
      emit(j.dump(2) + "\n", out);
      return 0;
    }
    if (*experiment) {
      ExperimentConfig cfg;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot open " + config_path);
        cfg = read_config(in);
      }
      for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value");
        set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (experiment->count("--seed")) cfg.seed = seed;
      if (experiment->count("--workers")) cfg.workers = s_count;
      if (experiment->count("--out")) cfg.out = out;
      emit(to_csv(run_experiment(cfg)), cfg.out);
      return 0;
    }
    if (*taucount) {
      const auto c = tau_count(t_n, t_l, budget);
      const auto g = std::gcd(c.image, c.r_l4);
      json j{{"n", c.n},
             {"l", c.l},
             {"R_l", c.r_l},
             {"R_prime_l", c.r_prime_l},
             {"tau_image", c.image},
             {"injective", c.injective},
             {"images_satisfy_minimum_condition", c.images_satisfy},
             {"round_trip", c.round_trip},
             {"R_l_plus_4", c.r_l4},
             {"image_fraction", std::to_string(c.image / g) + "/" + std::to_string(c.r_l4 / g)}};
      if (c.s_l4) j["S_l_plus_4"] = *c.s_l4;
      emit(j.dump(2) + "\n", out);
      return c.injective && c.images_satisfy && c.round_trip ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "fewrel: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
