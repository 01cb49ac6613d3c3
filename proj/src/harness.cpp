#include "mglab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "mglab/common.hpp"
#include "mglab/game_io.hpp"
#include "mglab/hard_instances.hpp"
#include "mglab/qol_learner.hpp"
#include "mglab/vol_learner.hpp"

namespace mglab {

namespace {

constexpr std::int64_t kSnapshotCellCap = 10000000;

std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw ConfigError(strf("bit string '%s' must be 0/1", s.c_str()));
    bits.push_back(c - '0');
  }
  return bits;
}

std::string fmt_double(double v) { return strf("%.17g", v); }

}  // namespace

bool ExperimentConfig::has_metric(const std::string& name) const {
  return std::find(metrics.begin(), metrics.end(), name) != metrics.end();
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.game = j.at("game");
  if (j.contains("learner")) cfg.learner = j.at("learner");
  if (j.contains("opponent")) cfg.opponent = j.at("opponent");
  cfg.episodes = j.value("episodes", std::int64_t{1});
  if (j.contains("initial_states"))
    cfg.initial_states = j.at("initial_states").get<std::vector<int>>();
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.informed = j.value("informed", false);
  if (j.contains("metrics")) cfg.metrics = j.at("metrics").get<std::vector<std::string>>();
  cfg.record_episodes = j.value("record_episodes", false);
  cfg.plot = j.value("plot", false);
  cfg.oracle_tol = j.value("oracle_tol", 1e-9);
  if (cfg.episodes < 1) throw ConfigError("episodes must be >= 1");
  if (cfg.initial_states.empty()) throw ConfigError("initial_states must not be empty");
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(strf("cannot open config file: %s", path.c_str()));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(strf("cannot parse config file %s: %s", path.c_str(), e.what()));
  }
  return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
  return nlohmann::json{{"game", game},
                        {"learner", learner},
                        {"opponent", opponent},
                        {"episodes", episodes},
                        {"initial_states", initial_states},
                        {"seed", seed},
                        {"informed", informed},
                        {"metrics", metrics},
                        {"record_episodes", record_episodes},
                        {"plot", plot},
                        {"oracle_tol", oracle_tol}};
}

MarkovGame build_game(const nlohmann::json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "random") {
    Rng rng = Rng::substream(spec.value("seed", std::uint64_t{0}), "game");
    ReturnMode mode = ReturnMode::deterministic;
    if (spec.value("returns", std::string("deterministic")) == "bernoulli_terminal")
      mode = ReturnMode::bernoulli_terminal;
    return random_game(spec.at("H").get<int>(), spec.at("S").get<int>(),
                       spec.at("A").get<int>(), spec.at("B").get<int>(), rng, mode);
  }
  if (kind == "file") return load_game(spec.at("path").get<std::string>());
  if (kind == "lock") {
    HardInstanceSpec hs;
    hs.depth = spec.at("depth").get<int>();
    hs.x_bits = parse_bits(spec.at("x").get<std::string>());
    hs.y_bits = parse_bits(spec.at("y").get<std::string>());
    hs.epsilon = spec.at("epsilon").get<double>();
    return combination_lock_mdp(hs);
  }
  if (kind == "hard_mg") {
    return hard_markov_game(spec.at("depth").get<int>(),
                            parse_bits(spec.at("x").get<std::string>()),
                            spec.at("epsilon").get<double>());
  }
  if (kind == "duplicate_b") {
    return duplicate_min_actions(build_game(spec.at("base")), spec.at("factor").get<int>());
  }
  throw ConfigError(strf("unknown game kind '%s'", kind.c_str()));
}

std::unique_ptr<Learner> build_learner(const nlohmann::json& spec, const MarkovGame& g,
                                       std::int64_t episodes, const MinimaxResult& oracle) {
  const std::string kind = spec.value("kind", std::string("vol"));
  int s_max = *std::max_element(g.state_sizes.begin(), g.state_sizes.end() - 1);
  int a_max = *std::max_element(g.max_action_sizes.begin(), g.max_action_sizes.end());
  if (kind == "vol") {
    VolHyper hyper;
    hyper.bonus_c = spec.value("c", 2.0);
    hyper.failure_prob = spec.value("p", 0.01);
    hyper.clip_values = spec.value("clip_values", false);
    hyper.episodes = episodes;
    nlohmann::json g_mode = spec.value("G", nlohmann::json("auto"));
    if (g_mode.is_string() && g_mode.get<std::string>() == "doubling") {
      return std::make_unique<DoublingLearner>(
          make_doubling_vol(g.horizon, g.state_sizes, g.max_action_sizes, hyper));
    }
    if (g_mode.is_number()) {
      hyper.g_factor = g_mode.get<double>();
    } else if (g_mode.is_string() && g_mode.get<std::string>() == "auto") {
      hyper.g_factor = choose_g_factor(episodes, g.horizon, s_max, a_max);
    } else {
      throw ConfigError("learner.G must be \"auto\", \"doubling\", or a number");
    }
    return std::make_unique<VolLearner>(VolLearner::for_game(g, hyper));
  }
  if (kind == "qol") {
    QolHyper hyper;
    hyper.bonus_c = spec.value("c", 2.0);
    hyper.failure_prob = spec.value("p", 0.01);
    hyper.solve_tol = spec.value("solve_tol", 1e-6);
    hyper.episodes = episodes;
    return std::make_unique<QolLearner>(QolLearner::for_game(g, hyper));
  }
  if (kind == "uniform")
    return std::make_unique<UniformLearner>(g.horizon, g.state_sizes, g.max_action_sizes);
  if (kind == "fixed") {
    const auto& pol = spec.at("policy");
    if (pol.is_string() && pol.get<std::string>() == "nash")
      return std::make_unique<FixedPolicyLearner>(oracle.max_policy);
    return std::make_unique<FixedPolicyLearner>(policy_from_json(pol));
  }
  throw ConfigError(strf("unknown learner kind '%s'", kind.c_str()));
}

std::unique_ptr<Opponent> build_opponent(const nlohmann::json& spec, const MarkovGame& g,
                                         const nlohmann::json& game_spec,
                                         std::int64_t episodes, std::uint64_t seed,
                                         const MinimaxResult& oracle) {
  (void)episodes;
  const std::string kind = spec.value("kind", std::string("nash"));
  if (kind == "nash") return std::make_unique<FixedOpponent>(oracle.min_policy);
  if (kind == "uniform")
    return std::make_unique<FixedOpponent>(
        MarkovPolicy::uniform(g.horizon, g.state_sizes, g.min_action_sizes));
  if (kind == "fixed")
    return std::make_unique<FixedOpponent>(policy_from_json(spec.at("policy")));
  if (kind == "scripted") {
    if (spec.contains("policies")) {
      std::vector<MarkovPolicy> script;
      for (const auto& pj : spec.at("policies")) script.push_back(policy_from_json(pj));
      return std::make_unique<ScriptedOpponent>(std::move(script));
    }
    const std::string gen = spec.at("generator").get<std::string>();
    if (gen == "hard_mg_y") {
      if (game_spec.value("kind", std::string()) != "hard_mg")
        throw ConfigError("scripted generator 'hard_mg_y' requires a hard_mg game");
      int depth = game_spec.at("depth").get<int>();
      std::vector<int> x = parse_bits(game_spec.at("x").get<std::string>());
      return std::make_unique<ScriptedOpponent>([depth, x, seed](std::int64_t k) {
        Rng rng = Rng::substream(seed, "opponent-script", static_cast<std::uint64_t>(k));
        std::vector<int> y(depth);
        for (int& bit : y) bit = rng.uniform_int(2);
        return hard_game_min_policy(depth, x, y);
      });
    }
    throw ConfigError(strf("unknown scripted generator '%s'", gen.c_str()));
  }
  if (kind == "adaptive_br")
    return std::make_unique<AdaptiveBestResponseOpponent>(
        g, spec.value("period", std::int64_t{1}));
  if (kind == "mirror") {
    VolHyper hyper;
    hyper.bonus_c = spec.value("c", 2.0);
    hyper.failure_prob = spec.value("p", 0.01);
    hyper.episodes = episodes;
    int s_max = *std::max_element(g.state_sizes.begin(), g.state_sizes.end() - 1);
    int b_max = *std::max_element(g.min_action_sizes.begin(), g.min_action_sizes.end());
    nlohmann::json g_mode = spec.value("G", nlohmann::json("auto"));
    hyper.g_factor = g_mode.is_number()
                         ? g_mode.get<double>()
                         : choose_g_factor(episodes, g.horizon, s_max, b_max);
    return std::make_unique<SelfPlayMirrorOpponent>(g, hyper);
  }
  throw ConfigError(strf("unknown opponent kind '%s'", kind.c_str()));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  MarkovGame game = build_game(cfg.game);
  auto violations = validate_game(game);
  if (!violations.empty()) {
    std::string msg = "configured game is invalid:";
    for (const auto& v : violations) msg += "\n  " + v.describe();
    throw ConfigError(msg);
  }
  for (int s1 : cfg.initial_states)
    if (s1 < 0 || s1 >= game.state_sizes[0])
      throw ConfigError(strf("initial state %d outside layer 0 (size %d)", s1,
                             game.state_sizes[0]));

  // One exact solve provides V* at every state (cached across episodes).
  MinimaxResult oracle = minimax_values(game, cfg.oracle_tol);

  std::unique_ptr<Learner> learner = build_learner(cfg.learner, game, cfg.episodes, oracle);
  if (learner->informed() && !cfg.informed)
    throw ConfigError(
        "this learner needs opponent actions: it cannot run in unknown-game mode "
        "(set \"informed\": true)");
  std::unique_ptr<Opponent> opponent =
      build_opponent(cfg.opponent, game, cfg.game, cfg.episodes, cfg.seed, oracle);

  const bool want_gap = cfg.has_metric("ucb_gap");
  const bool want_violations = cfg.has_metric("ucb_violations");
  const bool want_strong = cfg.has_metric("strong_regret");
  if (want_strong) {
    int s_max = *std::max_element(game.state_sizes.begin(), game.state_sizes.end());
    int a_max = *std::max_element(game.min_action_sizes.begin(), game.min_action_sizes.end());
    std::int64_t cells = cfg.episodes * game.horizon * s_max * a_max;
    if (cells > kSnapshotCellCap)
      throw ConfigError(strf(
          "strong_regret needs K*H*S*B = %lld policy cells retained, above the cap %lld; "
          "drop the metric or shrink the run",
          static_cast<long long>(cells), static_cast<long long>(kSnapshotCellCap)));
  }

  ExperimentResult result;
  result.ledger.rows.reserve(cfg.episodes);
  std::vector<MarkovPolicy> opp_snapshots;
  std::vector<int> initials;
  std::vector<double> pair_values;
  if (want_strong) {
    opp_snapshots.reserve(cfg.episodes);
    initials.reserve(cfg.episodes);
    pair_values.reserve(cfg.episodes);
  }

  double weak_cum = 0.0;
  for (std::int64_t k = 1; k <= cfg.episodes; ++k) {
    const int s1 = cfg.initial_states[(k - 1) % cfg.initial_states.size()];
    learner->begin_episode(k, s1);
    MarkovPolicy mu_k = learner->policy_snapshot();
    opponent->begin_episode(k, &mu_k);
    MarkovPolicy nu_k = opponent->current_policy();

    const double v_star = oracle.value.at(0, s1);
    const double v_pair = evaluate_pair(game, mu_k, nu_k).at(0, s1);

    std::vector<std::vector<double>> v_snapshot;
    if (want_gap || want_violations) v_snapshot = learner->value_table();

    Rng learner_rng = Rng::substream(cfg.seed, "learner", static_cast<std::uint64_t>(k));
    Rng opp_rng = Rng::substream(cfg.seed, "opponent", static_cast<std::uint64_t>(k));
    Rng env_rng = Rng::substream(cfg.seed, "environment", static_cast<std::uint64_t>(k));

    EpisodeRecord record;
    record.episode = k;
    record.initial_state = s1;
    record.informed = cfg.informed;

    std::int64_t violations_count = 0;
    int s = s1;
    for (int h = 0; h < game.horizon; ++h) {
      if (want_violations && !v_snapshot.empty() &&
          v_snapshot[h][s] < oracle.value.at(h, s) - 1e-9)
        ++violations_count;
      int a = learner->act(h, s, learner_rng);
      int b = opponent->act(h, s, opp_rng);
      StepOutcome step = sample_step(game, h, s, a, b, env_rng);
      if (learner->informed()) {
        learner->observe_informed(h, s, a, b, step.ret, step.next_state);
      } else {
        learner->observe(h, s, a, step.ret, step.next_state);
      }
      opponent->observe(h, s, b, step.ret, step.next_state);
      if (cfg.record_episodes)
        record.steps.push_back({s, a, b, step.ret, step.next_state});
      s = step.next_state;
    }

    LedgerRow row;
    row.episode = k;
    row.initial_state = s1;
    row.v_star = v_star;
    row.v_pair = v_pair;
    row.weak_increment = v_star - v_pair;
    weak_cum += row.weak_increment;
    row.weak_cumulative = weak_cum;
    if (want_gap && !v_snapshot.empty()) row.ucb_gap = v_snapshot[0][s1] - v_pair;
    if (want_violations) row.ucb_violations = v_snapshot.empty() ? -1 : violations_count;
    result.ledger.rows.push_back(row);
    if (cfg.record_episodes) result.records.push_back(std::move(record));

    if (want_strong) {
      opp_snapshots.push_back(std::move(nu_k));
      initials.push_back(s1);
      pair_values.push_back(v_pair);
    }
  }

  if (want_strong) {
    HindsightResult hr = best_policy_in_hindsight(game, opp_snapshots, initials);
    result.ledger.hindsight_total = hr.total;
    result.ledger.hindsight_nodes = hr.nodes;
    double realized = 0.0;
    for (double v : pair_values) realized += v;
    result.ledger.strong_regret = hr.total - realized;
  }
  return result;
}

double compute_strong_regret(const MarkovGame& g, const std::vector<MarkovPolicy>& opp_snapshots,
                             const std::vector<int>& initial_states,
                             const std::vector<double>& v_pairs, const HindsightOptions& opts) {
  if (opp_snapshots.empty())
    throw ConfigError(
        "strong regret needs retained opponent snapshots; enable the strong_regret metric");
  if (opp_snapshots.size() != initial_states.size() || opp_snapshots.size() != v_pairs.size())
    throw std::invalid_argument("compute_strong_regret: per-episode inputs must align");
  HindsightResult hr = best_policy_in_hindsight(g, opp_snapshots, initial_states, opts);
  double realized = 0.0;
  for (double v : v_pairs) realized += v;
  return hr.total - realized;
}

double fit_loglog_slope(const std::vector<double>& weak_cumulative) {
  const std::int64_t n = static_cast<std::int64_t>(weak_cumulative.size());
  std::int64_t from = n / 2;  // episodes are 1-based: k = from+1 .. n
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::int64_t count = 0;
  for (std::int64_t i = from; i < n; ++i) {
    double cum = weak_cumulative[i];
    if (!(cum > 0.0)) continue;
    double x = std::log(static_cast<double>(i + 1));
    double y = std::log(cum);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  double denom = count * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (count * sxy - sx * sy) / denom;
}

namespace {

void write_svg(const std::string& path, const std::vector<LedgerRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(strf("cannot write plot file: %s", path.c_str()));
  const double width = 640, height = 400, margin = 50;
  double max_k = static_cast<double>(rows.size());
  double min_v = 0.0, max_v = 0.0;
  for (const auto& r : rows) {
    min_v = std::min(min_v, r.weak_cumulative);
    max_v = std::max(max_v, r.weak_cumulative);
  }
  if (max_v == min_v) max_v = min_v + 1.0;
  auto px = [&](double k) { return margin + (k / max_k) * (width - 2 * margin); };
  auto py = [&](double v) {
    return height - margin - (v - min_v) / (max_v - min_v) * (height - 2 * margin);
  };
  out << strf("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\">\n",
              width, height);
  out << strf("<rect width=\"%g\" height=\"%g\" fill=\"white\"/>\n", width, height);
  out << strf("<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", margin,
              height - margin, width - margin, height - margin);
  out << strf("<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", margin,
              margin, margin, height - margin);
  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  size_t stride = std::max<size_t>(1, rows.size() / 2000);
  for (size_t i = 0; i < rows.size(); i += stride)
    out << strf("%.2f,%.2f ", px(static_cast<double>(i + 1)), py(rows[i].weak_cumulative));
  out << strf("%.2f,%.2f", px(max_k), py(rows.back().weak_cumulative));
  out << "\"/>\n";
  out << strf(
      "<text x=\"%g\" y=\"%g\" font-size=\"12\">episode (1..%zu)</text>\n",
      width / 2 - 40, height - margin / 3, rows.size());
  out << strf(
      "<text x=\"%g\" y=\"%g\" font-size=\"12\" transform=\"rotate(-90 %g %g)\">"
      "cumulative weak regret</text>\n",
      margin / 3, height / 2, margin / 3, height / 2);
  out << strf("<text x=\"%g\" y=\"%g\" font-size=\"11\">max %.6g</text>\n", margin + 4,
              margin - 6, max_v);
  out << "</svg>\n";
}

}  // namespace

nlohmann::json summarize(const ExperimentResult& result, const ExperimentConfig& cfg) {
  const auto& rows = result.ledger.rows;
  std::vector<double> cum;
  cum.reserve(rows.size());
  double gap_total = 0.0;
  bool has_gap = false;
  for (const auto& r : rows) {
    cum.push_back(r.weak_cumulative);
    if (!std::isnan(r.ucb_gap)) {
      gap_total += r.ucb_gap;
      has_gap = true;
    }
  }
  nlohmann::json j{{"config", cfg.to_json()},
                   {"episodes", static_cast<std::int64_t>(rows.size())},
                   {"final_weak_regret", result.ledger.final_weak_regret()},
                   {"loglog_slope_second_half", fit_loglog_slope(cum)}};
  if (result.ledger.strong_regret) {
    j["strong_regret"] = *result.ledger.strong_regret;
    j["hindsight_total"] = result.ledger.hindsight_total;
    j["hindsight_nodes"] = result.ledger.hindsight_nodes;
  }
  if (has_gap) j["cumulative_ucb_gap"] = gap_total;
  return j;
}

OutputPaths emit_outputs(const ExperimentResult& result, const ExperimentConfig& cfg,
                         const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error(strf("cannot create output directory %s: %s", out_dir.c_str(),
                                  ec.message().c_str()));
  OutputPaths paths;
  paths.csv = out_dir + "/ledger.csv";
  paths.summary = out_dir + "/summary.json";

  const bool with_gap = cfg.has_metric("ucb_gap");
  const bool with_violations = cfg.has_metric("ucb_violations");
  {
    std::ofstream out(paths.csv);
    if (!out) throw std::runtime_error(strf("cannot write %s", paths.csv.c_str()));
    out << "k,s1,v_star,v_pair,weak_inc,weak_cum";
    if (with_gap) out << ",ucb_gap";
    if (with_violations) out << ",ucb_violations";
    out << "\n";
    for (const auto& r : result.ledger.rows) {
      out << r.episode << ',' << r.initial_state << ',' << fmt_double(r.v_star) << ','
          << fmt_double(r.v_pair) << ',' << fmt_double(r.weak_increment) << ','
          << fmt_double(r.weak_cumulative);
      if (with_gap) out << ',' << fmt_double(r.ucb_gap);
      if (with_violations) out << ',' << r.ucb_violations;
      out << "\n";
    }
  }
  {
    std::ofstream out(paths.summary);
    if (!out) throw std::runtime_error(strf("cannot write %s", paths.summary.c_str()));
    out << summarize(result, cfg).dump(1) << "\n";
  }
  if (cfg.plot && !result.ledger.rows.empty()) {
    paths.svg = out_dir + "/plot.svg";
    write_svg(paths.svg, result.ledger.rows);
  }
  return paths;
}

}  // namespace mglab
