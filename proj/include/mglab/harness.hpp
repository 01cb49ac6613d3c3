#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mglab/game.hpp"
#include "mglab/learner.hpp"
#include "mglab/opponents.hpp"
#include "mglab/value_oracle.hpp"

namespace mglab {

// Run description. See README for the JSON schema; build_* below document
// the accepted specs for each part.
struct ExperimentConfig {
  nlohmann::json game;
  nlohmann::json learner = {{"kind", "vol"}};
  nlohmann::json opponent = {{"kind", "nash"}};
  std::int64_t episodes = 1;
  std::vector<int> initial_states = {0};
  std::uint64_t seed = 0;
  bool informed = false;
  std::vector<std::string> metrics;  // "ucb_gap", "ucb_violations", "strong_regret"
  bool record_episodes = false;
  bool plot = false;
  double oracle_tol = 1e-9;

  bool has_metric(const std::string& name) const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::json to_json() const;
};

struct LedgerRow {
  std::int64_t episode = 0;
  int initial_state = 0;
  double v_star = 0.0;
  double v_pair = 0.0;
  double weak_increment = 0.0;
  double weak_cumulative = 0.0;
  double ucb_gap = std::numeric_limits<double>::quiet_NaN();
  std::int64_t ucb_violations = -1;
};

struct RegretLedger {
  std::vector<LedgerRow> rows;
  std::optional<double> strong_regret;
  double hindsight_total = std::numeric_limits<double>::quiet_NaN();
  std::int64_t hindsight_nodes = 0;

  double final_weak_regret() const { return rows.empty() ? 0.0 : rows.back().weak_cumulative; }
};

struct ExperimentResult {
  RegretLedger ledger;
  std::vector<EpisodeRecord> records;  // populated when record_episodes
};

// Game specs: {"kind":"random", H,S,A,B, "seed", "returns":"deterministic"|"bernoulli_terminal"}
//           | {"kind":"file", "path"}
//           | {"kind":"lock", "depth", "x", "y", "epsilon"}         (bit strings, e.g. "010")
//           | {"kind":"hard_mg", "depth", "x", "epsilon"}
//           | {"kind":"duplicate_b", "factor", "base": <game spec>}
MarkovGame build_game(const nlohmann::json& spec);

// Learner specs: {"kind":"vol", "G":"auto"|number|"doubling", "c", "p", "clip_values"}
//              | {"kind":"qol", "c", "p", "solve_tol"}
//              | {"kind":"uniform"}
//              | {"kind":"fixed", "policy":"nash"|<policy json>}
std::unique_ptr<Learner> build_learner(const nlohmann::json& spec, const MarkovGame& g,
                                       std::int64_t episodes, const MinimaxResult& oracle);

// Opponent specs: {"kind":"nash"} | {"kind":"uniform"} | {"kind":"fixed","policy":<json>}
//               | {"kind":"scripted","policies":[...]}
//               | {"kind":"scripted","generator":"hard_mg_y"}   (hard_mg games only)
//               | {"kind":"adaptive_br","period":m}
//               | {"kind":"mirror","c":..,"p":..,"G":"auto"|number}
std::unique_ptr<Opponent> build_opponent(const nlohmann::json& spec, const MarkovGame& g,
                                         const nlohmann::json& game_spec,
                                         std::int64_t episodes, std::uint64_t seed,
                                         const MinimaxResult& oracle);

// Runs the full episode loop with exact per-episode oracle accounting.
// Deterministic given the config (the root seed splits into per-episode
// learner/opponent/environment substreams).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Hindsight total minus the realized pair values; requires the opponent
// snapshots retained by the strong_regret metric.
double compute_strong_regret(const MarkovGame& g, const std::vector<MarkovPolicy>& opp_snapshots,
                             const std::vector<int>& initial_states,
                             const std::vector<double>& v_pairs,
                             const HindsightOptions& opts = {});

// Least-squares slope of log(cum) vs log(k) over the second half of the
// episodes (burn-in skipped); NaN when fewer than two usable points.
double fit_loglog_slope(const std::vector<double>& weak_cumulative);

// Writes ledger.csv, summary.json and optionally plot.svg under out_dir.
// The CSV is byte-stable for identical results.
struct OutputPaths {
  std::string csv, summary, svg;
};
OutputPaths emit_outputs(const ExperimentResult& result, const ExperimentConfig& cfg,
                         const std::string& out_dir);

nlohmann::json summarize(const ExperimentResult& result, const ExperimentConfig& cfg);

}  // namespace mglab
