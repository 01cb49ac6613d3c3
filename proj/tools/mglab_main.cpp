#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "mglab/common.hpp"
#include "mglab/game_io.hpp"
#include "mglab/hard_instances.hpp"
#include "mglab/harness.hpp"
#include "mglab/matrix_game.hpp"
#include "mglab/value_oracle.hpp"
#include "mglab/vol_learner.hpp"

namespace {

using namespace mglab;

nlohmann::json certificate_json(const NashCertificate& cert) {
  return nlohmann::json{{"value", cert.value},
                        {"gap", cert.gap},
                        {"row_strategy", cert.row_strategy},
                        {"col_strategy", cert.col_strategy},
                        {"row_guarantee", cert.row_guarantee},
                        {"col_guarantee", cert.col_guarantee},
                        {"converged", cert.converged},
                        {"iterations", cert.iterations}};
}

int cmd_run(const std::string& config_path, std::int64_t seed_override, bool has_seed,
            const std::string& out_dir) {
  ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
  if (has_seed) cfg.seed = static_cast<std::uint64_t>(seed_override);
  ExperimentResult result = run_experiment(cfg);
  if (!out_dir.empty()) {
    OutputPaths paths = emit_outputs(result, cfg, out_dir);
    std::cout << "wrote " << paths.csv << " and " << paths.summary;
    if (!paths.svg.empty()) std::cout << " and " << paths.svg;
    std::cout << "\n";
  } else {
    std::cout << summarize(result, cfg).dump(1) << "\n";
  }
  return 0;
}

struct SweepCell {
  std::uint64_t seed = 0;
  double g_factor = 0.0;  // 0 = keep config
  int dup_b = 0;          // 0 = keep config
  std::string dir;
  nlohmann::json summary;
  std::string error;
};

int cmd_sweep(const std::string& config_path, std::vector<std::uint64_t> seeds,
              std::vector<double> g_values, std::vector<int> b_values,
              const std::string& out_dir, int jobs) {
  ExperimentConfig base = ExperimentConfig::from_file(config_path);
  if (seeds.empty()) seeds = {base.seed};
  if (g_values.empty()) g_values = {0.0};
  if (b_values.empty()) b_values = {0};

  std::vector<SweepCell> cells;
  for (std::uint64_t seed : seeds)
    for (double g : g_values)
      for (int b : b_values) {
        SweepCell cell;
        cell.seed = seed;
        cell.g_factor = g;
        cell.dup_b = b;
        cell.dir = out_dir + strf("/seed%llu", static_cast<unsigned long long>(seed));
        if (g > 0.0) cell.dir += strf("_G%g", g);
        if (b > 0) cell.dir += strf("_B%d", b);
        cells.push_back(std::move(cell));
      }

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepCell& cell = cells[i];
      try {
        ExperimentConfig cfg = base;
        cfg.seed = cell.seed;
        if (cell.g_factor > 0.0) cfg.learner["G"] = cell.g_factor;
        if (cell.dup_b > 0) {
          if (cfg.game.value("kind", std::string()) != "random")
            throw ConfigError("--B sweeps need a random game spec");
          cfg.game["B"] = cell.dup_b;
        }
        ExperimentResult result = run_experiment(cfg);
        emit_outputs(result, cfg, cell.dir);
        cell.summary = summarize(result, cfg);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  int n_threads = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::filesystem::create_directories(out_dir);
  std::ofstream index(out_dir + "/index.csv");
  index << "seed,G,B,final_weak_regret,loglog_slope,dir,error\n";
  int failures = 0;
  for (const auto& cell : cells) {
    if (cell.error.empty()) {
      index << cell.seed << ',' << cell.g_factor << ',' << cell.dup_b << ','
            << strf("%.17g", cell.summary["final_weak_regret"].get<double>()) << ','
            << strf("%.17g", cell.summary["loglog_slope_second_half"].get<double>()) << ','
            << cell.dir << ",\n";
    } else {
      ++failures;
      index << cell.seed << ',' << cell.g_factor << ',' << cell.dup_b << ",,,\""
            << cell.error << "\"\n";
      std::cerr << "cell " << cell.dir << " failed: " << cell.error << "\n";
    }
  }
  std::cout << "sweep: " << cells.size() - failures << "/" << cells.size()
            << " cells finished; index at " << out_dir << "/index.csv\n";
  return failures == 0 ? 0 : 1;
}

int cmd_oracle(const std::string& game_path, double tol) {
  MarkovGame g = load_game(game_path);
  MinimaxResult res = minimax_values(g, tol);
  nlohmann::json out{{"minimax_value", res.value.values},
                     {"max_policy", policy_to_json(res.max_policy)},
                     {"min_policy", policy_to_json(res.min_policy)}};
  std::cout << out.dump(1) << "\n";
  return 0;
}

int cmd_solve_matrix(const std::string& path, double tol) {
  MatrixGame m{load_matrix(path)};
  NashCertificate cert = solve_zero_sum(m, tol);
  std::cout << certificate_json(cert).dump(1) << "\n";
  return cert.converged ? 0 : 1;
}

int cmd_hard_lb(int depth, std::int64_t episodes, int seeds, const std::string& learner_kind,
                const std::string& out_path, int jobs) {
  const double eps = epsilon_hk(depth, episodes);
  struct Row {
    int seed;
    double strong = 0.0;
    std::string error;
  };
  std::vector<Row> rows(seeds);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= seeds) return;
      rows[i].seed = i;
      try {
        Rng xrng = Rng::substream(static_cast<std::uint64_t>(i), "hard-x");
        std::string x;
        for (int l = 0; l < depth; ++l) x += char('0' + xrng.uniform_int(2));
        ExperimentConfig cfg;
        cfg.game = {{"kind", "hard_mg"}, {"depth", depth}, {"x", x}, {"epsilon", eps}};
        cfg.learner = learner_kind == "vol"
                          ? nlohmann::json{{"kind", "vol"}, {"G", "auto"}}
                          : nlohmann::json{{"kind", "uniform"}};
        cfg.opponent = {{"kind", "scripted"}, {"generator", "hard_mg_y"}};
        cfg.episodes = episodes;
        cfg.seed = static_cast<std::uint64_t>(i);
        cfg.metrics = {"strong_regret"};
        ExperimentResult result = run_experiment(cfg);
        rows[i].strong = *result.ledger.strong_regret;
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error(strf("cannot write %s", out_path.c_str()));
    out = &file;
  }
  (*out) << "seed,epsilon,strong_regret,linear_threshold\n";
  const double threshold = 0.5 * eps * static_cast<double>(episodes);
  int failures = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      ++failures;
      std::cerr << "seed " << r.seed << " failed: " << r.error << "\n";
      continue;
    }
    (*out) << r.seed << ',' << strf("%.17g", eps) << ',' << strf("%.17g", r.strong) << ','
           << strf("%.17g", threshold) << "\n";
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Episodic Markov-game online-learning laboratory"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one experiment from a JSON config");
  std::string run_config, run_out;
  std::int64_t run_seed = 0;
  run->add_option("--config", run_config, "config JSON path")->required();
  auto* seed_opt = run->add_option("--seed", run_seed, "override the config seed");
  run->add_option("--out", run_out, "output directory (ledger.csv, summary.json)");

  auto* sweep = app.add_subcommand("sweep", "Run a (seed, G, B) grid of experiments");
  std::string sweep_config, sweep_out = "sweep_out";
  std::vector<std::uint64_t> sweep_seeds;
  std::vector<double> sweep_g;
  std::vector<int> sweep_b;
  int sweep_jobs = static_cast<int>(std::thread::hardware_concurrency());
  sweep->add_option("--config", sweep_config, "base config JSON path")->required();
  sweep->add_option("--seeds", sweep_seeds, "seed list");
  sweep->add_option("--G", sweep_g, "learner G values");
  sweep->add_option("--B", sweep_b, "opponent action-space sizes (random games)");
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_option("--jobs", sweep_jobs, "parallel cells");

  auto* oracle = app.add_subcommand("oracle", "Print V*, mu*, nu* for a game file");
  std::string oracle_game;
  double oracle_tol = 1e-9;
  oracle->add_option("--game", oracle_game, "game JSON path")->required();
  oracle->add_option("--tol", oracle_tol, "solver gap tolerance");

  auto* solve = app.add_subcommand("solve-matrix", "Certified zero-sum matrix solve");
  std::string solve_input;
  double solve_tol = 1e-9;
  solve->add_option("--input", solve_input, "matrix JSON or CSV path")->required();
  solve->add_option("--tol", solve_tol, "gap tolerance");

  auto* hardlb = app.add_subcommand("hard-lb", "Per-seed strong regret on the hard instance");
  int lb_depth = 8, lb_seeds = 20, lb_jobs = static_cast<int>(std::thread::hardware_concurrency());
  std::int64_t lb_episodes = 512;
  std::string lb_learner = "vol", lb_out;
  hardlb->add_option("--H", lb_depth, "lock depth (two-state layers)");
  hardlb->add_option("--K", lb_episodes, "episodes");
  hardlb->add_option("--seeds", lb_seeds, "number of seeds");
  hardlb->add_option("--learner", lb_learner, "vol | uniform")
      ->check(CLI::IsMember({"vol", "uniform"}));
  hardlb->add_option("--out", lb_out, "CSV output path (default stdout)");
  hardlb->add_option("--jobs", lb_jobs, "parallel seeds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_config, run_seed, seed_opt->count() > 0, run_out);
    if (*sweep) return cmd_sweep(sweep_config, sweep_seeds, sweep_g, sweep_b, sweep_out, sweep_jobs);
    if (*oracle) return cmd_oracle(oracle_game, oracle_tol);
    if (*solve) return cmd_solve_matrix(solve_input, solve_tol);
    if (*hardlb)
      return cmd_hard_lb(lb_depth, lb_episodes, lb_seeds, lb_learner, lb_out, lb_jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
