#include "mglab/game_io.hpp"

#include <fstream>
#include <sstream>

#include "mglab/common.hpp"

namespace mglab {

nlohmann::json game_to_json(const MarkovGame& g) {
  nlohmann::json j{{"horizon", g.horizon},
                   {"sizes",
                    {{"states", g.state_sizes},
                     {"max_actions", g.max_action_sizes},
                     {"min_actions", g.min_action_sizes}}},
                   {"transitions", g.transition},
                   {"returns", g.ret}};
  if (g.has_bernoulli()) j["bernoulli_flags"] = g.bernoulli;
  return j;
}

MarkovGame game_from_json(const nlohmann::json& j) {
  MarkovGame g;
  g.horizon = j.at("horizon").get<int>();
  const auto& sizes = j.at("sizes");
  g.state_sizes = sizes.at("states").get<std::vector<int>>();
  g.max_action_sizes = sizes.at("max_actions").get<std::vector<int>>();
  g.min_action_sizes = sizes.at("min_actions").get<std::vector<int>>();
  g.transition = j.at("transitions")
                     .get<std::vector<std::vector<std::vector<std::vector<Dist>>>>>();
  g.ret = j.at("returns").get<std::vector<std::vector<std::vector<std::vector<double>>>>>();
  if (j.contains("bernoulli_flags"))
    g.bernoulli =
        j.at("bernoulli_flags")
            .get<std::vector<std::vector<std::vector<std::vector<std::uint8_t>>>>>();
  return g;
}

MarkovGame load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(strf("cannot open game file: %s", path.c_str()));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(strf("cannot parse game file %s: %s", path.c_str(), e.what()));
  }
  MarkovGame g = game_from_json(j);
  auto violations = validate_game(g);
  if (!violations.empty()) {
    std::string msg = strf("game file %s is invalid:", path.c_str());
    for (const auto& v : violations) msg += "\n  " + v.describe();
    throw ConfigError(msg);
  }
  return g;
}

void save_game(const std::string& path, const MarkovGame& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(strf("cannot write game file: %s", path.c_str()));
  out << game_to_json(g).dump(1) << "\n";
}

nlohmann::json policy_to_json(const MarkovPolicy& p) { return nlohmann::json(p.probs); }

MarkovPolicy policy_from_json(const nlohmann::json& j) {
  MarkovPolicy p;
  p.probs = j.get<std::vector<std::vector<Dist>>>();
  return p;
}

std::vector<std::vector<double>> load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(strf("cannot open matrix file: %s", path.c_str()));
  auto ends_with = [&](const char* suffix) {
    std::string s(suffix);
    return path.size() >= s.size() && path.compare(path.size() - s.size(), s.size(), s) == 0;
  };
  std::vector<std::vector<double>> m;
  if (ends_with(".csv")) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<double> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
      m.push_back(std::move(row));
    }
  } else {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(strf("cannot parse matrix file %s: %s", path.c_str(), e.what()));
    }
    if (j.is_object()) j = j.at("matrix");
    m = j.get<std::vector<std::vector<double>>>();
  }
  if (m.empty()) throw ConfigError(strf("matrix file %s holds no rows", path.c_str()));
  return m;
}

}  // namespace mglab
