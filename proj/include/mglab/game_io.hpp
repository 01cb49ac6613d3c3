#pragma once

#include <string>

#include "json.hpp"
#include "mglab/game.hpp"

namespace mglab {

// Game file schema:
// {
//   "horizon": H,
//   "sizes": {"states": [..H+1], "max_actions": [..H], "min_actions": [..H]},
//   "transitions": [h][s][a][b][s'],
//   "returns": [h][s][a][b],
//   "bernoulli_flags": [h][s][a][b]   (optional)
// }
nlohmann::json game_to_json(const MarkovGame& g);
MarkovGame game_from_json(const nlohmann::json& j);

// Loads and re-validates; throws ConfigError listing every violation.
MarkovGame load_game(const std::string& path);
void save_game(const std::string& path, const MarkovGame& g);

nlohmann::json policy_to_json(const MarkovPolicy& p);
MarkovPolicy policy_from_json(const nlohmann::json& j);

// Matrix from a JSON file ([[..],[..]] or {"matrix": [[..]]}) or a CSV file
// of comma-separated rows, chosen by extension.
std::vector<std::vector<double>> load_matrix(const std::string& path);

}  // namespace mglab
