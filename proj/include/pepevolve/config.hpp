#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pepevolve/evolve.hpp"
#include "pepevolve/pretrain_data.hpp"
#include "pepevolve/router.hpp"
#include "pepevolve/scoring.hpp"

namespace pepevolve::config {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct GeneratorSection {
  std::string vocabulary_path;
  double temperature = 1.0;
  double learning_rate = 0.25;
};

struct RouterSection {
  std::string input;
  int subset_size = 1;   // K
  int batch_size = 8;    // B
  int steps = 500;
  int candidates_per_subset = 8;  // G
  double learning_rate = 0.25;
  double lambda = 0.9;
  double beta_start = 0.05;
  double beta_end = 0.001;
  bool update_agent = true;
};

struct EvolveSection {
  std::string input;
  std::vector<std::size_t> targets;
  int seeds = 16;
  int group_size = 8;
  int steps = 250;
  std::string mode = "self";       // self | neighbor
  std::string agents = "single";   // single | multi
  std::string baseline = "evolving";  // evolving | static
  double epsilon = 1e-8;
  bool dedup = true;
  bool elitism = true;
  int top_n = 10;
};

struct DatasetSection {
  std::string corpus_path;
  std::uint64_t epoch = 0;
  std::string mode = "standard";  // standard | shifted
};

struct ScoreSection {
  std::string input;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::string out_dir = "runs/out";
  int threads = 1;
  std::string base_dir;  // directory of the config file; relative paths resolve against it

  scoring::ScoringConfig scoring;
  scoring::ScoreContext score_context;
  std::optional<GeneratorSection> generator;
  std::optional<RouterSection> router;
  std::optional<EvolveSection> evolve;
  std::optional<DatasetSection> dataset;
  std::optional<ScoreSection> score;
  bool has_scoring = false;

  // candidate logging granularity: "summary" (aggregate per candidate) or
  // "full" (per-component breakdowns for the best peptides file)
  std::string log_candidates = "summary";
};

/// Load and validate a run configuration. Unknown keys are rejected; files
/// referenced by the config must exist.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const nlohmann::json& j, const std::string& base_dir);

scoring::ScoringConfig parse_scoring(const nlohmann::json& j, scoring::ScoreContext& ctx);

evolve::EvolveConfig to_evolve_config(const EvolveSection& section, int threads);
router::RouterPolicy to_router_policy(const RouterSection& section, std::size_t length);

std::string resolve_path(const RunConfig& cfg, const std::string& path);

}  // namespace pepevolve::config
