// pepevolve: peptide lead optimization over CHUCKLES strings.
//
// Subcommands: tokenize, shift, mask, score, route, evolve, dataset.
// Exit codes: 0 success, 2 configuration/usage error, 3 runtime error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pepevolve/chuckles.hpp"
#include "pepevolve/config.hpp"
#include "pepevolve/evolve.hpp"
#include "pepevolve/generator.hpp"
#include "pepevolve/pretrain_data.hpp"
#include "pepevolve/router.hpp"
#include "pepevolve/runlog.hpp"
#include "pepevolve/scoring.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pepevolve;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> steps;
  std::optional<int> threads;
};

config::RunConfig load_config(const CommonFlags& flags) {
  if (flags.config_path.empty()) throw config::ConfigError("missing --config");
  auto cfg = config::load_run_config(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  if (flags.threads) cfg.threads = *flags.threads;
  return cfg;
}

scoring::ScoreBreakdown score_one(const chuckles::Peptide& p, const config::RunConfig& cfg) {
  if (!cfg.has_scoring) throw config::ConfigError("config has no scoring section");
  return scoring::score_peptide(p, cfg.scoring, cfg.score_context);
}

router::ScoreFn make_score_fn(const config::RunConfig& cfg) {
  if (!cfg.has_scoring) throw config::ConfigError("config has no scoring section");
  return [&cfg](const chuckles::Peptide& p) {
    return scoring::score_peptide(p, cfg.scoring, cfg.score_context).aggregate;
  };
}

generator::GeneratorPolicy make_agent(const config::RunConfig& cfg) {
  if (!cfg.generator) throw config::ConfigError("config has no generator section");
  generator::GeneratorPolicy agent;
  agent.vocabulary =
      generator::load_vocabulary(config::resolve_path(cfg, cfg.generator->vocabulary_path));
  agent.temperature = cfg.generator->temperature;
  agent.learning_rate = cfg.generator->learning_rate;
  return agent;
}

json breakdown_json(const scoring::ScoreBreakdown& b) {
  json out;
  out["aggregate"] = b.aggregate;
  json comps = json::array();
  for (const auto& c : b.components)
    comps.push_back({{"name", c.name}, {"raw", c.raw}, {"unit", c.unit}});
  out["components"] = std::move(comps);
  return out;
}

void save_router_checkpoint(const router::RouterPolicy& r, const std::string& path) {
  json j;
  j["schema_version"] = runlog::kSchemaVersion;
  j["logits"] = r.logits;
  j["baseline"] = r.baseline;
  j["step"] = r.step;
  j["lambda"] = r.lambda;
  j["beta_start"] = r.beta_start;
  j["beta_end"] = r.beta_end;
  j["total_steps"] = r.total_steps;
  j["learning_rate"] = r.learning_rate;
  j["batch_size"] = r.batch_size;
  j["subset_size"] = r.subset_size;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << j.dump(2) << "\n";
}

int cmd_tokenize(const std::string& input) {
  const auto tokens = chuckles::tokenize(input);
  for (std::size_t i = 0; i < tokens.size(); ++i)
    std::cout << (i ? " " : "") << tokens[i].text;
  std::cout << "\n";
  return 0;
}

int cmd_shift(const std::string& input, std::size_t offset) {
  const auto p = chuckles::parse_peptide(input);
  std::cout << chuckles::render(chuckles::shift(p, offset)) << "\n";
  return 0;
}

int cmd_mask(const std::string& input, const std::vector<std::size_t>& positions) {
  const auto p = chuckles::parse_peptide(input);
  std::cout << chuckles::render(chuckles::mask(p, positions)) << "\n";
  return 0;
}

int cmd_score(const CommonFlags& flags, std::string input) {
  const auto cfg = load_config(flags);
  if (input.empty() && cfg.score) input = cfg.score->input;
  if (input.empty()) throw config::ConfigError("score: no input peptide (flag or score.input)");
  const auto p = chuckles::parse_peptide(input);
  const auto breakdown = score_one(p, cfg);

  json out = breakdown_json(breakdown);
  out["input"] = input;
  std::cout << out.dump() << "\n";

  std::cerr << "component           raw        unit\n";
  for (const auto& c : breakdown.components) {
    std::cerr << c.name;
    for (std::size_t i = c.name.size(); i < 18; ++i) std::cerr << ' ';
    std::cerr << ' ' << c.raw << "\t" << c.unit << "\n";
  }
  std::cerr << "aggregate: " << breakdown.aggregate << "\n";
  return 0;
}

int cmd_route(const CommonFlags& flags) {
  auto cfg = load_config(flags);
  if (!cfg.router) throw config::ConfigError("config has no router section");
  if (flags.steps) cfg.router->steps = *flags.steps;

  const auto peptide = chuckles::parse_peptide(cfg.router->input);
  auto agent = make_agent(cfg);
  auto policy = config::to_router_policy(*cfg.router, peptide.length());
  const auto score = make_score_fn(cfg);

  router::RouteOptions options;
  options.steps = cfg.router->steps;
  options.candidates_per_subset = cfg.router->candidates_per_subset;
  options.update_agent = cfg.router->update_agent;
  options.threads = cfg.threads;

  fs::create_directories(cfg.out_dir);
  runlog::RunLog log((fs::path(cfg.out_dir) / "route_trace.jsonl").string());
  log.write("run_meta", {{"command", "route"},
                         {"seed", cfg.seed},
                         {"steps", options.steps},
                         {"K", policy.subset_size},
                         {"B", policy.batch_size},
                         {"G", options.candidates_per_subset},
                         {"L", peptide.length()}});

  {
    const auto p0 = router::softmax(policy.logits);
    log.write("router_init",
              {{"probs", p0}, {"entropy", router::entropy(p0)}, {"beta", policy.beta_start}},
              0);
  }

  std::mt19937_64 rng(cfg.seed);
  const auto trace = router::route(policy, agent, peptide, score, options, rng);
  for (const auto& rec : trace) {
    log.write("router_step",
              {{"probs", rec.probs},
               {"entropy", rec.entropy},
               {"beta", rec.beta},
               {"baseline", rec.baseline},
               {"subset_rewards", rec.subset_rewards},
               {"subsets", rec.subsets}},
              rec.step);
  }

  save_router_checkpoint(policy, (fs::path(cfg.out_dir) / "router_checkpoint.json").string());
  generator::save_checkpoint(agent, (fs::path(cfg.out_dir) / "agent_checkpoint.json").string());

  const auto probs = router::softmax(policy.logits);
  json summary;
  summary["final_probs"] = probs;
  summary["baseline"] = policy.baseline;
  summary["steps"] = policy.step;
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_evolve(const CommonFlags& flags, const std::optional<std::string>& mode,
               const std::optional<std::string>& agents, const std::optional<std::string>& baseline,
               std::optional<int> K, std::optional<int> G) {
  auto cfg = load_config(flags);
  if (!cfg.evolve) throw config::ConfigError("config has no evolve section");
  if (flags.steps) cfg.evolve->steps = *flags.steps;
  if (mode) cfg.evolve->mode = *mode;
  if (agents) cfg.evolve->agents = *agents;
  if (baseline) cfg.evolve->baseline = *baseline;
  if (K) cfg.evolve->seeds = *K;
  if (G) cfg.evolve->group_size = *G;
  if (cfg.evolve->mode != "self" && cfg.evolve->mode != "neighbor")
    throw config::ConfigError("evolve: --mode must be self or neighbor");
  if (cfg.evolve->agents != "single" && cfg.evolve->agents != "multi")
    throw config::ConfigError("evolve: --agents must be single or multi");
  if (cfg.evolve->baseline != "evolving" && cfg.evolve->baseline != "static")
    throw config::ConfigError("evolve: --baseline must be evolving or static");

  const auto peptide = chuckles::parse_peptide(cfg.evolve->input);
  const auto evolve_cfg = config::to_evolve_config(*cfg.evolve, cfg.threads);
  auto agent_pool = evolve::make_agents(make_agent(cfg), evolve_cfg);
  const auto score = make_score_fn(cfg);

  fs::create_directories(cfg.out_dir);
  runlog::RunLog log((fs::path(cfg.out_dir) / "evolve_trace.jsonl").string());
  log.write("run_meta", {{"command", "evolve"},
                         {"seed", cfg.seed},
                         {"steps", evolve_cfg.steps},
                         {"K", evolve_cfg.seeds},
                         {"G", evolve_cfg.group_size},
                         {"targets", cfg.evolve->targets},
                         {"mode", cfg.evolve->mode},
                         {"agents", cfg.evolve->agents},
                         {"baseline", cfg.evolve->baseline}});

  std::mt19937_64 rng(cfg.seed);
  const auto trace = evolve::run_evolve(peptide, agent_pool, evolve_cfg, score, rng);

  for (const auto& rec : trace.records) {
    json payload = {{"seeds", rec.seeds},
                    {"seed_scores", rec.seed_scores},
                    {"n_candidates", rec.candidate_scores.size()},
                    {"pool_mean", rec.pool_mean},
                    {"pool_max", rec.pool_max},
                    {"unique_total", rec.unique_cumulative},
                    {"mean_unique", rec.mean_unique},
                    {"mean_all", rec.mean_all}};
    payload["candidate_scores"] = rec.candidate_scores;
    log.write("evolve_step", std::move(payload), rec.step);
  }

  // top-N peptides with per-component breakdowns
  {
    std::ofstream top((fs::path(cfg.out_dir) / "top_peptides.txt").string());
    for (const auto& sp : trace.best) {
      const auto breakdown = score_one(sp.peptide, cfg);
      top << sp.rendered << "\t" << breakdown.aggregate;
      for (const auto& c : breakdown.components)
        top << "\t" << c.name << "=" << c.unit << " (raw " << c.raw << ")";
      top << "\n";
    }
  }

  // histogram over unique peptides, bins of width 0.02
  {
    const auto bins = evolve::score_histogram(trace.unique);
    std::ofstream hist((fs::path(cfg.out_dir) / "histogram.tsv").string());
    hist << "bin_lo\tbin_hi\tcount\n";
    for (std::size_t i = 0; i < bins.size(); ++i)
      hist << i * 0.02 << "\t" << (i + 1) * 0.02 << "\t" << bins[i] << "\n";
  }

  for (std::size_t a = 0; a < agent_pool.size(); ++a) {
    const std::string name =
        agent_pool.size() == 1 ? "agent_checkpoint.json"
                               : "agent_checkpoint_" + std::to_string(a) + ".json";
    generator::save_checkpoint(agent_pool[a], (fs::path(cfg.out_dir) / name).string());
  }

  json summary;
  summary["unique_total"] = trace.unique.size();
  summary["mean_unique"] = trace.records.back().mean_unique;
  summary["mean_all"] = trace.records.back().mean_all;
  summary["best_score"] = trace.best.empty() ? 0.0 : trace.best.front().score;
  summary["best"] = trace.best.empty() ? "" : trace.best.front().rendered;
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_dataset(const CommonFlags& flags) {
  auto cfg = load_config(flags);
  if (!cfg.dataset) throw config::ConfigError("config has no dataset section");
  const auto lines =
      chuckles::load_corpus(config::resolve_path(cfg, cfg.dataset->corpus_path));
  const auto mode = cfg.dataset->mode == "shifted" ? pretrain::EpochMode::Shifted
                                                   : pretrain::EpochMode::Standard;
  fs::create_directories(cfg.out_dir);
  const std::string out_name =
      "pairs_epoch" + std::to_string(cfg.dataset->epoch) + "_" + cfg.dataset->mode + ".tsv";
  std::ofstream out((fs::path(cfg.out_dir) / out_name).string());
  if (!out) throw std::runtime_error("cannot open output file");
  const auto stats =
      pretrain::emit_epoch(lines, mode, cfg.seed, cfg.dataset->epoch, out, std::cerr);
  std::cout << "emitted=" << stats.emitted << " skipped=" << stats.skipped
            << " other_cyclic_shifted=" << stats.other_cyclic_shifted << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pepevolve: peptide lead optimization over CHUCKLES strings"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string input;
  std::size_t offset = 0;
  std::string positions_arg;
  std::optional<std::string> mode, agents, baseline;
  std::optional<int> K, G;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config_path, "run configuration file (JSON)");
    cmd->add_option("--seed", [&flags](const std::vector<std::string>& v) {
      flags.seed = std::stoull(v.front());
      return true;
    }, "rng seed override");
    cmd->add_option("--out", [&flags](const std::vector<std::string>& v) {
      flags.out_dir = v.front();
      return true;
    }, "output directory override");
    cmd->add_option("--steps", [&flags](const std::vector<std::string>& v) {
      flags.steps = std::stoi(v.front());
      return true;
    }, "step count override");
    cmd->add_option("--threads", [&flags](const std::vector<std::string>& v) {
      flags.threads = std::stoi(v.front());
      return true;
    }, "worker thread count override");
  };

  auto* tok = app.add_subcommand("tokenize", "tokenize a CHUCKLES string");
  tok->add_option("input", input, "CHUCKLES string")->required();

  auto* shf = app.add_subcommand("shift", "rotate monomer order");
  shf->add_option("input", input, "CHUCKLES string")->required();
  shf->add_option("--offset", offset, "rotation offset")->required();

  auto* msk = app.add_subcommand("mask", "mask monomers at the given positions");
  msk->add_option("input", input, "CHUCKLES string")->required();
  msk->add_option("--positions", positions_arg, "comma-separated 0-based positions")->required();

  auto* sco = app.add_subcommand("score", "score a peptide with the configured components");
  sco->add_option("--input", input, "CHUCKLES string (defaults to score.input)");
  add_common(sco);

  auto* rou = app.add_subcommand("route", "run the position-routing bandit");
  add_common(rou);

  auto* evo = app.add_subcommand("evolve", "run the evolving optimization loop");
  add_common(evo);
  evo->add_option("--mode", [&mode](const std::vector<std::string>& v) {
    mode = v.front();
    return true;
  }, "masking mode: self|neighbor");
  evo->add_option("--agents", [&agents](const std::vector<std::string>& v) {
    agents = v.front();
    return true;
  }, "agent mode: single|multi");
  evo->add_option("--baseline", [&baseline](const std::vector<std::string>& v) {
    baseline = v.front();
    return true;
  }, "seed policy: evolving|static");
  evo->add_option("-K", [&K](const std::vector<std::string>& v) {
    K = std::stoi(v.front());
    return true;
  }, "seed pool size");
  evo->add_option("-G", [&G](const std::vector<std::string>& v) {
    G = std::stoi(v.front());
    return true;
  }, "candidates per seed per context");

  auto* dat = app.add_subcommand("dataset", "emit masked/shifted training pairs");
  add_common(dat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (tok->parsed()) return cmd_tokenize(input);
    if (shf->parsed()) return cmd_shift(input, offset);
    if (msk->parsed()) {
      std::vector<std::size_t> positions;
      std::stringstream ss(positions_arg);
      std::string item;
      while (std::getline(ss, item, ',')) positions.push_back(std::stoull(item));
      return cmd_mask(input, positions);
    }
    if (sco->parsed()) return cmd_score(flags, input);
    if (rou->parsed()) return cmd_route(flags);
    if (evo->parsed()) return cmd_evolve(flags, mode, agents, baseline, K, G);
    if (dat->parsed()) return cmd_dataset(flags);
  } catch (const config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
