#include "pepevolve/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

namespace pepevolve::config {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

void require_file(const std::string& path, const std::string& where) {
  if (!fs::exists(path)) throw ConfigError(where + ": file does not exist: " + path);
}

scoring::TransformSpec parse_transform(const json& j, const std::string& where) {
  check_keys(j, where, {"kind", "midpoint", "steepness", "target", "width", "threshold"});
  scoring::TransformSpec t;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "reverse_sigmoid")
    t.kind = scoring::TransformKind::ReverseSigmoid;
  else if (kind == "sigmoid")
    t.kind = scoring::TransformKind::Sigmoid;
  else if (kind == "gaussian_target")
    t.kind = scoring::TransformKind::GaussianTarget;
  else if (kind == "step_max")
    t.kind = scoring::TransformKind::StepMax;
  else if (kind == "boolean_pass")
    t.kind = scoring::TransformKind::BooleanPass;
  else
    throw ConfigError(where + ": unknown transform kind '" + kind + "'");
  t.midpoint = j.value("midpoint", 0.0);
  t.steepness = j.value("steepness", 1.0);
  t.target = j.value("target", 0.0);
  t.width = j.value("width", 1.0);
  t.threshold = j.value("threshold", 0.0);
  return t;
}

scoring::DescriptorSource parse_source(const std::string& s, const std::string& where) {
  if (s == "hbd") return scoring::DescriptorSource::Hbd;
  if (s == "logp") return scoring::DescriptorSource::Logp;
  if (s == "max_ring") return scoring::DescriptorSource::MaxRing;
  if (s == "alerts") return scoring::DescriptorSource::Alerts;
  if (s == "surrogate_permeability") return scoring::DescriptorSource::SurrogatePermeability;
  if (s == "external") return scoring::DescriptorSource::External;
  throw ConfigError(where + ": unknown descriptor source '" + s + "'");
}

}  // namespace

scoring::ScoringConfig parse_scoring(const json& j, scoring::ScoreContext& ctx) {
  check_keys(j, "scoring",
             {"components", "epsilon_floor", "hard_zero", "hbd_rule", "logp_table", "alerts"});
  scoring::ScoringConfig cfg;
  cfg.epsilon_floor = j.value("epsilon_floor", 1e-3);
  cfg.hard_zero = j.value("hard_zero", false);
  const std::string rule = j.value("hbd_rule", std::string("donor_atoms"));
  if (rule == "donor_atoms")
    cfg.hbd_rule = molgraph::HbdRule::DonorAtoms;
  else if (rule == "donor_hydrogens")
    cfg.hbd_rule = molgraph::HbdRule::DonorHydrogens;
  else
    throw ConfigError("scoring: unknown hbd_rule '" + rule + "'");

  if (j.contains("logp_table")) {
    for (const auto& [key, value] : j.at("logp_table").items())
      ctx.table.entries[key] = value.get<double>();
  }
  if (j.contains("alerts")) {
    for (const auto& a : j.at("alerts")) {
      check_keys(a, "scoring.alerts[]", {"name", "pattern"});
      molgraph::Alert alert{a.at("name").get<std::string>(), a.at("pattern").get<std::string>()};
      try {
        chuckles::tokenize(alert.pattern);
      } catch (const std::exception& e) {
        throw ConfigError("scoring.alerts: pattern '" + alert.pattern +
                          "' does not tokenize: " + e.what());
      }
      ctx.alerts.alerts.push_back(std::move(alert));
    }
  }

  if (!j.contains("components")) throw ConfigError("scoring: missing 'components'");
  for (const auto& c : j.at("components")) {
    check_keys(c, "scoring.components[]",
               {"name", "source", "weight", "transform", "hbd_midpoint", "hbd_steepness",
                "logp_target", "logp_width", "lookup", "lookup_default"});
    scoring::Component comp;
    comp.name = c.at("name").get<std::string>();
    comp.source = parse_source(c.at("source").get<std::string>(), "scoring." + comp.name);
    comp.weight = c.value("weight", 1.0);
    if (c.contains("transform"))
      comp.transform = parse_transform(c.at("transform"), "scoring." + comp.name + ".transform");
    comp.hbd_midpoint = c.value("hbd_midpoint", 6.0);
    comp.hbd_steepness = c.value("hbd_steepness", 1.0);
    comp.logp_target = c.value("logp_target", 0.0);
    if (c.contains("logp_width")) comp.logp_width = c.at("logp_width").get<double>();
    if (c.contains("lookup"))
      for (const auto& [key, value] : c.at("lookup").items())
        comp.lookup[key] = value.get<double>();
    comp.lookup_default = c.value("lookup_default", 0.5);
    cfg.components.push_back(std::move(comp));
  }
  scoring::validate(cfg);
  return cfg;
}

RunConfig parse_run_config(const json& j, const std::string& base_dir) {
  check_keys(j, "config",
             {"seed", "out", "threads", "log_candidates", "scoring", "generator", "router",
              "evolve", "dataset", "score"});
  RunConfig cfg;
  cfg.base_dir = base_dir;
  cfg.seed = j.value("seed", 0ULL);
  cfg.out_dir = j.value("out", std::string("runs/out"));
  cfg.threads = j.value("threads", 1);
  if (cfg.threads < 1) throw ConfigError("config: threads must be >= 1");
  cfg.log_candidates = j.value("log_candidates", std::string("summary"));
  if (cfg.log_candidates != "summary" && cfg.log_candidates != "full")
    throw ConfigError("config: log_candidates must be 'summary' or 'full'");

  if (j.contains("scoring")) {
    cfg.scoring = parse_scoring(j.at("scoring"), cfg.score_context);
    cfg.has_scoring = true;
  }

  if (j.contains("generator")) {
    const auto& g = j.at("generator");
    check_keys(g, "generator", {"vocabulary", "temperature", "learning_rate"});
    GeneratorSection section;
    section.vocabulary_path = g.at("vocabulary").get<std::string>();
    section.temperature = g.value("temperature", 1.0);
    section.learning_rate = g.value("learning_rate", 0.25);
    if (section.temperature <= 0.0) throw ConfigError("generator: temperature must be positive");
    if (section.learning_rate <= 0.0)
      throw ConfigError("generator: learning_rate must be positive");
    cfg.generator = std::move(section);
    require_file(resolve_path(cfg, cfg.generator->vocabulary_path), "generator.vocabulary");
  }

  if (j.contains("router")) {
    const auto& r = j.at("router");
    check_keys(r, "router",
               {"input", "subset_size", "batch_size", "steps", "candidates_per_subset",
                "learning_rate", "lambda", "beta_start", "beta_end", "update_agent"});
    RouterSection section;
    section.input = r.at("input").get<std::string>();
    section.subset_size = r.value("subset_size", 1);
    section.batch_size = r.value("batch_size", 8);
    section.steps = r.value("steps", 500);
    section.candidates_per_subset = r.value("candidates_per_subset", 8);
    section.learning_rate = r.value("learning_rate", 0.25);
    section.lambda = r.value("lambda", 0.9);
    section.beta_start = r.value("beta_start", 0.05);
    section.beta_end = r.value("beta_end", 0.001);
    section.update_agent = r.value("update_agent", true);
    if (section.lambda < 0.0 || section.lambda >= 1.0)
      throw ConfigError("router: lambda must lie in [0,1)");
    cfg.router = std::move(section);
  }

  if (j.contains("evolve")) {
    const auto& e = j.at("evolve");
    check_keys(e, "evolve",
               {"input", "targets", "seeds", "group_size", "steps", "mode", "agents", "baseline",
                "epsilon", "dedup", "elitism", "top_n"});
    EvolveSection section;
    section.input = e.at("input").get<std::string>();
    for (const auto& t : e.at("targets")) section.targets.push_back(t.get<std::size_t>());
    section.seeds = e.value("seeds", 16);
    section.group_size = e.value("group_size", 8);
    section.steps = e.value("steps", 250);
    section.mode = e.value("mode", std::string("self"));
    section.agents = e.value("agents", std::string("single"));
    section.baseline = e.value("baseline", std::string("evolving"));
    section.epsilon = e.value("epsilon", 1e-8);
    section.dedup = e.value("dedup", true);
    section.elitism = e.value("elitism", true);
    section.top_n = e.value("top_n", 10);
    if (section.mode != "self" && section.mode != "neighbor")
      throw ConfigError("evolve: mode must be 'self' or 'neighbor'");
    if (section.agents != "single" && section.agents != "multi")
      throw ConfigError("evolve: agents must be 'single' or 'multi'");
    if (section.baseline != "evolving" && section.baseline != "static")
      throw ConfigError("evolve: baseline must be 'evolving' or 'static'");
    cfg.evolve = std::move(section);
  }

  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    check_keys(d, "dataset", {"corpus", "epoch", "mode"});
    DatasetSection section;
    section.corpus_path = d.at("corpus").get<std::string>();
    section.epoch = d.value("epoch", 0ULL);
    section.mode = d.value("mode", std::string("standard"));
    if (section.mode != "standard" && section.mode != "shifted")
      throw ConfigError("dataset: mode must be 'standard' or 'shifted'");
    cfg.dataset = std::move(section);
    require_file(resolve_path(cfg, cfg.dataset->corpus_path), "dataset.corpus");
  }

  if (j.contains("score")) {
    const auto& s = j.at("score");
    check_keys(s, "score", {"input"});
    ScoreSection section;
    section.input = s.at("input").get<std::string>();
    cfg.score = std::move(section);
  }

  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_run_config(j, fs::path(path).parent_path().string());
}

evolve::EvolveConfig to_evolve_config(const EvolveSection& section, int threads) {
  evolve::EvolveConfig cfg;
  cfg.targets = section.targets;
  cfg.seeds = section.seeds;
  cfg.group_size = section.group_size;
  cfg.steps = section.steps;
  cfg.mode = section.mode == "neighbor" ? evolve::MaskMode::NeighborMask
                                        : evolve::MaskMode::SelfMask;
  cfg.agents = section.agents == "multi" ? evolve::AgentMode::Multi : evolve::AgentMode::Single;
  cfg.static_baseline = section.baseline == "static";
  cfg.epsilon = section.epsilon;
  cfg.dedup = section.dedup;
  cfg.elitism = section.elitism;
  cfg.top_n = section.top_n;
  cfg.threads = threads;
  return cfg;
}

router::RouterPolicy to_router_policy(const RouterSection& section, std::size_t length) {
  auto policy = router::RouterPolicy::uniform(length);
  policy.subset_size = section.subset_size;
  policy.batch_size = section.batch_size;
  policy.total_steps = section.steps;
  policy.learning_rate = section.learning_rate;
  policy.lambda = section.lambda;
  policy.beta_start = section.beta_start;
  policy.beta_end = section.beta_end;
  return policy;
}

std::string resolve_path(const RunConfig& cfg, const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute() || cfg.base_dir.empty()) return path;
  return (fs::path(cfg.base_dir) / p).string();
}

}  // namespace pepevolve::config
