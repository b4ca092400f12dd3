#include "pepevolve/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "pepevolve/util.hpp"

namespace pepevolve::evolve {

std::vector<double> group_relative_advantage(const std::vector<double>& rewards, double epsilon) {
  if (rewards.size() < 2)
    throw std::invalid_argument("group_relative_advantage: need at least 2 rewards");
  if (epsilon <= 0.0) throw std::invalid_argument("group_relative_advantage: epsilon must be > 0");
  const auto [lo, hi] = std::minmax_element(rewards.begin(), rewards.end());
  if (*lo == *hi) return std::vector<double>(rewards.size(), 0.0);
  const double n = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= n;  // population variance
  const double denom = std::sqrt(var) + epsilon;
  std::vector<double> advantages(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) advantages[i] = (rewards[i] - mean) / denom;
  return advantages;
}

namespace {

std::vector<std::size_t> context_mask_indices(const std::vector<std::size_t>& targets,
                                              MaskMode mode, std::size_t context_index) {
  std::vector<std::size_t> indices;
  if (mode == MaskMode::SelfMask) {
    indices.push_back(targets[context_index]);
  } else {
    for (std::size_t k = 0; k < targets.size(); ++k)
      if (k != context_index) indices.push_back(targets[k]);
  }
  return indices;
}

}  // namespace

std::vector<std::pair<std::size_t, chuckles::MaskedPeptide>> build_contexts(
    const chuckles::Peptide& seed, const std::vector<std::size_t>& targets, MaskMode mode) {
  if (targets.empty()) throw std::invalid_argument("build_contexts: empty target set");
  for (std::size_t t : targets)
    if (t >= seed.length()) throw std::out_of_range("build_contexts: target out of range");
  if (mode == MaskMode::NeighborMask && targets.size() < 2)
    throw std::invalid_argument("build_contexts: neighbor-mask needs at least 2 targets");

  std::vector<std::pair<std::size_t, chuckles::MaskedPeptide>> contexts;
  contexts.reserve(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k)
    contexts.emplace_back(targets[k],
                          chuckles::mask(seed, context_mask_indices(targets, mode, k)));
  return contexts;
}

Agents make_agents(const generator::GeneratorPolicy& prototype, const EvolveConfig& cfg) {
  Agents agents;
  const std::size_t n = cfg.agents == AgentMode::Multi ? cfg.targets.size() : 1;
  agents.assign(n, prototype);
  return agents;
}

namespace {

void validate_config(const EvolveConfig& cfg) {
  if (cfg.targets.empty()) throw std::invalid_argument("evolve: target set O is empty");
  if (cfg.seeds < 1) throw std::invalid_argument("evolve: K must be at least 1");
  if (cfg.group_size < 2) throw std::invalid_argument("evolve: G must be at least 2");
  if (cfg.mode == MaskMode::NeighborMask && cfg.targets.size() < 2)
    throw std::invalid_argument("evolve: neighbor-mask needs at least 2 targets");
}

generator::GeneratorPolicy& agent_for(Agents& agents, const EvolveConfig& cfg,
                                      std::size_t context_index) {
  if (cfg.agents == AgentMode::Multi) {
    if (agents.size() != cfg.targets.size())
      throw std::invalid_argument("evolve: multi-agent mode needs one agent per target");
    return agents[context_index];
  }
  if (agents.empty()) throw std::invalid_argument("evolve: no agents");
  return agents.front();
}

void record_uniques(EvolveTrace& trace, const std::vector<ScoredPeptide>& scored) {
  for (const auto& sp : scored) {
    trace.sum_all += sp.score;
    ++trace.count_all;
    if (trace.seen.insert(sp.rendered).second) {
      trace.unique.emplace_back(sp.rendered, sp.score);
      trace.sum_unique += sp.score;
    }
  }
}

EvolveStepRecord make_record(int step, const EvolveState& state, const EvolveTrace& trace,
                             std::vector<double> candidate_scores) {
  EvolveStepRecord rec;
  rec.step = step;
  for (const auto& s : state.seeds) {
    rec.seeds.push_back(s.rendered);
    rec.seed_scores.push_back(s.score);
  }
  double mean = 0.0;
  double best = 0.0;
  for (double v : candidate_scores) {
    mean += v;
    best = std::max(best, v);
  }
  rec.pool_mean = candidate_scores.empty() ? 0.0 : mean / candidate_scores.size();
  rec.pool_max = best;
  rec.candidate_scores = std::move(candidate_scores);
  rec.unique_cumulative = trace.unique.size();
  rec.mean_unique = trace.unique.empty() ? 0.0 : trace.sum_unique / trace.unique.size();
  rec.mean_all = trace.count_all == 0 ? 0.0 : trace.sum_all / trace.count_all;
  return rec;
}

}  // namespace

EvolveState init_seeds(Agents& agents, const chuckles::Peptide& peptide, const EvolveConfig& cfg,
                       const ScoreFn& score, std::mt19937_64& rng, EvolveTrace& trace) {
  validate_config(cfg);
  EvolveState state;
  state.step = 0;

  std::vector<ScoredPeptide> initial;
  if (cfg.static_baseline) {
    ScoredPeptide sp{peptide, chuckles::render(peptide), score(peptide)};
    initial.assign(static_cast<std::size_t>(cfg.seeds), sp);
  } else {
    const auto masked = chuckles::mask(peptide, cfg.targets);
    auto& agent = agent_for(agents, cfg, 0);
    const auto batch = generator::generate(agent, masked, cfg.seeds, rng);
    for (const auto& cand : batch.candidates) {
      ScoredPeptide sp;
      sp.peptide = cand.peptide;
      sp.rendered = chuckles::render(cand.peptide);
      sp.score = score(cand.peptide);
      initial.push_back(std::move(sp));
    }
  }

  record_uniques(trace, initial);
  state.seeds = initial;
  state.pool = std::move(initial);

  std::vector<double> scores;
  for (const auto& s : state.pool) scores.push_back(s.score);
  trace.records.push_back(make_record(0, state, trace, std::move(scores)));
  return state;
}

void evolve_step(EvolveState& state, Agents& agents, const chuckles::Peptide& original,
                 const EvolveConfig& cfg, const ScoreFn& score, std::mt19937_64& rng,
                 EvolveTrace& trace) {
  validate_config(cfg);
  util::ThreadPool pool(cfg.threads);

  std::vector<ScoredPeptide> step_pool;
  step_pool.reserve(cfg.targets.size() * state.seeds.size() *
                    static_cast<std::size_t>(cfg.group_size));

  for (std::size_t ci = 0; ci < cfg.targets.size(); ++ci) {
    auto& agent = agent_for(agents, cfg, ci);
    const auto indices = context_mask_indices(cfg.targets, cfg.mode, ci);
    for (const auto& seed : state.seeds) {
      const auto masked = chuckles::mask(seed.peptide, indices);
      auto batch = generator::generate(agent, masked, cfg.group_size, rng);

      std::vector<double> rewards(batch.candidates.size());
      pool.parallel_for(batch.candidates.size(), [&](std::size_t g) {
        rewards[g] = score(batch.candidates[g].peptide);
      });

      const auto advantages = group_relative_advantage(rewards, cfg.epsilon);
      generator::update(agent, batch, advantages);

      for (std::size_t g = 0; g < batch.candidates.size(); ++g) {
        ScoredPeptide sp;
        sp.peptide = std::move(batch.candidates[g].peptide);
        sp.rendered = chuckles::render(sp.peptide);
        sp.score = rewards[g];
        step_pool.push_back(std::move(sp));
      }
    }
  }

  record_uniques(trace, step_pool);

  std::vector<double> candidate_scores;
  candidate_scores.reserve(step_pool.size());
  for (const auto& sp : step_pool) candidate_scores.push_back(sp.score);

  std::vector<ScoredPeptide> selection = step_pool;
  if (cfg.elitism)
    for (const auto& s : state.seeds) selection.push_back(s);
  if (cfg.dedup) {
    std::unordered_set<std::string> kept;
    std::vector<ScoredPeptide> deduped;
    deduped.reserve(selection.size());
    for (auto& sp : selection)
      if (kept.insert(sp.rendered).second) deduped.push_back(std::move(sp));
    selection = std::move(deduped);
  }
  std::stable_sort(selection.begin(), selection.end(),
                   [](const ScoredPeptide& a, const ScoredPeptide& b) { return a.score > b.score; });
  const std::size_t keep =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.seeds), selection.size());
  std::vector<ScoredPeptide> next_seeds(selection.begin(),
                                        selection.begin() + static_cast<std::ptrdiff_t>(keep));

  ++state.step;
  state.pool = std::move(step_pool);
  if (cfg.static_baseline) {
    ScoredPeptide sp{original, chuckles::render(original), score(original)};
    state.seeds.assign(static_cast<std::size_t>(cfg.seeds), sp);
  } else {
    state.seeds = std::move(next_seeds);
  }

  trace.records.push_back(make_record(state.step, state, trace, std::move(candidate_scores)));
}

EvolveTrace run_evolve(const chuckles::Peptide& peptide, Agents& agents, const EvolveConfig& cfg,
                       const ScoreFn& score, std::mt19937_64& rng) {
  EvolveTrace trace;
  EvolveState state = init_seeds(agents, peptide, cfg, score, rng, trace);
  for (int step = 0; step < cfg.steps; ++step)
    evolve_step(state, agents, peptide, cfg, score, rng, trace);

  std::vector<ScoredPeptide> ranked;
  ranked.reserve(trace.unique.size());
  for (const auto& [rendered, s] : trace.unique) {
    ScoredPeptide sp;
    sp.rendered = rendered;
    sp.score = s;
    ranked.push_back(std::move(sp));
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const ScoredPeptide& a, const ScoredPeptide& b) { return a.score > b.score; });
  const std::size_t keep =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.top_n), ranked.size());
  trace.best.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep));
  for (auto& sp : trace.best)
    sp.peptide = chuckles::parse_peptide(sp.rendered, chuckles::ClosurePolicy::AllowDangling);
  return trace;
}

std::vector<std::size_t> score_histogram(
    const std::vector<std::pair<std::string, double>>& unique) {
  std::vector<std::size_t> bins(50, 0);
  for (const auto& [_, s] : unique) {
    int bin = static_cast<int>(std::floor(s / 0.02));
    bin = std::max(0, std::min(49, bin));
    ++bins[static_cast<std::size_t>(bin)];
  }
  return bins;
}

}  // namespace pepevolve::evolve
