#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "pepevolve/chuckles.hpp"
#include "pepevolve/generator.hpp"

namespace pepevolve::evolve {

enum class MaskMode { SelfMask, NeighborMask };
enum class AgentMode { Single, Multi };

struct EvolveConfig {
  std::vector<std::size_t> targets;  // O, ordered
  int seeds = 16;                    // K
  int group_size = 8;                // G
  MaskMode mode = MaskMode::SelfMask;
  AgentMode agents = AgentMode::Single;
  int steps = 250;
  double epsilon = 1e-8;  // GRA stability constant
  bool dedup = true;
  bool elitism = true;
  bool static_baseline = false;  // freeze seeds at the initial peptide
  int threads = 1;
  int top_n = 10;
};

/// Standardize rewards within a group: (R - mean) / (population std + eps).
std::vector<double> group_relative_advantage(const std::vector<double>& rewards, double epsilon);

/// Self-mask: context for target i masks {i}. Neighbor-mask: context for
/// target i masks O \ {i} (requires |O| >= 2).
std::vector<std::pair<std::size_t, chuckles::MaskedPeptide>> build_contexts(
    const chuckles::Peptide& seed, const std::vector<std::size_t>& targets, MaskMode mode);

using ScoreFn = std::function<double(const chuckles::Peptide&)>;

struct ScoredPeptide {
  chuckles::Peptide peptide;
  std::string rendered;
  double score = 0.0;
};

struct EvolveStepRecord {
  int step = 0;
  std::vector<std::string> seeds;
  std::vector<double> seed_scores;
  std::vector<double> candidate_scores;  // all candidates of the step, in order
  double pool_mean = 0.0;
  double pool_max = 0.0;
  std::size_t unique_cumulative = 0;
  double mean_unique = 0.0;  // cumulative, over unique peptides
  double mean_all = 0.0;     // cumulative, over every generated candidate
};

struct EvolveState {
  int step = 0;
  std::vector<ScoredPeptide> seeds;
  std::vector<ScoredPeptide> pool;
};

struct EvolveTrace {
  std::vector<EvolveStepRecord> records;
  // first-seen order of unique peptides with their raw scores
  std::vector<std::pair<std::string, double>> unique;
  std::unordered_set<std::string> seen;
  double sum_all = 0.0;
  double sum_unique = 0.0;
  std::size_t count_all = 0;
  std::vector<ScoredPeptide> best;  // top_n unique, best first
};

using Agents = std::vector<generator::GeneratorPolicy>;  // 1 (single) or |O| (multi)

Agents make_agents(const generator::GeneratorPolicy& prototype, const EvolveConfig& cfg);

/// Step-0 seeds: K candidates generated from M(p, O), scored raw.
EvolveState init_seeds(Agents& agents, const chuckles::Peptide& peptide, const EvolveConfig& cfg,
                       const ScoreFn& score, std::mt19937_64& rng, EvolveTrace& trace);

/// One evolving step: per context (O order) and seed, generate G candidates,
/// score, apply group-relative advantages to the context's agent, pool all
/// candidates, then pick the top-K raw-score peptides as the next seeds.
void evolve_step(EvolveState& state, Agents& agents, const chuckles::Peptide& original,
                 const EvolveConfig& cfg, const ScoreFn& score, std::mt19937_64& rng,
                 EvolveTrace& trace);

EvolveTrace run_evolve(const chuckles::Peptide& peptide, Agents& agents, const EvolveConfig& cfg,
                       const ScoreFn& score, std::mt19937_64& rng);

/// Unique-score histogram over [0,1] with bins of width 0.02 (50 bins; 1.0
/// falls in the last bin).
std::vector<std::size_t> score_histogram(const std::vector<std::pair<std::string, double>>& unique);

}  // namespace pepevolve::evolve
