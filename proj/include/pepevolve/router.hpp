#pragma once

#include <functional>
#include <random>
#include <vector>

#include "pepevolve/chuckles.hpp"
#include "pepevolve/generator.hpp"

namespace pepevolve::util {
class ThreadPool;
}

namespace pepevolve::router {

/// Context-free multi-armed bandit over residue positions. Subsets are drawn
/// by sequential sampling without replacement from softmax(logits); updates
/// are REINFORCE with an EMA baseline and a linearly annealed entropy bonus.
struct RouterPolicy {
  std::vector<double> logits;  // length L
  double baseline = 0.0;
  double lambda = 0.9;
  double beta_start = 0.05;
  double beta_end = 0.001;
  int total_steps = 500;
  int step = 0;
  double learning_rate = 0.25;
  int batch_size = 8;  // B
  int subset_size = 1; // K

  static RouterPolicy uniform(std::size_t length);
};

struct SubsetSample {
  std::vector<int> indices;  // K unique positions, in sampled order
  double logprob = 0.0;
  double mean_reward = 0.0;
};

std::vector<double> softmax(const std::vector<double>& logits);
double entropy(const std::vector<double>& probs);
double beta_at(const RouterPolicy& r, int step);

std::vector<SubsetSample> sample_subsets(const RouterPolicy& r, std::mt19937_64& rng);

/// Log-probability of drawing `indices` in that order without replacement.
double subset_logprob(const RouterPolicy& r, const std::vector<int>& indices);

/// Policy-gradient loss -(1/B) sum_b A_b log pi(I_b) - beta * H(pi), with
/// advantages taken against the current (pre-update) baseline.
double router_loss(const RouterPolicy& r, const std::vector<SubsetSample>& samples, double beta);
std::vector<double> router_loss_gradient(const RouterPolicy& r,
                                         const std::vector<SubsetSample>& samples, double beta);

/// One routing update: gradient step on the loss, then the EMA baseline
/// update, then the step counter.
void router_step(RouterPolicy& r, const std::vector<SubsetSample>& samples);

struct RouterTraceRecord {
  int step = 0;
  std::vector<double> probs;  // post-update
  double entropy = 0.0;
  double beta = 0.0;
  double baseline = 0.0;
  std::vector<double> subset_rewards;
  std::vector<std::vector<int>> subsets;
};

using ScoreFn = std::function<double(const chuckles::Peptide&)>;

struct RouteOptions {
  int steps = 500;
  int candidates_per_subset = 8;  // G
  bool update_agent = true;
  int threads = 1;
};

/// Full routing loop: per step sample B subsets, mask, generate G candidates
/// each, score, update the agent per subset with group-relative advantages
/// (optional), then update the router from the subset mean rewards.
std::vector<RouterTraceRecord> route(RouterPolicy& r, generator::GeneratorPolicy& agent,
                                     const chuckles::Peptide& peptide, const ScoreFn& score,
                                     const RouteOptions& options, std::mt19937_64& rng);

}  // namespace pepevolve::router
