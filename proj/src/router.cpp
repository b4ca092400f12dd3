#include "pepevolve/router.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "pepevolve/evolve.hpp"
#include "pepevolve/util.hpp"

namespace pepevolve::router {

RouterPolicy RouterPolicy::uniform(std::size_t length) {
  RouterPolicy r;
  r.logits.assign(length, 0.0);
  return r;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  std::vector<double> p = logits;
  double max_logit = -1e300;
  for (double v : p) max_logit = std::max(max_logit, v);
  double z = 0.0;
  for (double& v : p) {
    v = std::exp(v - max_logit);
    z += v;
  }
  for (double& v : p) v /= z;
  return p;
}

double entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double beta_at(const RouterPolicy& r, int step) {
  if (step <= 0) return r.beta_start;
  if (r.total_steps <= 0 || step >= r.total_steps) return r.beta_end;
  const double t = static_cast<double>(step) / r.total_steps;
  return r.beta_start + (r.beta_end - r.beta_start) * t;
}

std::vector<SubsetSample> sample_subsets(const RouterPolicy& r, std::mt19937_64& rng) {
  const std::size_t L = r.logits.size();
  if (r.subset_size < 1 || static_cast<std::size_t>(r.subset_size) > L)
    throw std::invalid_argument("sample_subsets: K must satisfy 1 <= K <= L");
  const auto p = softmax(r.logits);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<SubsetSample> samples;
  samples.reserve(static_cast<std::size_t>(r.batch_size));
  for (int b = 0; b < r.batch_size; ++b) {
    SubsetSample s;
    std::vector<bool> taken(L, false);
    double remaining = 1.0;
    for (int k = 0; k < r.subset_size; ++k) {
      const double u = uniform(rng) * remaining;
      double acc = 0.0;
      int picked = -1;
      for (std::size_t i = 0; i < L; ++i) {
        if (taken[i]) continue;
        acc += p[i];
        if (u < acc) {
          picked = static_cast<int>(i);
          break;
        }
      }
      if (picked < 0) {  // numeric guard: take the last free index
        for (std::size_t i = L; i-- > 0;)
          if (!taken[i]) {
            picked = static_cast<int>(i);
            break;
          }
      }
      s.indices.push_back(picked);
      s.logprob += std::log(p[static_cast<std::size_t>(picked)] / remaining);
      remaining -= p[static_cast<std::size_t>(picked)];
      taken[static_cast<std::size_t>(picked)] = true;
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

double subset_logprob(const RouterPolicy& r, const std::vector<int>& indices) {
  const std::size_t L = r.logits.size();
  std::set<int> seen;
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= L)
      throw std::out_of_range("subset_logprob: index out of range");
    if (!seen.insert(i).second)
      throw std::invalid_argument("subset_logprob: duplicate index " + std::to_string(i));
  }
  const auto p = softmax(r.logits);
  double logprob = 0.0;
  double remaining = 1.0;
  for (int i : indices) {
    logprob += std::log(p[static_cast<std::size_t>(i)] / remaining);
    remaining -= p[static_cast<std::size_t>(i)];
  }
  return logprob;
}

namespace {

// d/dtheta_t of log q(i_1..i_K) for the sequential without-replacement draw.
void accumulate_logprob_gradient(const std::vector<double>& p, const std::vector<int>& indices,
                                 double coeff, std::vector<double>& grad) {
  const std::size_t L = p.size();
  std::vector<bool> taken(L, false);
  double remaining = 1.0;
  for (int idx : indices) {
    // log q_j = theta_i - log sum_{t in S_j} e^{theta_t}; d/dtheta_t =
    // delta(t=i) - p_t / remaining for t in S_j.
    for (std::size_t t = 0; t < L; ++t)
      if (!taken[t]) grad[t] -= coeff * p[t] / remaining;
    grad[static_cast<std::size_t>(idx)] += coeff;
    remaining -= p[static_cast<std::size_t>(idx)];
    taken[static_cast<std::size_t>(idx)] = true;
  }
}

}  // namespace

double router_loss(const RouterPolicy& r, const std::vector<SubsetSample>& samples, double beta) {
  if (samples.empty()) throw std::invalid_argument("router_loss: empty batch");
  double pg = 0.0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.mean_reward))
      throw std::invalid_argument("router_loss: non-finite reward");
    const double advantage = s.mean_reward - r.baseline;
    pg -= advantage * subset_logprob(r, s.indices);
  }
  pg /= static_cast<double>(samples.size());
  return pg - beta * entropy(softmax(r.logits));
}

std::vector<double> router_loss_gradient(const RouterPolicy& r,
                                         const std::vector<SubsetSample>& samples, double beta) {
  if (samples.empty()) throw std::invalid_argument("router_loss_gradient: empty batch");
  const auto p = softmax(r.logits);
  std::vector<double> grad(r.logits.size(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(samples.size());
  for (const auto& s : samples) {
    if (!std::isfinite(s.mean_reward))
      throw std::invalid_argument("router_loss_gradient: non-finite reward");
    const double advantage = s.mean_reward - r.baseline;
    accumulate_logprob_gradient(p, s.indices, -inv_b * advantage, grad);
  }
  // entropy term: dH/dtheta_t = -p_t (log p_t + H)
  const double h = entropy(p);
  for (std::size_t t = 0; t < p.size(); ++t) {
    const double dh = p[t] > 0.0 ? -p[t] * (std::log(p[t]) + h) : 0.0;
    grad[t] -= beta * dh;
  }
  return grad;
}

void router_step(RouterPolicy& r, const std::vector<SubsetSample>& samples) {
  const double beta = beta_at(r, r.step);
  const auto grad = router_loss_gradient(r, samples, beta);
  for (std::size_t t = 0; t < r.logits.size(); ++t) r.logits[t] -= r.learning_rate * grad[t];

  double batch_mean = 0.0;
  for (const auto& s : samples) batch_mean += s.mean_reward;
  batch_mean /= static_cast<double>(samples.size());
  r.baseline = r.lambda * r.baseline + (1.0 - r.lambda) * batch_mean;
  ++r.step;
}

std::vector<RouterTraceRecord> route(RouterPolicy& r, generator::GeneratorPolicy& agent,
                                     const chuckles::Peptide& peptide, const ScoreFn& score,
                                     const RouteOptions& options, std::mt19937_64& rng) {
  if (r.logits.size() != peptide.length())
    throw std::invalid_argument("route: router length does not match peptide length");

  util::ThreadPool pool(options.threads);
  std::vector<RouterTraceRecord> trace;
  trace.reserve(static_cast<std::size_t>(options.steps));

  for (int step = 0; step < options.steps; ++step) {
    auto samples = sample_subsets(r, rng);

    // All B evaluations see the same agent state; updates land afterwards
    // in subset index order.
    std::vector<generator::CandidateBatch> batches;
    batches.reserve(samples.size());
    for (const auto& s : samples) {
      std::vector<std::size_t> positions(s.indices.begin(), s.indices.end());
      const auto masked = chuckles::mask(peptide, positions);
      batches.push_back(generator::generate(agent, masked, options.candidates_per_subset, rng));
    }

    std::vector<std::vector<double>> rewards(batches.size());
    std::vector<std::pair<std::size_t, std::size_t>> flat;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      rewards[b].resize(batches[b].candidates.size());
      for (std::size_t g = 0; g < batches[b].candidates.size(); ++g) flat.emplace_back(b, g);
    }
    pool.parallel_for(flat.size(), [&](std::size_t i) {
      const auto [b, g] = flat[i];
      rewards[b][g] = score(batches[b].candidates[g].peptide);
    });

    for (std::size_t b = 0; b < batches.size(); ++b) {
      double mean = 0.0;
      for (double v : rewards[b]) mean += v;
      samples[b].mean_reward = mean / static_cast<double>(rewards[b].size());
    }

    if (options.update_agent) {
      for (std::size_t b = 0; b < batches.size(); ++b) {
        const auto advantages = evolve::group_relative_advantage(rewards[b], 1e-8);
        generator::update(agent, batches[b], advantages);
      }
    }

    router_step(r, samples);

    RouterTraceRecord rec;
    rec.step = r.step;
    rec.probs = softmax(r.logits);
    rec.entropy = entropy(rec.probs);
    rec.beta = beta_at(r, r.step);
    rec.baseline = r.baseline;
    for (const auto& s : samples) {
      rec.subset_rewards.push_back(s.mean_reward);
      rec.subsets.push_back(s.indices);
    }
    trace.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace pepevolve::router
