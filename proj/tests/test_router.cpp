#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "pepevolve/chuckles.hpp"
#include "pepevolve/generator.hpp"
#include "pepevolve/router.hpp"

using namespace pepevolve;
using namespace pepevolve::router;

TEST_CASE("subset logprob: single index equals log softmax") {
  auto r = RouterPolicy::uniform(5);
  r.logits = {0.3, -0.2, 1.1, 0.0, -0.7};
  const auto p = softmax(r.logits);
  for (int i = 0; i < 5; ++i)
    CHECK(subset_logprob(r, {i}) ==
          doctest::Approx(std::log(p[static_cast<std::size_t>(i)])).epsilon(1e-12));
}

TEST_CASE("subset logprob errors") {
  auto r = RouterPolicy::uniform(4);
  CHECK_THROWS_AS(subset_logprob(r, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(subset_logprob(r, {7}), std::out_of_range);
}

TEST_CASE("ordered K-tuples exhaust the probability mass") {
  auto r = RouterPolicy::uniform(4);
  r.logits = {0.4, -0.3, 0.9, 0.1};

  SUBCASE("K = L: permutations sum to one") {
    double total = 0.0;
    std::vector<int> perm = {0, 1, 2, 3};
    std::sort(perm.begin(), perm.end());
    do {
      total += std::exp(subset_logprob(r, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("K = 2: ordered pairs sum to one; uniform gives 1/12 each") {
    double total = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) total += std::exp(subset_logprob(r, {i, j}));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    auto uniform = RouterPolicy::uniform(4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j)
          CHECK(std::exp(subset_logprob(uniform, {i, j})) ==
                doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  }
}

TEST_CASE("sampled subsets are unique, in range, and match their logprob") {
  auto r = RouterPolicy::uniform(6);
  r.logits = {0.5, -0.5, 0.2, 0.9, -1.0, 0.0};
  r.subset_size = 3;
  r.batch_size = 16;
  std::mt19937_64 rng(21);
  const auto samples = sample_subsets(r, rng);
  REQUIRE(samples.size() == 16);
  for (const auto& s : samples) {
    REQUIRE(s.indices.size() == 3);
    std::set<int> uniq(s.indices.begin(), s.indices.end());
    CHECK(uniq.size() == 3);
    CHECK(s.logprob == doctest::Approx(subset_logprob(r, s.indices)).epsilon(1e-12));
    CHECK(std::exp(s.logprob) > 0.0);
    CHECK(std::exp(s.logprob) <= 1.0);
  }
  r.subset_size = 7;
  CHECK_THROWS_AS(sample_subsets(r, rng), std::invalid_argument);
}

TEST_CASE("baseline EMA arithmetic") {
  auto r = RouterPolicy::uniform(4);
  r.lambda = 0.9;
  r.learning_rate = 0.0;  // isolate the baseline update
  std::vector<SubsetSample> samples(1);
  samples[0].indices = {1};
  samples[0].mean_reward = 1.0;
  router_step(r, samples);
  CHECK(r.baseline == doctest::Approx(0.1).epsilon(1e-15));

  SUBCASE("closed form after n constant-reward steps") {
    auto q = RouterPolicy::uniform(4);
    q.lambda = 0.9;
    q.learning_rate = 0.0;
    const double reward = 0.73;
    std::vector<SubsetSample> batch(3);
    for (auto& s : batch) s.indices = {0};
    for (auto& s : batch) s.mean_reward = reward;
    for (int n = 1; n <= 40; ++n) {
      router_step(q, batch);
      const double expected = reward * (1.0 - std::pow(q.lambda, n));
      CHECK(q.baseline == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("entropy of the uniform policy is ln L") {
  const auto r = RouterPolicy::uniform(9);
  CHECK(entropy(softmax(r.logits)) == doctest::Approx(std::log(9.0)).epsilon(1e-12));
}

TEST_CASE("beta anneals linearly between its endpoints") {
  auto r = RouterPolicy::uniform(4);
  r.beta_start = 0.05;
  r.beta_end = 0.001;
  r.total_steps = 200;
  CHECK(beta_at(r, 0) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(beta_at(r, 200) == doctest::Approx(0.001).epsilon(1e-15));
  CHECK(beta_at(r, 100) == doctest::Approx(0.5 * (0.05 + 0.001)).epsilon(1e-12));
  CHECK(beta_at(r, 50) - beta_at(r, 0) ==
        doctest::Approx(beta_at(r, 150) - beta_at(r, 100)).epsilon(1e-12));
  CHECK(beta_at(r, 500) == doctest::Approx(0.001).epsilon(1e-15));  // clamped past the end
}

TEST_CASE("positive advantage raises the sampled subset's probability") {
  auto r = RouterPolicy::uniform(5);
  r.beta_start = r.beta_end = 0.0;
  r.baseline = 0.0;
  std::vector<SubsetSample> samples(1);
  samples[0].indices = {2};
  samples[0].mean_reward = 1.0;
  const double before = softmax(r.logits)[2];
  router_step(r, samples);
  const double after = softmax(r.logits)[2];
  CHECK(after > before);

  SUBCASE("subset total probability rises for K = 2 as well") {
    auto q = RouterPolicy::uniform(5);
    q.beta_start = q.beta_end = 0.0;
    std::vector<SubsetSample> batch(1);
    batch[0].indices = {1, 3};
    batch[0].mean_reward = 0.8;
    const auto p0 = softmax(q.logits);
    router_step(q, batch);
    const auto p1 = softmax(q.logits);
    CHECK(p1[1] + p1[3] > p0[1] + p0[3]);
  }
}

TEST_CASE("zero reward on a uniform policy leaves it exactly uniform") {
  auto r = RouterPolicy::uniform(8);
  std::vector<SubsetSample> samples(4);
  std::mt19937_64 rng(2);
  for (int step = 0; step < 100; ++step) {
    auto drawn = sample_subsets(r, rng);
    for (auto& s : drawn) s.mean_reward = 0.0;
    router_step(r, drawn);
  }
  const auto p = softmax(r.logits);
  for (double v : p) CHECK(std::abs(v - 1.0 / 8.0) < 1e-12);
}

TEST_CASE("probabilities stay a valid distribution through noisy updates") {
  auto r = RouterPolicy::uniform(7);
  r.subset_size = 2;
  r.batch_size = 6;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> reward(0.0, 1.0);
  for (int step = 0; step < 200; ++step) {
    auto samples = sample_subsets(r, rng);
    for (auto& s : samples) s.mean_reward = reward(rng);
    router_step(r, samples);
    const auto p = softmax(r.logits);
    double total = 0.0;
    for (double v : p) {
      CHECK(v >= 0.0);
      total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(router_step(r, {SubsetSample{{0}, 0.0,
                                               std::numeric_limits<double>::quiet_NaN()}}),
                  std::invalid_argument);
}

TEST_CASE("router loss gradient matches central finite differences") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> logit(-1.0, 1.0);
  std::uniform_real_distribution<double> reward(-1.0, 1.0);
  std::uniform_int_distribution<int> l_dist(2, 12);
  std::uniform_int_distribution<int> b_dist(1, 8);
  std::uniform_real_distribution<double> beta_dist(0.0, 0.1);
  const double h = 1e-5;

  for (int trial = 0; trial < 100; ++trial) {
    const int L = l_dist(rng);
    auto r = RouterPolicy::uniform(static_cast<std::size_t>(L));
    for (auto& t : r.logits) t = logit(rng);
    r.subset_size = std::min(L, 1 + (trial % 2));
    r.batch_size = b_dist(rng);
    r.baseline = reward(rng);
    const double beta = beta_dist(rng);

    auto samples = sample_subsets(r, rng);
    for (auto& s : samples) s.mean_reward = reward(rng);

    const auto grad = router_loss_gradient(r, samples, beta);
    for (int t = 0; t < L; ++t) {
      auto plus = r;
      plus.logits[static_cast<std::size_t>(t)] += h;
      auto minus = r;
      minus.logits[static_cast<std::size_t>(t)] -= h;
      const double fd =
          (router_loss(plus, samples, beta) - router_loss(minus, samples, beta)) / (2 * h);
      const double denom = std::max(
          {std::abs(fd), std::abs(grad[static_cast<std::size_t>(t)]), 1e-6});
      CHECK(std::abs(fd - grad[static_cast<std::size_t>(t)]) / denom <= 1e-5);
    }
  }
}

TEST_CASE("route learns the rewarding position on a toy landscape") {
  // placeholder 4-mer; filling position 2 with "B" doubles the reward
  generator::GeneratorPolicy agent;
  agent.vocabulary = generator::vocabulary_from_lines({"A", "B"});
  agent.learning_rate = 0.2;

  const auto peptide = chuckles::parse_peptide("A|A|A|A");
  auto policy = RouterPolicy::uniform(4);
  policy.total_steps = 250;

  const ScoreFn score = [](const chuckles::Peptide& p) {
    return p.monomers[2].raw() == "B" ? 0.9 : 0.3;
  };

  RouteOptions options;
  options.steps = 250;
  options.candidates_per_subset = 8;
  std::mt19937_64 rng(4);
  const auto trace = route(policy, agent, peptide, score, options, rng);
  REQUIRE(trace.size() == 250);
  CHECK(trace.back().probs[2] > 0.8);
  for (const auto& rec : trace) {
    double total = 0.0;
    for (double v : rec.probs) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}
