#include "pepevolve/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pepevolve/util.hpp"

#include <json.hpp>

namespace pepevolve::generator {

using nlohmann::json;

std::uint64_t MonomerVocabulary::content_hash() const {
  std::string joined;
  for (const auto& e : entries) {
    joined += e;
    joined += '\n';
  }
  return util::fnv1a64(joined);
}

MonomerVocabulary vocabulary_from_lines(const std::vector<std::string>& lines) {
  MonomerVocabulary v;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (const auto& raw : lines) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!seen.insert(line).second)
      throw std::runtime_error("vocabulary line " + std::to_string(line_no) +
                               ": duplicate monomer '" + line + "'");
    try {
      v.monomers.push_back(chuckles::parse_monomer(line));
    } catch (const std::exception& e) {
      throw std::runtime_error("vocabulary line " + std::to_string(line_no) + ": " + e.what());
    }
    v.entries.push_back(line);
  }
  if (v.entries.empty()) throw std::runtime_error("vocabulary is empty");
  return v;
}

MonomerVocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return vocabulary_from_lines(lines);
}

std::vector<double> GeneratorPolicy::logits_at(const PositionKey& key) const {
  auto it = logits.find(key);
  if (it != logits.end()) return it->second;
  return std::vector<double>(vocabulary.size(), 0.0);
}

std::vector<double> GeneratorPolicy::probs(const PositionKey& key) const {
  auto theta = logits_at(key);
  double max_logit = -1e300;
  for (double& t : theta) {
    t /= temperature;
    max_logit = std::max(max_logit, t);
  }
  double z = 0.0;
  for (double& t : theta) {
    t = std::exp(t - max_logit);
    z += t;
  }
  for (double& t : theta) t /= z;
  return theta;
}

namespace {

int sample_index(const std::vector<double>& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

CandidateBatch generate(const GeneratorPolicy& policy, const chuckles::MaskedPeptide& masked,
                        int G, std::mt19937_64& rng, const std::string& context_tag) {
  if (G < 1) throw std::invalid_argument("generate: G must be at least 1");
  if (policy.vocabulary.size() == 0) throw std::invalid_argument("generate: empty vocabulary");

  CandidateBatch batch;
  batch.source = masked;
  batch.context_tag = context_tag;
  batch.candidates.reserve(static_cast<std::size_t>(G));

  std::vector<std::vector<double>> position_probs;
  position_probs.reserve(masked.masked.size());
  for (std::size_t pos : masked.masked)
    position_probs.push_back(policy.probs({context_tag, static_cast<int>(pos)}));

  for (int g = 0; g < G; ++g) {
    Candidate cand;
    std::vector<chuckles::Monomer> replacements;
    replacements.reserve(masked.masked.size());
    for (std::size_t k = 0; k < masked.masked.size(); ++k) {
      const int entry = sample_index(position_probs[k], rng);
      cand.choices.push_back({static_cast<int>(masked.masked[k]), entry});
      replacements.push_back(policy.vocabulary.monomers[static_cast<std::size_t>(entry)]);
    }
    cand.peptide = chuckles::substitute(masked, replacements);
    batch.candidates.push_back(std::move(cand));
  }
  return batch;
}

GradientTable update_gradient(const GeneratorPolicy& policy, const CandidateBatch& batch,
                              const std::vector<double>& advantages) {
  if (advantages.size() != batch.candidates.size())
    throw std::invalid_argument("update: advantage vector length mismatch");
  const double g_count = static_cast<double>(batch.candidates.size());

  GradientTable grad;
  for (std::size_t g = 0; g < batch.candidates.size(); ++g) {
    const double a = advantages[g];
    if (a == 0.0) continue;
    for (const Choice& choice : batch.candidates[g].choices) {
      const PositionKey key{batch.context_tag, choice.position};
      auto [it, inserted] = grad.try_emplace(key, policy.vocabulary.size(), 0.0);
      const auto p = policy.probs(key);
      const double scale = a / (g_count * policy.temperature);
      for (std::size_t i = 0; i < p.size(); ++i) it->second[i] += scale * p[i];
      it->second[static_cast<std::size_t>(choice.entry)] -= scale;
    }
  }
  return grad;
}

double surrogate_loss(const GeneratorPolicy& policy, const CandidateBatch& batch,
                      const std::vector<double>& advantages) {
  if (advantages.size() != batch.candidates.size())
    throw std::invalid_argument("surrogate_loss: advantage vector length mismatch");
  double loss = 0.0;
  for (std::size_t g = 0; g < batch.candidates.size(); ++g) {
    for (const Choice& choice : batch.candidates[g].choices) {
      const auto p = policy.probs({batch.context_tag, choice.position});
      loss -= advantages[g] * std::log(p[static_cast<std::size_t>(choice.entry)]);
    }
  }
  return loss / static_cast<double>(batch.candidates.size());
}

void update(GeneratorPolicy& policy, const CandidateBatch& batch,
            const std::vector<double>& advantages) {
  const auto grad = update_gradient(policy, batch, advantages);
  for (const auto& [key, g] : grad) {
    auto it = policy.logits.find(key);
    if (it == policy.logits.end())
      it = policy.logits.emplace(key, std::vector<double>(policy.vocabulary.size(), 0.0)).first;
    for (std::size_t i = 0; i < g.size(); ++i) it->second[i] -= policy.learning_rate * g[i];
  }
}

void save_checkpoint(const GeneratorPolicy& policy, const std::string& path) {
  json j;
  j["schema_version"] = 1;
  j["vocabulary_hash"] = policy.vocabulary.content_hash();
  j["vocabulary"] = policy.vocabulary.entries;
  j["temperature"] = policy.temperature;
  j["learning_rate"] = policy.learning_rate;
  json table = json::array();
  for (const auto& [key, values] : policy.logits) {
    table.push_back({{"context", key.context}, {"position", key.position}, {"values", values}});
  }
  j["logits"] = std::move(table);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << j.dump(2) << "\n";
}

GeneratorPolicy load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  json j = json::parse(in);
  GeneratorPolicy policy;
  policy.vocabulary = vocabulary_from_lines(j.at("vocabulary").get<std::vector<std::string>>());
  if (j.at("vocabulary_hash").get<std::uint64_t>() != policy.vocabulary.content_hash())
    throw std::runtime_error("checkpoint vocabulary hash mismatch: " + path);
  policy.temperature = j.at("temperature").get<double>();
  policy.learning_rate = j.at("learning_rate").get<double>();
  for (const auto& row : j.at("logits")) {
    PositionKey key{row.at("context").get<std::string>(), row.at("position").get<int>()};
    policy.logits[key] = row.at("values").get<std::vector<double>>();
  }
  return policy;
}

}  // namespace pepevolve::generator
