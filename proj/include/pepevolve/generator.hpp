#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pepevolve/chuckles.hpp"

namespace pepevolve::generator {

struct MonomerVocabulary {
  std::vector<std::string> entries;          // unique, order-preserving
  std::vector<chuckles::Monomer> monomers;   // parsed alongside entries

  std::size_t size() const { return entries.size(); }
  std::uint64_t content_hash() const;
};

MonomerVocabulary load_vocabulary(const std::string& path);
MonomerVocabulary vocabulary_from_lines(const std::vector<std::string>& lines);

struct PositionKey {
  std::string context;  // mask-mode tag; "" for a shared key space
  int position = 0;
  auto operator<=>(const PositionKey&) const = default;
};

/// Tabular softmax policy over the monomer vocabulary, keyed by masked
/// position. Keys never touched behave as all-zero logits (uniform).
struct GeneratorPolicy {
  MonomerVocabulary vocabulary;
  std::map<PositionKey, std::vector<double>> logits;
  double temperature = 1.0;
  double learning_rate = 0.1;

  std::vector<double> logits_at(const PositionKey& key) const;
  std::vector<double> probs(const PositionKey& key) const;
};

struct Choice {
  int position = 0;  // monomer index in the peptide
  int entry = 0;     // vocabulary index
};

struct Candidate {
  chuckles::Peptide peptide;
  std::vector<Choice> choices;
};

struct CandidateBatch {
  chuckles::MaskedPeptide source;
  std::string context_tag;
  std::vector<Candidate> candidates;
};

/// Draw G candidates: every masked position filled independently from
/// softmax(logits/temperature) at its (context, position) key.
CandidateBatch generate(const GeneratorPolicy& policy, const chuckles::MaskedPeptide& masked,
                        int G, std::mt19937_64& rng, const std::string& context_tag = "");

using GradientTable = std::map<PositionKey, std::vector<double>>;

/// Gradient of the surrogate loss -(1/G) sum_g A_g log pi(choices_g) with
/// respect to the logits (only keys that appear in the batch).
GradientTable update_gradient(const GeneratorPolicy& policy, const CandidateBatch& batch,
                              const std::vector<double>& advantages);

double surrogate_loss(const GeneratorPolicy& policy, const CandidateBatch& batch,
                      const std::vector<double>& advantages);

/// One analytic gradient step (no clipping): logits -= lr * gradient.
void update(GeneratorPolicy& policy, const CandidateBatch& batch,
            const std::vector<double>& advantages);

void save_checkpoint(const GeneratorPolicy& policy, const std::string& path);
GeneratorPolicy load_checkpoint(const std::string& path);

}  // namespace pepevolve::generator
