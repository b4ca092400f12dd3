#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "pepevolve/chuckles.hpp"

namespace pepevolve::pretrain {

/// Mask-count sampler biased toward single-site masking: a descending
/// triangular density on [0, b_fraction*L] with its peak at the density
/// minimum of the range, rounded and clamped so the output lower bound is
/// `lower_bound` (1) and the upper bound is round(b_fraction*L), capped at L.
struct MaskCountSampler {
  int lower_bound = 1;
  double b_fraction = 0.4;
  bool mode_at_minimum = true;

  int sample(int length, std::mt19937_64& rng) const;
  int max_count(int length) const;
};

int sample_mask_count(int length, std::mt19937_64& rng);

struct TrainingPair {
  std::string source;  // masked (and possibly shifted) CHUCKLES
  std::string target;  // unmasked CHUCKLES at the same shift
  std::vector<std::size_t> mask_indices;
  std::size_t shift_offset = 0;
};

TrainingPair make_training_pair(const chuckles::Peptide& p, std::mt19937_64& rng,
                                bool shift_enabled);

enum class EpochMode { Standard, Shifted };

struct EpochStats {
  std::size_t emitted = 0;
  std::size_t skipped = 0;
  std::size_t other_cyclic_shifted = 0;  // shifted like linear, with a diagnostic
};

/// One TrainingPair per valid corpus line, TSV: source, target, and a
/// comment-prefixed metadata column. Masks and shifts are re-drawn per epoch
/// (the epoch index salts the rng stream). Invalid lines are reported to
/// `diagnostics`, skipped, and counted.
EpochStats emit_epoch(const std::vector<std::string>& corpus_lines, EpochMode mode,
                      std::uint64_t seed, std::uint64_t epoch_index, std::ostream& out,
                      std::ostream& diagnostics);

}  // namespace pepevolve::pretrain
