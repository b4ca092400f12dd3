#include "pepevolve/pretrain_data.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "pepevolve/util.hpp"

namespace pepevolve::pretrain {

int MaskCountSampler::max_count(int length) const {
  const int upper = static_cast<int>(std::llround(b_fraction * length));
  return std::min(length, std::max(lower_bound, upper));
}

int MaskCountSampler::sample(int length, std::mt19937_64& rng) const {
  if (length < 1) throw std::invalid_argument("sample_mask_count: length must be >= 1");
  const double b = b_fraction * length;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  // inverse CDF of the descending triangular density f(x) = 2(b-x)/b^2 on [0,b]
  const double u = uniform(rng);
  const double x = b * (1.0 - std::sqrt(1.0 - u));
  int n = static_cast<int>(std::llround(x));
  n = std::max(lower_bound, std::min(n, max_count(length)));
  return n;
}

int sample_mask_count(int length, std::mt19937_64& rng) {
  return MaskCountSampler{}.sample(length, rng);
}

TrainingPair make_training_pair(const chuckles::Peptide& p, std::mt19937_64& rng,
                                bool shift_enabled) {
  const std::size_t L = p.length();
  TrainingPair pair;

  chuckles::Peptide shifted = p;
  if (shift_enabled && L > 1) {
    std::uniform_int_distribution<std::size_t> offsets(0, L - 1);
    pair.shift_offset = offsets(rng);
    shifted = chuckles::shift(p, pair.shift_offset);
  }

  const int n = sample_mask_count(static_cast<int>(L), rng);

  // partial Fisher-Yates for n distinct positions
  std::vector<std::size_t> positions(L);
  for (std::size_t i = 0; i < L; ++i) positions[i] = i;
  for (int k = 0; k < n; ++k) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), L - 1);
    std::swap(positions[static_cast<std::size_t>(k)], positions[pick(rng)]);
  }
  pair.mask_indices.assign(positions.begin(), positions.begin() + n);
  std::sort(pair.mask_indices.begin(), pair.mask_indices.end());

  pair.source = chuckles::render(chuckles::mask(shifted, pair.mask_indices));
  pair.target = chuckles::render(shifted);
  return pair;
}

EpochStats emit_epoch(const std::vector<std::string>& corpus_lines, EpochMode mode,
                      std::uint64_t seed, std::uint64_t epoch_index, std::ostream& out,
                      std::ostream& diagnostics) {
  std::mt19937_64 rng(util::mix_seed(seed, epoch_index));
  EpochStats stats;
  std::size_t line_no = 0;
  for (const auto& line : corpus_lines) {
    ++line_no;
    chuckles::Peptide p;
    try {
      p = chuckles::parse_peptide(line);
    } catch (const std::exception& e) {
      diagnostics << "line " << line_no << ": skipped (" << e.what() << ")\n";
      ++stats.skipped;
      continue;
    }
    const bool shift_enabled = mode == EpochMode::Shifted;
    if (shift_enabled && chuckles::topology(p) == chuckles::TopologyKind::OtherCyclic) {
      diagnostics << "line " << line_no
                  << ": cyclic but not head-to-tail; shifting monomer order only\n";
      ++stats.other_cyclic_shifted;
    }
    const auto pair = make_training_pair(p, rng, shift_enabled);
    out << pair.source << '\t' << pair.target << "\t# offset=" << pair.shift_offset << " masked=";
    for (std::size_t i = 0; i < pair.mask_indices.size(); ++i)
      out << (i ? "," : "") << pair.mask_indices[i];
    out << '\n';
    ++stats.emitted;
  }
  return stats;
}

}  // namespace pepevolve::pretrain
