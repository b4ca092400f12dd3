#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pepevolve/chuckles.hpp"
#include "pepevolve/molgraph.hpp"

namespace pepevolve::scoring {

struct ScoreError : std::runtime_error {
  explicit ScoreError(const std::string& what) : std::runtime_error(what) {}
};

enum class TransformKind { ReverseSigmoid, Sigmoid, GaussianTarget, StepMax, BooleanPass };

struct TransformSpec {
  TransformKind kind = TransformKind::ReverseSigmoid;
  double midpoint = 0.0;
  double steepness = 1.0;
  double target = 0.0;
  double width = 1.0;
  double threshold = 0.0;
};

/// Map a raw descriptor value to [0, 1]. Step/boolean failures score
/// `floor_value` (epsilon_floor, or 0 in hard-zero mode).
double transform(double raw, const TransformSpec& spec, double floor_value);

enum class DescriptorSource { Hbd, Logp, MaxRing, Alerts, SurrogatePermeability, External };

struct Component {
  std::string name;
  DescriptorSource source = DescriptorSource::Hbd;
  std::optional<TransformSpec> transform;  // absent: raw is already a unit score
  double weight = 1.0;

  // surrogate permeability parameters
  double hbd_midpoint = 6.0;
  double hbd_steepness = 1.0;
  double logp_target = 0.0;
  std::optional<double> logp_width;  // unset disables the lipophilicity factor

  // external table-lookup parameters (per-monomer unit scores, geometric mean)
  std::map<std::string, double> lookup;
  double lookup_default = 0.5;
};

struct ScoringConfig {
  std::vector<Component> components;
  double epsilon_floor = 1e-3;
  bool hard_zero = false;
  molgraph::HbdRule hbd_rule = molgraph::HbdRule::DonorAtoms;
};

struct ScoreContext {
  molgraph::ContributionTable table = molgraph::ContributionTable::defaults();
  molgraph::AlertSet alerts;
};

/// Weighted geometric mean with exponent-sum normalization; exactly 0 when
/// any component is 0.
double aggregate(const std::vector<std::pair<double, double>>& scores_and_weights);

struct ScoreBreakdown {
  struct Entry {
    std::string name;
    double raw = 0.0;
    double unit = 0.0;
  };
  std::vector<Entry> components;
  double aggregate = 0.0;
};

ScoreBreakdown score_peptide(const chuckles::Peptide& p, const ScoringConfig& cfg,
                             const ScoreContext& ctx);

void validate(const ScoringConfig& cfg);

}  // namespace pepevolve::scoring
