#include "pepevolve/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pepevolve::scoring {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

double safe_exp(double x) { return std::exp(std::min(700.0, std::max(-700.0, x))); }

double reverse_sigmoid(double raw, double midpoint, double steepness) {
  return 1.0 / (1.0 + safe_exp(steepness * (raw - midpoint)));
}

double gaussian_target(double raw, double target, double width) {
  const double z = (raw - target) / width;
  return safe_exp(-z * z);
}

double external_score(const chuckles::Peptide& p, const Component& c) {
  double log_sum = 0.0;
  for (const auto& mono : p.monomers) {
    auto it = c.lookup.find(mono.raw());
    const double s = it != c.lookup.end() ? it->second : c.lookup_default;
    if (s < 0.0 || s > 1.0)
      throw ScoreError("external lookup value for '" + mono.raw() + "' outside [0,1]");
    if (s == 0.0) return 0.0;
    log_sum += std::log(s);
  }
  return std::exp(log_sum / static_cast<double>(p.length()));
}

}  // namespace

double transform(double raw, const TransformSpec& spec, double floor_value) {
  switch (spec.kind) {
    case TransformKind::ReverseSigmoid:
      return reverse_sigmoid(raw, spec.midpoint, spec.steepness);
    case TransformKind::Sigmoid:
      return 1.0 / (1.0 + safe_exp(-spec.steepness * (raw - spec.midpoint)));
    case TransformKind::GaussianTarget:
      if (spec.width <= 0.0) throw std::invalid_argument("gaussian-target width must be positive");
      return gaussian_target(raw, spec.target, spec.width);
    case TransformKind::StepMax:
      return raw <= spec.threshold ? 1.0 : floor_value;
    case TransformKind::BooleanPass:
      return raw < 0.5 ? 1.0 : floor_value;
  }
  throw std::invalid_argument("unknown transform kind");
}

double aggregate(const std::vector<std::pair<double, double>>& scores_and_weights) {
  if (scores_and_weights.empty()) throw std::invalid_argument("aggregate: empty component list");
  double weight_sum = 0.0;
  double log_sum = 0.0;
  for (const auto& [s, w] : scores_and_weights) {
    if (w <= 0.0) throw std::invalid_argument("aggregate: weights must be positive");
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("aggregate: scores must lie in [0,1]");
    if (s == 0.0) return 0.0;
    weight_sum += w;
    log_sum += w * std::log(s);
  }
  return std::exp(log_sum / weight_sum);
}

void validate(const ScoringConfig& cfg) {
  if (cfg.components.empty()) throw std::invalid_argument("scoring config has no components");
  std::set<std::string> names;
  for (const auto& c : cfg.components) {
    if (c.weight <= 0.0)
      throw std::invalid_argument("component '" + c.name + "' has non-positive weight");
    if (!names.insert(c.name).second)
      throw std::invalid_argument("duplicate component name '" + c.name + "'");
    const bool unbounded = c.source == DescriptorSource::Hbd ||
                           c.source == DescriptorSource::Logp ||
                           c.source == DescriptorSource::MaxRing;
    if (unbounded && !c.transform)
      throw std::invalid_argument("component '" + c.name + "' needs a transform");
    if (c.transform && c.transform->kind == TransformKind::GaussianTarget &&
        c.transform->width <= 0.0)
      throw std::invalid_argument("component '" + c.name + "' gaussian width must be positive");
  }
  if (cfg.epsilon_floor <= 0.0 || cfg.epsilon_floor >= 1.0)
    throw std::invalid_argument("epsilon_floor must lie in (0,1)");
}

ScoreBreakdown score_peptide(const chuckles::Peptide& p, const ScoringConfig& cfg,
                             const ScoreContext& ctx) {
  validate(cfg);
  const double floor_value = cfg.hard_zero ? 0.0 : cfg.epsilon_floor;

  bool needs_graph = false;
  bool needs_alerts = false;
  for (const auto& c : cfg.components) {
    switch (c.source) {
      case DescriptorSource::Hbd:
      case DescriptorSource::Logp:
      case DescriptorSource::MaxRing:
      case DescriptorSource::SurrogatePermeability:
        needs_graph = true;
        break;
      case DescriptorSource::Alerts:
        needs_alerts = true;
        break;
      case DescriptorSource::External:
        break;
    }
  }
  if (p.placeholder && (needs_graph || needs_alerts))
    throw ScoreError("placeholder peptides support only external table-lookup components");

  // descriptors computed at most once, on first use; failures carry the
  // name of the component that triggered them
  std::optional<molgraph::MolecularGraph> graph;
  std::optional<int> hbd_total;
  std::optional<double> logp;
  std::optional<int> ring;
  std::optional<std::size_t> alert_hits;
  auto get_graph = [&]() -> const molgraph::MolecularGraph& {
    if (!graph) graph = molgraph::build_graph(p);
    return *graph;
  };
  auto get_hbd = [&]() {
    if (!hbd_total) hbd_total = molgraph::hbd_count(get_graph(), cfg.hbd_rule).first;
    return *hbd_total;
  };
  auto get_logp = [&]() {
    if (!logp) logp = molgraph::logp_estimate(get_graph(), ctx.table).first;
    return *logp;
  };
  auto get_ring = [&]() {
    if (!ring) ring = molgraph::max_ring_size(get_graph());
    return *ring;
  };
  auto get_alerts = [&]() {
    if (!alert_hits) alert_hits = molgraph::match_alerts(p, ctx.alerts).size();
    return *alert_hits;
  };

  ScoreBreakdown out;
  std::vector<std::pair<double, double>> weighted;
  for (const auto& c : cfg.components) {
    double raw = 0.0;
    try {
      switch (c.source) {
        case DescriptorSource::Hbd:
          raw = get_hbd();
          break;
        case DescriptorSource::Logp:
          raw = get_logp();
          break;
        case DescriptorSource::MaxRing:
          raw = get_ring();
          break;
        case DescriptorSource::Alerts:
          raw = static_cast<double>(get_alerts());
          break;
        case DescriptorSource::SurrogatePermeability: {
          raw = reverse_sigmoid(get_hbd(), c.hbd_midpoint, c.hbd_steepness);
          if (c.logp_width) raw *= gaussian_target(get_logp(), c.logp_target, *c.logp_width);
          break;
        }
        case DescriptorSource::External:
          raw = external_score(p, c);
          break;
      }
    } catch (const std::exception& e) {
      throw ScoreError("component '" + c.name + "': " + e.what());
    }
    double unit;
    if (c.transform) {
      unit = transform(raw, *c.transform, floor_value);
    } else if (c.source == DescriptorSource::Alerts) {
      unit = transform(raw, TransformSpec{TransformKind::BooleanPass}, floor_value);
    } else {
      unit = clamp01(raw);
    }
    out.components.push_back({c.name, raw, unit});
    weighted.emplace_back(unit, c.weight);
  }
  out.aggregate = aggregate(weighted);
  return out;
}

}  // namespace pepevolve::scoring
