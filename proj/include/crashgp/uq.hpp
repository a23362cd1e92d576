#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crashgp/campaign.hpp"
#include "crashgp/gp.hpp"

namespace crashgp {

/// Latin hypercube over the box: per dimension, each of the n equal-width
/// strata holds exactly one sample. Deterministic per seed.
std::vector<InputPoint> lhs_sample(std::size_t n, const DesignBox& box, std::uint64_t seed);

/// Posterior mean at each point, in input order.
std::vector<double> pushforward(const GpModel& model, std::span<const InputPoint> points);

/// Mean plus an independent draw from the marginal posterior at each point.
std::vector<double> pushforward_sampled(const GpModel& model, std::span<const InputPoint> points,
                                        std::uint64_t seed);

struct Histogram {
  std::vector<double> edges;      // bins + 1 entries
  std::vector<double> densities;  // integrates to 1 over the bin widths
  std::vector<std::size_t> counts;

  std::size_t bins() const { return densities.size(); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  /// Index of the tallest bin; the lowest index wins ties.
  std::size_t peak() const;
};

/// Equal-width bins on [min, max]; the maximum lands in the last bin. If all
/// values coincide the result is one bin of tiny width centred on the value.
Histogram empirical_pdf(std::span<const double> values, std::size_t bins);

/// Percentile p in (0, 100) of already-sorted values, interpolating linearly
/// between order statistics at h = (n - 1) p / 100.
double quantile_sorted(std::span<const double> sorted, double percentile);

struct VarLevel {
  double percentile = 0.0;
  double value = 0.0;
};

struct ModeConfig {
  std::size_t bins = 100;
};

struct DistributionSummary {
  std::string metric;
  std::size_t n_samples = 0;
  double mean = 0.0;
  double std = 0.0;  // n - 1 denominator
  double mode = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<VarLevel> var_levels;
};

inline const std::vector<double> kDefaultPercentiles{90.0, 95.0};

DistributionSummary summarize(std::span<const double> values,
                              std::span<const double> percentiles = kDefaultPercentiles,
                              const ModeConfig& mode = {});

struct StatsConfig {
  std::size_t n_samples = 10000;
  std::uint64_t lhs_seed = 0;
  std::vector<double> percentiles = kDefaultPercentiles;
  std::size_t histogram_bins = 100;
  ModeConfig mode;
  bool posterior_sampling = false;
  std::uint64_t sampling_seed = 1;
};

struct MetricDistribution {
  Metric metric = Metric::Hic15;
  std::vector<double> values;
  DistributionSummary summary;
  Histogram histogram;
};

/// LHS -> pushforward -> summary and histogram for one trained model.
MetricDistribution compute_distribution(const GpModel& model, const StatsConfig& config);

}  // namespace crashgp
