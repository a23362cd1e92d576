#include "crashgp/uq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crashgp/error.hpp"
#include "crashgp/random.hpp"

namespace crashgp {

namespace {

// Keeps in-stratum offsets away from the cell edges so the stratum index
// recovered from box coordinates is unaffected by rounding.
constexpr double kEdgeMargin = 1e-9;

std::vector<std::size_t> permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

}  // namespace

std::vector<InputPoint> lhs_sample(std::size_t n, const DesignBox& box, std::uint64_t seed) {
  box.validate();
  if (n < 1) throw Error(ErrorKind::Request, "LHS needs at least one sample");
  Rng rng(seed);
  const auto strata1 = permutation(n, rng);
  const auto strata2 = permutation(n, rng);
  const double dn = static_cast<double>(n);
  std::vector<InputPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double o1 = kEdgeMargin + (1.0 - 2.0 * kEdgeMargin) * rng.uniform();
    const double o2 = kEdgeMargin + (1.0 - 2.0 * kEdgeMargin) * rng.uniform();
    out.push_back(box.denormalize({(double(strata1[i]) + o1) / dn, (double(strata2[i]) + o2) / dn}));
  }
  return out;
}

std::vector<double> pushforward(const GpModel& model, std::span<const InputPoint> points) {
  if (!model.trained()) throw Error(ErrorKind::State, "model has not been trained");
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(model.predict_mean(p));
  return out;
}

std::vector<double> pushforward_sampled(const GpModel& model, std::span<const InputPoint> points,
                                        std::uint64_t seed) {
  if (!model.trained()) throw Error(ErrorKind::State, "model has not been trained");
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const Prediction pr = model.predict(p);
    out.push_back(pr.mean + std::sqrt(pr.variance) * rng.normal());
  }
  return out;
}

std::size_t Histogram::peak() const {
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

Histogram empirical_pdf(std::span<const double> values, std::size_t bins) {
  if (values.empty()) throw Error(ErrorKind::Data, "cannot build a histogram of no values");
  if (bins < 1) throw Error(ErrorKind::Request, "histogram needs at least one bin");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorKind::Data, "histogram values must be finite");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  const double n = static_cast<double>(values.size());

  Histogram h;
  if (!(hi > lo)) {
    const double eps = 1e-9 * std::max(1.0, std::abs(lo));
    h.edges = {lo - 0.5 * eps, lo + 0.5 * eps};
    h.counts = {values.size()};
    h.densities = {1.0 / (h.edges[1] - h.edges[0])};
    return h;
  }
  const double width = (hi - lo) / double(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * double(i);
  h.edges[bins] = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto idx = static_cast<std::size_t>((v - lo) / width);
    if (idx >= bins) idx = bins - 1;
    // Guard against rounding placing v on the wrong side of an edge.
    while (idx > 0 && v < h.edges[idx]) --idx;
    while (idx + 1 < bins && v >= h.edges[idx + 1]) ++idx;
    ++h.counts[idx];
  }
  h.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) h.densities[i] = double(h.counts[i]) / (n * h.width(i));
  return h;
}

double quantile_sorted(std::span<const double> sorted, double percentile) {
  if (sorted.empty()) throw Error(ErrorKind::Data, "quantile of no values");
  if (!(percentile > 0.0 && percentile < 100.0))
    throw Error(ErrorKind::Request, "percentile must lie in (0, 100)");
  const double h = double(sorted.size() - 1) * percentile / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - double(lo)) * (sorted[lo + 1] - sorted[lo]);
}

DistributionSummary summarize(std::span<const double> values, std::span<const double> percentiles,
                              const ModeConfig& mode) {
  if (values.empty()) throw Error(ErrorKind::Data, "cannot summarize an empty set of values");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorKind::Data, "values must be finite");
  for (double p : percentiles)
    if (!(p > 0.0 && p < 100.0)) throw Error(ErrorKind::Request, "percentiles must lie in (0, 100)");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  DistributionSummary s;
  s.n_samples = sorted.size();
  s.min = sorted.front();
  s.max = sorted.back();
  // Summing in sorted order keeps the result independent of input order.
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = std::clamp(sum / n, s.min, s.max);
  double ss = 0.0;
  for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.std = sorted.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

  const Histogram h = empirical_pdf(sorted, mode.bins);
  const std::size_t peak = h.peak();
  s.mode = s.max > s.min ? std::clamp(0.5 * (h.edges[peak] + h.edges[peak + 1]), s.min, s.max) : s.min;

  std::vector<double> ps(percentiles.begin(), percentiles.end());
  std::sort(ps.begin(), ps.end());
  for (double p : ps) s.var_levels.push_back({p, quantile_sorted(sorted, p)});
  return s;
}

MetricDistribution compute_distribution(const GpModel& model, const StatsConfig& config) {
  MetricDistribution d;
  d.metric = model.metric();
  const auto points = lhs_sample(config.n_samples, model.box(), config.lhs_seed);
  d.values = config.posterior_sampling ? pushforward_sampled(model, points, config.sampling_seed)
                                       : pushforward(model, points);
  d.summary = summarize(d.values, config.percentiles, config.mode);
  d.summary.metric = std::string(to_string(model.metric()));
  d.histogram = empirical_pdf(d.values, config.histogram_bins);
  return d;
}

}  // namespace crashgp
