#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crashgp/campaign.hpp"
#include "crashgp/gp.hpp"

namespace crashgp {

enum class CandidateSource { GridMidpoints, LhsPool, UserSupplied };

std::string_view to_string(CandidateSource s) noexcept;

/// Points over which the predictive variance is searched.
struct CandidateSet {
  std::vector<InputPoint> points;
  CandidateSource provenance = CandidateSource::GridMidpoints;
};

/// Centres of the cells of a levels x levels lattice spanning the box;
/// (levels - 1)^2 points. The default matches the 5-level training grid.
CandidateSet grid_midpoints(const DesignBox& box, unsigned levels = 5);
CandidateSet lhs_pool(const DesignBox& box, std::size_t n = 1000, std::uint64_t seed = 0);
/// Rejects points outside the box.
CandidateSet user_candidates(std::vector<InputPoint> points, const DesignBox& box);
/// Removes training inputs and repeated points, keeping the first occurrence.
CandidateSet exclude_training(const CandidateSet& candidates, const GpModel& model);

struct ScoredCandidate {
  InputPoint point;
  double variance = 0.0;
};

/// All candidates ordered by predictive variance, largest first; ties are
/// broken by ascending (torso angle, D-ring) so the order is deterministic.
std::vector<ScoredCandidate> rank_by_variance(const GpModel& model, const CandidateSet& candidates);

/// The k highest-variance candidates. Throws Request when k exceeds the pool.
std::vector<InputPoint> propose_points(const GpModel& model, const CandidateSet& candidates,
                                       std::size_t k);

/// 100 * |predicted - observed| / |observed|.
double relative_error_pct(double predicted, double observed);

struct AccuracyEntry {
  int case_id = 0;
  InputPoint point;
  double predicted = 0.0;
  double observed = 0.0;
  double rel_error_pct = 0.0;
  bool outside_box = false;
};

struct AccuracyReport {
  Metric metric = Metric::Hic15;
  std::vector<AccuracyEntry> entries;
  double worst_error_pct = 0.0;
  double threshold_pct = 10.0;
  bool passed = false;
  std::size_t training_size = 0;
  std::vector<std::string> warnings;

  std::vector<int> failing_case_ids() const;
};

inline constexpr double kDefaultThresholdPct = 10.0;

/// Compares posterior means against observed values for the model's metric.
/// The gate is strict: passed only when every error is below the threshold.
AccuracyReport evaluate_accuracy(const GpModel& model, std::span<const RunRecord> test_runs,
                                 double threshold_pct = kDefaultThresholdPct);

/// Refits on the union of the model's training data and `new_runs` with the
/// model's own fit settings. Runs already present with identical output are
/// skipped; same input or case id with a different output is a Conflict.
GpModel augment_and_refit(const GpModel& model, std::span<const RunRecord> new_runs);

/// Supplies a simulated result for a requested point, or nothing when the
/// result is not available yet.
using Oracle = std::function<std::optional<RunRecord>(const InputPoint& query, int case_id)>;

/// Looks requested points up by exact input in a ledger.
Oracle ledger_oracle(const Ledger& ledger);

struct LoopOptions {
  std::size_t k = 5;
  double threshold_pct = kDefaultThresholdPct;
  unsigned max_rounds = 5;
  // Augment with every tested run rather than only the failing ones.
  bool augment_all = false;
};

struct LoopResult {
  GpModel model;
  std::vector<AccuracyReport> reports;
  unsigned rounds = 0;
  bool passed = false;
  // Set when the oracle could not supply a requested point; `pending` lists
  // the points still needed.
  bool suspended = false;
  std::vector<PendingPoint> pending;
};

/// Propose -> simulate -> evaluate -> augment until the gate passes, the
/// candidate pool is exhausted or max_rounds is reached. When the loop ends
/// on an augmentation, a final report re-checks every tested run against the
/// refitted model and decides `passed`.
LoopResult adaptive_loop(const GpModel& initial, const Oracle& oracle,
                         const CandidateSet& candidates, const LoopOptions& options);

}  // namespace crashgp
