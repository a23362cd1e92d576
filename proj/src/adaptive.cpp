#include "crashgp/adaptive.hpp"

#include <algorithm>
#include <cmath>

#include "crashgp/error.hpp"
#include "crashgp/uq.hpp"

namespace crashgp {

std::string_view to_string(CandidateSource s) noexcept {
  switch (s) {
    case CandidateSource::GridMidpoints: return "grid-midpoints";
    case CandidateSource::LhsPool: return "lhs-pool";
    case CandidateSource::UserSupplied: return "user-supplied";
  }
  return "grid-midpoints";
}

CandidateSet grid_midpoints(const DesignBox& box, unsigned levels) {
  box.validate();
  if (levels < 2) throw Error(ErrorKind::Config, "candidate grid needs at least 2 levels");
  CandidateSet set{{}, CandidateSource::GridMidpoints};
  const double cells = double(levels - 1);
  for (unsigned i = 0; i + 1 < levels; ++i)
    for (unsigned j = 0; j + 1 < levels; ++j)
      set.points.push_back(box.denormalize({(i + 0.5) / cells, (j + 0.5) / cells}));
  return set;
}

CandidateSet lhs_pool(const DesignBox& box, std::size_t n, std::uint64_t seed) {
  return {lhs_sample(n, box, seed), CandidateSource::LhsPool};
}

CandidateSet user_candidates(std::vector<InputPoint> points, const DesignBox& box) {
  box.validate();
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!box.contains(points[i]))
      throw Error(ErrorKind::Range, "candidate " + std::to_string(i + 1) + " (" +
                                        format_double(points[i].torso_angle_deg) + ", " +
                                        format_double(points[i].dring_z) +
                                        ") lies outside the design box");
  return {std::move(points), CandidateSource::UserSupplied};
}

CandidateSet exclude_training(const CandidateSet& candidates, const GpModel& model) {
  CandidateSet out{{}, candidates.provenance};
  for (const auto& p : candidates.points) {
    if (model.has_training_input(p)) continue;
    if (std::find(out.points.begin(), out.points.end(), p) != out.points.end()) continue;
    out.points.push_back(p);
  }
  return out;
}

std::vector<ScoredCandidate> rank_by_variance(const GpModel& model, const CandidateSet& candidates) {
  std::vector<ScoredCandidate> scored;
  scored.reserve(candidates.points.size());
  for (const auto& p : candidates.points) scored.push_back({p, model.predict(p).variance});
  std::stable_sort(scored.begin(), scored.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.variance != b.variance) return a.variance > b.variance;
    return a.point < b.point;
  });
  return scored;
}

std::vector<InputPoint> propose_points(const GpModel& model, const CandidateSet& candidates,
                                       std::size_t k) {
  if (!model.trained()) throw Error(ErrorKind::State, "model has not been trained");
  if (k < 1) throw Error(ErrorKind::Request, "at least one point must be requested");
  if (candidates.points.empty()) throw Error(ErrorKind::Request, "candidate set is empty");
  if (k > candidates.points.size())
    throw Error(ErrorKind::Request, "requested " + std::to_string(k) + " points but only " +
                                        std::to_string(candidates.points.size()) +
                                        " candidates are available");
  auto scored = rank_by_variance(model, candidates);
  std::vector<InputPoint> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].point);
  return out;
}

double relative_error_pct(double predicted, double observed) {
  if (observed == 0.0)
    throw Error(ErrorKind::UndefinedReference, "relative error is undefined for an observed value of 0");
  return 100.0 * std::abs(predicted - observed) / std::abs(observed);
}

std::vector<int> AccuracyReport::failing_case_ids() const {
  std::vector<int> ids;
  for (const auto& e : entries)
    if (!(e.rel_error_pct < threshold_pct)) ids.push_back(e.case_id);
  return ids;
}

AccuracyReport evaluate_accuracy(const GpModel& model, std::span<const RunRecord> test_runs,
                                 double threshold_pct) {
  if (!model.trained()) throw Error(ErrorKind::State, "model has not been trained");
  if (test_runs.empty()) throw Error(ErrorKind::Request, "no test runs to evaluate");
  if (!(threshold_pct > 0.0) || !std::isfinite(threshold_pct))
    throw Error(ErrorKind::Config, "accuracy threshold must be positive");

  AccuracyReport report;
  report.metric = model.metric();
  report.threshold_pct = threshold_pct;
  report.training_size = model.training().size();
  for (const auto& run : test_runs) {
    AccuracyEntry e;
    e.case_id = run.case_id;
    e.point = run.input;
    e.observed = run.value(model.metric());
    e.predicted = model.predict_mean(run.input);
    e.rel_error_pct = relative_error_pct(e.predicted, e.observed);
    e.outside_box = !model.box().contains(run.input);
    if (e.outside_box)
      report.warnings.push_back("case " + std::to_string(run.case_id) +
                                " lies outside the design box; evaluated anyway");
    report.worst_error_pct = std::max(report.worst_error_pct, e.rel_error_pct);
    report.entries.push_back(e);
  }
  report.passed = report.worst_error_pct < threshold_pct;
  return report;
}

GpModel augment_and_refit(const GpModel& model, std::span<const RunRecord> new_runs) {
  if (!model.trained()) throw Error(ErrorKind::State, "model has not been trained");
  std::vector<TrainingPoint> training = model.training();
  const Metric metric = model.metric();
  for (const auto& run : new_runs) {
    const double y = run.value(metric);
    bool present = false;
    for (const auto& t : training) {
      const bool same_input = t.input == run.input;
      const bool same_case = t.case_id == run.case_id;
      if (!same_input && !same_case) continue;
      if (same_input && t.output == y) {
        present = true;
        break;
      }
      throw Error(ErrorKind::Conflict, "case " + std::to_string(run.case_id) +
                                           " conflicts with training case " +
                                           std::to_string(t.case_id));
    }
    if (!present) training.push_back({run.case_id, run.input, y});
  }
  return fit(metric, model.box(), std::move(training), model.fit_config());
}

Oracle ledger_oracle(const Ledger& ledger) {
  return [ledger](const InputPoint& q, int) -> std::optional<RunRecord> {
    if (const RunRecord* r = ledger.find_input(q)) return *r;
    return std::nullopt;
  };
}

LoopResult adaptive_loop(const GpModel& initial, const Oracle& oracle,
                         const CandidateSet& candidates, const LoopOptions& options) {
  if (!initial.trained()) throw Error(ErrorKind::State, "model has not been trained");
  if (options.max_rounds < 1) throw Error(ErrorKind::Config, "max_rounds must be at least 1");
  if (options.k < 1) throw Error(ErrorKind::Config, "k must be at least 1");
  if (candidates.points.empty()) throw Error(ErrorKind::Request, "candidate set is empty");

  LoopResult result;
  result.model = initial;
  std::vector<RunRecord> tested;
  int next_case = initial.max_case_id();
  bool ended_on_augment = false;

  for (unsigned round = 0; round < options.max_rounds; ++round) {
    CandidateSet pool = exclude_training(candidates, result.model);
    if (pool.points.empty()) break;
    const std::size_t k = std::min(options.k, pool.points.size());
    auto points = propose_points(result.model, pool, k);

    std::vector<RunRecord> runs;
    for (const auto& p : points) {
      auto already = std::find_if(tested.begin(), tested.end(),
                                  [&](const RunRecord& r) { return r.input == p; });
      if (already != tested.end()) {
        runs.push_back(*already);
        continue;
      }
      const int id = ++next_case;
      if (auto r = oracle(p, id))
        runs.push_back(*r);
      else
        result.pending.push_back({id, p});
    }
    if (!result.pending.empty()) {
      result.suspended = true;
      return result;
    }
    for (const auto& r : runs) {
      next_case = std::max(next_case, r.case_id);
      if (std::find(tested.begin(), tested.end(), r) == tested.end()) tested.push_back(r);
    }

    AccuracyReport report = evaluate_accuracy(result.model, runs, options.threshold_pct);
    result.rounds = round + 1;
    const bool passed = report.passed;
    const auto failing = report.failing_case_ids();
    result.reports.push_back(std::move(report));
    if (passed) {
      result.passed = true;
      return result;
    }

    std::vector<RunRecord> to_add;
    for (const auto& r : runs)
      if (options.augment_all ||
          std::find(failing.begin(), failing.end(), r.case_id) != failing.end())
        to_add.push_back(r);
    result.model = augment_and_refit(result.model, to_add);
    ended_on_augment = true;
  }

  if (ended_on_augment && !tested.empty()) {
    AccuracyReport final_report = evaluate_accuracy(result.model, tested, options.threshold_pct);
    result.passed = final_report.passed;
    result.reports.push_back(std::move(final_report));
  }
  return result;
}

}  // namespace crashgp
