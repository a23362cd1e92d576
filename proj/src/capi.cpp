#include "crashgp/crashgp.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "crashgp/adaptive.hpp"
#include "crashgp/campaign.hpp"
#include "crashgp/error.hpp"
#include "crashgp/gp.hpp"
#include "crashgp/model_io.hpp"
#include "crashgp/report.hpp"
#include "crashgp/uq.hpp"

struct cgp_ledger {
  crashgp::Ledger ledger;
};

struct cgp_model {
  crashgp::GpModel model;
};

struct cgp_report {
  crashgp::AccuracyReport report;
  std::string table;
};

struct cgp_distribution {
  crashgp::MetricDistribution dist;
};

struct cgp_loop {
  crashgp::LoopResult result;
  cgp_model model;
  std::vector<cgp_report> reports;
};

namespace {

using namespace crashgp;

thread_local std::string g_last_error;

cgp_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParameterDomain: return CGP_ERR_PARAMETER_DOMAIN;
    case ErrorKind::Data: return CGP_ERR_DATA;
    case ErrorKind::Parse: return CGP_ERR_PARSE;
    case ErrorKind::Range: return CGP_ERR_RANGE;
    case ErrorKind::Conflict: return CGP_ERR_CONFLICT;
    case ErrorKind::Config: return CGP_ERR_CONFIG;
    case ErrorKind::Numerical: return CGP_ERR_NUMERICAL;
    case ErrorKind::Fit: return CGP_ERR_FIT;
    case ErrorKind::State: return CGP_ERR_STATE;
    case ErrorKind::Request: return CGP_ERR_REQUEST;
    case ErrorKind::UndefinedReference: return CGP_ERR_UNDEFINED_REFERENCE;
    case ErrorKind::Io: return CGP_ERR_IO;
  }
  return CGP_ERR_INTERNAL;
}

cgp_status fail(cgp_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <class F>
cgp_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return CGP_OK;
  } catch (const Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CGP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CGP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CGP_ERR_INTERNAL, "unknown error");
  }
}

#define CGP_REQUIRE(cond, what)                                        \
  do {                                                                 \
    if (!(cond)) return fail(CGP_ERR_INVALID_ARGUMENT, what);          \
  } while (0)

DesignBox to_box(const cgp_box& b) { return {{b.torso_lo, b.torso_hi}, {b.dring_lo, b.dring_hi}}; }

cgp_box from_box(const DesignBox& b) {
  return {b.torso_angle.lo, b.torso_angle.hi, b.dring_z.lo, b.dring_z.hi};
}

InputPoint to_point(cgp_point p) { return {p.torso_angle_deg, p.dring_z}; }
cgp_point from_point(const InputPoint& p) { return {p.torso_angle_deg, p.dring_z}; }

RunRecord to_run(const cgp_run& r) { return {r.case_id, to_point(r.input), r.hic15, r.a_t1_max}; }
cgp_run from_run(const RunRecord& r) { return {r.case_id, from_point(r.input), r.hic15, r.a_t1_max}; }

Metric to_metric(cgp_metric m) { return m == CGP_METRIC_A_T1_MAX ? Metric::AT1Max : Metric::Hic15; }
cgp_metric from_metric(Metric m) { return m == Metric::AT1Max ? CGP_METRIC_A_T1_MAX : CGP_METRIC_HIC15; }

Smoothness to_smoothness(cgp_smoothness s) {
  switch (s) {
    case CGP_MATERN_1_2: return Smoothness::Half;
    case CGP_MATERN_3_2: return Smoothness::ThreeHalves;
    case CGP_MATERN_5_2: return Smoothness::FiveHalves;
  }
  throw Error(ErrorKind::Config, "unknown smoothness");
}

cgp_smoothness from_smoothness(Smoothness s) {
  switch (s) {
    case Smoothness::Half: return CGP_MATERN_1_2;
    case Smoothness::ThreeHalves: return CGP_MATERN_3_2;
    case Smoothness::FiveHalves: return CGP_MATERN_5_2;
  }
  return CGP_MATERN_5_2;
}

FitConfig to_fit_config(const cgp_fit_config& c) {
  FitConfig f;
  f.smoothness = to_smoothness(c.smoothness);
  f.restarts = c.restarts;
  f.seed = c.seed;
  f.lengthscale = {c.lengthscale_lo, c.lengthscale_hi};
  f.signal_variance = {c.signal_variance_lo, c.signal_variance_hi};
  f.noise_variance = {c.noise_variance_lo, c.noise_variance_hi};
  f.center_outputs = c.center_outputs != 0;
  return f;
}

CandidateSet make_candidates(const GpModel& model, const cgp_candidate_config& c) {
  CandidateSet set;
  switch (c.source) {
    case CGP_CANDIDATES_GRID_MIDPOINTS:
      set = grid_midpoints(model.box(), c.grid_levels);
      break;
    case CGP_CANDIDATES_LHS_POOL:
      set = lhs_pool(model.box(), c.pool_size, c.pool_seed);
      break;
    case CGP_CANDIDATES_FILE: {
      if (!c.path) throw Error(ErrorKind::Config, "candidate file path is required");
      std::vector<InputPoint> pts;
      for (const auto& p : read_pending(c.path)) pts.push_back(p.input);
      set = user_candidates(std::move(pts), model.box());
      break;
    }
    default:
      throw Error(ErrorKind::Config, "unknown candidate source");
  }
  return exclude_training(set, model);
}

StatsConfig to_stats_config(const cgp_stats_config& c) {
  if (c.n_percentiles > CGP_MAX_PERCENTILES) throw Error(ErrorKind::Config, "too many percentiles");
  StatsConfig s;
  s.n_samples = c.n_samples;
  s.lhs_seed = c.lhs_seed;
  s.percentiles.assign(c.percentiles, c.percentiles + c.n_percentiles);
  s.histogram_bins = c.histogram_bins;
  s.mode.bins = c.mode_bins;
  s.posterior_sampling = c.posterior_sampling != 0;
  s.sampling_seed = c.sampling_seed;
  return s;
}

LoopOptions to_loop_options(const cgp_loop_options& o) {
  return {o.k, o.threshold_pct, o.max_rounds, o.augment_all != 0};
}

cgp_status run_loop(const cgp_model* initial, const Oracle& oracle,
                    const cgp_candidate_config* candidates, const cgp_loop_options* options,
                    cgp_loop** out) {
  CGP_REQUIRE(initial && candidates && options && out, "null argument");
  return guarded([&] {
    CandidateSet set = make_candidates(initial->model, *candidates);
    auto loop = std::make_unique<cgp_loop>();
    loop->result = adaptive_loop(initial->model, oracle, set, to_loop_options(*options));
    loop->model.model = loop->result.model;
    for (const auto& r : loop->result.reports) loop->reports.push_back({r, format_accuracy_table(r)});
    *out = loop.release();
  });
}

}  // namespace

extern "C" {

const char* cgp_version(void) { return "1.0.0"; }

const char* cgp_last_error(void) { return g_last_error.c_str(); }

const char* cgp_status_name(cgp_status status) {
  switch (status) {
    case CGP_OK: return "ok";
    case CGP_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case CGP_ERR_PARAMETER_DOMAIN: return "parameter-domain";
    case CGP_ERR_DATA: return "data";
    case CGP_ERR_PARSE: return "parse";
    case CGP_ERR_RANGE: return "range";
    case CGP_ERR_CONFLICT: return "conflict";
    case CGP_ERR_CONFIG: return "config";
    case CGP_ERR_NUMERICAL: return "numerical";
    case CGP_ERR_FIT: return "fit";
    case CGP_ERR_STATE: return "state";
    case CGP_ERR_REQUEST: return "request";
    case CGP_ERR_UNDEFINED_REFERENCE: return "undefined-reference";
    case CGP_ERR_IO: return "io";
    case CGP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* cgp_metric_name(cgp_metric metric) {
  return metric == CGP_METRIC_A_T1_MAX ? "a_t1_max" : "hic15";
}

cgp_status cgp_metric_parse(const char* name, cgp_metric* out) {
  CGP_REQUIRE(name && out, "null argument");
  auto m = parse_metric(name);
  if (!m) return fail(CGP_ERR_CONFIG, std::string("unknown metric '") + name + "'");
  *out = from_metric(*m);
  return CGP_OK;
}

void cgp_box_default(cgp_box* out) {
  if (out) *out = from_box(DesignBox{});
}

void cgp_fit_config_default(cgp_fit_config* out) {
  if (!out) return;
  const FitConfig f;
  *out = {from_smoothness(f.smoothness), f.restarts, f.seed,
          f.lengthscale.lo, f.lengthscale.hi,
          f.signal_variance.lo, f.signal_variance.hi,
          f.noise_variance.lo, f.noise_variance.hi,
          f.center_outputs ? 1 : 0};
}

void cgp_candidate_config_default(cgp_candidate_config* out) {
  if (out) *out = {CGP_CANDIDATES_GRID_MIDPOINTS, 5, 1000, 0, nullptr};
}

void cgp_stats_config_default(cgp_stats_config* out) {
  if (!out) return;
  const StatsConfig s;
  std::memset(out, 0, sizeof *out);
  out->n_samples = s.n_samples;
  out->lhs_seed = s.lhs_seed;
  out->n_percentiles = s.percentiles.size();
  for (std::size_t i = 0; i < s.percentiles.size(); ++i) out->percentiles[i] = s.percentiles[i];
  out->histogram_bins = s.histogram_bins;
  out->mode_bins = s.mode.bins;
  out->posterior_sampling = 0;
  out->sampling_seed = s.sampling_seed;
}

void cgp_loop_options_default(cgp_loop_options* out) {
  if (!out) return;
  const LoopOptions o;
  *out = {o.k, o.threshold_pct, o.max_rounds, o.augment_all ? 1 : 0};
}

cgp_status cgp_normalize(const cgp_box* box, cgp_point p, double* u1, double* u2) {
  CGP_REQUIRE(box && u1 && u2, "null argument");
  return guarded([&] {
    const UnitPoint u = to_box(*box).normalize(to_point(p));
    *u1 = u.u1;
    *u2 = u.u2;
  });
}

cgp_status cgp_ledger_load_fixture(cgp_ledger** out) {
  CGP_REQUIRE(out, "null argument");
  return guarded([&] { *out = new cgp_ledger{load_fixture()}; });
}

cgp_status cgp_ledger_ingest(const char* path, const cgp_box* box, cgp_ledger** out) {
  CGP_REQUIRE(path && out, "null argument");
  return guarded([&] {
    const DesignBox b = box ? to_box(*box) : DesignBox{};
    *out = new cgp_ledger{ingest(path, b)};
  });
}

cgp_status cgp_ledger_from_runs(const cgp_run* runs, size_t n, const cgp_box* box, cgp_ledger** out) {
  CGP_REQUIRE(out && (runs || n == 0), "null argument");
  return guarded([&] {
    std::vector<RunRecord> v;
    for (size_t i = 0; i < n; ++i) v.push_back(to_run(runs[i]));
    *out = new cgp_ledger{Ledger(std::move(v), box ? to_box(*box) : DesignBox{})};
  });
}

cgp_status cgp_ledger_select(const cgp_ledger* ledger, const int* case_ids, size_t n, cgp_ledger** out) {
  CGP_REQUIRE(ledger && out && (case_ids || n == 0), "null argument");
  return guarded([&] {
    *out = new cgp_ledger{ledger->ledger.select(std::vector<int>(case_ids, case_ids + n))};
  });
}

cgp_status cgp_ledger_export(const cgp_ledger* ledger, const char* path) {
  CGP_REQUIRE(ledger && path, "null argument");
  return guarded([&] { export_ledger(ledger->ledger, path); });
}

size_t cgp_ledger_size(const cgp_ledger* ledger) { return ledger ? ledger->ledger.size() : 0; }

cgp_status cgp_ledger_run(const cgp_ledger* ledger, size_t index, cgp_run* out) {
  CGP_REQUIRE(ledger && out, "null argument");
  if (index >= ledger->ledger.size()) return fail(CGP_ERR_REQUEST, "run index out of range");
  *out = from_run(ledger->ledger.runs()[index]);
  return CGP_OK;
}

cgp_status cgp_ledger_box(const cgp_ledger* ledger, cgp_box* out) {
  CGP_REQUIRE(ledger && out, "null argument");
  *out = from_box(ledger->ledger.box());
  return CGP_OK;
}

void cgp_ledger_free(cgp_ledger* ledger) { delete ledger; }

cgp_status cgp_model_fit(const cgp_ledger* ledger, cgp_metric metric, const cgp_fit_config* config,
                         cgp_model** out) {
  CGP_REQUIRE(ledger && out, "null argument");
  return guarded([&] {
    const FitConfig fc = config ? to_fit_config(*config) : FitConfig{};
    *out = new cgp_model{fit(ledger->ledger, to_metric(metric), fc)};
  });
}

cgp_status cgp_model_load(const char* path, cgp_model** out) {
  CGP_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new cgp_model{load_model(path)}; });
}

cgp_status cgp_model_save(const cgp_model* model, const char* path) {
  CGP_REQUIRE(model && path, "null argument");
  return guarded([&] { save_model(model->model, path); });
}

cgp_status cgp_model_write_fit_report(const cgp_model* model, const char* path) {
  CGP_REQUIRE(model && path, "null argument");
  return guarded([&] { write_text_file(path, format_fit_report(model->model)); });
}

cgp_status cgp_model_predict(const cgp_model* model, cgp_point query, double* mean, double* variance) {
  CGP_REQUIRE(model, "null argument");
  return guarded([&] {
    const Prediction p = model->model.predict(to_point(query));
    if (mean) *mean = p.mean;
    if (variance) *variance = p.variance;
  });
}

cgp_status cgp_model_info_get(const cgp_model* model, cgp_model_info* out) {
  CGP_REQUIRE(model && out, "null argument");
  return guarded([&] {
    const GpModel& m = model->model;
    const KernelParams& p = m.params();
    out->metric = from_metric(m.metric());
    out->training_size = m.training().size();
    out->max_case_id = m.max_case_id();
    out->smoothness = from_smoothness(p.smoothness);
    out->signal_variance = p.signal_variance;
    out->lengthscales[0] = p.lengthscales[0];
    out->lengthscales[1] = p.lengthscales[1];
    out->noise_variance = p.noise_variance;
    out->output_offset = m.transform().offset;
    out->output_scale = m.transform().scale;
    out->jitter = m.jitter();
    out->log_marginal_likelihood = m.log_marginal_likelihood();
    out->max_in_sample_error_pct = max_in_sample_error_pct(m);
    out->box = from_box(m.box());
  });
}

cgp_status cgp_model_augment(const cgp_model* model, const cgp_ledger* runs, cgp_model** out) {
  CGP_REQUIRE(model && runs && out, "null argument");
  return guarded([&] { *out = new cgp_model{augment_and_refit(model->model, runs->ledger.runs())}; });
}

void cgp_model_free(cgp_model* model) { delete model; }

cgp_status cgp_propose(const cgp_model* model, const cgp_candidate_config* candidates, size_t k,
                       cgp_point* out_points, size_t* out_count) {
  CGP_REQUIRE(model && candidates && out_points && out_count, "null argument");
  return guarded([&] {
    auto pts = propose_points(model->model, make_candidates(model->model, *candidates), k);
    for (size_t i = 0; i < pts.size(); ++i) out_points[i] = from_point(pts[i]);
    *out_count = pts.size();
  });
}

cgp_status cgp_write_pending(const char* path, const cgp_point* points, size_t n, int first_case_id) {
  CGP_REQUIRE(path && (points || n == 0), "null argument");
  return guarded([&] {
    std::vector<PendingPoint> v;
    for (size_t i = 0; i < n; ++i) v.push_back({first_case_id + int(i), to_point(points[i])});
    write_pending(v, path);
  });
}

cgp_status cgp_ledger_match_pending(const cgp_ledger* results, const char* pending_path,
                                    cgp_ledger** out) {
  CGP_REQUIRE(results && pending_path && out, "null argument");
  return guarded([&] {
    std::vector<RunRecord> matched;
    for (const auto& p : read_pending(pending_path)) {
      const RunRecord* r = results->ledger.find_input(p.input);
      if (!r)
        throw Error(ErrorKind::Request, "results are missing pending case " + std::to_string(p.case_id) +
                                            " at (" + format_double(p.input.torso_angle_deg) + ", " +
                                            format_double(p.input.dring_z) + ")");
      matched.push_back(*r);
    }
    *out = new cgp_ledger{Ledger(std::move(matched), results->ledger.box())};
  });
}

cgp_status cgp_evaluate(const cgp_model* model, const cgp_ledger* test_runs, double threshold_pct,
                        cgp_report** out) {
  CGP_REQUIRE(model && test_runs && out, "null argument");
  return guarded([&] {
    auto r = evaluate_accuracy(model->model, test_runs->ledger.runs(), threshold_pct);
    std::string table = format_accuracy_table(r);
    *out = new cgp_report{std::move(r), std::move(table)};
  });
}

cgp_status cgp_report_summary(const cgp_report* report, cgp_accuracy_summary* out) {
  CGP_REQUIRE(report && out, "null argument");
  const auto& r = report->report;
  *out = {from_metric(r.metric), r.entries.size(), r.training_size, r.worst_error_pct,
          r.threshold_pct, r.passed ? 1 : 0};
  return CGP_OK;
}

cgp_status cgp_report_entry(const cgp_report* report, size_t index, cgp_accuracy_entry* out) {
  CGP_REQUIRE(report && out, "null argument");
  if (index >= report->report.entries.size()) return fail(CGP_ERR_REQUEST, "entry index out of range");
  const auto& e = report->report.entries[index];
  *out = {e.case_id, from_point(e.point), e.predicted, e.observed, e.rel_error_pct, e.outside_box ? 1 : 0};
  return CGP_OK;
}

cgp_status cgp_report_write(const cgp_report* report, const char* path) {
  CGP_REQUIRE(report && path, "null argument");
  return guarded([&] { write_text_file(path, format_accuracy_report(report->report)); });
}

const char* cgp_report_table(const cgp_report* report) { return report ? report->table.c_str() : ""; }

void cgp_report_free(cgp_report* report) { delete report; }

cgp_status cgp_adaptive_loop(const cgp_model* initial, cgp_oracle_fn oracle, void* user,
                             const cgp_candidate_config* candidates, const cgp_loop_options* options,
                             cgp_loop** out) {
  CGP_REQUIRE(oracle, "null oracle");
  Oracle fn = [oracle, user](const InputPoint& q, int case_id) -> std::optional<RunRecord> {
    cgp_run run{};
    if (!oracle(user, from_point(q), case_id, &run)) return std::nullopt;
    return to_run(run);
  };
  return run_loop(initial, fn, candidates, options, out);
}

cgp_status cgp_adaptive_loop_ledger(const cgp_model* initial, const cgp_ledger* oracle,
                                    const cgp_candidate_config* candidates, const cgp_loop_options* options,
                                    cgp_loop** out) {
  CGP_REQUIRE(oracle, "null oracle ledger");
  return run_loop(initial, ledger_oracle(oracle->ledger), candidates, options, out);
}

cgp_status cgp_loop_summary_get(const cgp_loop* loop, cgp_loop_summary* out) {
  CGP_REQUIRE(loop && out, "null argument");
  const auto& r = loop->result;
  *out = {r.rounds, r.passed ? 1 : 0, r.suspended ? 1 : 0, r.reports.size(), r.pending.size()};
  return CGP_OK;
}

const cgp_model* cgp_loop_model(const cgp_loop* loop) { return loop ? &loop->model : nullptr; }

const cgp_report* cgp_loop_report(const cgp_loop* loop, size_t index) {
  if (!loop || index >= loop->reports.size()) return nullptr;
  return &loop->reports[index];
}

cgp_status cgp_loop_write_pending(const cgp_loop* loop, const char* path) {
  CGP_REQUIRE(loop && path, "null argument");
  return guarded([&] { write_pending(loop->result.pending, path); });
}

void cgp_loop_free(cgp_loop* loop) { delete loop; }

cgp_status cgp_distribution_compute(const cgp_model* model, const cgp_stats_config* config,
                                    cgp_distribution** out) {
  CGP_REQUIRE(model && out, "null argument");
  return guarded([&] {
    const StatsConfig sc = config ? to_stats_config(*config) : StatsConfig{};
    *out = new cgp_distribution{compute_distribution(model->model, sc)};
  });
}

cgp_status cgp_distribution_summary(const cgp_distribution* dist, cgp_summary* out) {
  CGP_REQUIRE(dist && out, "null argument");
  const auto& s = dist->dist.summary;
  std::memset(out, 0, sizeof *out);
  out->metric = from_metric(dist->dist.metric);
  out->n_samples = s.n_samples;
  out->mean = s.mean;
  out->std = s.std;
  out->mode = s.mode;
  out->min = s.min;
  out->max = s.max;
  out->n_var = s.var_levels.size();
  for (size_t i = 0; i < s.var_levels.size() && i < CGP_MAX_PERCENTILES; ++i) {
    out->var_percentiles[i] = s.var_levels[i].percentile;
    out->var_values[i] = s.var_levels[i].value;
  }
  return CGP_OK;
}

size_t cgp_distribution_size(const cgp_distribution* dist) { return dist ? dist->dist.values.size() : 0; }

const double* cgp_distribution_values(const cgp_distribution* dist) {
  return dist ? dist->dist.values.data() : nullptr;
}

cgp_status cgp_distribution_write_histogram_csv(const cgp_distribution* dist, const char* path) {
  CGP_REQUIRE(dist && path, "null argument");
  return guarded([&] { write_text_file(path, format_histogram_csv(dist->dist.histogram)); });
}

cgp_status cgp_distribution_write_svg(const cgp_distribution* dist, const char* path) {
  CGP_REQUIRE(dist && path, "null argument");
  return guarded(
      [&] { write_text_file(path, format_histogram_svg(dist->dist.histogram, dist->dist.summary)); });
}

cgp_status cgp_write_summary_document(const cgp_distribution* const* dists, size_t n, const char* path) {
  CGP_REQUIRE(dists && path, "null argument");
  return guarded([&] {
    std::vector<DistributionSummary> s;
    for (size_t i = 0; i < n; ++i) {
      if (!dists[i]) throw Error(ErrorKind::Request, "null distribution");
      s.push_back(dists[i]->dist.summary);
    }
    write_text_file(path, format_summary_document(s));
  });
}

void cgp_distribution_free(cgp_distribution* dist) { delete dist; }

}  // extern "C"
