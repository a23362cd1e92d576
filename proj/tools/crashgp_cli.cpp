// crashgp command-line front end. Links only the C interface.

#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crashgp/crashgp.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitGate = 3;
constexpr int kExitSuspended = 4;

// Thrown to unwind with an exit code after a C call fails.
struct CommandError {
  int code;
  std::string message;
};

void check(cgp_status s, const std::string& context) {
  if (s != CGP_OK)
    throw CommandError{kExitUsage, context + ": " + cgp_status_name(s) + " error: " + cgp_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using LedgerPtr = std::unique_ptr<cgp_ledger, Deleter<cgp_ledger, cgp_ledger_free>>;
using ModelPtr = std::unique_ptr<cgp_model, Deleter<cgp_model, cgp_model_free>>;
using ReportPtr = std::unique_ptr<cgp_report, Deleter<cgp_report, cgp_report_free>>;
using DistPtr = std::unique_ptr<cgp_distribution, Deleter<cgp_distribution, cgp_distribution_free>>;
using LoopPtr = std::unique_ptr<cgp_loop, Deleter<cgp_loop, cgp_loop_free>>;

struct Options {
  // data
  bool fixture = false;
  std::string ledger;
  std::string cases;
  std::string input;
  std::string results;
  std::string pending;
  std::vector<std::string> torso_range{"-10", "10"};
  std::vector<std::string> dring_range{"-5", "5"};
  // models
  std::string metric = "both";
  std::string model;
  std::string out = ".";
  // fit
  std::uint64_t seed = 0;
  unsigned restarts = 8;
  std::string smoothness = "5/2";
  double ls_min = 0.05, ls_max = 5.0;
  double sv_min = 1e-3, sv_max = 1e3;
  double noise_min = 1e-8, noise_max = 1e-6;
  bool center_outputs = false;
  // adaptive
  double threshold = 10.0;
  std::size_t k = 5;
  unsigned max_rounds = 5;
  std::string candidates = "grid";
  std::string candidates_file;
  unsigned grid_levels = 5;
  std::size_t pool_size = 1000;
  std::uint64_t pool_seed = 0;
  bool augment_all = false;
  // stats
  std::size_t n = 10000;
  std::uint64_t lhs_seed = 0;
  std::vector<double> percentiles{90.0, 95.0};
  std::size_t bins = 100;
  std::size_t mode_bins = 100;
  bool posterior_sampling = false;
  std::uint64_t sampling_seed = 1;
};

double parse_bound(const std::string& s) {
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw CommandError{kExitUsage, "not a number: '" + s + "'"};
  return v;
}

cgp_box design_box(const Options& o) {
  if (o.torso_range.size() != 2 || o.dring_range.size() != 2)
    throw CommandError{kExitUsage, "ranges take exactly two values: lo hi"};
  return {parse_bound(o.torso_range[0]), parse_bound(o.torso_range[1]), parse_bound(o.dring_range[0]),
          parse_bound(o.dring_range[1])};
}

// Results may include out-of-box points; evaluation flags them instead.
cgp_box permissive_box() {
  const double big = std::numeric_limits<double>::max();
  return {-big, big, -big, big};
}

std::vector<cgp_metric> metrics(const Options& o) {
  if (o.metric == "both") return {CGP_METRIC_HIC15, CGP_METRIC_A_T1_MAX};
  cgp_metric m;
  if (cgp_metric_parse(o.metric.c_str(), &m) != CGP_OK)
    throw CommandError{kExitUsage, "--metric must be hic15, a_t1_max or both"};
  return {m};
}

std::string path_in(const Options& o, const std::string& name) { return (fs::path(o.out) / name).string(); }

std::string model_path(const Options& o, cgp_metric m) {
  if (!o.model.empty()) return o.model;
  return path_in(o, std::string("model_") + cgp_metric_name(m) + ".json");
}

std::string pending_path(const Options& o, cgp_metric m) {
  if (!o.pending.empty()) return o.pending;
  return path_in(o, std::string("pending_") + cgp_metric_name(m) + ".csv");
}

std::vector<int> parse_cases(const std::string& spec) {
  std::vector<int> ids;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      auto dash = item.find('-', 1);
      if (dash == std::string::npos) {
        ids.push_back(std::stoi(item));
      } else {
        int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
        if (hi < lo) throw CommandError{kExitUsage, "bad case range '" + item + "'"};
        for (int i = lo; i <= hi; ++i) ids.push_back(i);
      }
    } catch (const std::logic_error&) {
      throw CommandError{kExitUsage, "bad case list '" + spec + "'"};
    }
  }
  return ids;
}

LedgerPtr load_ledger(const Options& o) {
  cgp_ledger* raw = nullptr;
  if (o.fixture) {
    check(cgp_ledger_load_fixture(&raw), "loading fixture");
  } else if (!o.ledger.empty()) {
    const cgp_box box = design_box(o);
    check(cgp_ledger_ingest(o.ledger.c_str(), &box, &raw), "reading ledger");
  } else {
    throw CommandError{kExitUsage, "a ledger is required: pass --fixture or --ledger FILE"};
  }
  LedgerPtr ledger(raw);
  if (!o.cases.empty()) {
    auto ids = parse_cases(o.cases);
    cgp_ledger* sel = nullptr;
    check(cgp_ledger_select(ledger.get(), ids.data(), ids.size(), &sel), "selecting cases");
    ledger.reset(sel);
  }
  return ledger;
}

ModelPtr load_model(const std::string& path) {
  if (!fs::exists(path)) throw CommandError{kExitUsage, "model file '" + path + "' does not exist"};
  cgp_model* raw = nullptr;
  check(cgp_model_load(path.c_str(), &raw), "loading model '" + path + "'");
  return ModelPtr(raw);
}

// With --model the metric comes from the file; otherwise one file per metric.
std::vector<std::pair<cgp_metric, ModelPtr>> load_models(const Options& o) {
  std::vector<std::pair<cgp_metric, ModelPtr>> out;
  if (!o.model.empty()) {
    ModelPtr m = load_model(o.model);
    cgp_model_info info;
    check(cgp_model_info_get(m.get(), &info), "reading model");
    out.emplace_back(info.metric, std::move(m));
    return out;
  }
  for (cgp_metric m : metrics(o)) out.emplace_back(m, load_model(model_path(o, m)));
  return out;
}

cgp_fit_config fit_config(const Options& o) {
  cgp_fit_config c;
  cgp_fit_config_default(&c);
  if (o.smoothness == "1/2" || o.smoothness == "0.5")
    c.smoothness = CGP_MATERN_1_2;
  else if (o.smoothness == "3/2" || o.smoothness == "1.5")
    c.smoothness = CGP_MATERN_3_2;
  else if (o.smoothness == "5/2" || o.smoothness == "2.5")
    c.smoothness = CGP_MATERN_5_2;
  else
    throw CommandError{kExitUsage, "--smoothness must be 1/2, 3/2 or 5/2"};
  c.restarts = o.restarts;
  c.seed = o.seed;
  c.lengthscale_lo = o.ls_min;
  c.lengthscale_hi = o.ls_max;
  c.signal_variance_lo = o.sv_min;
  c.signal_variance_hi = o.sv_max;
  c.noise_variance_lo = o.noise_min;
  c.noise_variance_hi = o.noise_max;
  c.center_outputs = o.center_outputs ? 1 : 0;
  return c;
}

cgp_candidate_config candidate_config(const Options& o) {
  cgp_candidate_config c;
  cgp_candidate_config_default(&c);
  if (o.candidates == "grid") {
    c.source = CGP_CANDIDATES_GRID_MIDPOINTS;
  } else if (o.candidates == "lhs") {
    c.source = CGP_CANDIDATES_LHS_POOL;
  } else if (o.candidates == "file") {
    c.source = CGP_CANDIDATES_FILE;
    if (o.candidates_file.empty()) throw CommandError{kExitUsage, "--candidates file needs --candidates-file"};
    c.path = o.candidates_file.c_str();
  } else {
    throw CommandError{kExitUsage, "--candidates must be grid, lhs or file"};
  }
  c.grid_levels = o.grid_levels;
  c.pool_size = o.pool_size;
  c.pool_seed = o.pool_seed;
  return c;
}

cgp_stats_config stats_config(const Options& o) {
  cgp_stats_config c;
  cgp_stats_config_default(&c);
  if (o.percentiles.size() > CGP_MAX_PERCENTILES) throw CommandError{kExitUsage, "too many percentiles"};
  c.n_samples = o.n;
  c.lhs_seed = o.lhs_seed;
  c.n_percentiles = o.percentiles.size();
  for (std::size_t i = 0; i < o.percentiles.size(); ++i) c.percentiles[i] = o.percentiles[i];
  c.histogram_bins = o.bins;
  c.mode_bins = o.mode_bins;
  c.posterior_sampling = o.posterior_sampling ? 1 : 0;
  c.sampling_seed = o.sampling_seed;
  return c;
}

LedgerPtr load_results(const Options& o) {
  if (o.results.empty()) throw CommandError{kExitUsage, "--results FILE is required"};
  const cgp_box box = permissive_box();
  cgp_ledger* raw = nullptr;
  check(cgp_ledger_ingest(o.results.c_str(), &box, &raw), "reading results");
  return LedgerPtr(raw);
}

// Results restricted to the pending manifest when one exists for the metric.
LedgerPtr test_runs_for(const Options& o, cgp_metric m, const cgp_ledger* results) {
  const std::string pending = pending_path(o, m);
  cgp_ledger* raw = nullptr;
  if (fs::exists(pending)) {
    check(cgp_ledger_match_pending(results, pending.c_str(), &raw), "matching pending manifest");
  } else {
    if (!o.pending.empty()) throw CommandError{kExitUsage, "pending manifest '" + pending + "' does not exist"};
    std::vector<int> ids;
    for (std::size_t i = 0; i < cgp_ledger_size(results); ++i) {
      cgp_run r;
      check(cgp_ledger_run(results, i, &r), "reading results");
      ids.push_back(r.case_id);
    }
    check(cgp_ledger_select(results, ids.data(), ids.size(), &raw), "reading results");
  }
  return LedgerPtr(raw);
}

void print_model(cgp_metric m, const cgp_model* model) {
  cgp_model_info info;
  check(cgp_model_info_get(model, &info), "reading model");
  std::printf("%-9s n=%zu  nu=%d/2  signal_var=%.6g  lengthscales=(%.6g, %.6g)  noise=%.3g  lml=%.6f  max in-sample error=%.4g%%\n",
              cgp_metric_name(m), info.training_size, int(info.smoothness), info.signal_variance,
              info.lengthscales[0], info.lengthscales[1], info.noise_variance, info.log_marginal_likelihood,
              info.max_in_sample_error_pct);
}

int cmd_fit(const Options& o) {
  LedgerPtr ledger = load_ledger(o);
  const cgp_fit_config cfg = fit_config(o);
  for (cgp_metric m : metrics(o)) {
    cgp_model* raw = nullptr;
    check(cgp_model_fit(ledger.get(), m, &cfg, &raw), std::string("fitting ") + cgp_metric_name(m));
    ModelPtr model(raw);
    const std::string mp = path_in(o, std::string("model_") + cgp_metric_name(m) + ".json");
    check(cgp_model_save(model.get(), mp.c_str()), "writing model");
    check(cgp_model_write_fit_report(model.get(), path_in(o, std::string("fit_report_") + cgp_metric_name(m) + ".json").c_str()),
          "writing fit report");
    print_model(m, model.get());
  }
  return kExitOk;
}

int cmd_propose(const Options& o) {
  const cgp_candidate_config cc = candidate_config(o);
  for (auto& [m, model] : load_models(o)) {
    std::vector<cgp_point> pts(o.k);
    std::size_t count = 0;
    check(cgp_propose(model.get(), &cc, o.k, pts.data(), &count), "proposing points");
    cgp_model_info info;
    check(cgp_model_info_get(model.get(), &info), "reading model");
    const std::string pp = pending_path(o, m);
    check(cgp_write_pending(pp.c_str(), pts.data(), count, info.max_case_id + 1), "writing pending manifest");
    std::printf("%s: %zu points written to %s\n", cgp_metric_name(m), count, pp.c_str());
    for (std::size_t i = 0; i < count; ++i)
      std::printf("  case %d  (%g, %g)\n", info.max_case_id + 1 + int(i), pts[i].torso_angle_deg, pts[i].dring_z);
  }
  return kExitOk;
}

int cmd_check(const Options& o) {
  LedgerPtr results = load_results(o);
  bool all_passed = true;
  for (auto& [m, model] : load_models(o)) {
    LedgerPtr tests = test_runs_for(o, m, results.get());
    cgp_report* raw = nullptr;
    check(cgp_evaluate(model.get(), tests.get(), o.threshold, &raw), "evaluating accuracy");
    ReportPtr report(raw);
    check(cgp_report_write(report.get(), path_in(o, std::string("accuracy_") + cgp_metric_name(m) + ".json").c_str()),
          "writing accuracy report");
    std::fputs(cgp_report_table(report.get()), stdout);
    cgp_accuracy_summary s;
    check(cgp_report_summary(report.get(), &s), "reading report");
    all_passed = all_passed && s.passed;
  }
  return all_passed ? kExitOk : kExitGate;
}

int cmd_augment(const Options& o) {
  LedgerPtr results = load_results(o);
  for (auto& [m, model] : load_models(o)) {
    LedgerPtr tests = test_runs_for(o, m, results.get());
    cgp_report* raw = nullptr;
    check(cgp_evaluate(model.get(), tests.get(), o.threshold, &raw), "evaluating accuracy");
    ReportPtr report(raw);
    std::fputs(cgp_report_table(report.get()), stdout);
    std::vector<int> add;
    cgp_accuracy_summary s;
    check(cgp_report_summary(report.get(), &s), "reading report");
    for (std::size_t i = 0; i < s.entries; ++i) {
      cgp_accuracy_entry e;
      check(cgp_report_entry(report.get(), i, &e), "reading report");
      if (o.augment_all || !(e.rel_error_pct < s.threshold_pct)) add.push_back(e.case_id);
    }
    cgp_ledger* sel = nullptr;
    check(cgp_ledger_select(tests.get(), add.data(), add.size(), &sel), "selecting runs");
    LedgerPtr new_runs(sel);
    cgp_model* refit = nullptr;
    check(cgp_model_augment(model.get(), new_runs.get(), &refit), "refitting");
    ModelPtr updated(refit);
    const std::string mp = path_in(o, std::string("model_") + cgp_metric_name(m) + ".json");
    check(cgp_model_save(updated.get(), mp.c_str()), "writing model");
    check(cgp_model_write_fit_report(updated.get(), path_in(o, std::string("fit_report_") + cgp_metric_name(m) + ".json").c_str()),
          "writing fit report");
    std::printf("%s: added %zu run(s), model written to %s\n", cgp_metric_name(m), add.size(), mp.c_str());
    print_model(m, updated.get());
  }
  return kExitOk;
}

int cmd_adapt(const Options& o) {
  LedgerPtr results = load_results(o);
  const cgp_candidate_config cc = candidate_config(o);
  cgp_loop_options lo;
  cgp_loop_options_default(&lo);
  lo.k = o.k;
  lo.threshold_pct = o.threshold;
  lo.max_rounds = o.max_rounds;
  lo.augment_all = o.augment_all ? 1 : 0;
  int code = kExitOk;
  for (auto& [m, model] : load_models(o)) {
    cgp_loop* raw = nullptr;
    check(cgp_adaptive_loop_ledger(model.get(), results.get(), &cc, &lo, &raw), "running adaptive loop");
    LoopPtr loop(raw);
    cgp_loop_summary s;
    check(cgp_loop_summary_get(loop.get(), &s), "reading loop");
    for (std::size_t i = 0; i < s.reports; ++i) {
      const cgp_report* r = cgp_loop_report(loop.get(), i);
      std::printf("-- %s report %zu\n", cgp_metric_name(m), i + 1);
      std::fputs(cgp_report_table(r), stdout);
      check(cgp_report_write(r, path_in(o, std::string("adapt_") + cgp_metric_name(m) + "_" + std::to_string(i + 1) + ".json").c_str()),
            "writing report");
    }
    const std::string mp = path_in(o, std::string("model_") + cgp_metric_name(m) + ".json");
    check(cgp_model_save(cgp_loop_model(loop.get()), mp.c_str()), "writing model");
    print_model(m, cgp_loop_model(loop.get()));
    if (s.suspended) {
      const std::string pp = pending_path(o, m);
      check(cgp_loop_write_pending(loop.get(), pp.c_str()), "writing pending manifest");
      std::printf("%s: waiting for %zu simulation result(s); manifest written to %s\n", cgp_metric_name(m), s.pending,
                  pp.c_str());
      if (code == kExitOk) code = kExitSuspended;
    } else if (!s.passed) {
      code = kExitGate;
    }
  }
  return code;
}

int cmd_stats(const Options& o) {
  const cgp_stats_config sc = stats_config(o);
  std::vector<DistPtr> dists;
  std::printf("%-9s %7s %9s %8s %8s %8s %8s", "metric", "n", "mean", "std", "mode", "min", "max");
  for (double p : o.percentiles) std::printf(" %10s", ("VaR" + std::to_string(int(p))).c_str());
  std::printf("\n");
  for (auto& [m, model] : load_models(o)) {
    cgp_distribution* raw = nullptr;
    check(cgp_distribution_compute(model.get(), &sc, &raw), "computing distribution");
    DistPtr d(raw);
    const std::string name = cgp_metric_name(m);
    check(cgp_distribution_write_histogram_csv(d.get(), path_in(o, "hist_" + name + ".csv").c_str()), "writing histogram");
    check(cgp_distribution_write_svg(d.get(), path_in(o, "hist_" + name + ".svg").c_str()), "writing plot");
    cgp_summary s;
    check(cgp_distribution_summary(d.get(), &s), "reading summary");
    std::printf("%-9s %7zu %9.3f %8.3f %8.3f %8.3f %8.3f", name.c_str(), s.n_samples, s.mean, s.std, s.mode, s.min, s.max);
    for (std::size_t i = 0; i < s.n_var; ++i) std::printf(" %10.3f", s.var_values[i]);
    std::printf("\n");
    dists.push_back(std::move(d));
  }
  std::vector<const cgp_distribution*> view;
  for (auto& d : dists) view.push_back(d.get());
  check(cgp_write_summary_document(view.data(), view.size(), path_in(o, "summary.json").c_str()), "writing summary");
  return kExitOk;
}

int cmd_ingest(const Options& o) {
  if (o.input.empty()) throw CommandError{kExitUsage, "--input FILE is required"};
  const cgp_box box = design_box(o);
  cgp_ledger* raw = nullptr;
  check(cgp_ledger_ingest(o.input.c_str(), &box, &raw), "ingesting '" + o.input + "'");
  LedgerPtr ledger(raw);
  const std::string dest = path_in(o, "ledger.csv");
  check(cgp_ledger_export(ledger.get(), dest.c_str()), "writing ledger");
  std::printf("%zu runs validated; ledger written to %s\n", cgp_ledger_size(ledger.get()), dest.c_str());
  return kExitOk;
}

int cmd_export(const Options& o) {
  LedgerPtr ledger = load_ledger(o);
  const std::string dest = path_in(o, "ledger.csv");
  check(cgp_ledger_export(ledger.get(), dest.c_str()), "writing ledger");
  std::printf("%zu runs written to %s\n", cgp_ledger_size(ledger.get()), dest.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-process surrogate for crash injury metrics"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.set_version_flag("--version", cgp_version());

  Options o;
  app.add_flag("--fixture", o.fixture, "Use the bundled 27-run dataset");
  app.add_option("--ledger", o.ledger, "Ledger CSV (case,torso_angle_deg,dring_z,hic15,a_t1_max)");
  app.add_option("--cases", o.cases, "Restrict the ledger to these case ids, e.g. 1-25,27");
  app.add_option("--input", o.input, "CSV to validate (ingest)");
  app.add_option("--results", o.results, "Simulation results CSV for check/augment/adapt");
  app.add_option("--pending", o.pending, "Pending manifest path (default OUT/pending_METRIC.csv)");
  app.add_option("--torso-range", o.torso_range, "Design box torso angle lo hi")->expected(2);
  app.add_option("--dring-range", o.dring_range, "Design box D-ring lo hi")->expected(2);
  app.add_option("--metric", o.metric, "hic15, a_t1_max or both")->check(CLI::IsMember({"hic15", "a_t1_max", "both"}));
  app.add_option("--model", o.model, "Model file (default OUT/model_METRIC.json)");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--seed", o.seed, "Hyperparameter search seed");
  app.add_option("--restarts", o.restarts, "Hyperparameter search restarts");
  app.add_option("--smoothness", o.smoothness, "Matern smoothness: 1/2, 3/2 or 5/2");
  app.add_option("--ls-min", o.ls_min);
  app.add_option("--ls-max", o.ls_max);
  app.add_option("--signal-var-min", o.sv_min);
  app.add_option("--signal-var-max", o.sv_max);
  app.add_option("--noise-min", o.noise_min);
  app.add_option("--noise-max", o.noise_max);
  app.add_flag("--center-outputs", o.center_outputs, "Subtract the output mean before fitting");
  app.add_option("--threshold", o.threshold, "Accuracy gate, percent relative error");
  app.add_option("--k", o.k, "Points proposed per round");
  app.add_option("--max-rounds", o.max_rounds);
  app.add_option("--candidates", o.candidates, "grid, lhs or file")->check(CLI::IsMember({"grid", "lhs", "file"}));
  app.add_option("--candidates-file", o.candidates_file, "Candidate points (pending-manifest format)");
  app.add_option("--grid-levels", o.grid_levels);
  app.add_option("--pool-size", o.pool_size);
  app.add_option("--pool-seed", o.pool_seed);
  app.add_flag("--augment-all", o.augment_all, "Add every tested run, not only failing ones");
  app.add_option("--n", o.n, "LHS sample count");
  app.add_option("--lhs-seed", o.lhs_seed);
  app.add_option("--percentiles", o.percentiles, "VaR percentiles")->delimiter(',');
  app.add_option("--bins", o.bins, "Histogram bins");
  app.add_option("--mode-bins", o.mode_bins, "Bins used to locate the mode");
  app.add_flag("--posterior-sampling", o.posterior_sampling, "Add posterior noise to each pushed-forward sample");
  app.add_option("--sampling-seed", o.sampling_seed);

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Command commands[] = {
      {"fit", "Fit one model per metric and write model and fit report files", cmd_fit},
      {"propose", "Write the highest-variance candidates to a pending manifest", cmd_propose},
      {"check", "Compare model predictions against simulation results (exit 3 on gate failure)", cmd_check},
      {"augment", "Add failing results to the training data and refit", cmd_augment},
      {"adapt", "Run the propose/check/augment loop with a results file as the simulator", cmd_adapt},
      {"stats", "Push LHS samples through the models and summarize the distributions", cmd_stats},
      {"ingest", "Validate a ledger CSV and write a canonical copy", cmd_ingest},
      {"export", "Write a ledger (or the bundled dataset) as CSV with a metadata sidecar", cmd_export},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    subs.emplace_back(sub, &c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (auto& [sub, cmd] : subs)
      if (sub->parsed()) return cmd->run(o);
  } catch (const CommandError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
