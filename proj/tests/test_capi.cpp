#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "crashgp/crashgp.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "crashgp_test_capi";
  fs::create_directories(dir);
  return dir / name;
}

struct Fixture {
  cgp_ledger* all = nullptr;
  cgp_ledger* grid = nullptr;
  Fixture() {
    REQUIRE(cgp_ledger_load_fixture(&all) == CGP_OK);
    std::vector<int> ids;
    for (int i = 1; i <= 25; ++i) ids.push_back(i);
    REQUIRE(cgp_ledger_select(all, ids.data(), ids.size(), &grid) == CGP_OK);
  }
  ~Fixture() {
    cgp_ledger_free(grid);
    cgp_ledger_free(all);
  }
};

cgp_model* fit(const cgp_ledger* l, cgp_metric m) {
  cgp_fit_config cfg;
  cgp_fit_config_default(&cfg);
  cgp_model* model = nullptr;
  REQUIRE(cgp_model_fit(l, m, &cfg, &model) == CGP_OK);
  return model;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int fixture_oracle(void* user, cgp_point q, int case_id, cgp_run* out) {
  const auto* l = static_cast<const cgp_ledger*>(user);
  for (size_t i = 0; i < cgp_ledger_size(l); ++i) {
    cgp_run r;
    cgp_ledger_run(l, i, &r);
    if (r.input.torso_angle_deg == q.torso_angle_deg && r.input.dring_z == q.dring_z) {
      *out = r;
      out->case_id = case_id;
      return 1;
    }
  }
  return 0;
}

}  // namespace

TEST_CASE("names and defaults") {
  CHECK(std::string(cgp_version()).size() > 0);
  CHECK(std::string(cgp_status_name(CGP_OK)) == "ok");
  CHECK(std::string(cgp_metric_name(CGP_METRIC_A_T1_MAX)) == "a_t1_max");
  cgp_metric m;
  CHECK(cgp_metric_parse("hic15", &m) == CGP_OK);
  CHECK(m == CGP_METRIC_HIC15);
  CHECK(cgp_metric_parse("nope", &m) != CGP_OK);
  cgp_box box;
  cgp_box_default(&box);
  double u1, u2;
  CHECK(cgp_normalize(&box, {2.5, 0.0}, &u1, &u2) == CGP_OK);
  CHECK(u1 == doctest::Approx(0.625));
  CHECK(u2 == doctest::Approx(0.5));
}

TEST_CASE("null arguments are rejected") {
  CHECK(cgp_ledger_load_fixture(nullptr) == CGP_ERR_INVALID_ARGUMENT);
  CHECK(cgp_model_predict(nullptr, {0, 0}, nullptr, nullptr) == CGP_ERR_INVALID_ARGUMENT);
  CHECK(std::string(cgp_last_error()).size() > 0);
  cgp_ledger_free(nullptr);
  cgp_model_free(nullptr);
  cgp_report_free(nullptr);
  cgp_distribution_free(nullptr);
  cgp_loop_free(nullptr);
}

TEST_CASE("ledger handles") {
  Fixture f;
  CHECK(cgp_ledger_size(f.all) == 27);
  cgp_run r;
  REQUIRE(cgp_ledger_run(f.all, 26, &r) == CGP_OK);
  CHECK(r.case_id == 27);
  CHECK(r.hic15 == 27.54);
  CHECK(cgp_ledger_run(f.all, 27, &r) == CGP_ERR_REQUEST);
  const int bad = 99;
  cgp_ledger* sel = nullptr;
  CHECK(cgp_ledger_select(f.all, &bad, 1, &sel) == CGP_ERR_REQUEST);
  CHECK(sel == nullptr);

  const cgp_run out_of_box{1, {11.0, 0.0}, 20.0, 14.0};
  cgp_box box;
  cgp_box_default(&box);
  CHECK(cgp_ledger_from_runs(&out_of_box, 1, &box, &sel) == CGP_ERR_RANGE);

  const fs::path path = scratch("ledger.csv");
  REQUIRE(cgp_ledger_export(f.all, path.string().c_str()) == CGP_OK);
  cgp_ledger* back = nullptr;
  REQUIRE(cgp_ledger_ingest(path.string().c_str(), &box, &back) == CGP_OK);
  CHECK(cgp_ledger_size(back) == 27);
  cgp_ledger_free(back);
  CHECK(cgp_ledger_ingest(scratch("missing.csv").string().c_str(), &box, &back) == CGP_ERR_IO);
}

TEST_CASE("model fit, persistence and prediction") {
  Fixture f;
  cgp_model* m = fit(f.all, CGP_METRIC_HIC15);
  cgp_model_info info;
  REQUIRE(cgp_model_info_get(m, &info) == CGP_OK);
  CHECK(info.training_size == 27);
  CHECK(info.max_case_id == 27);
  CHECK(info.noise_variance <= 1e-6);
  CHECK(info.max_in_sample_error_pct < 1.0);

  const fs::path path = scratch("model.json");
  REQUIRE(cgp_model_save(m, path.string().c_str()) == CGP_OK);
  cgp_model* back = nullptr;
  REQUIRE(cgp_model_load(path.string().c_str(), &back) == CGP_OK);
  double a, av, b, bv;
  REQUIRE(cgp_model_predict(m, {1.3, -2.2}, &a, &av) == CGP_OK);
  REQUIRE(cgp_model_predict(back, {1.3, -2.2}, &b, &bv) == CGP_OK);
  CHECK(a == b);
  CHECK(av == bv);
  CHECK(cgp_model_write_fit_report(m, scratch("fit.json").string().c_str()) == CGP_OK);

  std::ofstream(scratch("junk.json")) << "{\"format\": \"other\"}";
  cgp_model* junk = nullptr;
  CHECK(cgp_model_load(scratch("junk.json").string().c_str(), &junk) != CGP_OK);
  cgp_model_free(back);
  cgp_model_free(m);

  const int one = 1;
  cgp_ledger* single = nullptr;
  REQUIRE(cgp_ledger_select(f.all, &one, 1, &single) == CGP_OK);
  cgp_fit_config cfg;
  cgp_fit_config_default(&cfg);
  CHECK(cgp_model_fit(single, CGP_METRIC_HIC15, &cfg, &m) == CGP_ERR_DATA);
  cgp_ledger_free(single);
}

TEST_CASE("propose, evaluate and augment") {
  Fixture f;
  cgp_model* m = fit(f.grid, CGP_METRIC_A_T1_MAX);
  cgp_candidate_config cc;
  cgp_candidate_config_default(&cc);
  cgp_point pts[16];
  size_t count = 0;
  REQUIRE(cgp_propose(m, &cc, 5, pts, &count) == CGP_OK);
  CHECK(count == 5);
  CHECK(cgp_propose(m, &cc, 17, pts, &count) == CGP_ERR_REQUEST);

  const fs::path pending = scratch("pending.csv");
  const cgp_point added[2] = {{-2.5, -5.0}, {2.5, 0.0}};
  REQUIRE(cgp_write_pending(pending.string().c_str(), added, 2, 26) == CGP_OK);
  CHECK(slurp(pending).rfind("case,torso_angle_deg,dring_z\n", 0) == 0);
  cgp_ledger* tests = nullptr;
  REQUIRE(cgp_ledger_match_pending(f.all, pending.string().c_str(), &tests) == CGP_OK);
  CHECK(cgp_ledger_size(tests) == 2);
  CHECK(cgp_ledger_match_pending(f.grid, pending.string().c_str(), &tests) == CGP_ERR_REQUEST);

  cgp_report* rep = nullptr;
  REQUIRE(cgp_evaluate(m, tests, 10.0, &rep) == CGP_OK);
  cgp_accuracy_summary s;
  REQUIRE(cgp_report_summary(rep, &s) == CGP_OK);
  CHECK(s.entries == 2);
  CHECK(!s.passed);
  cgp_accuracy_entry e;
  REQUIRE(cgp_report_entry(rep, 0, &e) == CGP_OK);
  CHECK(e.case_id == 26);
  CHECK(e.rel_error_pct >= 10.0);
  CHECK(std::string(cgp_report_table(rep)).size() > 0);
  CHECK(cgp_report_write(rep, scratch("acc.json").string().c_str()) == CGP_OK);
  cgp_report_free(rep);

  cgp_model* m27 = nullptr;
  REQUIRE(cgp_model_augment(m, tests, &m27) == CGP_OK);
  cgp_model_info info;
  cgp_model_info_get(m27, &info);
  CHECK(info.training_size == 27);
  REQUIRE(cgp_evaluate(m27, tests, 10.0, &rep) == CGP_OK);
  cgp_report_summary(rep, &s);
  CHECK(s.passed);
  cgp_report_free(rep);
  cgp_model_free(m27);
  cgp_ledger_free(tests);
  cgp_model_free(m);
}

TEST_CASE("adaptive loop through a callback and a ledger") {
  Fixture f;
  cgp_model* m = fit(f.grid, CGP_METRIC_A_T1_MAX);
  const fs::path cands = scratch("cands.csv");
  const cgp_point added[2] = {{-2.5, -5.0}, {2.5, 0.0}};
  REQUIRE(cgp_write_pending(cands.string().c_str(), added, 2, 26) == CGP_OK);
  cgp_candidate_config cc;
  cgp_candidate_config_default(&cc);
  cc.source = CGP_CANDIDATES_FILE;
  const std::string cands_path = cands.string();
  cc.path = cands_path.c_str();
  cgp_loop_options opts;
  cgp_loop_options_default(&opts);

  for (int pass = 0; pass < 2; ++pass) {
    cgp_loop* loop = nullptr;
    if (pass == 0)
      REQUIRE(cgp_adaptive_loop(m, fixture_oracle, f.all, &cc, &opts, &loop) == CGP_OK);
    else
      REQUIRE(cgp_adaptive_loop_ledger(m, f.all, &cc, &opts, &loop) == CGP_OK);
    cgp_loop_summary s;
    REQUIRE(cgp_loop_summary_get(loop, &s) == CGP_OK);
    CHECK(s.passed);
    CHECK(!s.suspended);
    cgp_model_info info;
    cgp_model_info_get(cgp_loop_model(loop), &info);
    CHECK(info.training_size == 27);
    CHECK(cgp_loop_report(loop, 0) != nullptr);
    CHECK(cgp_loop_report(loop, s.reports) == nullptr);
    cgp_loop_free(loop);
  }

  cgp_loop* loop = nullptr;
  REQUIRE(cgp_adaptive_loop_ledger(m, f.grid, &cc, &opts, &loop) == CGP_OK);
  cgp_loop_summary s;
  cgp_loop_summary_get(loop, &s);
  CHECK(s.suspended);
  CHECK(s.pending == 2);
  REQUIRE(cgp_loop_write_pending(loop, scratch("loop_pending.csv").string().c_str()) == CGP_OK);
  CHECK(slurp(scratch("loop_pending.csv")).find("26,-2.5,-5") != std::string::npos);
  cgp_loop_free(loop);
  cgp_model_free(m);
}

TEST_CASE("distributions") {
  Fixture f;
  cgp_model* m = fit(f.all, CGP_METRIC_HIC15);
  cgp_stats_config sc;
  cgp_stats_config_default(&sc);
  CHECK(sc.n_samples == 10000);
  CHECK(sc.n_percentiles == 2);
  sc.n_samples = 2000;
  cgp_distribution* d = nullptr;
  REQUIRE(cgp_distribution_compute(m, &sc, &d) == CGP_OK);
  CHECK(cgp_distribution_size(d) == 2000);
  cgp_summary s;
  REQUIRE(cgp_distribution_summary(d, &s) == CGP_OK);
  CHECK(s.n_var == 2);
  CHECK(s.min <= s.var_values[0]);
  CHECK(s.var_values[0] <= s.var_values[1]);
  CHECK(s.var_values[1] <= s.max);
  CHECK(cgp_distribution_values(d)[0] >= s.min);
  CHECK(cgp_distribution_write_histogram_csv(d, scratch("h.csv").string().c_str()) == CGP_OK);
  CHECK(cgp_distribution_write_svg(d, scratch("h.svg").string().c_str()) == CGP_OK);
  const cgp_distribution* list[] = {d};
  CHECK(cgp_write_summary_document(list, 1, scratch("s.json").string().c_str()) == CGP_OK);

  sc.n_percentiles = 1;
  sc.percentiles[0] = 100.0;
  cgp_distribution* bad = nullptr;
  CHECK(cgp_distribution_compute(m, &sc, &bad) != CGP_OK);
  CHECK(bad == nullptr);
  cgp_distribution_free(d);
  cgp_model_free(m);
}
