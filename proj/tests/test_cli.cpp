#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::current_path() / "cli_scratch";

fs::path fresh(const char* name) {
  const fs::path dir = kRoot / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Runs the CLI with the given arguments; output goes to `log`.
int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + CRASHGP_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

int run_in(const fs::path& dir, const std::string& args) {
  return run(args + " --out \"" + dir.string() + "\"", dir / "log.txt");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const char* kResults2627 =
    "case,torso_angle_deg,dring_z,hic15,a_t1_max\n26,-2.5,-5,24.28,13.98\n27,2.5,0,27.54,13.43\n";

}  // namespace

TEST_CASE("usage errors exit with 2") {
  const fs::path dir = fresh("usage");
  CHECK(run_in(dir, "") == 2);
  CHECK(run_in(dir, "fit --no-such-flag") == 2);
  CHECK(run_in(dir, "fit") == 2);
  CHECK(run_in(dir, "fit --fixture --metric head") == 2);
  CHECK(run_in(dir, "fit --fixture --cases 1") == 2);
  CHECK(slurp(dir / "log.txt").find("at least 2") != std::string::npos);
  CHECK(run_in(dir, "stats --model \"" + (dir / "missing.json").string() + "\"") == 2);
  CHECK(run_in(dir, "--help") == 0);
}

TEST_CASE("ingest validates and names the bad line") {
  const fs::path dir = fresh("ingest");
  write(dir / "bad.csv", "case,torso_angle_deg,dring_z,hic15,a_t1_max\n1,0,0,20,14\n2,11,0,20,14\n");
  CHECK(run_in(dir, "ingest --input \"" + (dir / "bad.csv").string() + "\"") == 2);
  CHECK(slurp(dir / "log.txt").find("line 3") != std::string::npos);
  write(dir / "empty.csv", "");
  CHECK(run_in(dir, "ingest --input \"" + (dir / "empty.csv").string() + "\"") == 2);
  write(dir / "good.csv", kResults2627);
  CHECK(run_in(dir, "ingest --input \"" + (dir / "good.csv").string() + "\"") == 0);
  CHECK(lines(slurp(dir / "ledger.csv")).size() == 3);
  CHECK(fs::exists(dir / "ledger.csv.meta"));
}

TEST_CASE("export then fit from the exported ledger") {
  const fs::path dir = fresh("export");
  REQUIRE(run_in(dir, "export --fixture") == 0);
  const auto rows = lines(slurp(dir / "ledger.csv"));
  REQUIRE(rows.size() == 28);
  CHECK(rows[0] == "case,torso_angle_deg,dring_z,hic15,a_t1_max");
  REQUIRE(run_in(dir, "fit --ledger \"" + (dir / "ledger.csv").string() + "\" --metric hic15") == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "fit_report_hic15.json"));
  CHECK(report.is_object());
  CHECK(!fs::exists(dir / "model_a_t1_max.json"));
}

TEST_CASE("fit reproduces the fixture and propose writes a manifest") {
  const fs::path dir = fresh("propose");
  REQUIRE(run_in(dir, "fit --fixture --cases 1-25") == 0);
  CHECK(fs::exists(dir / "model_hic15.json"));
  CHECK(fs::exists(dir / "model_a_t1_max.json"));
  REQUIRE(run_in(dir, "propose --metric a_t1_max --k 5") == 0);
  const auto rows = lines(slurp(dir / "pending_a_t1_max.csv"));
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "case,torso_angle_deg,dring_z");
  CHECK(rows[1].rfind("26,", 0) == 0);
  CHECK(rows[5].rfind("30,", 0) == 0);
  CHECK(run_in(dir, "propose --metric a_t1_max --k 17") == 2);
}

TEST_CASE("check requires every pending point") {
  const fs::path dir = fresh("pending");
  REQUIRE(run_in(dir, "fit --fixture --cases 1-25 --metric a_t1_max") == 0);
  write(dir / "pending_a_t1_max.csv", "case,torso_angle_deg,dring_z\n26,-2.5,-5\n27,2.5,0\n");
  write(dir / "partial.csv", "case,torso_angle_deg,dring_z,hic15,a_t1_max\n26,-2.5,-5,24.28,13.98\n");
  CHECK(run_in(dir, "check --metric a_t1_max --results \"" + (dir / "partial.csv").string() + "\"") == 2);
  CHECK(run_in(dir, "check --metric a_t1_max") == 2);
}

TEST_CASE("full pipeline replay") {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = fresh("pipeline");
  write(dir / "results.csv", kResults2627);
  const std::string results = " --results \"" + (dir / "results.csv").string() + "\"";

  REQUIRE(run_in(dir, "fit --fixture --cases 1-25") == 0);
  CHECK(run_in(dir, "check --metric hic15" + results) == 0);
  CHECK(run_in(dir, "check --metric a_t1_max" + results) == 3);
  CHECK(run_in(dir, "check" + results) == 3);
  const auto before = nlohmann::json::parse(slurp(dir / "accuracy_a_t1_max.json"));
  CHECK(!before.at("passed").get<bool>());

  REQUIRE(run_in(dir, "augment --metric a_t1_max" + results) == 0);
  const auto model = nlohmann::json::parse(slurp(dir / "model_a_t1_max.json"));
  CHECK(model.at("training").size() == 27);
  CHECK(run_in(dir, "check --metric a_t1_max" + results) == 0);
  const auto after = nlohmann::json::parse(slurp(dir / "accuracy_a_t1_max.json"));
  CHECK(after.at("passed").get<bool>());

  REQUIRE(run_in(dir, "fit --fixture") == 0);
  REQUIRE(run_in(dir, "stats") == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  REQUIRE(summary.at("metrics").size() == 2);
  CHECK(fs::exists(dir / "hist_hic15.svg"));
  CHECK(lines(slurp(dir / "hist_a_t1_max.csv")).front() == "bin_lo,bin_hi,density");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(seconds < 60.0);
}

TEST_CASE("adapt replays the narrative and suspends without data") {
  const fs::path dir = fresh("adapt");
  write(dir / "results.csv", kResults2627);
  write(dir / "cands.csv", "case,torso_angle_deg,dring_z\n26,-2.5,-5\n27,2.5,0\n");
  REQUIRE(run_in(dir, "fit --fixture --cases 1-25 --metric a_t1_max") == 0);
  CHECK(run_in(dir, "adapt --metric a_t1_max --candidates file --candidates-file \"" +
                        (dir / "cands.csv").string() + "\" --results \"" + (dir / "results.csv").string() + "\"") == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "model_a_t1_max.json")).at("training").size() == 27);

  const fs::path dir2 = fresh("adapt_suspend");
  write(dir2 / "results.csv", kResults2627);
  REQUIRE(run_in(dir2, "fit --fixture --cases 1-25 --metric hic15") == 0);
  CHECK(run_in(dir2, "adapt --metric hic15 --results \"" + (dir2 / "results.csv").string() + "\"") == 4);
  const auto rows = lines(slurp(dir2 / "pending_hic15.csv"));
  CHECK(rows.size() == 6);
  CHECK(rows[0] == "case,torso_angle_deg,dring_z");
}

TEST_CASE("config file with flag override") {
  const fs::path dir = fresh("config");
  write(dir / "run.ini", "fixture=true\nmetric=a_t1_max\nrestarts=4\n");
  REQUIRE(run_in(dir, "fit --config \"" + (dir / "run.ini").string() + "\"") == 0);
  CHECK(fs::exists(dir / "model_a_t1_max.json"));
  CHECK(!fs::exists(dir / "model_hic15.json"));
  REQUIRE(run_in(dir, "fit --config \"" + (dir / "run.ini").string() + "\" --metric hic15") == 0);
  CHECK(fs::exists(dir / "model_hic15.json"));
}

TEST_CASE("identical runs produce identical files") {
  const fs::path a = fresh("det_a"), b = fresh("det_b");
  for (const fs::path& d : {a, b}) {
    REQUIRE(run_in(d, "fit --fixture --seed 3") == 0);
    REQUIRE(run_in(d, "stats --n 3000 --lhs-seed 9") == 0);
  }
  for (const char* f : {"model_hic15.json", "model_a_t1_max.json", "summary.json", "hist_hic15.csv",
                        "hist_a_t1_max.csv", "hist_hic15.svg", "hist_a_t1_max.svg"})
    CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
}
