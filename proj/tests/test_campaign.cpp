#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <string>

#include "crashgp/campaign.hpp"
#include "crashgp/error.hpp"
#include "crashgp/random.hpp"

using namespace crashgp;

namespace {

// Independent transcription of the results table.
constexpr const char* kTable =
    "1,-10,-5,20.46,13.74\n2,-10,-2.5,19.44,14.32\n3,-10,0,18.91,13.68\n"
    "4,-10,2.5,19.44,13.33\n5,-10,5,19.34,13.64\n6,-5,-5,21.77,16.33\n"
    "7,-5,-2.5,21.93,15.29\n8,-5,0,21.38,14.61\n9,-5,2.5,21.42,13.92\n"
    "10,-5,5,22.00,14.71\n11,0,-5,26.41,14.82\n12,0,-2.5,25.02,14.86\n"
    "13,0,0,25.84,14.35\n14,0,2.5,25.11,13.20\n15,0,5,23.53,13.08\n"
    "16,5,-5,32.00,14.16\n17,5,-2.5,32.91,14.46\n18,5,0,31.20,15.23\n"
    "19,5,2.5,31.23,14.21\n20,5,5,30.85,14.82\n21,10,-5,32.43,13.53\n"
    "22,10,-2.5,32.65,14.47\n23,10,0,32.13,14.02\n24,10,2.5,32.73,14.12\n"
    "25,10,5,32.05,14.60\n26,-2.5,-5,24.28,13.98\n27,2.5,0,27.54,13.43\n";

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fixture_key(const Ledger& l) {
  std::string s;
  for (const auto& r : l.runs())
    s += std::to_string(r.case_id) + ":" + format_double(r.input.torso_angle_deg) + ":" +
         format_double(r.input.dring_z) + ":" + format_double(r.hic15) + ":" +
         format_double(r.a_t1_max) + ";";
  return s;
}

ErrorKind kind_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("fixture matches the results table") {
  const Ledger fx = load_fixture();
  REQUIRE(fx.size() == 27);
  const Ledger ref = parse_ledger_csv(std::string(kLedgerHeader) + "\n" + kTable, DesignBox{});
  CHECK(fx == ref);
  CHECK(fnv1a(fixture_key(fx)) == fnv1a(fixture_key(ref)));

  const RunRecord& first = fx.runs().front();
  CHECK(first.case_id == 1);
  CHECK(first.input == InputPoint{-10, -5});
  CHECK(first.hic15 == 20.46);
  CHECK(first.a_t1_max == 13.74);
  const RunRecord& last = fx.runs().back();
  CHECK(last.case_id == 27);
  CHECK(last.input == InputPoint{2.5, 0});
  CHECK(last.hic15 == 27.54);
  CHECK(last.a_t1_max == 13.43);
}

TEST_CASE("normalization examples") {
  const DesignBox box;
  UnitPoint u = box.normalize({2.5, 0});
  CHECK(u.u1 == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(u.u2 == doctest::Approx(0.5).epsilon(1e-15));
  u = box.normalize({-10, -5});
  CHECK(u.u1 == 0.0);
  CHECK(u.u2 == 0.0);
  u = box.normalize({10, 5});
  CHECK(u.u1 == 1.0);
  CHECK(u.u2 == 1.0);
}

TEST_CASE("normalize then denormalize is the identity") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = -100 + 200 * rng.uniform(), b = a + 0.01 + 50 * rng.uniform();
    const double c = -100 + 200 * rng.uniform(), d = c + 0.01 + 50 * rng.uniform();
    const DesignBox box{{a, b}, {c, d}};
    const InputPoint p{a + (b - a) * rng.uniform(), c + (d - c) * rng.uniform()};
    const InputPoint q = box.denormalize(box.normalize(p));
    CHECK(std::abs(q.torso_angle_deg - p.torso_angle_deg) <= 1e-12 * std::max(1.0, std::abs(p.torso_angle_deg)));
    CHECK(std::abs(q.dring_z - p.dring_z) <= 1e-12 * std::max(1.0, std::abs(p.dring_z)));
  }
}

TEST_CASE("box validation") {
  CHECK(kind_of([] { DesignBox{{1, 1}, {0, 1}}.validate(); }) == ErrorKind::Config);
  CHECK(kind_of([] { DesignBox{{0, 1}, {2, 1}}.validate(); }) == ErrorKind::Config);
}

TEST_CASE("ingest errors") {
  const DesignBox box;
  const std::string header = std::string(kLedgerHeader) + "\n";

  CHECK(kind_of([&] { parse_ledger_csv("", box); }) == ErrorKind::Data);

  try {
    parse_ledger_csv(header + "1,0,0,20,14\n2,11,0,20,14\n", box);
    FAIL("out-of-range row accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Range);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  CHECK(kind_of([&] { parse_ledger_csv(header + "1,0,0,20,14\n1,5,0,21,14\n", box); }) ==
        ErrorKind::Conflict);
  CHECK(kind_of([&] { parse_ledger_csv(header + "1,0,0,20,14\n2,0,0,21,14\n", box); }) ==
        ErrorKind::Conflict);
  CHECK(kind_of([&] { parse_ledger_csv(header + "1,0,zero,20,14\n", box); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_ledger_csv(header + "1,0,0,20\n", box); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_ledger_csv("case,x,y,hic,a\n1,0,0,20,14\n", box); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_ledger_csv(header + "1,0,0,-1,14\n", box); }) == ErrorKind::Data);
  CHECK(kind_of([&] { parse_ledger_csv(header + "1,0,0,20,0\n", box); }) == ErrorKind::Data);
  CHECK(kind_of([&] { ingest("/nonexistent/ledger.csv", box); }) == ErrorKind::Io);
}

TEST_CASE("selection") {
  const Ledger fx = load_fixture();
  const Ledger s = fx.select({27, 1, 2});
  REQUIRE(s.size() == 3);
  CHECK(s.runs()[0].case_id == 1);
  CHECK(s.runs()[2].case_id == 27);
  CHECK(kind_of([&] { fx.select({99}); }) == ErrorKind::Request);
}

TEST_CASE("export round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "crashgp_test_campaign";
  std::filesystem::remove_all(dir);
  const Ledger fx = load_fixture();
  export_ledger(fx, dir / "ledger.csv");
  CHECK(std::filesystem::exists(dir / "ledger.csv.meta"));
  const Ledger back = ingest(dir / "ledger.csv", fx.box());
  CHECK(back == fx);
  CHECK(format_ledger_csv(back) == format_ledger_csv(fx));
  std::filesystem::remove_all(dir);
}

TEST_CASE("random ledgers survive a round trip") {
  Rng rng(11);
  const DesignBox box;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RunRecord> runs;
    const int n = 1 + int(rng.below(30));
    for (int i = 0; i < n; ++i)
      runs.push_back({i + 1,
                      {-10 + 20 * rng.uniform(), -5 + 10 * rng.uniform()},
                      100 * rng.uniform(),
                      0.1 + 30 * rng.uniform()});
    const Ledger l(runs, box);
    CHECK(parse_ledger_csv(format_ledger_csv(l), box) == l);
  }
}

TEST_CASE("pending manifest round trip") {
  const std::vector<PendingPoint> pts{{26, {-2.5, -5}}, {27, {2.5, 0}}};
  const std::string text = format_pending_csv(pts);
  CHECK(text.rfind(std::string(kPendingHeader) + "\n", 0) == 0);
  CHECK(parse_pending_csv(text) == pts);
}

TEST_CASE("metric names") {
  CHECK(parse_metric("hic15") == Metric::Hic15);
  CHECK(parse_metric("a_t1_max") == Metric::AT1Max);
  CHECK(!parse_metric("hic36"));
  CHECK(to_string(Metric::AT1Max) == "a_t1_max");
}
