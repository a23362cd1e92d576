#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "crashgp/adaptive.hpp"
#include "crashgp/report.hpp"
#include "crashgp/uq.hpp"

using namespace crashgp;

namespace {

struct Element {
  std::string name;
  std::map<std::string, std::string> attrs;
};

// Minimal XML well-formedness check: balanced tags, quoted unique attributes,
// known entities only. Collects every start tag.
bool parse_xml(const std::string& s, std::vector<Element>& out, std::string& why) {
  std::vector<std::string> stack;
  std::size_t i = 0, roots = 0;
  auto name_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.'; };
  auto check_text = [&](std::size_t a, std::size_t b) {
    for (std::size_t k = a; k < b; ++k) {
      if (s[k] == '<') return false;
      if (s[k] == '&') {
        const std::size_t semi = s.find(';', k);
        if (semi == std::string::npos || semi > b) return false;
        const std::string ent = s.substr(k + 1, semi - k - 1);
        if (ent != "amp" && ent != "lt" && ent != "gt" && ent != "quot" && ent != "apos") return false;
      }
    }
    return true;
  };
  if (s.rfind("<?xml", 0) == 0) {
    i = s.find("?>");
    if (i == std::string::npos) return why = "unterminated declaration", false;
    i += 2;
  }
  while (i < s.size()) {
    const std::size_t lt = s.find('<', i);
    const std::size_t text_end = lt == std::string::npos ? s.size() : lt;
    if (!check_text(i, text_end)) return why = "bad character data", false;
    if (stack.empty())
      for (std::size_t k = i; k < text_end; ++k)
        if (!std::isspace(static_cast<unsigned char>(s[k]))) return why = "text outside root", false;
    if (lt == std::string::npos) break;
    i = lt + 1;
    if (s.compare(i, 3, "!--") == 0) {
      const std::size_t end = s.find("-->", i);
      if (end == std::string::npos) return why = "unterminated comment", false;
      i = end + 3;
      continue;
    }
    const bool closing = i < s.size() && s[i] == '/';
    if (closing) ++i;
    std::size_t start = i;
    while (i < s.size() && name_char(s[i])) ++i;
    if (i == start) return why = "empty tag name", false;
    Element e{s.substr(start, i - start), {}};
    if (closing) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i >= s.size() || s[i] != '>') return why = "bad end tag", false;
      if (stack.empty() || stack.back() != e.name) return why = "mismatched </" + e.name + ">", false;
      stack.pop_back();
      ++i;
      continue;
    }
    for (;;) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i >= s.size()) return why = "unterminated tag", false;
      if (s[i] == '>' || s.compare(i, 2, "/>") == 0) break;
      start = i;
      while (i < s.size() && name_char(s[i])) ++i;
      if (i == start || i >= s.size() || s[i] != '=') return why = "bad attribute in <" + e.name + ">", false;
      const std::string key = s.substr(start, i - start);
      ++i;
      if (i >= s.size() || (s[i] != '"' && s[i] != '\'')) return why = "unquoted attribute " + key, false;
      const char q = s[i++];
      const std::size_t end = s.find(q, i);
      if (end == std::string::npos || !check_text(i, end)) return why = "bad attribute value " + key, false;
      if (!e.attrs.emplace(key, s.substr(i, end - i)).second) return why = "repeated attribute " + key, false;
      i = end + 1;
    }
    const bool self_closing = s[i] == '/';
    i += self_closing ? 2 : 1;
    if (stack.empty() && ++roots > 1) return why = "more than one root", false;
    if (!self_closing) stack.push_back(e.name);
    out.push_back(std::move(e));
  }
  if (!stack.empty()) return why = "unclosed <" + stack.back() + ">", false;
  if (roots != 1) return why = "no root element", false;
  return true;
}

MetricDistribution fixture_distribution(Metric metric) {
  const GpModel m = fit(load_fixture(), metric, FitConfig{});
  StatsConfig cfg;
  cfg.n_samples = 5000;
  return compute_distribution(m, cfg);
}

void check_svg(const MetricDistribution& d) {
  const std::string svg = format_histogram_svg(d.histogram, d.summary);
  std::vector<Element> elems;
  std::string why;
  REQUIRE_MESSAGE(parse_xml(svg, elems, why), why);
  REQUIRE(elems.front().name == "svg");
  const auto& root = elems.front().attrs;
  const double xlo = std::stod(root.at("data-x-lo")), xhi = std::stod(root.at("data-x-hi"));
  const double left = std::stod(root.at("data-plot-left")), width = std::stod(root.at("data-plot-width"));
  const double span = xhi > xlo ? xhi - xlo : 1.0;
  std::size_t regions = 0;
  for (const auto& e : elems) {
    auto cls = e.attrs.find("class");
    if (e.name != "rect" || cls == e.attrs.end() || cls->second != "var-region") continue;
    const double pct = std::stod(e.attrs.at("data-percentile"));
    const VarLevel* level = nullptr;
    for (const auto& l : d.summary.var_levels)
      if (l.percentile == pct) level = &l;
    REQUIRE(level != nullptr);
    CHECK(std::stod(e.attrs.at("data-lo")) == level->value);
    CHECK(std::stod(e.attrs.at("data-hi")) == xhi);
    CHECK(xhi >= d.summary.max);
    const double x = std::stod(e.attrs.at("x"));
    CHECK(x == doctest::Approx(left + (level->value - xlo) / span * width).epsilon(1e-12));
    ++regions;
  }
  CHECK(regions == d.summary.var_levels.size());
}

}  // namespace

TEST_CASE("xml checker rejects broken documents") {
  std::vector<Element> e;
  std::string why;
  CHECK(parse_xml("<a><b x=\"1\"/></a>", e, why));
  CHECK(!parse_xml("<a><b></a>", e, why));
  CHECK(!parse_xml("<a x=1></a>", e, why));
  CHECK(!parse_xml("<a x=\"1\" x=\"2\"></a>", e, why));
  CHECK(!parse_xml("<a>&nbsp;</a>", e, why));
  CHECK(!parse_xml("<a/><b/>", e, why));
}

TEST_CASE("histogram svg is well formed and shades the VaR tails") {
  check_svg(fixture_distribution(Metric::Hic15));
  check_svg(fixture_distribution(Metric::AT1Max));
}

TEST_CASE("svg of a degenerate distribution is still valid") {
  const std::vector<double> v(100, 7.0);
  MetricDistribution d;
  d.values = v;
  d.summary = summarize(v);
  d.summary.metric = "hic15";
  d.histogram = empirical_pdf(v, 100);
  check_svg(d);
}

TEST_CASE("histogram csv") {
  const std::vector<double> v{0, 1, 1, 2};
  const Histogram h = empirical_pdf(v, 2);
  const std::string csv = format_histogram_csv(h);
  CHECK(csv.rfind("bin_lo,bin_hi,density\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 3);
}

TEST_CASE("summary document carries the seven statistics") {
  const MetricDistribution d = fixture_distribution(Metric::Hic15);
  const std::vector<DistributionSummary> all{d.summary};
  const auto doc = nlohmann::json::parse(format_summary_document(all));
  REQUIRE(doc.at("metrics").size() == 1);
  const auto& m = doc["metrics"][0];
  CHECK(m.at("metric") == "hic15");
  CHECK(m.at("mean").get<double>() == d.summary.mean);
  CHECK(m.at("std").get<double>() == d.summary.std);
  CHECK(m.at("mode").get<double>() == d.summary.mode);
  CHECK(m.at("min").get<double>() == d.summary.min);
  CHECK(m.at("max").get<double>() == d.summary.max);
  REQUIRE(m.at("var").size() == 2);
  CHECK(m["var"][0].at("percentile").get<double>() == 90.0);
  CHECK(m["var"][1].at("value").get<double>() == d.summary.var_levels[1].value);
}

TEST_CASE("accuracy and fit reports") {
  const Ledger fx = load_fixture();
  const GpModel m = fit(fx, Metric::AT1Max, FitConfig{});
  const std::vector<RunRecord> runs{*fx.find_case(26), *fx.find_case(27)};
  const AccuracyReport r = evaluate_accuracy(m, runs);
  const auto acc = nlohmann::json::parse(format_accuracy_report(r));
  CHECK(acc.at("passed").get<bool>() == r.passed);
  CHECK(acc.at("entries").size() == 2);
  CHECK(!format_accuracy_table(r).empty());

  const auto fr = nlohmann::json::parse(format_fit_report(m));
  CHECK(fr.is_object());
  CHECK(max_in_sample_error_pct(m) < 1.0);
}
