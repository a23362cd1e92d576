#include "crashgp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "crashgp/error.hpp"

namespace crashgp {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_summary_document(std::span<const DistributionSummary> summaries) {
  ordered_json metrics = ordered_json::array();
  for (const auto& s : summaries) {
    ordered_json var = ordered_json::array();
    for (const auto& v : s.var_levels) var.push_back({{"percentile", v.percentile}, {"value", v.value}});
    metrics.push_back({{"metric", s.metric},
                       {"n_samples", s.n_samples},
                       {"mean", s.mean},
                       {"std", s.std},
                       {"mode", s.mode},
                       {"min", s.min},
                       {"max", s.max},
                       {"var", var}});
  }
  ordered_json doc = {{"format", "crashgp-summary"}, {"schema_version", 1}, {"metrics", metrics}};
  return doc.dump(2) + "\n";
}

std::string format_histogram_csv(const Histogram& h) {
  std::string out = "bin_lo,bin_hi,density\n";
  for (std::size_t i = 0; i < h.bins(); ++i)
    out += format_double(h.edges[i]) + ',' + format_double(h.edges[i + 1]) + ',' +
           format_double(h.densities[i]) + '\n';
  return out;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string format_histogram_svg(const Histogram& h, const DistributionSummary& summary) {
  constexpr double kWidth = 720, kHeight = 420;
  constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  const double x_lo = h.edges.front();
  const double x_hi = h.edges.back();
  const double span = x_hi - x_lo;
  const double y_max = *std::max_element(h.densities.begin(), h.densities.end());
  auto px = [&](double x) { return kLeft + (x - x_lo) / span * plot_w; };
  auto py = [&](double d) { return kTop + plot_h - (y_max > 0 ? d / y_max : 0.0) * plot_h; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" data-x-lo=\"" << format_double(x_lo)
     << "\" data-x-hi=\"" << format_double(x_hi) << "\" data-plot-left=\"" << kLeft
     << "\" data-plot-width=\"" << plot_w << "\">\n"
     << "  <title>" << summary.metric << " distribution</title>\n"
     << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  os << "  <g class=\"var-regions\">\n";
  for (const auto& v : summary.var_levels) {
    const double x0 = px(v.value);
    os << "    <rect class=\"var-region\" data-percentile=\"" << format_double(v.percentile)
       << "\" data-lo=\"" << format_double(v.value) << "\" data-hi=\"" << format_double(x_hi)
       << "\" x=\"" << format_double(x0) << "\" y=\"" << kTop << "\" width=\""
       << format_double(std::max(0.0, px(x_hi) - x0)) << "\" height=\"" << plot_h
       << "\" fill=\"#d62728\" fill-opacity=\"0.12\"/>\n";
  }
  os << "  </g>\n  <g class=\"bars\" fill=\"#1f77b4\">\n";
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double x0 = px(h.edges[i]), x1 = px(h.edges[i + 1]);
    const double y = py(h.densities[i]);
    os << "    <rect x=\"" << fixed(x0, 3) << "\" y=\"" << fixed(y, 3) << "\" width=\""
       << fixed(std::max(0.0, x1 - x0), 3) << "\" height=\"" << fixed(kTop + plot_h - y, 3) << "\"/>\n";
  }
  os << "  </g>\n  <g class=\"var-lines\" stroke=\"#d62728\" stroke-width=\"1.5\">\n";
  for (const auto& v : summary.var_levels) {
    const double x = px(v.value);
    os << "    <line data-percentile=\"" << format_double(v.percentile) << "\" x1=\"" << format_double(x)
       << "\" y1=\"" << kTop << "\" x2=\"" << format_double(x) << "\" y2=\"" << kTop + plot_h
       << "\" stroke-dasharray=\"5,3\"/>\n"
       << "    <text x=\"" << fixed(x + 3, 3) << "\" y=\"" << kTop - 6
       << "\" font-size=\"11\" fill=\"#d62728\" stroke=\"none\">VaR " << format_double(v.percentile)
       << "%: " << fixed(v.value, 2) << "</text>\n";
  }
  os << "  </g>\n"
     << "  <g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
     << "    <line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
     << "\" y2=\"" << kTop + plot_h << "\"/>\n"
     << "    <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << kTop + plot_h << "\"/>\n"
     << "  </g>\n"
     << "  <g class=\"labels\" font-size=\"12\" font-family=\"sans-serif\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double x = x_lo + span * t / 4.0;
    os << "    <text x=\"" << fixed(px(x), 3) << "\" y=\"" << kTop + plot_h + 18
       << "\" text-anchor=\"middle\">" << fixed(x, 2) << "</text>\n";
  }
  os << "    <text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
     << "\" text-anchor=\"middle\">" << summary.metric << "</text>\n"
     << "    <text x=\"15\" y=\"" << kTop + plot_h / 2 << "\" transform=\"rotate(-90 15 "
     << kTop + plot_h / 2 << ")\" text-anchor=\"middle\">density</text>\n"
     << "    <text x=\"" << kLeft << "\" y=\"20\">mean " << fixed(summary.mean, 2) << ", std "
     << fixed(summary.std, 2) << ", mode " << fixed(summary.mode, 2) << ", n = " << summary.n_samples
     << "</text>\n"
     << "  </g>\n</svg>\n";
  return os.str();
}

std::string format_accuracy_report(const AccuracyReport& report) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : report.entries)
    entries.push_back({{"case", e.case_id},
                       {"torso_angle_deg", e.point.torso_angle_deg},
                       {"dring_z", e.point.dring_z},
                       {"predicted", e.predicted},
                       {"observed", e.observed},
                       {"rel_error_pct", e.rel_error_pct},
                       {"outside_box", e.outside_box}});
  ordered_json doc = {{"format", "crashgp-accuracy"},
                      {"metric", std::string(to_string(report.metric))},
                      {"training_size", report.training_size},
                      {"threshold_pct", report.threshold_pct},
                      {"worst_error_pct", report.worst_error_pct},
                      {"passed", report.passed},
                      {"entries", entries},
                      {"warnings", report.warnings}};
  return doc.dump(2) + "\n";
}

std::string format_accuracy_table(const AccuracyReport& report) {
  std::ostringstream os;
  char line[160];
  os << "metric " << to_string(report.metric) << ", " << report.training_size << " training runs\n";
  std::snprintf(line, sizeof line, "%6s %10s %10s %12s %12s %9s\n", "case", "torso", "dring_z",
                "predicted", "observed", "error%");
  os << line;
  for (const auto& e : report.entries) {
    std::snprintf(line, sizeof line, "%6d %10.3f %10.3f %12.4f %12.4f %9.3f%s\n", e.case_id,
                  e.point.torso_angle_deg, e.point.dring_z, e.predicted, e.observed, e.rel_error_pct,
                  e.rel_error_pct < report.threshold_pct ? "" : "  FAIL");
    os << line;
  }
  std::snprintf(line, sizeof line, "worst %.3f%% vs threshold %.3f%%: %s\n", report.worst_error_pct,
                report.threshold_pct, report.passed ? "PASS" : "FAIL");
  os << line;
  return os.str();
}

double max_in_sample_error_pct(const GpModel& model) {
  double worst = 0.0;
  for (const auto& t : model.training()) {
    if (t.output == 0.0) continue;
    worst = std::max(worst, 100.0 * std::abs(model.predict_mean(t.input) - t.output) / std::abs(t.output));
  }
  return worst;
}

std::string format_fit_report(const GpModel& model) {
  const auto& p = model.params();
  ordered_json insample = ordered_json::array();
  for (const auto& t : model.training()) {
    const double pred = model.predict_mean(t.input);
    insample.push_back({{"case", t.case_id},
                        {"observed", t.output},
                        {"predicted", pred},
                        {"rel_error_pct", t.output != 0.0 ? 100.0 * std::abs(pred - t.output) / std::abs(t.output) : 0.0}});
  }
  ordered_json doc = {
      {"format", "crashgp-fit-report"},
      {"metric", std::string(to_string(model.metric()))},
      {"training_size", model.training().size()},
      {"smoothness", std::string(to_string(p.smoothness))},
      {"signal_variance", p.signal_variance},
      {"lengthscales", {p.lengthscales[0], p.lengthscales[1]}},
      {"noise_variance", p.noise_variance},
      {"output_scale", model.transform().scale},
      {"output_offset", model.transform().offset},
      {"jitter", model.jitter()},
      {"log_marginal_likelihood", model.log_marginal_likelihood()},
      {"max_in_sample_error_pct", max_in_sample_error_pct(model)},
      {"in_sample", insample},
      {"warnings", model.warnings()},
  };
  return doc.dump(2) + "\n";
}

std::string format_summary_table(std::span<const DistributionSummary> summaries) {
  std::ostringstream os;
  char line[256];
  std::string head = "metric        n      mean      std     mode      min      max";
  if (!summaries.empty())
    for (const auto& v : summaries.front().var_levels) {
      std::snprintf(line, sizeof line, "   VaR%-5s", format_double(v.percentile).c_str());
      head += line;
    }
  os << head << '\n';
  for (const auto& s : summaries) {
    std::snprintf(line, sizeof line, "%-9s %6zu %9.3f %8.3f %8.3f %8.3f %8.3f", s.metric.c_str(),
                  s.n_samples, s.mean, s.std, s.mode, s.min, s.max);
    os << line;
    for (const auto& v : s.var_levels) {
      std::snprintf(line, sizeof line, " %10.3f", v.value);
      os << line;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace crashgp
