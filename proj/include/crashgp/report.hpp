#pragma once

#include <span>
#include <string>

#include "crashgp/adaptive.hpp"
#include "crashgp/gp.hpp"
#include "crashgp/uq.hpp"

namespace crashgp {

/// JSON document with mean, std, mode, min, max and VaR levels per metric.
std::string format_summary_document(std::span<const DistributionSummary> summaries);
/// `bin_lo,bin_hi,density` rows.
std::string format_histogram_csv(const Histogram& h);
/// Histogram bars with each VaR level drawn as a vertical line and the tail
/// above it shaded.
std::string format_histogram_svg(const Histogram& h, const DistributionSummary& summary);

std::string format_accuracy_report(const AccuracyReport& report);
std::string format_accuracy_table(const AccuracyReport& report);

/// Hyperparameters, likelihood and in-sample errors of a fitted model.
std::string format_fit_report(const GpModel& model);
double max_in_sample_error_pct(const GpModel& model);

std::string format_summary_table(std::span<const DistributionSummary> summaries);

}  // namespace crashgp
