#pragma once

#include <functional>
#include <span>
#include <vector>

namespace crashgp::optimize {

struct NelderMeadOptions {
  int max_evaluations = 4000;
  double f_tolerance = 1e-10;
  double x_tolerance = 1e-8;
  double initial_step = 0.5;
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Box-constrained Nelder-Mead; vertices are projected onto [lo, hi].
/// Non-finite objective values are treated as +inf.
MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0,
                           std::span<const double> lo, std::span<const double> hi,
                           const NelderMeadOptions& opts = {});

}  // namespace crashgp::optimize
