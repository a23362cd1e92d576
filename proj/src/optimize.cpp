#include "crashgp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace crashgp::optimize {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

}  // namespace

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0,
                           std::span<const double> lo, std::span<const double> hi,
                           const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  int evals = 0;
  auto project = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  };
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  project(x0);
  if (n == 0) return {x0, eval(x0), evals, true};

  std::vector<Vertex> simplex;
  simplex.push_back({x0, eval(x0)});
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = x0;
    double step = opts.initial_step;
    double span = hi[i] - lo[i];
    if (span > 0) step = std::min(step, 0.5 * span);
    // step inward when sitting on the upper bound
    x[i] = (x[i] + step <= hi[i]) ? x[i] + step : x[i] - step;
    project(x);
    simplex.push_back({x, eval(x)});
  }

  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  bool converged = false;

  while (evals < opts.max_evaluations) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    const Vertex& best = simplex.front();
    const Vertex& worst = simplex.back();

    double xspread = 0.0;
    for (std::size_t v = 1; v <= n; ++v)
      for (std::size_t i = 0; i < n; ++i)
        xspread = std::max(xspread, std::abs(simplex[v].x[i] - best.x[i]));
    if (std::isfinite(worst.f) && std::abs(worst.f - best.f) <= opts.f_tolerance &&
        xspread <= opts.x_tolerance) {
      converged = true;
      break;
    }
    if (std::isfinite(worst.f) && std::abs(worst.f - best.f) <= opts.f_tolerance * 1e-3) {
      converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / double(n);

    auto along = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + t * (centroid[i] - worst.x[i]);
      project(x);
      return x;
    };

    std::vector<double> xr = along(kReflect);
    double fr = eval(xr);
    if (fr < simplex.front().f) {
      std::vector<double> xe = along(kExpand);
      double fe = eval(xe);
      simplex.back() = fe < fr ? Vertex{std::move(xe), fe} : Vertex{std::move(xr), fr};
      continue;
    }
    if (fr < simplex[n - 1].f) {
      simplex.back() = {std::move(xr), fr};
      continue;
    }
    const bool outside = fr < worst.f;
    std::vector<double> xc = along(outside ? kContract : -kContract);
    double fc = eval(xc);
    if (fc < (outside ? fr : worst.f)) {
      simplex.back() = {std::move(xc), fc};
      continue;
    }
    for (std::size_t v = 1; v <= n; ++v) {
      for (std::size_t i = 0; i < n; ++i)
        simplex[v].x[i] = simplex[0].x[i] + kShrink * (simplex[v].x[i] - simplex[0].x[i]);
      project(simplex[v].x);
      simplex[v].f = eval(simplex[v].x);
    }
  }

  std::stable_sort(simplex.begin(), simplex.end(), by_value);
  return {simplex.front().x, simplex.front().f, evals, converged};
}

}  // namespace crashgp::optimize
