#include "crashgp/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>

#include "crashgp/error.hpp"
#include "crashgp/optimize.hpp"
#include "crashgp/random.hpp"

namespace crashgp {

std::string_view to_string(Smoothness s) noexcept {
  switch (s) {
    case Smoothness::Half: return "1/2";
    case Smoothness::ThreeHalves: return "3/2";
    case Smoothness::FiveHalves: return "5/2";
  }
  return "5/2";
}

std::optional<Smoothness> parse_smoothness(std::string_view s) noexcept {
  if (s == "1/2" || s == "0.5") return Smoothness::Half;
  if (s == "3/2" || s == "1.5") return Smoothness::ThreeHalves;
  if (s == "5/2" || s == "2.5") return Smoothness::FiveHalves;
  return std::nullopt;
}

void KernelParams::validate() const {
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance))
    throw Error(ErrorKind::ParameterDomain, "signal variance must be positive");
  for (double l : lengthscales)
    if (!(l > 0.0) || !std::isfinite(l))
      throw Error(ErrorKind::ParameterDomain, "lengthscales must be positive");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))
    throw Error(ErrorKind::ParameterDomain, "noise variance must be non-negative");
}

namespace {

double matern_profile(double r, double signal_variance, Smoothness s) {
  switch (s) {
    case Smoothness::Half:
      return signal_variance * std::exp(-r);
    case Smoothness::ThreeHalves: {
      const double a = std::sqrt(3.0) * r;
      return signal_variance * (1.0 + a) * std::exp(-a);
    }
    case Smoothness::FiveHalves: {
      const double a = std::sqrt(5.0) * r;
      return signal_variance * (1.0 + a + a * a / 3.0) * std::exp(-a);
    }
  }
  return 0.0;
}

double scaled_distance(const UnitPoint& a, const UnitPoint& b, const KernelParams& p) {
  const double d1 = (a.u1 - b.u1) / p.lengthscales[0];
  const double d2 = (a.u2 - b.u2) / p.lengthscales[1];
  return std::sqrt(d1 * d1 + d2 * d2);
}

}  // namespace

double matern_cov(const UnitPoint& a, const UnitPoint& b, const KernelParams& params) {
  params.validate();
  return matern_profile(scaled_distance(a, b, params), params.signal_variance, params.smoothness);
}

Eigen::MatrixXd build_gram(std::span<const UnitPoint> inputs, const KernelParams& params) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(inputs.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = params.signal_variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = matern_profile(scaled_distance(inputs[i], inputs[j], params),
                                      params.signal_variance, params.smoothness);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

std::optional<Eigen::MatrixXd> try_cholesky(const Eigen::MatrixXd& a, double jitter) {
  Eigen::MatrixXd m = a;
  if (jitter > 0.0) m.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return std::nullopt;
  Eigen::MatrixXd lower = llt.matrixL();
  if (!lower.allFinite() || (lower.diagonal().array() <= 0.0).any()) return std::nullopt;
  return lower;
}

CholeskyFactor factorize_with_jitter(const Eigen::MatrixXd& a) {
  if (auto l = try_cholesky(a, 0.0)) return {std::move(*l), 0.0};
  for (double jitter = kJitterStart; jitter <= kJitterMax * 1.0000001; jitter *= 10.0)
    if (auto l = try_cholesky(a, jitter)) return {std::move(*l), jitter};
  throw Error(ErrorKind::Numerical,
              "covariance matrix is not positive definite even with jitter 1e-6");
}

namespace {

double lml_from_factor(const Eigen::MatrixXd& lower, const Eigen::VectorXd& y,
                       Eigen::VectorXd* alpha_out) {
  const auto tri = lower.triangularView<Eigen::Lower>();
  Eigen::VectorXd z = tri.solve(y);
  Eigen::VectorXd alpha = lower.transpose().triangularView<Eigen::Upper>().solve(z);
  const double n = static_cast<double>(y.size());
  const double value = -0.5 * y.dot(alpha) - lower.diagonal().array().log().sum() -
                       0.5 * n * std::log(2.0 * std::numbers::pi);
  if (alpha_out) *alpha_out = std::move(alpha);
  return value;
}

Eigen::MatrixXd noisy_gram(std::span<const UnitPoint> inputs, const KernelParams& params) {
  Eigen::MatrixXd k = build_gram(inputs, params);
  k.diagonal().array() += params.noise_variance;
  return k;
}

}  // namespace

double log_marginal_likelihood(std::span<const UnitPoint> inputs, const Eigen::VectorXd& outputs,
                               const KernelParams& params) {
  if (inputs.empty() || static_cast<Eigen::Index>(inputs.size()) != outputs.size())
    throw Error(ErrorKind::Data, "inputs and outputs must be non-empty and the same length");
  CholeskyFactor f = factorize_with_jitter(noisy_gram(inputs, params));
  const double v = lml_from_factor(f.lower, outputs, nullptr);
  if (!std::isfinite(v)) throw Error(ErrorKind::Numerical, "log marginal likelihood is not finite");
  return v;
}

void FitConfig::validate() const {
  auto check = [](const Interval& i, bool allow_zero, const char* what) {
    if (!(i.lo <= i.hi) || !std::isfinite(i.lo) || !std::isfinite(i.hi) ||
        (allow_zero ? i.lo < 0.0 : i.lo <= 0.0))
      throw Error(ErrorKind::Config, std::string("invalid ") + what + " bounds");
  };
  check(lengthscale, false, "lengthscale");
  check(signal_variance, false, "signal variance");
  check(noise_variance, false, "noise variance");
  if (restarts < 1) throw Error(ErrorKind::Config, "at least one restart is required");
}

OutputTransform choose_transform(std::span<const double> outputs, bool center) {
  const double n = static_cast<double>(outputs.size());
  if (center) {
    double mean = 0.0;
    for (double y : outputs) mean += y / n;
    double ss = 0.0;
    for (double y : outputs) ss += (y - mean) * (y - mean);
    const double sd = outputs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return {mean, sd > 0.0 ? sd : 1.0};
  }
  double ms = 0.0;
  for (double y : outputs) ms += y * y / n;
  const double rms = std::sqrt(ms);
  return {0.0, rms > 0.0 ? rms : 1.0};
}

GpModel GpModel::condition(Metric metric, const DesignBox& box, std::vector<TrainingPoint> training,
                           const KernelParams& params, const OutputTransform& transform,
                           const FitConfig& fit_config, std::optional<double> jitter) {
  params.validate();
  box.validate();
  if (training.empty()) throw Error(ErrorKind::Data, "training set is empty");
  if (!(transform.scale > 0.0) || !std::isfinite(transform.offset))
    throw Error(ErrorKind::ParameterDomain, "output transform scale must be positive");

  GpModel m;
  m.metric_ = metric;
  m.box_ = box;
  m.params_ = params;
  m.transform_ = transform;
  m.fit_config_ = fit_config;
  m.training_ = std::move(training);

  const auto n = static_cast<Eigen::Index>(m.training_.size());
  m.unit_inputs_.reserve(m.training_.size());
  m.internal_outputs_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const TrainingPoint& t = m.training_[static_cast<std::size_t>(i)];
    if (!std::isfinite(t.output)) throw Error(ErrorKind::Data, "training output is not finite");
    m.unit_inputs_.push_back(box.normalize(t.input));
    m.internal_outputs_[i] = (t.output - transform.offset) / transform.scale;
  }

  bool duplicates = false;
  for (std::size_t i = 0; i < m.training_.size() && !duplicates; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m.training_[i].input == m.training_[j].input) {
        duplicates = true;
        break;
      }
  if (duplicates && params.noise_variance < 1e-8)
    m.warnings_.push_back("duplicate training inputs with noise variance below 1e-8");

  Eigen::MatrixXd k = noisy_gram(m.unit_inputs_, params);
  if (jitter) {
    auto l = try_cholesky(k, *jitter);
    if (!l) throw Error(ErrorKind::Numerical, "stored factorization could not be reproduced");
    m.chol_ = std::move(*l);
    m.jitter_ = *jitter;
  } else {
    CholeskyFactor f = factorize_with_jitter(k);
    m.chol_ = std::move(f.lower);
    m.jitter_ = f.jitter;
  }
  m.lml_ = lml_from_factor(m.chol_, m.internal_outputs_, &m.alpha_);
  if (!std::isfinite(m.lml_) || !m.alpha_.allFinite())
    throw Error(ErrorKind::Numerical, "posterior solve produced non-finite values");
  return m;
}

void GpModel::require_trained() const {
  if (!trained()) throw Error(ErrorKind::State, "model has not been trained");
}

Prediction GpModel::predict_internal(const UnitPoint& query) const {
  require_trained();
  const auto n = static_cast<Eigen::Index>(unit_inputs_.size());
  Eigen::VectorXd kstar(n);
  for (Eigen::Index i = 0; i < n; ++i)
    kstar[i] = matern_profile(scaled_distance(unit_inputs_[static_cast<std::size_t>(i)], query, params_),
                              params_.signal_variance, params_.smoothness);
  const double mean = kstar.dot(alpha_);
  Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(kstar);
  double var = params_.signal_variance - v.squaredNorm();
  if (var < 0.0) {
    if (var > -1e-8)
      var = 0.0;
    else
      throw Error(ErrorKind::Numerical, "predictive variance is negative beyond round-off");
  }
  const bool outside = query.u1 < 0.0 || query.u1 > 1.0 || query.u2 < 0.0 || query.u2 > 1.0;
  return {mean, var, outside};
}

Prediction GpModel::predict(const InputPoint& query) const {
  require_trained();
  Prediction p = predict_internal(box_.normalize(query));
  p.mean = transform_.offset + transform_.scale * p.mean;
  p.variance *= transform_.scale * transform_.scale;
  return p;
}

double GpModel::predict_mean(const InputPoint& query) const { return predict(query).mean; }

double GpModel::log_marginal_likelihood() const {
  require_trained();
  return lml_;
}

int GpModel::max_case_id() const {
  int m = 0;
  for (const auto& t : training_) m = std::max(m, t.case_id);
  return m;
}

bool GpModel::has_training_input(const InputPoint& p) const {
  return std::any_of(training_.begin(), training_.end(),
                     [&](const TrainingPoint& t) { return t.input == p; });
}

std::vector<TrainingPoint> training_points(const Ledger& ledger, Metric metric) {
  std::vector<TrainingPoint> out;
  out.reserve(ledger.size());
  for (const auto& r : ledger.runs()) out.push_back({r.case_id, r.input, r.value(metric)});
  return out;
}

namespace {

// Log-space layout: [signal variance, lengthscale 1, lengthscale 2, noise].
constexpr std::size_t kNumHyper = 4;

// exp(log(b)) may land one ulp outside b, so values are clamped to the bounds.
KernelParams unpack(const std::array<double, kNumHyper>& logp, const std::array<Interval, kNumHyper>& bounds,
                    Smoothness s) {
  auto value = [&](std::size_t i) { return std::clamp(std::exp(logp[i]), bounds[i].lo, bounds[i].hi); };
  KernelParams p;
  p.signal_variance = value(0);
  p.lengthscales = {value(1), value(2)};
  p.noise_variance = value(3);
  p.smoothness = s;
  return p;
}

}  // namespace

GpModel fit(Metric metric, const DesignBox& box, std::vector<TrainingPoint> training,
            const FitConfig& config) {
  config.validate();
  box.validate();
  if (training.size() < 2)
    throw Error(ErrorKind::Data, "fitting requires at least 2 training runs, got " +
                                     std::to_string(training.size()));
  std::vector<double> outputs;
  for (const auto& t : training) {
    if (!std::isfinite(t.output)) throw Error(ErrorKind::Data, "training output is not finite");
    outputs.push_back(t.output);
  }
  const OutputTransform transform = choose_transform(outputs, config.center_outputs);

  std::vector<UnitPoint> unit;
  Eigen::VectorXd y(static_cast<Eigen::Index>(training.size()));
  for (std::size_t i = 0; i < training.size(); ++i) {
    unit.push_back(box.normalize(training[i].input));
    y[static_cast<Eigen::Index>(i)] = (outputs[i] - transform.offset) / transform.scale;
  }

  const std::array<Interval, kNumHyper> bounds{config.signal_variance, config.lengthscale,
                                               config.lengthscale, config.noise_variance};
  std::array<double, kNumHyper> lo{}, hi{};
  for (std::size_t i = 0; i < kNumHyper; ++i) {
    lo[i] = std::log(bounds[i].lo);
    hi[i] = std::log(bounds[i].hi);
  }
  // Only parameters with a non-degenerate range are searched.
  std::vector<std::size_t> free_dims;
  for (std::size_t i = 0; i < kNumHyper; ++i)
    if (hi[i] > lo[i]) free_dims.push_back(i);

  auto expand = [&](std::span<const double> x, const std::array<double, kNumHyper>& base) {
    std::array<double, kNumHyper> full = base;
    for (std::size_t j = 0; j < free_dims.size(); ++j) full[free_dims[j]] = x[j];
    return full;
  };
  std::array<double, kNumHyper> center{};
  for (std::size_t i = 0; i < kNumHyper; ++i) center[i] = 0.5 * (lo[i] + hi[i]);

  auto negative_lml = [&](std::span<const double> x) {
    const KernelParams p = unpack(expand(x, center), bounds, config.smoothness);
    Eigen::MatrixXd k = noisy_gram(unit, p);
    auto l = try_cholesky(k, 0.0);
    if (!l) {
      for (double j = kJitterStart; j <= kJitterMax * 1.0000001 && !l; j *= 10.0) l = try_cholesky(k, j);
      if (!l) return std::numeric_limits<double>::infinity();
    }
    return -lml_from_factor(*l, y, nullptr);
  };

  std::vector<double> flo, fhi;
  for (std::size_t d : free_dims) {
    flo.push_back(lo[d]);
    fhi.push_back(hi[d]);
  }

  Rng rng(config.seed);
  optimize::NelderMeadOptions opts;
  opts.max_evaluations = config.max_evaluations;
  std::optional<optimize::MinimizeResult> best;
  for (unsigned start = 0; start < config.restarts; ++start) {
    std::vector<double> x0(free_dims.size());
    for (std::size_t j = 0; j < free_dims.size(); ++j) {
      const std::size_t d = free_dims[j];
      x0[j] = start == 0 ? center[d] : lo[d] + rng.uniform() * (hi[d] - lo[d]);
    }
    optimize::MinimizeResult r = optimize::nelder_mead(negative_lml, x0, flo, fhi, opts);
    // A second pass from the optimum guards against premature simplex collapse.
    optimize::MinimizeResult polished = optimize::nelder_mead(negative_lml, r.x, flo, fhi, opts);
    if (polished.value <= r.value) r = std::move(polished);
    if (!std::isfinite(r.value)) continue;
    if (!best || r.value < best->value) best = std::move(r);
  }
  if (!best)
    throw Error(ErrorKind::Fit, "no restart produced a positive-definite covariance matrix");

  const KernelParams params = unpack(expand(best->x, center), bounds, config.smoothness);
  try {
    return GpModel::condition(metric, box, std::move(training), params, transform, config);
  } catch (const Error& e) {
    throw Error(ErrorKind::Fit, std::string("fitted model could not be conditioned: ") + e.what());
  }
}

GpModel fit(const Ledger& ledger, Metric metric, const FitConfig& config) {
  return fit(metric, ledger.box(), training_points(ledger, metric), config);
}

}  // namespace crashgp
