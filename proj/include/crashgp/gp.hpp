#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "crashgp/campaign.hpp"

namespace crashgp {

/// Matern smoothness nu.
enum class Smoothness { Half, ThreeHalves, FiveHalves };

std::string_view to_string(Smoothness s) noexcept;
/// Accepts "1/2", "3/2", "5/2" (and "0.5", "1.5", "2.5").
std::optional<Smoothness> parse_smoothness(std::string_view s) noexcept;

struct KernelParams {
  double signal_variance = 1.0;
  std::array<double, 2> lengthscales{0.5, 0.5};
  Smoothness smoothness = Smoothness::FiveHalves;
  double noise_variance = 1e-8;

  /// Throws ParameterDomain on non-positive scales or negative noise.
  void validate() const;
  friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

/// Matern covariance between two normalized inputs, anisotropic in the
/// per-dimension lengthscales.
double matern_cov(const UnitPoint& a, const UnitPoint& b, const KernelParams& params);

/// K[i][j] = matern_cov(x_i, x_j); the noise term is not included.
Eigen::MatrixXd build_gram(std::span<const UnitPoint> inputs, const KernelParams& params);

/// Lower Cholesky factor of a symmetric matrix with escalating diagonal jitter.
struct CholeskyFactor {
  Eigen::MatrixXd lower;
  double jitter = 0.0;
};

inline constexpr double kJitterStart = 1e-10;
inline constexpr double kJitterMax = 1e-6;

/// Tries the plain factorization first, then jitter 1e-10, 1e-9, ... 1e-6.
/// Throws Numerical if every attempt fails.
CholeskyFactor factorize_with_jitter(const Eigen::MatrixXd& a);
/// Factorizes a + jitter*I for exactly the given jitter.
std::optional<Eigen::MatrixXd> try_cholesky(const Eigen::MatrixXd& a, double jitter);

/// log p(y | X, params) for zero-mean GP with Matern covariance plus noise.
double log_marginal_likelihood(std::span<const UnitPoint> inputs,
                               const Eigen::VectorXd& outputs,
                               const KernelParams& params);

/// Affine map between physical outputs and the units the GP is fitted in:
/// physical = offset + scale * internal.
struct OutputTransform {
  double offset = 0.0;
  double scale = 1.0;
  friend bool operator==(const OutputTransform&, const OutputTransform&) = default;
};

struct FitConfig {
  Smoothness smoothness = Smoothness::FiveHalves;
  unsigned restarts = 8;
  std::uint64_t seed = 0;
  // Search bounds, in normalized-input and scaled-output units.
  Interval lengthscale{0.05, 5.0};
  Interval signal_variance{1e-3, 1e3};
  Interval noise_variance{1e-8, 1e-6};
  // Subtract the sample mean before fitting. Off by default: the prior mean
  // is zero in physical units and outputs are only rescaled by their RMS.
  bool center_outputs = false;
  int max_evaluations = 4000;

  void validate() const;
  friend bool operator==(const FitConfig&, const FitConfig&) = default;
};

struct TrainingPoint {
  int case_id = 0;
  InputPoint input;
  double output = 0.0;
  friend bool operator==(const TrainingPoint&, const TrainingPoint&) = default;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
  bool extrapolated = false;
};

/// Trained posterior for one injury metric. Immutable once built; refitting
/// produces a new model.
class GpModel {
 public:
  GpModel() = default;

  /// Conditions on the training data with fixed hyperparameters. When
  /// `jitter` is given it is applied exactly, otherwise jitter escalates.
  static GpModel condition(Metric metric, const DesignBox& box,
                           std::vector<TrainingPoint> training, const KernelParams& params,
                           const OutputTransform& transform, const FitConfig& fit_config = {},
                           std::optional<double> jitter = std::nullopt);

  bool trained() const { return !training_.empty(); }

  Prediction predict(const InputPoint& query) const;
  double predict_mean(const InputPoint& query) const;
  /// Posterior mean and variance in internal (scaled-output) units.
  Prediction predict_internal(const UnitPoint& query) const;

  /// Objective at the stored hyperparameters, in scaled-output units.
  double log_marginal_likelihood() const;

  Metric metric() const { return metric_; }
  const DesignBox& box() const { return box_; }
  const std::vector<TrainingPoint>& training() const { return training_; }
  const KernelParams& params() const { return params_; }
  const OutputTransform& transform() const { return transform_; }
  const FitConfig& fit_config() const { return fit_config_; }
  double jitter() const { return jitter_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  int max_case_id() const;
  bool has_training_input(const InputPoint& p) const;

 private:
  void require_trained() const;

  Metric metric_ = Metric::Hic15;
  DesignBox box_;
  std::vector<TrainingPoint> training_;
  KernelParams params_;
  OutputTransform transform_;
  FitConfig fit_config_;
  double jitter_ = 0.0;
  std::vector<UnitPoint> unit_inputs_;
  Eigen::VectorXd internal_outputs_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double lml_ = 0.0;
  std::vector<std::string> warnings_;
};

/// Maximizes the log marginal likelihood over the configured bounds with a
/// seeded multi-start Nelder-Mead in log-parameter space.
GpModel fit(Metric metric, const DesignBox& box, std::vector<TrainingPoint> training,
            const FitConfig& config);
GpModel fit(const Ledger& ledger, Metric metric, const FitConfig& config);

std::vector<TrainingPoint> training_points(const Ledger& ledger, Metric metric);

/// Output transform that fit() would use for these outputs.
OutputTransform choose_transform(std::span<const double> outputs, bool center);

}  // namespace crashgp
