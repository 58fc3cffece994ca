#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "lwf/transform.hpp"

namespace lwf {

/// Settings of the iterative moment-matching fit.
struct IgmmConfig {
  /// Stop once the Euclidean step ||tau(k+1) - tau(k)|| is at most tol.
  double tol = 1e-6;
  int max_iter = 100;
  double gamma_lo = -2.0;
  double gamma_hi = 2.0;
  /// Bisection width at which the gamma root is accepted.
  double gamma_tol = 1e-6;
  /// |mu| or sigma beyond this marks the fit Diverged.
  double divergence_guard = 1e8;

  void validate() const;
};

enum class FitStatus { Converged, MaxIterReached, Diverged };

std::string_view to_string(FitStatus status);

struct FitReport {
  LwfParams tau_hat;
  int iterations = 0;
  /// tau(0) .. tau(iterations); always iterations + 1 entries.
  std::vector<LwfParams> trace;
  FitStatus status = FitStatus::MaxIterReached;
  /// Share of observations clamped at the branch point in the last inversion.
  double clamped_fraction = 0.0;
};

/// (x - mu) / sigma^2, the location score of the normal model.
double normal_score(double x, double mu, double sigma);

/// Sample skewness of W(gamma z_i) / gamma under the Clamp policy. Returns NaN
/// when the back-transformed values have no spread.
double back_transformed_skewness(std::span<const double> z, double gamma);

/// Part of [gamma_lo, gamma_hi] on which every gamma z_i >= -1/e, i.e. on
/// which no observation needs clamping. Always contains 0.
std::pair<double, double> admissible_gamma(std::span<const double> z, const IgmmConfig& config);

/// gamma in admissible_gamma(z) making back_transformed_skewness vanish.
///
/// Brackets a sign change by expanding outward from `start`, then bisects to
/// gamma_tol. Without a sign change the bound with the smaller |skewness| wins.
double solve_gamma(std::span<const double> z, double start, const IgmmConfig& config);

/// Iterative generalized method of moments for (mu, sigma, gamma).
///
/// Starts at (mean, sd, 0) of the data. Each sweep standardises y with the
/// current (mu, sigma), picks gamma so the back-transformed input has zero
/// skewness, maps it back to the data scale and takes its mean and standard
/// deviation as the new location and scale. The report carries the final tau
/// whatever the status; heavy-tailed input typically ends Diverged.
///
/// Throws InputError for fewer than 10 observations or non-finite data.
FitReport igmm_fit(std::span<const double> y, const IgmmConfig& config = {});

}  // namespace lwf
