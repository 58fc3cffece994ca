#include "lwf/igmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lwf/errors.hpp"
#include "lwf/lambertw.hpp"
#include "lwf/sampling.hpp"

namespace lwf {

namespace {

// Skewness with deviations rescaled by their largest magnitude, so data with
// astronomically large entries neither overflow nor lose the sign.
double scaled_skewness(std::span<const double> u) {
  const double n = static_cast<double>(u.size());
  double m = 0.0;
  for (double v : u) m += v;
  m /= n;
  double top = 0.0;
  for (double v : u) top = std::max(top, std::abs(v - m));
  if (!(top > 0.0) || !std::isfinite(top)) return std::numeric_limits<double>::quiet_NaN();
  double m2 = 0.0, m3 = 0.0;
  for (double v : u) {
    const double d = (v - m) / top;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  return m3 / std::pow(m2, 1.5);
}

// Mean and divide-by-n standard deviation accumulated in extended precision:
// iterates in the heavy-tailed regimes reach magnitudes whose squares (or
// sums) overflow double.
std::pair<double, double> wide_mean_sd(std::span<const double> x) {
  long double sum = 0.0L;
  for (double v : x) sum += v;
  const long double m = sum / static_cast<long double>(x.size());
  long double ss = 0.0L;
  for (double v : x) ss += (v - m) * (v - m);
  return {static_cast<double>(m), static_cast<double>(std::sqrt(ss / static_cast<long double>(x.size())))};
}

double distance(const LwfParams& a, const LwfParams& b) {
  return std::hypot(a.mu - b.mu, a.sigma - b.sigma, a.gamma - b.gamma);
}

}  // namespace

std::pair<double, double> admissible_gamma(std::span<const double> z, const IgmmConfig& config) {
  double z_min = 0.0, z_max = 0.0;
  for (double v : z) {
    z_min = std::min(z_min, v);
    z_max = std::max(z_max, v);
  }
  double lo = config.gamma_lo, hi = config.gamma_hi;
  if (z_max > 0.0) lo = std::max(lo, -kInvE / z_max);
  if (z_min < 0.0) hi = std::min(hi, kInvE / -z_min);
  return {std::min(lo, 0.0), std::max(hi, 0.0)};
}

void IgmmConfig::validate() const {
  if (!(tol > 0.0)) throw ParamError("IgmmConfig: tol must be positive");
  if (max_iter < 1) throw ParamError("IgmmConfig: max_iter must be at least 1");
  if (!(gamma_lo < gamma_hi)) throw ParamError("IgmmConfig: gamma bounds must satisfy lo < hi");
  if (!(gamma_tol > 0.0)) throw ParamError("IgmmConfig: gamma_tol must be positive");
  if (!(divergence_guard > 0.0)) throw ParamError("IgmmConfig: divergence_guard must be positive");
}

std::string_view to_string(FitStatus status) {
  switch (status) {
    case FitStatus::Converged: return "converged";
    case FitStatus::MaxIterReached: return "max_iter";
    case FitStatus::Diverged: return "diverged";
  }
  return "unknown";
}

double normal_score(double x, double mu, double sigma) {
  if (!(sigma > 0.0)) throw ParamError("normal_score: sigma must be positive");
  return (x - mu) / (sigma * sigma);
}

double back_transformed_skewness(std::span<const double> z, double gamma) {
  std::vector<double> u(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) inverse_standardized(z[i], gamma, u[i]);
  return scaled_skewness(u);
}

double solve_gamma(std::span<const double> z, double start, const IgmmConfig& config) {
  const auto [lo_bound, hi_bound] = admissible_gamma(z, config);
  start = std::clamp(start, lo_bound, hi_bound);
  auto f = [&](double g) { return back_transformed_skewness(z, g); };

  const double f_start = f(start);
  if (f_start == 0.0) return start;

  // Skewness falls as gamma grows, so search upward first when it is positive.
  auto sign_change = [](double a, double b) {
    return std::isfinite(a) && std::isfinite(b) && ((a < 0.0) != (b < 0.0));
  };
  double lo = start, hi = start, f_lo = f_start, f_hi = f_start;
  double left = 0.0, right = 0.0, f_left = 0.0, f_right = 0.0;
  bool bracketed = false;
  double step = 0.05;
  while (!bracketed && (lo > lo_bound || hi < hi_bound)) {
    const double next_hi = std::min(hi_bound, start + step);
    const double next_lo = std::max(lo_bound, start - step);
    const double f_next_hi = next_hi > hi ? f(next_hi) : f_hi;
    const double f_next_lo = next_lo < lo ? f(next_lo) : f_lo;
    const bool up = sign_change(f_hi, f_next_hi);
    const bool down = sign_change(f_next_lo, f_lo);
    if (up && (f_start > 0.0 || !down)) {
      left = hi, right = next_hi, f_left = f_hi, f_right = f_next_hi;
      bracketed = true;
    } else if (down) {
      left = next_lo, right = lo, f_left = f_next_lo, f_right = f_lo;
      bracketed = true;
    }
    hi = next_hi, f_hi = f_next_hi;
    lo = next_lo, f_lo = f_next_lo;
    step *= 2.0;
  }

  if (!bracketed) {
    const double a = std::isfinite(f_lo) ? std::abs(f_lo) : std::numeric_limits<double>::infinity();
    const double b = std::isfinite(f_hi) ? std::abs(f_hi) : std::numeric_limits<double>::infinity();
    return a <= b ? lo_bound : hi_bound;
  }

  while (right - left > config.gamma_tol) {
    const double mid = 0.5 * (left + right);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (sign_change(f_left, f_mid)) {
      right = mid;
      f_right = f_mid;
    } else {
      left = mid;
      f_left = f_mid;
    }
  }
  // Linear interpolation inside the final bracket keeps gamma a continuous
  // function of z, so the outer iteration cannot cycle on bisection grid points.
  return left - f_left * (right - left) / (f_right - f_left);
}

FitReport igmm_fit(std::span<const double> y, const IgmmConfig& config) {
  config.validate();
  if (y.size() < 10) throw InputError("igmm_fit: need at least 10 observations");
  for (double v : y)
    if (!std::isfinite(v)) throw InputError("igmm_fit: data contain non-finite values");

  const auto [mean0, sd0] = wide_mean_sd(y);
  LwfParams tau{mean0, sd0, 0.0};
  if (!(tau.sigma > 0.0)) throw DegenerateError("igmm_fit: data have no spread");

  FitReport report;
  report.trace.push_back(tau);

  const std::size_t n = y.size();
  std::vector<double> z(n), x_hat(n);
  for (int k = 0; k < config.max_iter; ++k) {
    for (std::size_t i = 0; i < n; ++i) z[i] = (y[i] - tau.mu) / tau.sigma;

    const double gamma = solve_gamma(z, tau.gamma, config);
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double u;
      if (!inverse_standardized(z[i], gamma, u)) ++clamped;
      x_hat[i] = u * tau.sigma + tau.mu;
    }
    report.clamped_fraction = static_cast<double>(clamped) / static_cast<double>(n);

    const auto [m, s] = wide_mean_sd(x_hat);
    const LwfParams next{m, s, gamma};
    report.trace.push_back(next);
    report.iterations = k + 1;
    const double step = distance(next, tau);
    tau = next;

    const bool blown = !std::isfinite(tau.mu) || !std::isfinite(tau.sigma) || !(tau.sigma > 0.0) ||
                       std::abs(tau.mu) > config.divergence_guard || tau.sigma > config.divergence_guard;
    if (blown) {
      report.status = FitStatus::Diverged;
      break;
    }
    if (step <= config.tol) {
      report.status = FitStatus::Converged;
      break;
    }
  }
  report.tau_hat = tau;
  return report;
}

}  // namespace lwf
