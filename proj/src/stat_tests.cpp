#include "lwf/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "lwf/errors.hpp"
#include "lwf/parallel.hpp"
#include "lwf/rng.hpp"
#include "lwf/sampling.hpp"

namespace lwf {

namespace {

constexpr double kNuMin = 0.5;
constexpr double kNuMax = 50.0;
constexpr std::size_t kMinTestSize = 8;

void require_size(std::span<const double> x, const char* who) {
  if (x.size() < kMinTestSize) throw InputError(fmt::format("{}: need at least {} observations", who, kMinTestSize));
  for (double v : x)
    if (!std::isfinite(v)) throw InputError(fmt::format("{}: data contain non-finite values", who));
}

double clamp_unit(double p) { return std::clamp(p, 0.0, 1.0); }

// ---- Student-t profile likelihood -----------------------------------------

struct LocationScale {
  double location;
  double scale;
};

double t_log_likelihood(std::span<const double> x, double nu, const LocationScale& ls) {
  const double n = static_cast<double>(x.size());
  const double constant = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                          0.5 * std::log(nu * std::numbers::pi) - std::log(ls.scale);
  double acc = 0.0;
  for (double v : x) {
    const double d = (v - ls.location) / ls.scale;
    acc += std::log1p(d * d / nu);
  }
  return n * constant - 0.5 * (nu + 1.0) * acc;
}

// EM fixed point for location and scale at fixed nu.
LocationScale t_location_scale(std::span<const double> x, double nu, LocationScale start) {
  const double n = static_cast<double>(x.size());
  LocationScale cur = start;
  for (int it = 0; it < 1000; ++it) {
    double sw = 0.0, swx = 0.0;
    for (double v : x) {
      const double d = (v - cur.location) / cur.scale;
      const double w = (nu + 1.0) / (nu + d * d);
      sw += w;
      swx += w * v;
    }
    const double location = swx / sw;
    double ss = 0.0;
    for (double v : x) {
      const double d = (v - cur.location) / cur.scale;
      const double w = (nu + 1.0) / (nu + d * d);
      ss += w * (v - location) * (v - location);
    }
    const double scale = std::sqrt(ss / n);
    const double change = std::abs(location - cur.location) + std::abs(scale - cur.scale);
    cur = {location, scale};
    if (!(scale > 0.0) || !std::isfinite(scale)) break;
    if (change <= 1e-10 * scale) break;
  }
  return cur;
}

}  // namespace

std::string_view to_string(TestMethod method) {
  switch (method) {
    case TestMethod::RobustJB: return "robust_jb";
    case TestMethod::KsNaiveT: return "ks_naive_t";
    case TestMethod::KsBootstrapT: return "ks_bootstrap_t";
    case TestMethod::LjungBox: return "ljung_box";
  }
  return "unknown";
}

std::optional<double> TestResult::detail(std::string_view key) const {
  for (const auto& [k, v] : extra)
    if (k == key) return v;
  return std::nullopt;
}

// ---- Robust Jarque-Bera ----------------------------------------------------

RobustShape robust_shape(std::span<const double> x) {
  require_size(x, "robust_shape");
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double med = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  const std::size_t trim = std::max<std::size_t>(1, n / 100);

  double abs_dev = 0.0, m3 = 0.0, m4 = 0.0;
  for (std::size_t i = trim; i < n - trim; ++i) {
    const double d = v[i] - med;
    const double d2 = d * d;
    abs_dev += std::abs(d);
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double kept = static_cast<double>(n - 2 * trim);
  const double j = std::sqrt(std::numbers::pi / 2.0) * abs_dev / kept;
  if (!(j > 0.0)) throw DegenerateError("robust_shape: sample has no spread");
  const double j3 = j * j * j;
  return {m3 / kept / j3, m4 / kept / (j3 * j)};
}

RobustJbNull RobustJbNull::calibrate(std::size_t n, std::size_t replicates, std::uint64_t seed,
                                     std::size_t threads) {
  if (n < kMinTestSize) throw ParamError("RobustJbNull: n must be at least 8");
  if (replicates < 2) throw ParamError("RobustJbNull: need at least 2 calibration replicates");
  std::vector<RobustShape> shapes(replicates);
  parallel_for(replicates, threads, [&](std::size_t r) {
    const Sample s = draw(dist::Normal{}, n, substream_seed(seed, r));
    shapes[r] = robust_shape(s.values);
  });

  const double reps = static_cast<double>(replicates);
  double skew_sq = 0.0, kurt_mean = 0.0;
  for (const auto& s : shapes) {
    skew_sq += s.skewness * s.skewness;
    kurt_mean += s.kurtosis;
  }
  skew_sq /= reps;
  kurt_mean /= reps;
  double kurt_var = 0.0;
  for (const auto& s : shapes) kurt_var += (s.kurtosis - kurt_mean) * (s.kurtosis - kurt_mean);
  kurt_var /= reps - 1.0;

  RobustJbNull null;
  null.n_ = n;
  null.kurtosis_centre_ = kurt_mean;
  null.c1_ = static_cast<double>(n) * skew_sq;
  null.c2_ = static_cast<double>(n) * kurt_var;
  null.null_stats_.reserve(replicates);
  for (const auto& s : shapes) null.null_stats_.push_back(null.statistic(s));
  std::sort(null.null_stats_.begin(), null.null_stats_.end());
  return null;
}

double RobustJbNull::statistic(const RobustShape& shape) const {
  const double n = static_cast<double>(n_);
  const double k = shape.kurtosis - kurtosis_centre_;
  return n * (shape.skewness * shape.skewness / c1_ + k * k / c2_);
}

double RobustJbNull::p_value(double statistic) const {
  const auto first_at_least = std::lower_bound(null_stats_.begin(), null_stats_.end(), statistic);
  const auto exceed = static_cast<double>(null_stats_.end() - first_at_least);
  return (1.0 + exceed) / (static_cast<double>(null_stats_.size()) + 1.0);
}

TestResult robust_jb(std::span<const double> x, std::size_t mc_calibration, std::uint64_t calibration_seed) {
  require_size(x, "robust_jb");
  return robust_jb(x, RobustJbNull::calibrate(x.size(), mc_calibration, calibration_seed));
}

TestResult robust_jb(std::span<const double> x, const RobustJbNull& null) {
  require_size(x, "robust_jb");
  if (x.size() != null.n()) {
    throw InputError(fmt::format("robust_jb: calibration is for n = {}, sample has n = {}", null.n(), x.size()));
  }
  const RobustShape shape = robust_shape(x);
  TestResult out;
  out.method = TestMethod::RobustJB;
  out.statistic = null.statistic(shape);
  out.p_value = clamp_unit(null.p_value(out.statistic));
  out.extra = {{"robust_skewness", shape.skewness},
               {"robust_kurtosis", shape.kurtosis},
               {"calibration_replicates", static_cast<double>(null.replicates())}};
  return out;
}

// ---- Student-t fit and KS ---------------------------------------------------

StudentTFit fit_student_t(std::span<const double> x) {
  require_size(x, "fit_student_t");
  const double med = median(x);
  double spread = 1.4826 * mad(x);
  if (!(spread > 0.0)) spread = sd(x);
  if (!(spread > 0.0)) throw FitError("fit_student_t: data have no spread");

  LocationScale warm{med, spread};
  auto profile = [&](double log_nu) {
    const double nu = std::exp(log_nu);
    const LocationScale ls = t_location_scale(x, nu, warm);
    if (!(ls.scale > 0.0) || !std::isfinite(ls.scale) || !std::isfinite(ls.location)) {
      return std::pair{-std::numeric_limits<double>::infinity(), ls};
    }
    warm = ls;
    return std::pair{t_log_likelihood(x, nu, ls), ls};
  };

  // Golden-section search for the maximum over ln nu.
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(kNuMin), b = std::log(kNuMax);
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = profile(c).first, fd = profile(d).first;
  while (b - a > 1e-4) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = profile(c).first;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = profile(d).first;
    }
  }
  const double log_nu = 0.5 * (a + b);
  const auto [ll, ls] = profile(log_nu);
  if (!std::isfinite(ll)) throw FitError("fit_student_t: likelihood is not finite at the optimum");
  return {ls.location, ls.scale, std::exp(log_nu), ll};
}

double student_t_cdf(double t, double nu) {
  if (!(nu > 0.0)) throw DomainError("student_t_cdf: nu must be positive");
  if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
  return boost::math::cdf(boost::math::students_t_distribution<double>(nu), t);
}

double ks_statistic_t(std::span<const double> x, const StudentTFit& fit) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = student_t_cdf((v[i] - fit.location) / fit.scale, fit.nu);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.0) {
    // Jacobi theta form, fast for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
      cdf += term;
      if (term < 1e-16) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return clamp_unit(1.0 - cdf);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-10) break;
  }
  return clamp_unit(2.0 * sum);
}

TestResult ks_naive_t(std::span<const double> x) {
  require_size(x, "ks_naive_t");
  const StudentTFit fit = fit_student_t(x);
  TestResult out;
  out.method = TestMethod::KsNaiveT;
  out.statistic = ks_statistic_t(x, fit);
  out.p_value = kolmogorov_survival(std::sqrt(static_cast<double>(x.size())) * out.statistic);
  out.extra = {{"nu", fit.nu}, {"location", fit.location}, {"scale", fit.scale}};
  return out;
}

TestResult ks_bootstrap_t(std::span<const double> x, std::size_t replicates, std::uint64_t seed,
                          std::size_t threads) {
  require_size(x, "ks_bootstrap_t");
  if (replicates < 99) throw ParamError("ks_bootstrap_t: need at least 99 bootstrap replicates");
  const StudentTFit fit = fit_student_t(x);
  const double observed = ks_statistic_t(x, fit);

  // NaN marks a failed refit.
  std::vector<double> boot(replicates);
  parallel_for(replicates, threads, [&](std::size_t b) {
    Sample s = draw(dist::StudentT{fit.nu}, x.size(), substream_seed(seed, b));
    for (double& v : s.values) v = fit.location + fit.scale * v;
    try {
      boot[b] = ks_statistic_t(s.values, fit_student_t(s.values));
    } catch (const FitError&) {
      boot[b] = std::numeric_limits<double>::quiet_NaN();
    }
  });

  std::size_t failed = 0, exceed = 0;
  for (double d : boot) {
    if (std::isnan(d)) {
      ++failed;
    } else if (d >= observed) {
      ++exceed;
    }
  }
  const std::size_t used = replicates - failed;
  TestResult out;
  out.method = TestMethod::KsBootstrapT;
  out.statistic = observed;
  out.p_value = clamp_unit((1.0 + static_cast<double>(exceed)) / (static_cast<double>(used) + 1.0));
  out.extra = {{"nu", fit.nu},
               {"location", fit.location},
               {"scale", fit.scale},
               {"replicates", static_cast<double>(used)},
               {"failed_refits", static_cast<double>(failed)}};
  return out;
}

// ---- Ljung-Box --------------------------------------------------------------

TestResult ljung_box(std::span<const double> x, std::span<const std::size_t> lags) {
  if (lags.empty()) throw RangeError("ljung_box: no lags given");
  const std::size_t n = x.size();
  const std::size_t max_lag = *std::max_element(lags.begin(), lags.end());
  const std::size_t min_lag = *std::min_element(lags.begin(), lags.end());
  if (min_lag < 1 || 4 * max_lag >= n) {
    throw RangeError(fmt::format("ljung_box: lags must lie in [1, n/4) (n = {})", n));
  }
  const AcfResult r = acf(x, max_lag);
  const double nd = static_cast<double>(n);
  double q = 0.0;
  TestResult out;
  out.method = TestMethod::LjungBox;
  out.extra.emplace_back("band", r.band);
  for (std::size_t lag : lags) {
    const double rk = r.values[lag - 1];
    q += rk * rk / (nd - static_cast<double>(lag));
    out.extra.emplace_back(fmt::format("acf_{}", lag), rk);
    out.extra.emplace_back(fmt::format("flag_{}", lag), std::abs(rk) > r.band ? 1.0 : 0.0);
  }
  q *= nd * (nd + 2.0);
  out.statistic = q;
  out.p_value = clamp_unit(boost::math::gamma_q(0.5 * static_cast<double>(lags.size()), 0.5 * q));
  return out;
}

}  // namespace lwf
