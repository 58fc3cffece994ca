#include "lwf/tail_index.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "lwf/errors.hpp"
#include "lwf/parallel.hpp"
#include "lwf/rng.hpp"
#include "lwf/sampling.hpp"

namespace lwf {

namespace {

constexpr double kHillBetaSlack = 1e-8;

bool is_hill(double beta) { return std::abs(beta - 1.0) <= kHillBetaSlack; }

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParamError("tail index: beta must be positive");
}

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return v;
}

// H* from ascending order statistics; throws on undefined points.
double h_from_sorted(const std::vector<double>& v, std::size_t k, double beta) {
  const std::size_t n = v.size();
  if (k < 1 || k >= n) throw RangeError(fmt::format("tail index: k = {} outside [1, {}]", k, n - 1));
  const double threshold = v[n - k - 1];
  if (!(threshold > 0.0)) throw DomainError("tail index: threshold order statistic must be positive");
  if (threshold == v[n - 1]) throw DegenerateError("tail index: top order statistics are all equal");

  double acc = 0.0;
  if (is_hill(beta)) {
    for (std::size_t j = n - k; j < n; ++j) acc += std::log(v[j] / threshold);
    return acc / static_cast<double>(k);
  }
  for (std::size_t j = n - k; j < n; ++j) acc += std::pow(threshold / v[j], beta - 1.0);
  const double mean_ratio = acc / static_cast<double>(k);
  return (1.0 / mean_ratio - 1.0) / (beta - 1.0);
}

void require_above_one(std::span<const double> x, const char* who) {
  if (x.empty()) throw InputError(fmt::format("{}: empty sample", who));
  for (double v : x)
    if (!(v > 1.0)) throw DomainError(fmt::format("{}: Pareto observations must exceed 1", who));
}

}  // namespace

std::optional<double> TailIndexPath::at(std::size_t k) const {
  if (k < 1 || k > alpha_hat.size()) return std::nullopt;
  return alpha_hat[k - 1];
}

double harmonic_moment_h(std::span<const double> x, std::size_t k, double beta) {
  check_beta(beta);
  return h_from_sorted(sorted_copy(x), k, beta);
}

double harmonic_moment_estimator(std::span<const double> x, std::size_t k, double beta) {
  return 1.0 / harmonic_moment_h(x, k, beta);
}

double hill_estimator(std::span<const double> x, std::size_t k) { return harmonic_moment_estimator(x, k, 1.0); }

double t_hill(std::span<const double> x, std::size_t k) { return harmonic_moment_estimator(x, k, 2.0); }

TailIndexPath modified_hill_path(std::span<const double> x, double beta, PathTransform transform) {
  check_beta(beta);
  if (x.size() < 3) throw InputError("modified_hill_path: need at least 3 observations");
  std::vector<double> v(x.begin(), x.end());
  if (transform == PathTransform::AbsoluteValues)
    for (double& e : v) e = std::abs(e);
  std::sort(v.begin(), v.end());

  const std::size_t n = v.size();
  TailIndexPath path;
  path.beta = beta;
  path.n = n;
  path.k_values.resize(n - 1);
  path.alpha_hat.resize(n - 1);

  const bool hill = is_hill(beta);
  // Running sum over the top k order statistics of ln x (Hill) or x^(1-beta).
  double tail_sum = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double top = v[n - k];
    tail_sum += hill ? std::log(top) : std::pow(top, 1.0 - beta);
    path.k_values[k - 1] = k;

    const double threshold = v[n - k - 1];
    if (!(threshold > 0.0) || threshold == v[n - 1] || !std::isfinite(tail_sum)) continue;
    const double kd = static_cast<double>(k);
    double h;
    if (hill) {
      h = tail_sum / kd - std::log(threshold);
    } else {
      const double mean_ratio = std::pow(threshold, beta - 1.0) * tail_sum / kd;
      h = (1.0 / mean_ratio - 1.0) / (beta - 1.0);
    }
    if (h > 0.0 && std::isfinite(h)) path.alpha_hat[k - 1] = 1.0 / h;
  }
  return path;
}

const TailIndexPath& RegimeBands::band(double nu) const {
  for (std::size_t i = 0; i < nu_levels.size(); ++i)
    if (nu_levels[i] == nu && i < band_curves.size()) return band_curves[i];
  throw RangeError(fmt::format("RegimeBands: no band for nu = {}", nu));
}

RegimeBands build_regime_bands(std::size_t n, std::size_t replicates, double beta, std::uint64_t seed,
                               std::size_t threads) {
  if (n < 10) throw ParamError("build_regime_bands: n must be at least 10");
  if (replicates < 1) throw ParamError("build_regime_bands: replicates must be at least 1");
  check_beta(beta);

  const std::size_t levels = RegimeBands::nu_levels.size();
  std::vector<TailIndexPath> paths(levels * replicates);
  parallel_for(paths.size(), threads, [&](std::size_t idx) {
    const double nu = RegimeBands::nu_levels[idx / replicates];
    const Sample s = draw(dist::StudentT{nu}, n, substream_seed(seed, idx));
    paths[idx] = modified_hill_path(s.values, beta, PathTransform::AbsoluteValues);
  });

  RegimeBands bands;
  bands.replicates = replicates;
  bands.n = n;
  for (std::size_t level = 0; level < levels; ++level) {
    TailIndexPath curve;
    curve.beta = beta;
    curve.n = n;
    curve.k_values.resize(n - 1);
    curve.alpha_hat.resize(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
      curve.k_values[k - 1] = k;
      double h_sum = 0.0;
      std::size_t used = 0;
      for (std::size_t r = 0; r < replicates; ++r) {
        if (const auto a = paths[level * replicates + r].alpha_hat[k - 1]) {
          h_sum += 1.0 / *a;
          ++used;
        }
      }
      if (used > 0 && h_sum > 0.0) curve.alpha_hat[k - 1] = static_cast<double>(used) / h_sum;
    }
    bands.band_curves.push_back(std::move(curve));
  }
  return bands;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::RegimeI: return "I";
    case Regime::RegimeII: return "II";
    case Regime::RegimeIII: return "III";
    case Regime::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

RegimeClassification classify_regime(const TailIndexPath& data, const RegimeBands& bands, std::size_t k_lo,
                                     std::size_t k_hi) {
  if (bands.band_curves.size() != RegimeBands::nu_levels.size())
    throw RangeError("classify_regime: bands are incomplete");
  std::size_t limit = data.alpha_hat.size();
  for (const auto& b : bands.band_curves) limit = std::min(limit, b.alpha_hat.size());
  if (k_lo < 1 || k_lo > k_hi || k_hi > limit)
    throw RangeError(fmt::format("classify_regime: k range [{}, {}] not within [1, {}]", k_lo, k_hi, limit));

  const auto& b5 = bands.band(5.0);
  const auto& b2 = bands.band(2.0);
  const auto& b1 = bands.band(1.0);
  std::size_t counts[3] = {0, 0, 0};
  RegimeClassification out;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const auto a = data.at(k), a5 = b5.at(k), a2 = b2.at(k), a1 = b1.at(k);
    if (!a || !a5 || !a2 || !a1) continue;
    const double mid_low = 0.5 * (*a1 + *a2);
    const double mid_high = 0.5 * (*a2 + *a5);
    if (*a < mid_low) {
      ++counts[2];
    } else if (*a < mid_high) {
      ++counts[1];
    } else {
      ++counts[0];
    }
    ++out.points;
  }
  if (out.points == 0) return out;
  const double total = static_cast<double>(out.points);
  out.fraction_i = static_cast<double>(counts[0]) / total;
  out.fraction_ii = static_cast<double>(counts[1]) / total;
  out.fraction_iii = static_cast<double>(counts[2]) / total;
  if (out.fraction_i > 0.5) {
    out.regime = Regime::RegimeI;
  } else if (out.fraction_ii > 0.5) {
    out.regime = Regime::RegimeII;
  } else if (out.fraction_iii > 0.5) {
    out.regime = Regime::RegimeIII;
  }
  return out;
}

double johnson_eta(double x, const Support& support) {
  if (std::holds_alternative<support::RealLine>(support)) return x;
  if (const auto* half = std::get_if<support::HalfLine>(&support)) {
    if (!(x > half->a)) throw DomainError("johnson_eta: x must exceed the lower end of the half line");
    return std::log(x - half->a);
  }
  if (!(x > 0.0 && x < 1.0)) throw DomainError("johnson_eta: x must lie in (0, 1)");
  return std::log(x / (1.0 - x));
}

double pareto_t_score(double x, double alpha) {
  if (!(x > 1.0)) throw DomainError("pareto_t_score: x must exceed 1");
  if (!(alpha > 0.0)) throw DomainError("pareto_t_score: alpha must be positive");
  return alpha * (1.0 - (alpha + 1.0) / (alpha * x));
}

double pareto_alpha_tscore(std::span<const double> x) {
  require_above_one(x, "pareto_alpha_tscore");
  const double hm = harmonic_mean(x);
  if (!(hm > 1.0)) throw DegenerateError("pareto_alpha_tscore: harmonic mean equals 1");
  return 1.0 / (hm - 1.0);
}

double pareto_alpha_mle(std::span<const double> x) {
  require_above_one(x, "pareto_alpha_mle");
  double log_sum = 0.0;
  for (double v : x) log_sum += std::log(v);
  return static_cast<double>(x.size()) / log_sum;
}

}  // namespace lwf
