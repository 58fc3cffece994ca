#include "lwf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "lwf/errors.hpp"
#include "lwf/rng.hpp"

namespace lwf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ParamError(fmt::format("{} must be positive and finite (got {})", what, value));
  }
}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw ParamError(fmt::format("{} must be finite", what));
}

// Substream indices inside one draw() call.
enum Stream : std::uint64_t { kNormalStream = 0, kChiStream = 1, kSideStream = 2, kUniformStream = 3 };

double student_variate(Rng& normals, Rng& chis, double nu) {
  return normals.normal() / std::sqrt(chis.chi_square(nu) / nu);
}

}  // namespace

void validate(const DistSpec& spec) {
  std::visit(overloaded{
                 [](const dist::Normal& d) {
                   require_finite(d.mu, "normal mu");
                   require_positive(d.sigma, "normal sigma");
                 },
                 [](const dist::StudentT& d) { require_positive(d.nu, "student-t nu"); },
                 [](const dist::Pareto& d) { require_positive(d.alpha, "pareto alpha"); },
                 [](const dist::Exponential& d) { require_positive(d.rate, "exponential rate"); },
                 [](const dist::Weibull& d) {
                   require_positive(d.shape, "weibull shape");
                   require_positive(d.scale, "weibull scale");
                 },
                 [](const dist::SkewedT& d) {
                   require_positive(d.nu, "skewed-t nu");
                   require_positive(d.gamma, "skewed-t gamma");
                 },
                 [](const dist::SkewNormal& d) {
                   require_finite(d.xi, "skew-normal xi");
                   require_positive(d.omega, "skew-normal omega");
                   require_finite(d.alpha, "skew-normal alpha");
                 },
             },
             spec);
}

std::string describe(const DistSpec& spec) {
  return std::visit(
      overloaded{
          [](const dist::Normal& d) { return fmt::format("normal(mu={},sigma={})", d.mu, d.sigma); },
          [](const dist::StudentT& d) { return fmt::format("student_t(nu={})", d.nu); },
          [](const dist::Pareto& d) { return fmt::format("pareto(alpha={})", d.alpha); },
          [](const dist::Exponential& d) { return fmt::format("exponential(rate={})", d.rate); },
          [](const dist::Weibull& d) {
            return fmt::format("weibull(shape={},scale={})", d.shape, d.scale);
          },
          [](const dist::SkewedT& d) {
            return fmt::format("skewed_t(nu={},gamma={})", d.nu, d.gamma);
          },
          [](const dist::SkewNormal& d) {
            return fmt::format("skew_normal(xi={},omega={},alpha={})", d.xi, d.omega, d.alpha);
          },
      },
      spec);
}

Sample draw(const DistSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParamError("draw: n must be at least 1");
  validate(spec);

  Rng normals = Rng::substream(seed, kNormalStream);
  Rng chis = Rng::substream(seed, kChiStream);
  Rng sides = Rng::substream(seed, kSideStream);
  Rng uniforms = Rng::substream(seed, kUniformStream);

  Sample out{std::vector<double>(n), describe(spec), seed};
  auto& v = out.values;

  std::visit(overloaded{
                 [&](const dist::Normal& d) {
                   for (auto& x : v) x = d.mu + d.sigma * normals.normal();
                 },
                 [&](const dist::StudentT& d) {
                   for (auto& x : v) x = student_variate(normals, chis, d.nu);
                 },
                 [&](const dist::Pareto& d) {
                   const double above_one = std::nextafter(1.0, 2.0);
                   for (auto& x : v) {
                     // (1 - U)^(-1/alpha), written through log1p for small U.
                     x = std::max(above_one, std::exp(-std::log1p(-uniforms.uniform()) / d.alpha));
                   }
                 },
                 [&](const dist::Exponential& d) {
                   for (auto& x : v) x = -std::log(uniforms.uniform()) / d.rate;
                 },
                 [&](const dist::Weibull& d) {
                   for (auto& x : v) x = d.scale * std::pow(-std::log(uniforms.uniform()), 1.0 / d.shape);
                 },
                 [&](const dist::SkewedT& d) {
                   const double right_mass = d.gamma * d.gamma / (1.0 + d.gamma * d.gamma);
                   for (auto& x : v) {
                     const double t = std::abs(student_variate(normals, chis, d.nu));
                     x = sides.uniform() < right_mass ? t * d.gamma : -t / d.gamma;
                   }
                 },
                 [&](const dist::SkewNormal& d) {
                   const double delta = d.alpha / std::sqrt(1.0 + d.alpha * d.alpha);
                   const double rest = std::sqrt(1.0 - delta * delta);
                   for (auto& x : v) {
                     const double z0 = std::abs(normals.normal());
                     const double z1 = normals.normal();
                     x = d.xi + d.omega * (delta * z0 + rest * z1);
                   }
                 },
             },
             spec);
  return out;
}

Moments moments(std::span<const double> x) {
  if (x.size() < 2) throw InputError("moments: need at least two observations");
  const double n = static_cast<double>(x.size());
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double xi : x) {
    const double d = xi - m;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (!(m2 > 0.0)) throw DegenerateError("moments: sample has zero variance");
  return {m, std::sqrt(m2), m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

double mean(std::span<const double> x) {
  if (x.empty()) throw InputError("mean: empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sd(std::span<const double> x) {
  const double m = mean(x);
  double ss = 0.0;
  for (double xi : x) ss += (xi - m) * (xi - m);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

double skewness(std::span<const double> x) { return moments(x).skewness; }

double median(std::span<const double> x) {
  if (x.empty()) throw InputError("median: empty sample");
  std::vector<double> v(x.begin(), x.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double mad(std::span<const double> x) {
  const double med = median(x);
  std::vector<double> dev(x.size());
  std::transform(x.begin(), x.end(), dev.begin(), [med](double xi) { return std::abs(xi - med); });
  return median(dev);
}

double harmonic_mean(std::span<const double> x) {
  if (x.empty()) throw InputError("harmonic_mean: empty sample");
  double inv = 0.0;
  for (double xi : x) {
    if (!(xi > 0.0)) throw DomainError("harmonic_mean: values must be positive");
    inv += 1.0 / xi;
  }
  return static_cast<double>(x.size()) / inv;
}

std::size_t AcfResult::flagged() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [this](double r) { return std::abs(r) > band; }));
}

AcfResult acf(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (max_lag == 0 || max_lag >= n) throw RangeError("acf: max_lag must be in [1, n)");
  const double m = mean(x);
  double c0 = 0.0;
  for (double xi : x) c0 += (xi - m) * (xi - m);
  if (!(c0 > 0.0)) throw DegenerateError("acf: series has zero variance");

  AcfResult out{std::vector<double>(max_lag), 1.96 / std::sqrt(static_cast<double>(n))};
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double ck = 0.0;
    for (std::size_t t = lag; t < n; ++t) ck += (x[t] - m) * (x[t - lag] - m);
    out.values[lag - 1] = ck / c0;
  }
  return out;
}

}  // namespace lwf
