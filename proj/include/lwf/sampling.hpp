#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lwf {

/// Observations plus where they came from. `seed` is empty for ingested data.
struct Sample {
  std::vector<double> values;
  std::string label;
  std::optional<std::uint64_t> seed;

  std::size_t size() const noexcept { return values.size(); }
};

namespace dist {

struct Normal {
  double mu = 0.0;
  double sigma = 1.0;
};
struct StudentT {
  double nu;
};
/// Standard Pareto with x_min = 1.
struct Pareto {
  double alpha;
};
struct Exponential {
  double rate = 1.0;
};
struct Weibull {
  double shape;
  double scale = 1.0;
};
/// Fernandez-Steel two-piece Student-t; gamma = 1 is the symmetric t, gamma < 1
/// skews to the left.
struct SkewedT {
  double nu;
  double gamma;
};
/// Azzalini skew normal with location xi, scale omega and slant alpha.
struct SkewNormal {
  double xi;
  double omega;
  double alpha;
};

}  // namespace dist

using DistSpec = std::variant<dist::Normal, dist::StudentT, dist::Pareto, dist::Exponential,
                              dist::Weibull, dist::SkewedT, dist::SkewNormal>;

/// Throws ParamError when a parameter violates its family's constraint.
void validate(const DistSpec& spec);

/// Short human readable name, e.g. "student_t(nu=5)".
std::string describe(const DistSpec& spec);

/// n i.i.d. variates. The same (spec, n, seed) always gives the same bits.
Sample draw(const DistSpec& spec, std::size_t n, std::uint64_t seed);

struct Moments {
  double mean;
  double sd;
  double skewness;
  double excess_kurtosis;
};

/// Divide-by-n central moments: sd = sqrt(m2), skewness = m3 / m2^1.5,
/// excess kurtosis = m4 / m2^2 - 3. DegenerateError when m2 = 0.
Moments moments(std::span<const double> x);

double mean(std::span<const double> x);
/// sqrt of the divide-by-n variance.
double sd(std::span<const double> x);
double skewness(std::span<const double> x);
double median(std::span<const double> x);
/// Median absolute deviation from the median, unscaled.
double mad(std::span<const double> x);

/// n / sum(1/x_i). DomainError on nonpositive values.
double harmonic_mean(std::span<const double> x);

struct AcfResult {
  /// r_1 .. r_max_lag
  std::vector<double> values;
  /// 1.96 / sqrt(n)
  double band;

  std::size_t flagged() const;
};

/// Biased sample autocorrelations r_k = c_k / c_0, with c_k summed over
/// n - k pairs and divided by n.
AcfResult acf(std::span<const double> x, std::size_t max_lag);

}  // namespace lwf
