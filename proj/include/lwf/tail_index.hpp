#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace lwf {

/// Tail-index estimates alpha_hat(k) over k = 1 .. n-1 for one beta. Entries
/// are empty where the estimator is undefined (nonpositive threshold, ties
/// across the top k+1 order statistics).
struct TailIndexPath {
  std::vector<std::size_t> k_values;
  std::vector<std::optional<double>> alpha_hat;
  double beta = 2.0;
  std::size_t n = 0;

  /// alpha_hat at k, or empty when k is out of range or the entry is absent.
  std::optional<double> at(std::size_t k) const;
};

enum class PathTransform { AbsoluteValues, Raw };

/// H*_{k,n}(beta) = (1/(beta-1)) {[(1/k) sum_j (X_{n-k,n}/X_{n-j+1,n})^(beta-1)]^(-1) - 1}.
/// Its reciprocal is the tail index. beta within 1e-8 of 1 gives the Hill
/// value (mean log-excess). DomainError for X_{n-k,n} <= 0, RangeError for k
/// outside [1, n-1], DegenerateError when the top k+1 order statistics tie.
double harmonic_moment_h(std::span<const double> x, std::size_t k, double beta);

/// 1 / harmonic_moment_h.
double harmonic_moment_estimator(std::span<const double> x, std::size_t k, double beta);

/// [(1/k) sum_j ln(X_{n-j+1,n} / X_{n-k,n})]^(-1).
double hill_estimator(std::span<const double> x, std::size_t k);

/// Harmonic moment estimator at beta = 2.
double t_hill(std::span<const double> x, std::size_t k);

/// The estimator at every k in 1 .. n-1 (O(n log n) via tail sums).
TailIndexPath modified_hill_path(std::span<const double> x, double beta,
                                 PathTransform transform = PathTransform::AbsoluteValues);

/// Averaged modified Hill curves of |t_nu| samples for nu = 5, 2, 1.
struct RegimeBands {
  static constexpr std::array<double, 3> nu_levels{5.0, 2.0, 1.0};
  /// One curve per entry of nu_levels, same order.
  std::vector<TailIndexPath> band_curves;
  std::size_t replicates = 0;
  std::size_t n = 0;

  const TailIndexPath& band(double nu) const;
};

/// For each nu, averages H* = 1/alpha_hat pointwise over `replicates` samples
/// (absent entries skipped) and inverts the average. Replicate r of level i
/// draws from substream (seed, i * replicates + r), so the result does not
/// depend on `threads`.
RegimeBands build_regime_bands(std::size_t n, std::size_t replicates, double beta, std::uint64_t seed,
                               std::size_t threads = 1);

enum class Regime { RegimeI, RegimeII, RegimeIII, Indeterminate };

std::string_view to_string(Regime regime);

struct RegimeClassification {
  Regime regime = Regime::Indeterminate;
  double fraction_i = 0.0;
  double fraction_ii = 0.0;
  double fraction_iii = 0.0;
  /// k values that entered the vote (data and all bands present).
  std::size_t points = 0;
};

/// Places the data curve against the pointwise midpoints of adjacent bands
/// for k in [k_lo, k_hi]: below mid(1,2) is Regime III, below mid(2,5) is
/// Regime II, anything higher Regime I. The majority region wins when it
/// holds more than half of the points.
RegimeClassification classify_regime(const TailIndexPath& data, const RegimeBands& bands, std::size_t k_lo,
                                     std::size_t k_hi);

namespace support {
struct RealLine {};
/// (a, inf)
struct HalfLine {
  double a;
};
/// (0, 1)
struct UnitInterval {};
}  // namespace support

using Support = std::variant<support::RealLine, support::HalfLine, support::UnitInterval>;

/// Johnson's eta: x on R, ln(x - a) on (a, inf), ln(x / (1 - x)) on (0, 1).
double johnson_eta(double x, const Support& support);

/// Pareto t-score alpha (1 - (alpha + 1) / (alpha x)); bounded by alpha.
double pareto_t_score(double x, double alpha);

/// Root of the summed t-score: 1 / (harmonic_mean - 1). Requires x_i > 1.
double pareto_alpha_tscore(std::span<const double> x);

/// Pareto maximum likelihood n / sum ln x_i. Requires x_i > 1.
double pareto_alpha_mle(std::span<const double> x);

}  // namespace lwf
