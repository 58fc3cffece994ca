#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lwf {

/// Location, scale and skewness of a Lambert W x F location-scale family:
/// y = u exp(gamma u) sigma + mu.
struct LwfParams {
  double mu = 0.0;
  double sigma = 1.0;
  double gamma = 0.0;

  /// ParamError unless sigma > 0 and all fields finite.
  void validate() const;
};

enum class InversePolicy {
  /// Points beyond the branch point raise DomainError.
  Strict,
  /// Points beyond the branch point map to -1/gamma and are reported.
  Clamp,
};

struct InverseReport {
  std::vector<double> values;
  std::vector<std::size_t> clamped_indices;

  std::size_t clamped_count() const noexcept { return clamped_indices.size(); }
};

std::vector<double> forward(std::span<const double> u, const LwfParams& params);

/// Principal-branch back-transformation u = W(gamma z) / gamma, z = (y - mu) / sigma.
InverseReport inverse(std::span<const double> y, const LwfParams& params,
                      InversePolicy policy = InversePolicy::Strict);

/// Back-transformation of one standardised value. Returns false (and leaves
/// `u` at -1/gamma) when gamma z < -1/e.
bool inverse_standardized(double z, double gamma, double& u);

/// Remedies for exact zeros in return series before tail estimation.
enum class ZerosPolicy {
  /// Remove zeros.
  Drop,
  /// Replace each zero by a uniform draw on (0, m), m the smallest nonzero |x|.
  UniformFill,
};

struct ZerosOutcome {
  std::vector<double> values;
  std::size_t zeros = 0;
};

/// Applies `policy`; `seed` feeds UniformFill. A series of zeros only stays
/// empty under Drop and raises DegenerateError under UniformFill.
ZerosOutcome apply_zeros_policy(std::span<const double> x, ZerosPolicy policy, std::uint64_t seed);

}  // namespace lwf
