#include "lwf/transform.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "lwf/errors.hpp"
#include "lwf/lambertw.hpp"
#include "lwf/rng.hpp"

namespace lwf {

void LwfParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(gamma)) throw ParamError("LwfParams: mu and gamma must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParamError("LwfParams: sigma must be positive and finite");
}

std::vector<double> forward(std::span<const double> u, const LwfParams& params) {
  params.validate();
  std::vector<double> y(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    y[i] = u[i] * std::exp(params.gamma * u[i]) * params.sigma + params.mu;
  }
  return y;
}

bool inverse_standardized(double z, double gamma, double& u) {
  if (gamma == 0.0) {
    u = z;
    return true;
  }
  const double arg = gamma * z;
  if (arg < -kInvE) {
    u = -1.0 / gamma;
    return false;
  }
  u = lambert_w(arg, Branch::Principal) / gamma;
  return true;
}

InverseReport inverse(std::span<const double> y, const LwfParams& params, InversePolicy policy) {
  params.validate();
  InverseReport out;
  out.values.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double z = (y[i] - params.mu) / params.sigma;
    if (!inverse_standardized(z, params.gamma, out.values[i])) {
      if (policy == InversePolicy::Strict) {
        throw DomainError(fmt::format(
            "inverse: observation {} (gamma*z = {}) lies beyond the branch point", i, params.gamma * z));
      }
      out.clamped_indices.push_back(i);
    }
  }
  return out;
}

ZerosOutcome apply_zeros_policy(std::span<const double> x, ZerosPolicy policy, std::uint64_t seed) {
  ZerosOutcome out;
  double smallest = std::numeric_limits<double>::infinity();
  for (double xi : x) {
    if (xi == 0.0) {
      ++out.zeros;
    } else {
      smallest = std::min(smallest, std::abs(xi));
    }
  }
  if (policy == ZerosPolicy::Drop) {
    out.values.reserve(x.size() - out.zeros);
    for (double xi : x)
      if (xi != 0.0) out.values.push_back(xi);
    return out;
  }
  if (out.zeros > 0 && !std::isfinite(smallest)) {
    throw DegenerateError("apply_zeros_policy: series contains only zeros");
  }
  Rng rng(seed);
  out.values.assign(x.begin(), x.end());
  for (double& xi : out.values)
    if (xi == 0.0) xi = rng.uniform() * smallest;
  return out;
}

}  // namespace lwf
