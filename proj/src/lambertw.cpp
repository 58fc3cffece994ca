#include "lwf/lambertw.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lwf/errors.hpp"

namespace lwf {

namespace {

constexpr double kBranchSlack = 1e-14;
constexpr int kMaxHalley = 60;

// W around the branch point as a series in p = +-sqrt(2(ez + 1)).
// Coefficients of W = -1 + p - p^2/3 + 11/72 p^3 - ... (Corless et al.).
double branch_point_series(double p) {
  static constexpr double c[] = {
      -1.0,
      1.0,
      -1.0 / 3.0,
      11.0 / 72.0,
      -43.0 / 540.0,
      769.0 / 17280.0,
      -221.0 / 8505.0,
      680863.0 / 43545600.0,
      -1963.0 / 204120.0,
      226287557.0 / 37623398400.0,
      -14797.0 / 3920805.0,
  };
  double w = 0.0;
  for (int i = 10; i >= 0; --i) w = w * p + c[i];
  return w;
}

double halley(double z, double w) {
  for (int it = 0; it < kMaxHalley; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    if (f == 0.0) break;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
  }
  return w;
}

double principal(double z) {
  const double q = z + kInvE;  // distance to the branch point
  if (q <= 0.0) return -1.0;
  if (z == 0.0) return 0.0;
  const double p = std::sqrt(2.0 * std::exp(1.0) * q);
  if (p < 1e-3) return branch_point_series(p);

  double w0;
  if (p < 0.5) {
    w0 = branch_point_series(p);
  } else if (std::abs(z) < 0.3) {
    w0 = z * (1.0 - z + 1.5 * z * z);
  } else if (z < 3.0) {
    w0 = std::log1p(z) * (1.0 - std::log1p(std::log1p(z)) / (2.0 + std::log1p(z)));
  } else {
    const double l1 = std::log(z);
    const double l2 = std::log(l1);
    w0 = l1 - l2 + l2 / l1;
  }
  return halley(z, w0);
}

double non_principal(double z) {
  const double q = z + kInvE;
  if (q <= 0.0) return -1.0;
  const double p = -std::sqrt(2.0 * std::exp(1.0) * q);
  if (p > -1e-3) return branch_point_series(p);

  double w0;
  if (p > -0.6) {
    w0 = branch_point_series(p);
  } else {
    // Asymptotic form as z -> 0-.
    const double l1 = std::log(-z);
    const double l2 = std::log(-l1);
    w0 = l1 - l2 + l2 / l1;
  }
  return halley(z, w0);
}

}  // namespace

GuParams::GuParams(double u) : u_(u) {
  if (!(u > 0.0) || !std::isfinite(u)) throw ParamError("G_u shape u must be positive and finite");
}

double lambert_w(double z, Branch branch) {
  if (std::isnan(z)) throw DomainError("lambert_w: z is NaN");
  if (z < -kInvE) {
    if (z < -kInvE - kBranchSlack) {
      throw DomainError("lambert_w: z = " + std::to_string(z) + " is below the branch point -1/e");
    }
    return -1.0;
  }
  if (branch == Branch::Principal) {
    if (std::isinf(z)) return z;
    return principal(z);
  }
  if (z >= 0.0) throw DomainError("lambert_w: non-principal branch requires z < 0");
  return non_principal(z);
}

double g_u(double x, const GuParams& params) {
  if (!(x > 0.0)) throw DomainError("g_u: x must be positive");
  return x - params.u() * std::log(x);
}

double g_u_relation_check(double x, const GuParams& params) {
  if (!(x > 0.0)) throw DomainError("g_u_relation_check: x must be positive");
  const long double u = params.u();
  const long double lx = std::log(static_cast<long double>(x));
  // ln(x exp(-x/u)) expanded so that tiny x or large x/u do not underflow.
  const long double lhs = -u * (lx - x / u);
  return static_cast<double>(std::abs(lhs - (x - u * lx)));
}

double i_divergence(std::span<const double> y, double theta, const GuParams& params) {
  if (!(theta > 0.0)) throw DomainError("i_divergence: theta must be positive");
  const double floor_value = g_u(params.u(), params);
  double total = 0.0;
  for (double yi : y) {
    if (!(yi > 0.0)) throw DomainError("i_divergence: observations must be positive");
    total += g_u(theta * yi, params) - floor_value;
  }
  return total;
}

}  // namespace lwf
