#pragma once

#include <span>

namespace lwf {

/// Real branches of the Lambert W function.
///
/// Principal is W0 on [-1/e, inf) with values >= -1; NonPrincipal is W-1 on
/// [-1/e, 0) with values <= -1. The two meet at z = -1/e, W = -1.
enum class Branch { Principal, NonPrincipal };

/// Shape parameter u > 0 of G_u(x) = x - u ln x.
class GuParams {
 public:
  explicit GuParams(double u);
  double u() const noexcept { return u_; }

 private:
  double u_;
};

inline constexpr double kInvE = 0.36787944117144232159552377016146087;

/// Solves w e^w = z on the requested branch.
///
/// Residual |w e^w - z| <= 1e-12 * max(1, |z|). Throws DomainError outside the
/// branch domain; z up to 1e-14 below -1/e is taken as the branch point.
double lambert_w(double z, Branch branch = Branch::Principal);

/// x - u ln x for x > 0. Minimised at x = u.
double g_u(double x, const GuParams& params);

/// |-u ln(x exp(-x/u)) - g_u(x)|, i.e. the defect of the identity linking the
/// Lambert W x F variable with gamma = -1/u to G_u. Both sides are evaluated
/// in long double.
double g_u_relation_check(double x, const GuParams& params);

/// sum_i [g_u(theta y_i) - g_u(u)] for positive y and theta. Always >= 0.
double i_divergence(std::span<const double> y, double theta, const GuParams& params);

}  // namespace lwf
