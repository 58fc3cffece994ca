#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lwf/errors.hpp"
#include "lwf/lambertw.hpp"
#include "lwf/sampling.hpp"
#include "lwf/transform.hpp"

using namespace lwf;

TEST_CASE("forward values") {
  std::vector<double> u{-1.3, 0.0, 0.4, 2.0};
  auto same = forward(u, {0.0, 1.0, 0.0});
  CHECK(same == u);

  std::vector<double> zero{0.0};
  CHECK(forward(zero, {0.7, 3.0, 0.4})[0] == 0.7);

  std::vector<double> one{1.0};
  CHECK(forward(one, {0.2, 1.5, 0.1})[0] == doctest::Approx(1.5 * std::exp(0.1) + 0.2));
  CHECK(forward(one, {0.2, 1.5, 0.1})[0] == doctest::Approx(1.8578).epsilon(1e-4));

  CHECK_THROWS_AS(forward(u, {0.0, 0.0, 0.1}), ParamError);
  CHECK_THROWS_AS(forward(u, {0.0, -1.0, 0.1}), ParamError);
  CHECK_THROWS_AS(forward(u, {std::nan(""), 1.0, 0.1}), ParamError);
}

TEST_CASE("inverse round trip in the branch region") {
  std::vector<double> u{0.3, -0.2, 1.1};
  LwfParams p{0.2, 1.5, 0.1};
  auto rep = inverse(forward(u, p), p);
  CHECK(rep.clamped_count() == 0);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(rep.values[i] == doctest::Approx(u[i]).epsilon(1e-12));
}

TEST_CASE("inverse with gamma zero standardises") {
  std::vector<double> y{1.0, 2.0, -4.0};
  auto rep = inverse(y, {1.0, 2.0, 0.0});
  CHECK(rep.values == std::vector<double>{0.0, 0.5, -2.5});
}

TEST_CASE("inverse matches W(gamma z) / gamma") {
  LwfParams p{-0.5, 2.0, 0.3};
  std::vector<double> y{-1.0, 0.0, 3.0, 40.0};
  auto rep = inverse(y, p);
  for (std::size_t i = 0; i < y.size(); ++i) {
    double z = (y[i] - p.mu) / p.sigma;
    CHECK(rep.values[i] == doctest::Approx(lambert_w(p.gamma * z) / p.gamma).epsilon(1e-14));
  }
}

TEST_CASE("inverse beyond the branch point") {
  // gamma z = -0.5 < -1/e
  LwfParams p{0.0, 1.0, 0.5};
  std::vector<double> y{1.0, -1.0, 2.0};
  auto rep = inverse(y, p, InversePolicy::Clamp);
  CHECK(rep.clamped_count() == 1);
  CHECK(rep.clamped_indices == std::vector<std::size_t>{1});
  CHECK(rep.values[1] == doctest::Approx(-1.0 / 0.5));
  CHECK_THROWS_AS(inverse(y, p, InversePolicy::Strict), DomainError);
  CHECK_THROWS_AS(inverse(y, p), DomainError);

  double out = 0.0;
  CHECK_FALSE(inverse_standardized(-1.0, 0.5, out));
  CHECK(out == -2.0);
  CHECK(inverse_standardized(1.0, 0.5, out));
}

TEST_CASE("round trip over gamma grid") {
  auto base = draw(dist::Normal{}, 20000, 21).values;
  for (double g : {-0.3, -0.1, 0.0, 0.1, 0.3, 0.5}) {
    std::vector<double> u;
    for (double v : base) {
      if (g * v >= -1.0 + 1e-6) u.push_back(v);
    }
    LwfParams p{0.3, 1.7, g};
    auto back = inverse(forward(u, p), p);
    CHECK(back.clamped_count() == 0);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(back.values[i] - u[i]));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("forward is increasing on the branch region") {
  for (double g : {-0.5, -0.1, 0.2, 0.6}) {
    std::vector<double> u;
    for (int i = 0; i <= 4000; ++i) {
      double v = -8.0 + 16.0 * i / 4000.0;
      if (g * v > -1.0) u.push_back(v);
    }
    auto y = forward(u, {0.0, 1.0, g});
    CHECK(std::is_sorted(y.begin(), y.end()));
    CHECK(std::adjacent_find(y.begin(), y.end()) == y.end());
  }
}

TEST_CASE("positive gamma gives positive skewness") {
  int positive = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto u = draw(dist::Normal{}, 5000, s).values;
    positive += skewness(forward(u, {0.0, 1.0, 0.1})) > 0;
  }
  CHECK(positive == 100);
}

TEST_CASE("zeros policies") {
  std::vector<double> x{0.5, 0.0, -0.2, 0.0, 1.0};
  auto dropped = apply_zeros_policy(x, ZerosPolicy::Drop, 1);
  CHECK(dropped.zeros == 2);
  CHECK(dropped.values == std::vector<double>{0.5, -0.2, 1.0});

  auto filled = apply_zeros_policy(x, ZerosPolicy::UniformFill, 1);
  CHECK(filled.zeros == 2);
  REQUIRE(filled.values.size() == x.size());
  for (std::size_t i : {1u, 3u}) {
    CHECK(filled.values[i] > 0.0);
    CHECK(filled.values[i] < 0.2);
  }
  CHECK(filled.values[0] == 0.5);
  CHECK(apply_zeros_policy(x, ZerosPolicy::UniformFill, 1).values == filled.values);

  std::vector<double> zeros(4, 0.0);
  CHECK(apply_zeros_policy(zeros, ZerosPolicy::Drop, 1).values.empty());
  CHECK_THROWS_AS(apply_zeros_policy(zeros, ZerosPolicy::UniformFill, 1), DegenerateError);
}
