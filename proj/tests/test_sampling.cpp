#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lwf/errors.hpp"
#include "lwf/rng.hpp"
#include "lwf/sampling.hpp"

using namespace lwf;

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("rng substreams are deterministic and distinct") {
  Rng a(5), b(5), c = Rng::substream(5, 1);
  for (int i = 0; i < 100; ++i) {
    auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CHECK(substream_seed(1, 2) != substream_seed(2, 1));
  Rng u(3);
  for (int i = 0; i < 10000; ++i) {
    double v = u.uniform();
    CHECK((v > 0.0 && v < 1.0));
    CHECK(u.below(7) < 7);
  }
}

TEST_CASE("rng gamma mean and variance") {
  Rng g(17);
  for (double shape : {0.3, 1.0, 2.5, 10.0}) {
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      double x = g.gamma(shape);
      s += x;
      s2 += x * x;
    }
    double m = s / n, var = s2 / n - m * m;
    CHECK(m == doctest::Approx(shape).epsilon(0.02));
    CHECK(var == doctest::Approx(shape).epsilon(0.05));
  }
}

TEST_CASE("draw is bit reproducible") {
  std::vector<DistSpec> specs{dist::Normal{1, 2},   dist::StudentT{3},         dist::Pareto{1.5},
                              dist::Exponential{2}, dist::Weibull{1.5, 2},     dist::SkewedT{4, 0.7},
                              dist::SkewNormal{4, 2, 3}};
  for (const auto& s : specs) {
    auto a = draw(s, 257, 99);
    auto b = draw(s, 257, 99);
    auto c = draw(s, 257, 100);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(a.label == describe(s));
    CHECK(a.seed == 99u);
  }
}

TEST_CASE("draw rejects bad parameters") {
  CHECK_THROWS_AS(draw(dist::StudentT{0}, 10, 1), ParamError);
  CHECK_THROWS_AS(draw(dist::Pareto{-1}, 10, 1), ParamError);
  CHECK_THROWS_AS(draw(dist::Normal{0, 0}, 10, 1), ParamError);
  CHECK_THROWS_AS(draw(dist::Exponential{0}, 10, 1), ParamError);
  CHECK_THROWS_AS(draw(dist::Weibull{1, -1}, 10, 1), ParamError);
  CHECK_THROWS_AS(draw(dist::SkewedT{4, 0}, 10, 1), ParamError);
  CHECK_THROWS_AS(draw(dist::SkewNormal{0, 0, 1}, 10, 1), ParamError);
  CHECK_THROWS_AS(draw(dist::Normal{}, 0, 1), ParamError);
}

TEST_CASE("student t(5) sample means are small") {
  int small = 0;
  for (std::uint64_t s = 0; s < 100; ++s) small += std::abs(mean(draw(dist::StudentT{5}, 1000, s).values)) < 0.2;
  CHECK(small >= 95);
}

TEST_CASE("student t(5) variance") {
  auto x = draw(dist::StudentT{5}, 100000, 4).values;
  CHECK(sd(x) * sd(x) == doctest::Approx(5.0 / 3.0).epsilon(0.10));
}

TEST_CASE("pareto support and inverse cdf") {
  auto x = draw(dist::Pareto{2.0}, 100000, 8).values;
  CHECK(*std::min_element(x.begin(), x.end()) > 1.0);
  std::sort(x.begin(), x.end());
  double d = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double f = 1.0 - std::pow(x[i], -2.0);
    d = std::max({d, std::abs((i + 1) / n - f), std::abs(i / n - f)});
  }
  CHECK(d < 0.01);
  auto tiny = draw(dist::Pareto{50.0}, 1000, 1).values;
  CHECK(*std::min_element(tiny.begin(), tiny.end()) > 1.0);
}

TEST_CASE("exponential and weibull means") {
  CHECK(mean(draw(dist::Exponential{2.0}, 200000, 3).values) == doctest::Approx(0.5).epsilon(0.01));
  // Weibull mean = scale * Gamma(1 + 1/shape)
  CHECK(mean(draw(dist::Weibull{1.5, 2.0}, 200000, 3).values) ==
        doctest::Approx(2.0 * std::tgamma(1.0 + 1.0 / 1.5)).epsilon(0.01));
}

TEST_CASE("skewed t with gamma 1 matches the symmetric t") {
  std::vector<double> sk, st;
  for (std::uint64_t s = 0; s < 100; ++s) {
    sk.push_back(skewness(draw(dist::SkewedT{4, 1.0}, 2000, s).values));
    st.push_back(skewness(draw(dist::StudentT{4}, 2000, s + 1000).values));
  }
  CHECK(std::abs(median_of(sk)) < 0.15);
  CHECK(std::abs(median_of(sk) - median_of(st)) < 0.2);
}

TEST_CASE("skewed t two-piece probabilities") {
  // P(X > 0) = gamma^2 / (1 + gamma^2)
  for (double g : {0.5, 0.9, 2.0}) {
    auto x = draw(dist::SkewedT{4, g}, 200000, 12).values;
    double pos = static_cast<double>(std::count_if(x.begin(), x.end(), [](double v) { return v > 0; })) / x.size();
    CHECK(pos == doctest::Approx(g * g / (1 + g * g)).epsilon(0.01));
  }
}

TEST_CASE("skewness signs of the skewed families") {
  int neg = 0, pos = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    neg += skewness(draw(dist::SkewedT{4, 0.7}, 5000, s).values) < 0;
    pos += skewness(draw(dist::SkewNormal{4, 2, 3}, 5000, s).values) > 0;
  }
  CHECK(neg == 100);
  CHECK(pos == 100);
}

TEST_CASE("skew normal mean") {
  // E X = xi + omega delta sqrt(2/pi), delta = alpha / sqrt(1 + alpha^2)
  double alpha = 2.5, delta = alpha / std::sqrt(1 + alpha * alpha);
  auto x = draw(dist::SkewNormal{4, 2, alpha}, 200000, 5).values;
  CHECK(mean(x) == doctest::Approx(4 + 2 * delta * std::sqrt(2 / M_PI)).epsilon(0.005));
  double var = 4 * (1 - 2 * delta * delta / M_PI);
  CHECK(sd(x) * sd(x) == doctest::Approx(var).epsilon(0.02));
}

TEST_CASE("skewed t(4, 0.9) sample skewness level") {
  std::vector<double> sk;
  for (std::uint64_t s = 0; s < 100; ++s) sk.push_back(skewness(draw(dist::SkewedT{4, 0.9}, 1000, s).values));
  double m = median_of(sk);
  CHECK(m <= -0.93 + 0.5);
  CHECK(m >= -0.93 - 0.5);
}

TEST_CASE("moments") {
  std::vector<double> sym{-1, 0, 1};
  auto m = moments(sym);
  CHECK(m.mean == 0.0);
  CHECK(m.skewness == 0.0);
  CHECK(m.sd == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(m.excess_kurtosis == doctest::Approx(1.5 - 3.0));

  std::vector<double> flat{1, 1, 1, 1};
  CHECK_THROWS_AS(moments(flat), DegenerateError);

  std::vector<double> x{1, 2, 4, 8, 16};
  double mu = 31.0 / 5;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : x) {
    m2 += std::pow(v - mu, 2) / 5;
    m3 += std::pow(v - mu, 3) / 5;
    m4 += std::pow(v - mu, 4) / 5;
  }
  auto mx = moments(x);
  CHECK(mx.skewness == doctest::Approx(m3 / std::pow(m2, 1.5)));
  CHECK(mx.excess_kurtosis == doctest::Approx(m4 / (m2 * m2) - 3));
}

TEST_CASE("median and mad") {
  std::vector<double> x{5, 1, 3, 2, 4};
  CHECK(median(x) == 3.0);
  CHECK(mad(x) == 1.0);
  std::vector<double> e{4, 1, 3, 2};
  CHECK(median(e) == 2.5);
}

TEST_CASE("harmonic mean") {
  std::vector<double> a{2, 2, 2}, b{1, 4}, c{1, 2, 4}, bad{1, 0};
  CHECK(harmonic_mean(a) == doctest::Approx(2.0));
  CHECK(harmonic_mean(b) == doctest::Approx(1.6));
  CHECK(harmonic_mean(c) == doctest::Approx(12.0 / 7.0));
  CHECK_THROWS_AS(harmonic_mean(bad), DomainError);
}

TEST_CASE("acf") {
  std::vector<double> trend(5000);
  std::iota(trend.begin(), trend.end(), 1.0);
  CHECK(acf(trend, 1).values[0] > 0.99);

  std::vector<double> periodic(3000);
  for (std::size_t i = 0; i < periodic.size(); ++i) periodic[i] = std::sin(2 * M_PI * i / 12.0);
  auto r = acf(periodic, 12);
  CHECK(r.values[11] > 0.99);
  CHECK(r.band == doctest::Approx(1.96 / std::sqrt(3000.0)));

  std::vector<double> flat(10, 3.0);
  CHECK_THROWS_AS(acf(flat, 2), DegenerateError);
  CHECK_THROWS_AS(acf(trend, 5000), RangeError);
}

TEST_CASE("acf of iid normal flags about five percent of lags") {
  double flagged = 0;
  for (std::uint64_t s = 0; s < 100; ++s) flagged += acf(draw(dist::Normal{}, 10000, s).values, 30).flagged();
  CHECK(flagged / (100 * 30) <= 0.07);
}
