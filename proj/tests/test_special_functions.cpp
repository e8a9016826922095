#include "quasicollapse/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

using namespace quasicollapse;

TEST_CASE("oscillator functions")
{
  CHECK(hermite_psi(0, 0.0) == doctest::Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-15));
  CHECK(hermite_psi(0, 0.0) == doctest::Approx(0.7511255).epsilon(1e-7));
  CHECK(hermite_psi(1, 0.0) == 0.0);

  const double x = 1.2;
  const double h3 = 8 * x * x * x - 12 * x;
  const double direct = h3 * std::exp(-x * x / 2) / std::sqrt(8.0 * 6.0 * std::sqrt(std::numbers::pi));
  CHECK(hermite_psi(3, x) == doctest::Approx(direct).epsilon(1e-14));

  CHECK_THROWS_AS(hermite_psi(-1, 0.0), std::out_of_range);
  CHECK_THROWS_AS(hermite_psi(5001, 0.0), std::out_of_range);
  CHECK_THROWS_AS(hermite_psi(2, 40.0), std::out_of_range);
  CHECK(std::isfinite(hermite_psi(5000, 39.9)));
}

TEST_CASE("oscillator orthonormality and nodes")
{
  const int count = 6001;
  const double a = -15.0, b = 15.0, h = (b - a) / (count - 1);
  std::vector<std::vector<double>> table(21, std::vector<double>(count));
  for (int n = 0; n <= 20; ++n)
    for (int i = 0; i < count; ++i) table[n][i] = hermite_psi(n, a + i * h);
  for (int m = 0; m <= 20; ++m) {
    for (int n = m; n <= 20; ++n) {
      double sum = 0.0;
      for (int i = 0; i < count; ++i) sum += (i == 0 || i == count - 1 ? 0.5 : 1.0) * table[m][i] * table[n][i];
      CHECK(std::abs(sum * h - (m == n ? 1.0 : 0.0)) < 1e-8);
    }
    int changes = 0, last = 0;
    for (int i = 0; i < count; ++i) {
      const int sign = (table[m][i] > 0.0) - (table[m][i] < 0.0);
      if (sign == 0) continue;
      if (last != 0 && sign != last) ++changes;
      last = sign;
    }
    CHECK(changes == m);
  }
}

TEST_CASE("gamma function")
{
  CHECK(std::abs(gamma(cplx(5.0, 0.0)) - 24.0) < 1e-12);
  CHECK(std::abs(gamma(cplx(0.5, 0.0)) - std::sqrt(std::numbers::pi)) < 1e-14);
  CHECK(std::abs(gamma(cplx(-0.5, 0.0)) + 2.0 * std::sqrt(std::numbers::pi)) < 1e-13);
  const cplx z(0.3, 1.7);
  CHECK(std::abs(gamma(z + 1.0) - z * gamma(z)) < 1e-13 * std::abs(gamma(z + 1.0)));
  CHECK(rgamma(cplx(-3.0, 0.0)) == cplx(0.0, 0.0));
  CHECK_THROWS_AS(gamma(cplx(0.0, 0.0)), std::domain_error);
}

TEST_CASE("parabolic cylinder closed forms")
{
  const cplx xi(1.0, 1.0);
  CHECK(std::abs(pcf_d(0.0, xi) - std::exp(-xi * xi / 4.0)) < 1e-12);

  for (int k = 0; k <= 30; ++k) {
    const double x = 0.1 * k;
    const double oracle = std::sqrt(std::numbers::pi / 2.0) * std::exp(x * x / 4.0) * std::erfc(x / std::sqrt(2.0));
    CHECK(std::abs(pcf_d(-1.0, x) - oracle) < 1e-8);
  }

  double factorial = 1.0;
  for (int n = 0; n <= 5; ++n) {
    if (n) factorial *= n;
    for (int k = 0; k <= 24; ++k) {
      const double x = -3.0 + 0.25 * k;
      const double h = std::sqrt(factorial * std::sqrt(std::numbers::pi)) * hermite_psi(n, x / std::sqrt(2.0));
      CHECK(std::abs(pcf_d(double(n), x) - h) < 1e-9);
    }
  }
}

TEST_CASE("parabolic cylinder recurrence")
{
  const cplx a(-0.5, 0.3);
  const cplx xi = 2.0 * std::polar(1.0, std::numbers::pi / 4.0);
  const cplx up = pcf_d(a + 1.0, xi), mid = pcf_d(a, xi), down = pcf_d(a - 1.0, xi);
  const double scale = std::max({std::abs(up), std::abs(xi * mid), std::abs(a * down)});
  CHECK(std::abs(up - xi * mid + a * down) < 1e-8 * scale);

  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const cplx order(-3.0 + 0.6 * i, 1.5 - 0.3 * j);
      const cplx arg = std::polar(0.1 + 0.4 * i, 0.3 * j - 1.2);
      const cplx u = pcf_d(order + 1.0, arg), m = pcf_d(order, arg), d = pcf_d(order - 1.0, arg);
      const double s = std::max({std::abs(u), std::abs(arg * m), std::abs(order * d)});
      CHECK(std::abs(u - arg * m + order * d) < 1e-8 * s);
    }
  }
}

TEST_CASE("Weber equation residual")
{
  const double h = 1e-3;
  for (int k = 0; k < 20; ++k) {
    const cplx a(-1.5 + 0.17 * k, 0.4 - 0.05 * k);
    const cplx xi = std::polar(0.3 + 0.2 * k, 0.31 * k);
    const cplx f0 = pcf_d(a, xi);
    const cplx second = (pcf_d(a, xi + h) - 2.0 * f0 + pcf_d(a, xi - h)) / (h * h);
    const cplx residual = second + (a + 0.5 - xi * xi / 4.0) * f0;
    const double scale = std::max(std::abs(second), std::abs((a + 0.5 - xi * xi / 4.0) * f0));
    CHECK(std::abs(residual) < 1e-5 * scale);
  }
}

TEST_CASE("parabolic cylinder envelope")
{
  CHECK_THROWS_AS(pcf_d(0.0, cplx(31.0, 0.0)), std::out_of_range);
  CHECK_THROWS_AS(pcf_d(cplx(51.0, 0.0), 1.0), std::out_of_range);
  CHECK_THROWS_AS(pcf_d(0.5, 25.0), std::range_error);
}

TEST_CASE("parabolic cylinder on the diagonal ray")
{
  CHECK(std::abs(pcf_d_on_ray(0.0, 0.0) - 1.0) < 1e-15);
  for (double s = -6.0; s <= 6.0; s += 0.5) CHECK(std::abs(std::abs(pcf_d_on_ray(0.0, s)) - 1.0) < 1e-14);
  const cplx a(0.0, -0.5);
  CHECK(std::abs(pcf_d_on_ray(a, 1.0) - pcf_d(a, std::sqrt(2.0) * std::polar(1.0, std::numbers::pi / 4.0))) < 1e-14);
  CHECK(std::abs(pcf_d_on_ray(cplx(-1.0, 0.3), -0.7) - pcf_d(cplx(-1.0, 0.3), cplx(-0.7, -0.7))) < 1e-14);
}

TEST_CASE("ray cache under concurrent use")
{
  std::vector<cplx> reference(64);
  for (int i = 0; i < 64; ++i) reference[i] = pcf_d(cplx(0.0, -0.05 * (i % 8)), cplx(1.0, 1.0) * (0.05 * i));
  std::vector<std::vector<cplx>> results(4, std::vector<cplx>(64));
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([t, &results] {
      for (int i = 0; i < 64; ++i) results[t][i] = pcf_d_on_ray(cplx(0.0, -0.05 * (i % 8)), 0.05 * i);
    });
  for (auto& t : pool) t.join();
  for (const auto& r : results)
    for (int i = 0; i < 64; ++i) CHECK(std::abs(r[i] - reference[i]) < 1e-15);
}
