#include "quasicollapse/analytic.hpp"
#include "quasicollapse/eigensolver.hpp"
#include "quasicollapse/fock.hpp"
#include "quasicollapse/model.hpp"
#include "quasicollapse/special_functions.hpp"

#include "support/generators.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace quasicollapse;

namespace {

constexpr int kCases = 50;

// Characteristic polynomial coefficients c_0..c_{n-1} of det(tI - A) = t^n + sum c_k t^k.
Eigen::VectorXd faddeev_leverrier(const Eigen::MatrixXd& a)
{
  const Eigen::Index n = a.rows();
  Eigen::VectorXd c(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  double prev = 1.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + prev * Eigen::MatrixXd::Identity(n, n);
    prev = -(a * m).trace() / static_cast<double>(k);
    c(n - k) = prev;
  }
  return c;
}

Eigen::VectorXd companion_roots(const Eigen::VectorXd& c)
{
  const Eigen::Index n = c.size();
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  comp.col(n - 1) = -c;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  Eigen::VectorXd roots = es.eigenvalues().real();
  std::sort(roots.data(), roots.data() + n);
  return roots;
}

BandMatrix<double> random_band(testgen::Rng& rng, int n, int bw)
{
  BandMatrix<double> b(n, bw);
  for (int j = 0; j < n; ++j)
    for (int d = 0; d <= bw && j + d < n; ++d) b.lower(j + d, j) = rng.uniform(-1.0, 1.0);
  return b;
}

}  // namespace

TEST_CASE("parameter algebra invariants")
{
  testgen::Rng rng(101);
  for (int t = 0; t < kCases; ++t) {
    const double lambda = rng.uniform(0.1, 5.0), eps = rng.uniform(0.0, 3.0), eta = rng.uniform(0.0, 0.95);
    const ModelParams p(lambda, eps, eta);
    const ModelParams q = ModelParams::from_scaled_drive(lambda, p.epsilon_prime(), eta);
    CHECK(q.epsilon() == doctest::Approx(eps).epsilon(1e-13));
    const double z = squeeze_parameter(p);
    CHECK(std::cosh(z) == doctest::Approx(p.lambda_prime() / lambda).epsilon(1e-13));
    CHECK(std::sinh(z) == doctest::Approx(eta * p.lambda_prime() / lambda).epsilon(1e-12));
    CHECK(p.epsilon_prime() / critical_drive(p) == doctest::Approx(p.drive_ratio()).epsilon(1e-13));
    const Regime r = classify_regime(p);
    CHECK((r == Regime::Discrete) == (p.drive_ratio() < 1.0 - 1e-12));

    const ModelParams reduced(lambda, eps);
    const ModelParams back = fields_to_optics(optics_to_fields(reduced));
    CHECK(back.lambda() == doctest::Approx(lambda).epsilon(1e-13));
    CHECK(back.epsilon() == doctest::Approx(eps).epsilon(1e-13));
    CHECK(classify_regime(optics_to_fields(reduced)) == classify_regime(reduced));
  }
}

TEST_CASE("dense solver invariants on random matrices")
{
  testgen::Rng rng(202);
  for (int t = 0; t < kCases; ++t) {
    const int n = rng.integer(1, 40);
    const Eigen::MatrixXcd h = rng.hermitian(n, rng.uniform(0.1, 10.0));
    const auto s = eig_hermitian(h, true);
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff()) * n;
    CHECK(std::abs(s.eigenvalues.sum() - h.trace().real()) < 1e-12 * scale);
    CHECK((s.eigenvectors.adjoint() * s.eigenvectors - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <
          1e-12 * n);
    CHECK((h * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff() < 1e-12 * scale);
    for (int i = 1; i < n; ++i) CHECK(s.eigenvalues(i - 1) <= s.eigenvalues(i));
  }
}

TEST_CASE("band solver agrees with the dense solver")
{
  testgen::Rng rng(303);
  for (int t = 0; t < kCases; ++t) {
    const int n = rng.integer(2, 60), bw = rng.integer(0, 5);
    const auto band = random_band(rng, n, bw);
    const auto a = eig_banded_symmetric(band).eigenvalues;
    const auto b = eig_real_symmetric(band.to_dense(), false).eigenvalues;
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * n);
    CHECK(std::abs(a.sum() - band.to_dense().trace()) < 1e-12 * n);
  }
}

TEST_CASE("companion matrix oracle")
{
  testgen::Rng rng(404);
  for (int t = 0; t < kCases; ++t) {
    const int n = rng.integer(1, 8);
    const Eigen::MatrixXd a = rng.symmetric(n);
    const Eigen::VectorXd ours = eig_real_symmetric(a, false).eigenvalues;
    const Eigen::VectorXd oracle = companion_roots(faddeev_leverrier(a));
    // Close root pairs lose half the digits through the polynomial.
    CHECK((ours - oracle).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("truncated Hamiltonians are real symmetric after gauging")
{
  testgen::Rng rng(505);
  for (int t = 0; t < 20; ++t) {
    const ModelParams p(rng.uniform(0.2, 3.0), rng.uniform(0.0, 2.0), rng.uniform(0.0, 0.9));
    const BasisSpec basis(rng.integer(4, 40));
    const auto h = build_h_eta(p, basis);
    CHECK((h.dense() - h.dense().adjoint()).cwiseAbs().maxCoeff() == 0.0);
    const auto g = gauge_to_real(h);
    CHECK(g.max_imag() == 0.0);
    const auto a = eig_banded_symmetric(to_real_band(g)).eigenvalues;
    const auto b = eig_hermitian(h.dense(), false).eigenvalues;
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-11 * basis.dim());
  }
}

TEST_CASE("squeeze matrices are orthogonal")
{
  testgen::Rng rng(606);
  for (int t = 0; t < 10; ++t) {
    const int n_max = rng.integer(4, 60);
    const Eigen::MatrixXd s = squeeze_fock(rng.uniform(-1.5, 1.5), n_max);
    CHECK((s.transpose() * s - Eigen::MatrixXd::Identity(n_max + 1, n_max + 1)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("Dirac energy identities on random fields")
{
  testgen::Rng rng(707);
  for (int t = 0; t < kCases; ++t) {
    const double B = rng.uniform(0.1, 4.0);
    const FieldConfig f{rng.uniform(0.0, 0.99) * B, B, rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const int n = rng.integer(0, 20);
    for (Sign s : {Sign::Plus, Sign::Minus})
      CHECK(dirac_energy_via_boost(n, s, f) == doctest::Approx(dirac_energy_discrete(n, s, f)).epsilon(1e-12));
    CHECK(dirac_energy_discrete(n, Sign::Plus, f) + dirac_energy_discrete(n, Sign::Minus, f) ==
          doctest::Approx(2.0 * f.beta_B() * f.k2).epsilon(1e-12));
  }
}

TEST_CASE("sampled spinors solve the eigen-equation")
{
  testgen::Rng rng(808);
  for (int t = 0; t < 12; ++t) {
    const double B = rng.uniform(0.5, 2.0);
    const FieldConfig f{rng.uniform(0.0, 0.8) * B, B, rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    const int n = rng.integer(0, 3);
    const Sign sign = rng.uniform() < 0.5 ? Sign::Plus : Sign::Minus;
    const auto s = spinor_discrete(n, Branch::Minus, sign, f, {-14.0, 14.0, 5601});
    INFO("E=", f.E, " B=", f.B, " k2=", f.k2, " k3=", f.k3, " n=", n);
    CHECK(eigen_residual(s, f) < 1e-6);
  }
}

TEST_CASE("polarization lies on the Bloch sphere")
{
  testgen::Rng rng(909);
  for (int t = 0; t < kCases; ++t) {
    const double lambda = rng.uniform(0.2, 3.0);
    double ratio = rng.uniform(0.0, 3.0);
    if (std::abs(ratio - 1.0) < 1e-6) ratio = 0.5;
    const ModelParams p(lambda, 0.5 * ratio * lambda);
    for (Branch b : {Branch::Minus, Branch::Plus}) {
      const auto pol = polarization(p, b);
      const double norm2 = std::norm(pol.sigma_minus_expectation) + pol.bloch_vector[2] * pol.bloch_vector[2];
      CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("parabolic cylinder recurrence on random arguments")
{
  testgen::Rng rng(1001);
  for (int t = 0; t < kCases; ++t) {
    const cplx a(rng.uniform(-3.0, 3.0), rng.uniform(-2.0, 2.0));
    const cplx xi(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
    const cplx lhs = pcf_d(a + 1.0, xi) - xi * pcf_d(a, xi) + a * pcf_d(a - 1.0, xi);
    const double scale = std::abs(pcf_d(a + 1.0, xi)) + std::abs(xi * pcf_d(a, xi)) + std::abs(a * pcf_d(a - 1.0, xi));
    CHECK(std::abs(lhs) < 1e-10 * std::max(scale, 1.0));
  }
}

TEST_CASE("Hermite functions are orthonormal")
{
  testgen::Rng rng(1102);
  const double h = 0.01;
  for (int t = 0; t < 20; ++t) {
    const int m = rng.integer(0, 30), n = rng.integer(0, 30);
    double sum = 0.0;
    for (double x = -15.0; x <= 15.0; x += h) sum += hermite_psi(m, x) * hermite_psi(n, x) * h;
    CHECK(std::abs(sum - (m == n ? 1.0 : 0.0)) < 1e-10);
  }
}
