#include "quasicollapse/eigensolver.hpp"
#include "quasicollapse/analytic.hpp"
#include "quasicollapse/fock.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

using namespace quasicollapse;

namespace {

Eigen::VectorXd eigenvalues(const TruncatedOperator& op)
{
  return eig_hermitian(op.dense(), false).eigenvalues;
}

double nearest(const Eigen::VectorXd& values, double target)
{
  return (values.array() - target).abs().minCoeff();
}

}  // namespace

TEST_CASE("basis ordering")
{
  const BasisSpec basis(3);
  CHECK(basis.dim() == 8);
  CHECK(BasisSpec::index(2, Spin::Excited) == 5);
  CHECK(BasisSpec::fock_level(5) == 2);
  CHECK(BasisSpec::spin(5) == Spin::Excited);
  CHECK(BasisSpec::spin(4) == Spin::Ground);
  CHECK_THROWS_AS(BasisSpec(0), std::invalid_argument);
}

TEST_CASE("undriven H0 at the smallest truncation")
{
  const auto values = eigenvalues(build_h0(ModelParams(1.0, 0.0), BasisSpec(1)));
  REQUIRE(values.size() == 4);
  CHECK(values(0) == doctest::Approx(-1.0));
  CHECK(std::abs(values(1)) < 1e-15);
  CHECK(std::abs(values(2)) < 1e-15);
  CHECK(values(3) == doctest::Approx(1.0));
}

TEST_CASE("drive-only chain")
{
  const auto values = eigenvalues(jcr_hamiltonian(0.0, 1.0, 0.0, BasisSpec(1)));
  CHECK(values(0) == doctest::Approx(-1.0));
  CHECK(values(1) == doctest::Approx(-1.0));
  CHECK(values(2) == doctest::Approx(1.0));
  CHECK(values(3) == doctest::Approx(1.0));
}

TEST_CASE("H0 matrix elements")
{
  const double lambda = 0.7, epsilon = 0.3;
  const BasisSpec basis(10);
  const Eigen::MatrixXcd h = build_h0(ModelParams(lambda, epsilon), basis).dense();
  for (int n = 1; n <= 10; ++n) {
    const cplx jc = h(BasisSpec::index(n - 1, Spin::Excited), BasisSpec::index(n, Spin::Ground));
    CHECK(std::abs(jc - cplx(0.0, lambda * std::sqrt(double(n)))) < 1e-15);
  }
  for (int n = 0; n < 10; ++n)
    for (Spin s : {Spin::Ground, Spin::Excited})
      CHECK(std::abs(h(BasisSpec::index(n + 1, s), BasisSpec::index(n, s)) - epsilon * std::sqrt(n + 1.0)) < 1e-15);
}

TEST_CASE("H0 spectrum contains the undriven ladder")
{
  const auto values = eigenvalues(build_h0(ModelParams(1.0, 0.0), BasisSpec(60)));
  for (int n = 1; n <= 40; ++n) {
    CHECK(nearest(values, std::sqrt(double(n))) < 1e-10);
    CHECK(nearest(values, -std::sqrt(double(n))) < 1e-10);
  }
}

TEST_CASE("hermiticity and bandwidth")
{
  const BasisSpec basis(40);
  const TruncatedOperator h0 = build_h0(ModelParams(1.0, 0.3), basis);
  const TruncatedOperator he = build_h_eta(ModelParams(1.0, 0.3, 0.5), basis);
  for (const auto* op : {&h0, &he}) {
    CHECK(op->hermitian());
    CHECK(internal::hermiticity_defect(op->dense()) < 1e-14);
  }
  CHECK(h0.half_bandwidth() == 2);
  CHECK(he.half_bandwidth() == 3);

  Eigen::MatrixXcd broken = h0.dense();
  broken(0, 3) += 1e-10;
  CHECK_THROWS_AS(TruncatedOperator(basis, broken.sparseView(), true), std::invalid_argument);
}

TEST_CASE("H_eta reduces to H0 at eta = 0")
{
  const BasisSpec basis(20);
  const ModelParams p(1.3, 0.4);
  CHECK((build_h_eta(p, basis).dense() - build_h0(p, basis).dense()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("H_eta is isospectral with H0")
{
  const auto values = eig_banded_symmetric(
      to_real_band(gauge_to_real(build_h_eta(ModelParams(1.0, 0.0, 0.6), BasisSpec(200))))).eigenvalues;
  double lowest_positive = 1e9;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values(i) > 1e-6) lowest_positive = std::min(lowest_positive, values(i));
  CHECK(lowest_positive == doctest::Approx(1.0).epsilon(1e-8));

  const ModelParams driven(1.0, 0.2, 0.6);
  const auto cs = converged_spectrum(
      [&](int n) { return to_real_band(gauge_to_real(build_h_eta(driven, BasisSpec(n)))); }, 6);
  REQUIRE(cs.certificate.converged);
  CHECK(nearest(cs.certificate.levels, quasienergy_rabi(0, Sign::Plus, driven)) < 1e-8);
  CHECK(nearest(cs.certificate.levels, quasienergy_rabi(1, Sign::Minus, driven)) < 1e-8);
}

TEST_CASE("ladder operators")
{
  const BasisSpec basis(12);
  const Eigen::MatrixXcd a = annihilation(basis).dense();
  const Eigen::MatrixXcd ad = creation(basis).dense();
  const Eigen::MatrixXcd comm = a * ad - ad * a;
  for (Eigen::Index i = 0; i < basis.dim(); ++i) {
    for (Eigen::Index j = 0; j < basis.dim(); ++j) {
      if (BasisSpec::fock_level(i) == basis.n_max || BasisSpec::fock_level(j) == basis.n_max) continue;
      CHECK(std::abs(comm(i, j) - (i == j ? 1.0 : 0.0)) < 1e-13);
    }
  }
  const Eigen::MatrixXcd sp = sigma_plus(basis).dense();
  CHECK(sp(BasisSpec::index(3, Spin::Excited), BasisSpec::index(3, Spin::Ground)) == cplx(1.0, 0.0));
  CHECK((sigma_minus(basis).dense() - sp.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("squeeze operator")
{
  SUBCASE("identity at z = 0")
  {
    const Eigen::MatrixXcd s = build_squeeze(0.0, BasisSpec(10)).dense();
    CHECK((s - Eigen::MatrixXcd::Identity(22, 22)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("vacuum element")
  {
    const Eigen::MatrixXd s = squeeze_fock(std::log(2.0), 200);
    CHECK(s(0, 0) == doctest::Approx(std::sqrt(0.8)).epsilon(1e-12));
  }
  SUBCASE("group inverse on the interior block")
  {
    const int n = 120;
    const Eigen::MatrixXd prod = squeeze_fock(0.7, n) * squeeze_fock(-0.7, n);
    CHECK((prod.topLeftCorner(n / 2, n / 2) - Eigen::MatrixXd::Identity(n / 2, n / 2)).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("matches an independent matrix exponential")
  {
    const int n = 60;
    Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int k = 2; k <= n; ++k) {
      generator(k - 2, k) = 0.5 * 0.9 * std::sqrt(double(k) * (k - 1));
      generator(k, k - 2) = -generator(k - 2, k);
    }
    const Eigen::MatrixXd oracle = generator.exp();
    CHECK((squeeze_fock(0.9, n) - oracle).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((expm_scaling_squaring(generator) - oracle).cwiseAbs().maxCoeff() < 1e-11);
  }
  SUBCASE("unitarity defect stays at rounding level under truncation")
  {
    for (int n : {32, 64, 128, 256}) {
      const Eigen::MatrixXd s = squeeze_fock(0.55, n);
      const int half = n / 2;
      const double defect =
          ((s.transpose() * s).topLeftCorner(half, half) - Eigen::MatrixXd::Identity(half, half)).cwiseAbs().maxCoeff();
      CHECK(defect < 1e-12);
    }
  }
  SUBCASE("range guard")
  {
    CHECK_THROWS_AS(build_squeeze(5.0, BasisSpec(4)), std::domain_error);
  }
}

TEST_CASE("squeeze identity")
{
  SUBCASE("eta = 0 is exact")
  {
    CHECK(verify_squeeze_identity(ModelParams(1.0, 0.3), BasisSpec(64), 0.5).residual < 1e-14);
  }
  SUBCASE("pinned sign converges on the interior block")
  {
    const ModelParams p(1.0, 0.1, 0.5);
    double previous = 1e9;
    for (int n : {64, 128, 256}) {
      const auto r = verify_squeeze_identity(p, BasisSpec(n), 0.25);
      CHECK(r.relative() < previous);
      previous = r.relative();
    }
    CHECK(previous < 1e-6);
  }
  SUBCASE("strong squeezing needs a smaller interior")
  {
    const ModelParams p(1.0, 0.1, 0.9);
    double previous = 1e9;
    for (int n : {128, 256, 512}) {
      const double r = verify_squeeze_identity(p, BasisSpec(n), 0.04).relative();
      CHECK(r < previous);
      previous = r;
    }
    CHECK(previous < 1e-4);
  }
  SUBCASE("flipped sign does not converge")
  {
    const auto r = verify_squeeze_identity(ModelParams(1.0, 0.1, 0.5), BasisSpec(128), 0.25, SqueezeSign::Flipped);
    CHECK(r.relative() > 1e-2);
  }
}

TEST_CASE("gauge to real")
{
  const TruncatedOperator h = build_h0(ModelParams(1.0, 0.0), BasisSpec(1));
  const TruncatedOperator g = gauge_to_real(h);
  const Eigen::MatrixXcd d = g.dense();
  CHECK(d(1, 2) == cplx(1.0, 0.0));
  CHECK(d(2, 1) == cplx(1.0, 0.0));
  CHECK(g.max_imag() < 1e-15);

  const TruncatedOperator big = build_h0(ModelParams(1.0, 0.3), BasisSpec(80));
  const auto a = eigenvalues(big);
  const auto b = eig_real_symmetric(gauge_to_real(big).dense().real(), false).eigenvalues;
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff());

  const TruncatedOperator anonymous(std::nullopt, h.matrix(), true);
  CHECK_THROWS_AS(gauge_to_real(anonymous), std::invalid_argument);
}

TEST_CASE("real band copy")
{
  const TruncatedOperator g = gauge_to_real(build_h_eta(ModelParams(1.0, 0.2, 0.4), BasisSpec(15)));
  const BandMatrix<double> band = to_real_band(g);
  CHECK(band.bandwidth() == 3);
  CHECK((band.to_dense() - g.dense().real()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(to_real_band(build_h0(ModelParams(1.0, 0.2), BasisSpec(4))), std::invalid_argument);
}

TEST_CASE("matrix dump round trip")
{
  const TruncatedOperator h = build_h0(ModelParams(1.0, 0.3), BasisSpec(5));
  std::stringstream buffer;
  write_matrix(buffer, h);
  std::string header;
  std::getline(buffer, header);
  CHECK(header == "12 5 ordering=interleaved");
  buffer.seekg(0);
  const TruncatedOperator back = read_matrix(buffer, true);
  REQUIRE(back.basis().has_value());
  CHECK(back.basis()->n_max == 5);
  CHECK((back.dense() - h.dense()).cwiseAbs().maxCoeff() == 0.0);

  std::istringstream bad("4 1 ordering=blocked\n");
  CHECK_THROWS_AS(read_matrix(bad, true), std::invalid_argument);
}
