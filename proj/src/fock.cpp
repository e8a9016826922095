#include "quasicollapse/fock.hpp"

#include "quasicollapse/format.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace quasicollapse {

namespace {

using Triplet = Eigen::Triplet<cplx>;

SparseMatrixC from_triplets(Eigen::Index dim, const std::vector<Triplet>& triplets)
{
  SparseMatrixC m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(cplx(0.0, 0.0));
  m.makeCompressed();
  return m;
}

constexpr cplx kI(0.0, 1.0);

}  // namespace

BasisSpec::BasisSpec(int n_max_) : n_max(n_max_)
{
  if (n_max_ < 1) throw std::invalid_argument("BasisSpec: n_max must be >= 1");
}

TruncatedOperator::TruncatedOperator(std::optional<BasisSpec> basis, SparseMatrixC matrix, bool hermitian)
    : basis_(basis), matrix_(std::move(matrix)), hermitian_(hermitian)
{
  if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("TruncatedOperator: matrix not square");
  if (basis_ && basis_->dim() != matrix_.rows())
    throw std::invalid_argument("TruncatedOperator: dimension does not match the basis");
  if (hermitian_) {
    const SparseMatrixC defect = matrix_ - SparseMatrixC(matrix_.adjoint());
    double worst = 0.0;
    for (int k = 0; k < defect.outerSize(); ++k)
      for (SparseMatrixC::InnerIterator it(defect, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    if (worst >= 1e-14) throw std::invalid_argument("TruncatedOperator: hermitian tag on a non-Hermitian matrix");
  }
}

Eigen::Index TruncatedOperator::half_bandwidth() const
{
  Eigen::Index width = 0;
  for (int k = 0; k < matrix_.outerSize(); ++k)
    for (SparseMatrixC::InnerIterator it(matrix_, k); it; ++it)
      if (it.value() != cplx(0.0, 0.0)) width = std::max<Eigen::Index>(width, std::abs(it.row() - it.col()));
  return width;
}

double TruncatedOperator::max_abs() const
{
  double m = 0.0;
  for (int k = 0; k < matrix_.outerSize(); ++k)
    for (SparseMatrixC::InnerIterator it(matrix_, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double TruncatedOperator::max_imag() const
{
  double m = 0.0;
  for (int k = 0; k < matrix_.outerSize(); ++k)
    for (SparseMatrixC::InnerIterator it(matrix_, k); it; ++it) m = std::max(m, std::abs(it.value().imag()));
  return m;
}

TruncatedOperator annihilation(const BasisSpec& basis)
{
  std::vector<Triplet> t;
  for (int n = 1; n <= basis.n_max; ++n)
    for (Spin s : {Spin::Ground, Spin::Excited})
      t.emplace_back(BasisSpec::index(n - 1, s), BasisSpec::index(n, s), std::sqrt(double(n)));
  return {basis, from_triplets(basis.dim(), t), false};
}

TruncatedOperator creation(const BasisSpec& basis)
{
  return {basis, SparseMatrixC(annihilation(basis).matrix().adjoint()), false};
}

TruncatedOperator sigma_plus(const BasisSpec& basis)
{
  std::vector<Triplet> t;
  for (int n = 0; n <= basis.n_max; ++n)
    t.emplace_back(BasisSpec::index(n, Spin::Excited), BasisSpec::index(n, Spin::Ground), 1.0);
  return {basis, from_triplets(basis.dim(), t), false};
}

TruncatedOperator sigma_minus(const BasisSpec& basis)
{
  return {basis, SparseMatrixC(sigma_plus(basis).matrix().adjoint()), false};
}

TruncatedOperator jcr_hamiltonian(double coupling, double drive, double eta, const BasisSpec& basis)
{
  std::vector<Triplet> t;
  auto add_pair = [&t](Eigen::Index row, Eigen::Index col, cplx value) {
    if (value == cplx(0.0, 0.0)) return;
    t.emplace_back(row, col, value);
    t.emplace_back(col, row, std::conj(value));
  };
  const int top = basis.n_max;
  for (int n = 0; n <= top; ++n) {
    // i c a s+ : |n,g> -> sqrt(n) |n-1,e>
    if (n >= 1)
      add_pair(BasisSpec::index(n - 1, Spin::Excited), BasisSpec::index(n, Spin::Ground),
               kI * coupling * std::sqrt(double(n)));
    if (n + 1 <= top) {
      // i c eta a^dag s+ : |n,g> -> sqrt(n+1) |n+1,e>
      add_pair(BasisSpec::index(n + 1, Spin::Excited), BasisSpec::index(n, Spin::Ground),
               kI * coupling * eta * std::sqrt(double(n + 1)));
      for (Spin s : {Spin::Ground, Spin::Excited})
        add_pair(BasisSpec::index(n + 1, s), BasisSpec::index(n, s), drive * std::sqrt(double(n + 1)));
    }
  }
  return {basis, from_triplets(basis.dim(), t), true};
}

TruncatedOperator build_h0(const ModelParams& params, const BasisSpec& basis)
{
  return jcr_hamiltonian(params.lambda(), params.epsilon(), 0.0, basis);
}

TruncatedOperator build_h_eta(const ModelParams& params, const BasisSpec& basis)
{
  return jcr_hamiltonian(params.lambda_prime(), params.epsilon_prime(), params.eta(), basis);
}

Eigen::MatrixXd expm_scaling_squaring(const Eigen::MatrixXd& generator)
{
  if (generator.rows() != generator.cols()) throw std::invalid_argument("expm: matrix not square");
  const Eigen::Index n = generator.rows();
  const double norm = generator.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd scaled = generator / std::ldexp(1.0, squarings);

  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = (term * scaled) / double(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Eigen::MatrixXd squeeze_fock(double z, int n_max, SqueezeSign sign)
{
  if (!(std::abs(z) < kMaxSqueeze)) throw std::domain_error("squeeze: |z| must be below 5");
  const Eigen::Index levels = n_max + 1;
  // (z/2)(a^2 - a^dag^2): a^2 has (n-2, n) = sqrt(n(n-1))
  const double half = (sign == SqueezeSign::Pinned ? 0.5 : -0.5) * z;
  Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(levels, levels);
  for (Eigen::Index n = 2; n < levels; ++n) {
    const double amp = std::sqrt(double(n) * double(n - 1));
    generator(n - 2, n) = half * amp;
    generator(n, n - 2) = -half * amp;
  }
  return expm_scaling_squaring(generator);
}

namespace {

// rows [0, rows) of S (x) 1 in the interleaved ordering
Eigen::MatrixXd spin_extended_rows(const Eigen::MatrixXd& fock, Eigen::Index rows)
{
  const Eigen::Index dim = 2 * fock.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, dim);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index n = r / 2, s = r % 2;
    for (Eigen::Index m = 0; m < fock.cols(); ++m) out(r, 2 * m + s) = fock(n, m);
  }
  return out;
}

}  // namespace

TruncatedOperator build_squeeze(double z, const BasisSpec& basis, SqueezeSign sign)
{
  const Eigen::MatrixXd full = spin_extended_rows(squeeze_fock(z, basis.n_max, sign), basis.dim());
  SparseMatrixC m = full.cast<cplx>().sparseView();
  m.makeCompressed();
  return {basis, std::move(m), false};
}

SqueezeResidual verify_squeeze_identity(const ModelParams& params, const BasisSpec& basis,
                                        double interior_fraction, SqueezeSign sign)
{
  if (!(interior_fraction > 0.0 && interior_fraction <= 1.0))
    throw std::invalid_argument("verify_squeeze_identity: interior fraction must lie in (0, 1]");
  const double z = squeeze_parameter(params);

  SqueezeResidual report;
  report.interior_levels = static_cast<int>(std::floor(interior_fraction * basis.n_max));
  if (report.interior_levels < 1) report.interior_levels = 1;
  const Eigen::Index rows = 2 * static_cast<Eigen::Index>(report.interior_levels);

  const Eigen::MatrixXcd s_rows = spin_extended_rows(squeeze_fock(z, basis.n_max, sign), rows).cast<cplx>();
  const TruncatedOperator h0 = build_h0(params, basis);
  const TruncatedOperator h_eta = build_h_eta(params, basis);

  const Eigen::MatrixXcd h0_st = h0.matrix() * s_rows.transpose();
  const Eigen::MatrixXcd conjugated = s_rows * h0_st;
  const Eigen::MatrixXcd target = h_eta.dense().topLeftCorner(rows, rows);

  report.residual = (conjugated - target).cwiseAbs().maxCoeff();
  report.h_eta_max = h_eta.max_abs();
  return report;
}

TruncatedOperator gauge_to_real(const TruncatedOperator& op)
{
  if (!op.basis()) throw std::invalid_argument("gauge_to_real: operator carries no interleaved basis");
  SparseMatrixC m = op.matrix();
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrixC::InnerIterator it(m, k); it; ++it) {
      const bool row_e = BasisSpec::spin(it.row()) == Spin::Excited;
      const bool col_e = BasisSpec::spin(it.col()) == Spin::Excited;
      // conj(u_row) u_col with u = 1 (ground), i (excited)
      cplx phase(1.0, 0.0);
      if (row_e && !col_e) phase = -kI;
      if (!row_e && col_e) phase = kI;
      it.valueRef() *= phase;
    }
  }
  TruncatedOperator gauged(op.basis(), std::move(m), op.hermitian());
  if (gauged.max_imag() > 1e-15)
    throw std::invalid_argument("gauge_to_real: operator does not become real under the spin gauge");
  return gauged;
}

BandMatrix<double> to_real_band(const TruncatedOperator& op)
{
  if (op.max_imag() > 1e-15) throw std::invalid_argument("to_real_band: operator has imaginary entries");
  BandMatrix<double> band(op.dim(), op.half_bandwidth());
  const SparseMatrixC& m = op.matrix();
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrixC::InnerIterator it(m, k); it; ++it)
      if (it.row() >= it.col()) band.lower(it.row(), it.col()) = it.value().real();
  return band;
}

void write_matrix(std::ostream& out, const TruncatedOperator& op)
{
  const int n_max = op.basis() ? op.basis()->n_max : static_cast<int>(op.dim() / 2 - 1);
  out << op.dim() << ' ' << n_max << " ordering=interleaved\n";
  const Eigen::MatrixXcd dense = op.dense();
  for (Eigen::Index r = 0; r < dense.rows(); ++r) {
    for (Eigen::Index c = 0; c < dense.cols(); ++c) {
      if (c) out << ' ';
      out << format_double(dense(r, c).real()) << ' ' << format_double(dense(r, c).imag());
    }
    out << '\n';
  }
}

TruncatedOperator read_matrix(std::istream& in, bool hermitian)
{
  Eigen::Index dim = 0;
  int n_max = 0;
  std::string ordering;
  if (!(in >> dim >> n_max >> ordering) || ordering != "ordering=interleaved")
    throw std::invalid_argument("read_matrix: bad header");
  std::vector<Triplet> t;
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) throw std::invalid_argument("read_matrix: truncated body");
      if (re != 0.0 || im != 0.0) t.emplace_back(r, c, cplx(re, im));
    }
  }
  std::optional<BasisSpec> basis;
  if (n_max >= 1 && 2 * (static_cast<Eigen::Index>(n_max) + 1) == dim) basis = BasisSpec(n_max);
  return {basis, from_triplets(dim, t), hermitian};
}

}  // namespace quasicollapse
