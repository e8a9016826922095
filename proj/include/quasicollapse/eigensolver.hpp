#ifndef QUASICOLLAPSE_EIGENSOLVER_HPP
#define QUASICOLLAPSE_EIGENSOLVER_HPP

// Self-adjoint eigendecomposition: Householder reduction to a real symmetric
// tridiagonal matrix followed by implicit QL with shifts. Band matrices are
// reduced with Givens bulge chasing instead, which keeps n_max in the thousands
// tractable when only eigenvalues are needed.

#include "quasicollapse/band_matrix.hpp"

#include <Eigen/Core>
#include <Eigen/Householder>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace quasicollapse {

/// Thrown when the QL iteration exceeds its sweep budget.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, Eigen::Index index)
      : std::runtime_error(what), index_(index) {}
  Eigen::Index index() const { return index_; }

private:
  Eigen::Index index_;
};

template <typename Scalar_>
struct Spectrum {
  using Scalar = Scalar_;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Eigen::VectorXd eigenvalues;  ///< ascending
  Matrix eigenvectors;          ///< one column per eigenvalue; empty if not requested
  int n_max = -1;               ///< truncation the matrix came from, if any
  Eigen::Index trusted_count = 0;
  double residual_norm = 0.0;   ///< max ||M v - lambda v|| over trusted levels

  bool has_vectors() const { return eigenvectors.size() > 0; }
};

namespace internal {

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m)
{
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Implicit QL on a symmetric tridiagonal matrix (diag, sub) with sub(i) the
/// (i+1, i) entry. On return diag holds the unsorted eigenvalues and, when z is
/// non-null, its columns have been rotated accordingly.
template <typename ZMatrix>
void tridiagonal_ql(Eigen::VectorXd& diag, Eigen::VectorXd& sub, ZMatrix* z)
{
  const Eigen::Index n = diag.size();
  if (n == 0) return;
  sub.conservativeResize(n);
  sub(n - 1) = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const long long sweep_cap = 30LL * std::max<Eigen::Index>(n, 1);
  long long sweeps = 0;

  for (Eigen::Index l = 0; l < n; ++l) {
    Eigen::Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(diag(m)) + std::abs(diag(m + 1));
        if (std::abs(sub(m)) <= eps * dd) break;
      }
      if (m == l) break;
      if (++sweeps > sweep_cap)
        throw ConvergenceError("QL iteration did not converge at index " + std::to_string(l), l);

      double g = (diag(l + 1) - diag(l)) / (2.0 * sub(l));
      double r = std::hypot(g, 1.0);
      g = diag(m) - diag(l) + sub(l) / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      Eigen::Index i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        double f = s * sub(i);
        const double b = c * sub(i);
        r = std::hypot(f, g);
        sub(i + 1) = r;
        if (r == 0.0) {
          diag(i + 1) -= p;
          sub(m) = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag(i + 1) - p;
        r = (diag(i) - g) * s + 2.0 * c * b;
        p = s * r;
        diag(i + 1) = g + p;
        g = c * r - b;
        if (z) {
          for (Eigen::Index k = 0; k < z->rows(); ++k) {
            const auto zk1 = (*z)(k, i + 1);
            (*z)(k, i + 1) = s * (*z)(k, i) + c * zk1;
            (*z)(k, i) = c * (*z)(k, i) - s * zk1;
          }
        }
      }
      if (underflow && i >= l) continue;
      diag(l) -= p;
      sub(l) = g;
      sub(m) = 0.0;
    } while (m != l);
  }
}

/// Householder reduction A = Q T Q^H of a self-adjoint matrix (lower triangle
/// referenced). T is returned real by absorbing the subdiagonal phases into Q.
template <typename Scalar>
void tridiagonalize(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a, Eigen::VectorXd& diag,
                    Eigen::VectorXd& sub,
                    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>* q)
{
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = a.rows();
  std::vector<Vector> reflectors;
  std::vector<double> taus;
  Vector offdiag = Vector::Zero(std::max<Eigen::Index>(n - 1, 0));

  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    Vector x = a.col(k).tail(m);
    const double norm = x.norm();
    const double tail_norm = m > 1 ? x.tail(m - 1).norm() : 0.0;
    if (tail_norm == 0.0 || m == 1) {
      offdiag(k) = x(0);
      reflectors.emplace_back();
      taus.push_back(0.0);
      continue;
    }
    Scalar phase(1);
    if (std::abs(x(0)) > 0.0) phase = x(0) / std::abs(x(0));
    const Scalar alpha = -phase * norm;
    Vector v = x;
    v(0) -= alpha;
    const double tau = 2.0 / v.squaredNorm();
    offdiag(k) = alpha;

    auto trailing = a.bottomRightCorner(m, m);
    const Vector p = tau * (trailing.template selfadjointView<Eigen::Lower>() * v);
    const Scalar vp = v.dot(p);  // v^H p, real for self-adjoint input
    const Vector w = p - (tau * 0.5 * std::real(vp)) * v;
    trailing.template selfadjointView<Eigen::Lower>().rankUpdate(v, w, Scalar(-1));
    reflectors.push_back(std::move(v));
    taus.push_back(tau);
  }

  diag.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = std::real(a(i, i));
  sub.resize(std::max<Eigen::Index>(n - 1, 0));

  // Unit phases d with conj(d_{k+1}) offdiag_k d_k = |offdiag_k|.
  Vector phases = Vector::Ones(n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double mag = std::abs(offdiag(k));
    sub(k) = mag;
    phases(k + 1) = mag > 0.0 ? phases(k) * offdiag(k) / mag : phases(k);
  }

  if (q) {
    *q = Matrix::Identity(n, n);
    for (Eigen::Index k = static_cast<Eigen::Index>(reflectors.size()) - 1; k >= 0; --k) {
      if (taus[k] == 0.0) continue;
      const Vector& v = reflectors[k];
      const Eigen::Index m = v.size();
      auto block = q->bottomRows(m);
      const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> vh_block = v.adjoint() * block;
      block.noalias() -= (taus[k] * v) * vh_block;
    }
    *q = (*q) * phases.asDiagonal();
  }
}

template <typename Scalar>
void sort_spectrum(Spectrum<Scalar>& spectrum)
{
  const Eigen::Index n = spectrum.eigenvalues.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return spectrum.eigenvalues(i) < spectrum.eigenvalues(j);
  });
  Eigen::VectorXd values(n);
  for (Eigen::Index i = 0; i < n; ++i) values(i) = spectrum.eigenvalues(order[i]);
  spectrum.eigenvalues = values;
  if (spectrum.has_vectors()) {
    typename Spectrum<Scalar>::Matrix vectors(spectrum.eigenvectors.rows(), n);
    for (Eigen::Index i = 0; i < n; ++i) vectors.col(i) = spectrum.eigenvectors.col(order[i]);
    spectrum.eigenvectors = std::move(vectors);
  }
}

}  // namespace internal

/// Full eigendecomposition of a dense self-adjoint matrix. Throws
/// std::invalid_argument if the matrix deviates from self-adjointness by more
/// than 1e-12 (absolute, scaled by max(1, max|M_ij|)).
template <typename Derived>
Spectrum<typename Derived::Scalar> self_adjoint_eigen(const Eigen::MatrixBase<Derived>& matrix,
                                                       bool want_vectors)
{
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("eigensolver: matrix is not square");
  const Eigen::Index n = matrix.rows();
  Spectrum<Scalar> spectrum;
  if (n == 0) return spectrum;

  const double scale = std::max(1.0, static_cast<double>(matrix.cwiseAbs().maxCoeff()));
  if (internal::hermiticity_defect(matrix) > 1e-12 * scale)
    throw std::invalid_argument("eigensolver: matrix is not self-adjoint");

  Eigen::VectorXd diag, sub;
  Matrix q;
  internal::tridiagonalize<Scalar>(matrix.derived(), diag, sub, want_vectors ? &q : nullptr);
  internal::tridiagonal_ql(diag, sub, want_vectors ? &q : static_cast<Matrix*>(nullptr));

  spectrum.eigenvalues = diag;
  if (want_vectors) spectrum.eigenvectors = std::move(q);
  internal::sort_spectrum(spectrum);
  spectrum.trusted_count = n;
  if (want_vectors) {
    const Matrix residual = matrix * spectrum.eigenvectors -
                            spectrum.eigenvectors * spectrum.eigenvalues.asDiagonal();
    spectrum.residual_norm = residual.colwise().norm().maxCoeff();
  }
  return spectrum;
}

/// Real symmetric route.
Spectrum<double> eig_real_symmetric(const Eigen::MatrixXd& matrix, bool want_vectors);

/// Complex Hermitian route (complex Householder reduction).
Spectrum<std::complex<double>> eig_hermitian(const Eigen::MatrixXcd& matrix, bool want_vectors);

/// Eigenvalues of a real symmetric band matrix: Givens band-to-tridiagonal
/// reduction in O(n^2 b), then QL without vectors.
Spectrum<double> eig_banded_symmetric(const BandMatrix<double>& matrix);

// -- convergence harness --------------------------------------------------------

struct ConvergenceOptions {
  int start_n_max = 64;
  int cap_n_max = 4096;
  double tolerance = 1e-8;
};

struct ConvergenceCertificate {
  std::vector<int> n_max_sequence;
  /// The k levels nearest zero at the last truncation, ascending.
  Eigen::VectorXd levels;
  /// Distance from each level to the nearest eigenvalue of the previous truncation.
  Eigen::VectorXd drift;
  double tolerance = 0.0;
  bool converged = false;

  bool trusted(Eigen::Index level) const { return drift(level) < tolerance; }
  Eigen::Index trusted_count() const { return (drift.array() < tolerance).count(); }
};

struct ConvergedSpectrum {
  Spectrum<double> spectrum;
  ConvergenceCertificate certificate;
};

/// Builds the matrix for a given n_max (real symmetric, banded).
using BandedBuilder = std::function<BandMatrix<double>(int n_max)>;

/// Indices of the k eigenvalues closest to zero (ties broken toward the negative
/// value), returned in ascending eigenvalue order.
std::vector<Eigen::Index> levels_nearest_zero(const Eigen::VectorXd& ascending, Eigen::Index k);

/// Doubles n_max from options.start_n_max until the k levels nearest zero drift
/// by less than the tolerance between successive truncations, or the cap is
/// reached. Reaching the cap is reported through certificate.converged, not thrown.
ConvergedSpectrum converged_spectrum(const BandedBuilder& build, Eigen::Index k_levels,
                                     const ConvergenceOptions& options = {});

}  // namespace quasicollapse

#endif  // QUASICOLLAPSE_EIGENSOLVER_HPP
