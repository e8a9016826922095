#ifndef QUASICOLLAPSE_FOCK_HPP
#define QUASICOLLAPSE_FOCK_HPP

// Truncated Fock (x) spin operators. Basis ordering is part of the contract:
// state |n, s> sits at index 2n + s with s = 0 (ground) or 1 (excited).

#include "quasicollapse/band_matrix.hpp"
#include "quasicollapse/model.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <complex>
#include <iosfwd>
#include <optional>

namespace quasicollapse {

using cplx = std::complex<double>;
using SparseMatrixC = Eigen::SparseMatrix<cplx>;

enum class Spin : int { Ground = 0, Excited = 1 };

struct BasisSpec {
  int n_max = 1;

  explicit BasisSpec(int n_max_);

  Eigen::Index dim() const { return 2 * (static_cast<Eigen::Index>(n_max) + 1); }
  static Eigen::Index index(int n, Spin s) { return 2 * static_cast<Eigen::Index>(n) + static_cast<int>(s); }
  static int fock_level(Eigen::Index index) { return static_cast<int>(index / 2); }
  static Spin spin(Eigen::Index index) { return index % 2 ? Spin::Excited : Spin::Ground; }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

class TruncatedOperator {
public:
  /// Throws std::invalid_argument if the hermitian tag is set and
  /// max|M - M^H| >= 1e-14, or if the matrix dimension disagrees with the basis.
  TruncatedOperator(std::optional<BasisSpec> basis, SparseMatrixC matrix, bool hermitian);

  const std::optional<BasisSpec>& basis() const { return basis_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  bool hermitian() const { return hermitian_; }
  const SparseMatrixC& matrix() const { return matrix_; }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix_); }

  /// max |i - j| over stored nonzeros.
  Eigen::Index half_bandwidth() const;
  double max_abs() const;
  double max_imag() const;

private:
  std::optional<BasisSpec> basis_;
  SparseMatrixC matrix_;
  bool hermitian_;
};

// -- elementary operators ---------------------------------------------------------

TruncatedOperator annihilation(const BasisSpec& basis);  ///< a (x) 1
TruncatedOperator creation(const BasisSpec& basis);      ///< a^dagger (x) 1
TruncatedOperator sigma_plus(const BasisSpec& basis);    ///< 1 (x) |e><g|
TruncatedOperator sigma_minus(const BasisSpec& basis);   ///< 1 (x) |g><e|

// -- Hamiltonians ------------------------------------------------------------------

/// i coupling [(a + eta a^dag) s+ - (a^dag + eta a) s-] + drive (a + a^dag)
TruncatedOperator jcr_hamiltonian(double coupling, double drive, double eta, const BasisSpec& basis);

/// H0 = i lambda (a s+ - a^dag s-) + epsilon (a + a^dag); eta is ignored.
TruncatedOperator build_h0(const ModelParams& params, const BasisSpec& basis);

/// H_eta with the derived lambda' and epsilon'.
TruncatedOperator build_h_eta(const ModelParams& params, const BasisSpec& basis);

// -- squeezing ----------------------------------------------------------------------

/// Sign of the quadratic generator. Pinned makes S(z) H0 S(z)^dag = H_eta hold
/// with cosh z = lambda'/lambda; Flipped is kept for diagnostics.
enum class SqueezeSign { Pinned, Flipped };

/// Largest |z| accepted by build_squeeze.
inline constexpr double kMaxSqueeze = 5.0;

/// exp(A) for a square real matrix by Taylor scaling and squaring.
Eigen::MatrixXd expm_scaling_squaring(const Eigen::MatrixXd& generator);

/// Fock-space squeeze matrix exp[(z/2)(a^2 - a^dag^2)] (Pinned) on levels 0..n_max.
Eigen::MatrixXd squeeze_fock(double z, int n_max, SqueezeSign sign = SqueezeSign::Pinned);

/// S(z) (x) 1 on the product basis. Throws std::domain_error for |z| >= 5.
TruncatedOperator build_squeeze(double z, const BasisSpec& basis, SqueezeSign sign = SqueezeSign::Pinned);

struct SqueezeResidual {
  double residual = 0.0;       ///< max |S H0 S^dag - H_eta| on the interior block
  double h_eta_max = 0.0;      ///< max |H_eta| over the full truncated matrix
  int interior_levels = 0;     ///< Fock levels n < interior_levels were compared
  double relative() const { return h_eta_max > 0.0 ? residual / h_eta_max : residual; }
};

/// Residual of the squeeze identity restricted to Fock levels below
/// interior_fraction * n_max. Requires eta < 1 and interior_fraction in (0, 1].
SqueezeResidual verify_squeeze_identity(const ModelParams& params, const BasisSpec& basis,
                                        double interior_fraction,
                                        SqueezeSign sign = SqueezeSign::Pinned);

// -- gauge and export -------------------------------------------------------------

/// U^dag H U with U|n,g> = |n,g>, U|n,e> = i|n,e>. The Jaynes-Cummings couplings
/// become real; the result must be real to 1e-15 or std::invalid_argument is thrown.
TruncatedOperator gauge_to_real(const TruncatedOperator& op);

/// Real band copy of a real symmetric operator.
BandMatrix<double> to_real_band(const TruncatedOperator& op);

/// Plain-text dump: header `dim n_max ordering=interleaved`, then one line per
/// row holding `re im` pairs.
void write_matrix(std::ostream& out, const TruncatedOperator& op);
TruncatedOperator read_matrix(std::istream& in, bool hermitian);

}  // namespace quasicollapse

#endif  // QUASICOLLAPSE_FOCK_HPP
