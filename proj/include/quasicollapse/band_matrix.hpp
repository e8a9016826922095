#ifndef QUASICOLLAPSE_BAND_MATRIX_HPP
#define QUASICOLLAPSE_BAND_MATRIX_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cassert>
#include <complex>
#include <stdexcept>
#include <type_traits>

namespace quasicollapse {

namespace internal {

template <typename Scalar>
inline Scalar conj_if_complex(const Scalar& x)
{
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex)
    return std::conj(x);
  else
    return x;
}

}  // namespace internal

/// Self-adjoint band matrix in lower band storage: band(d, j) = A(j + d, j) for
/// 0 <= d <= bandwidth. The upper triangle is implied by A(i, j) = conj(A(j, i)).
template <typename Scalar_>
class BandMatrix {
public:
  using Scalar = Scalar_;
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BandMatrix() = default;
  BandMatrix(Eigen::Index size, Eigen::Index bandwidth)
      : size_(size), band_(DenseMatrix::Zero(bandwidth + 1, size))
  {
    if (size < 0 || bandwidth < 0) throw std::invalid_argument("BandMatrix: negative extent");
  }

  Eigen::Index rows() const { return size_; }
  Eigen::Index cols() const { return size_; }
  Eigen::Index bandwidth() const { return band_.rows() - 1; }

  /// Entry (i, j) of the lower triangle, i >= j, i - j <= bandwidth().
  Scalar& lower(Eigen::Index i, Eigen::Index j)
  {
    assert(i >= j && i - j <= bandwidth());
    return band_(i - j, j);
  }
  const Scalar& lower(Eigen::Index i, Eigen::Index j) const
  {
    assert(i >= j && i - j <= bandwidth());
    return band_(i - j, j);
  }

  /// Any entry; zero outside the band.
  Scalar coeff(Eigen::Index i, Eigen::Index j) const
  {
    if (i >= j) return i - j <= bandwidth() ? band_(i - j, j) : Scalar(0);
    return j - i <= bandwidth() ? internal::conj_if_complex(band_(j - i, i)) : Scalar(0);
  }

  const DenseMatrix& storage() const { return band_; }

  DenseMatrix to_dense() const
  {
    DenseMatrix dense = DenseMatrix::Zero(size_, size_);
    for (Eigen::Index j = 0; j < size_; ++j) {
      for (Eigen::Index d = 0; d <= bandwidth() && j + d < size_; ++d) {
        dense(j + d, j) = band_(d, j);
        dense(j, j + d) = internal::conj_if_complex(band_(d, j));
      }
    }
    return dense;
  }

  RealScalar max_abs() const { return band_.cwiseAbs().maxCoeff(); }

  /// Copy with a wider band (extra zero diagonals), used as workspace for bulges.
  BandMatrix widened(Eigen::Index bandwidth) const
  {
    BandMatrix out(size_, std::max(bandwidth, this->bandwidth()));
    out.band_.topRows(band_.rows()) = band_;
    return out;
  }

private:
  Eigen::Index size_ = 0;
  DenseMatrix band_;
};

}  // namespace quasicollapse

#endif  // QUASICOLLAPSE_BAND_MATRIX_HPP
