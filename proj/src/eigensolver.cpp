#include "quasicollapse/eigensolver.hpp"

#include <cmath>
#include <limits>

namespace quasicollapse {

Spectrum<double> eig_real_symmetric(const Eigen::MatrixXd& matrix, bool want_vectors)
{
  return self_adjoint_eigen(matrix, want_vectors);
}

Spectrum<std::complex<double>> eig_hermitian(const Eigen::MatrixXcd& matrix, bool want_vectors)
{
  return self_adjoint_eigen(matrix, want_vectors);
}

namespace {

// Similarity by the plane rotation [c s; -s c] acting on rows/columns (p, p+1).
void rotate_adjacent(BandMatrix<double>& a, Eigen::Index p, double c, double s)
{
  const Eigen::Index n = a.rows();
  const Eigen::Index w = a.bandwidth();
  const Eigen::Index q = p + 1;
  auto get = [&](Eigen::Index i, Eigen::Index j) -> double {
    if (i < j) std::swap(i, j);
    return i - j <= w ? a.lower(i, j) : 0.0;
  };
  auto set = [&](Eigen::Index i, Eigen::Index j, double value) {
    if (i < j) std::swap(i, j);
    if (i - j <= w) a.lower(i, j) = value;
  };

  const Eigen::Index lo = std::max<Eigen::Index>(0, p - w);
  const Eigen::Index hi = std::min<Eigen::Index>(n - 1, q + w);
  for (Eigen::Index k = lo; k <= hi; ++k) {
    if (k == p || k == q) continue;
    const double akp = get(k, p);
    const double akq = get(k, q);
    if (akp == 0.0 && akq == 0.0) continue;
    set(k, p, c * akp + s * akq);
    set(k, q, -s * akp + c * akq);
  }
  const double app = a.lower(p, p);
  const double aqq = a.lower(q, q);
  const double aqp = a.lower(q, p);
  a.lower(p, p) = c * c * app + 2.0 * c * s * aqp + s * s * aqq;
  a.lower(q, q) = s * s * app - 2.0 * c * s * aqp + c * c * aqq;
  a.lower(q, p) = c * s * (aqq - app) + (c * c - s * s) * aqp;
}

}  // namespace

Spectrum<double> eig_banded_symmetric(const BandMatrix<double>& matrix)
{
  const Eigen::Index n = matrix.rows();
  const Eigen::Index b = matrix.bandwidth();
  BandMatrix<double> work = matrix.widened(b + 1);

  // Peel one diagonal at a time; each eliminated entry spawns a bulge one
  // position outside the current band which is chased off the bottom.
  for (Eigen::Index d = b; d >= 2; --d) {
    for (Eigen::Index j = 0; j + d < n; ++j) {
      Eigen::Index col = j;
      Eigen::Index row = j + d;
      while (row < n) {
        const double target = work.lower(row, col);
        if (target == 0.0) break;
        const Eigen::Index p = row - 1;
        const double pivot = work.lower(p, col);
        const double r = std::hypot(pivot, target);
        rotate_adjacent(work, p, pivot / r, target / r);
        work.lower(row, col) = 0.0;
        col = p;
        row += d;
      }
    }
  }

  Eigen::VectorXd diag(n), sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = work.lower(i, i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) sub(i) = work.lower(i + 1, i);
  internal::tridiagonal_ql(diag, sub, static_cast<Eigen::MatrixXd*>(nullptr));

  Spectrum<double> spectrum;
  spectrum.eigenvalues = diag;
  internal::sort_spectrum(spectrum);
  spectrum.trusted_count = n;
  return spectrum;
}

std::vector<Eigen::Index> levels_nearest_zero(const Eigen::VectorXd& ascending, Eigen::Index k)
{
  std::vector<Eigen::Index> order(ascending.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    const double ai = std::abs(ascending(i));
    const double aj = std::abs(ascending(j));
    if (ai != aj) return ai < aj;
    return ascending(i) < ascending(j);
  });
  order.resize(std::min<Eigen::Index>(k, ascending.size()));
  std::sort(order.begin(), order.end());
  return order;
}

namespace {

double distance_to_nearest(const Eigen::VectorXd& ascending, double value)
{
  const double* begin = ascending.data();
  const double* end = begin + ascending.size();
  const double* it = std::lower_bound(begin, end, value);
  double best = std::numeric_limits<double>::infinity();
  if (it != end) best = std::abs(*it - value);
  if (it != begin) best = std::min(best, std::abs(*(it - 1) - value));
  return best;
}

}  // namespace

ConvergedSpectrum converged_spectrum(const BandedBuilder& build, Eigen::Index k_levels,
                                     const ConvergenceOptions& options)
{
  if (k_levels < 1) throw std::invalid_argument("converged_spectrum: k_levels must be >= 1");
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("converged_spectrum: tolerance must be > 0");
  if (options.start_n_max < 1 || options.cap_n_max < options.start_n_max)
    throw std::invalid_argument("converged_spectrum: bad truncation range");

  ConvergedSpectrum result;
  ConvergenceCertificate& cert = result.certificate;
  cert.tolerance = options.tolerance;

  Eigen::VectorXd previous;
  for (int n_max = options.start_n_max;; n_max *= 2) {
    if (n_max > options.cap_n_max) break;
    Spectrum<double> spectrum = eig_banded_symmetric(build(n_max));
    spectrum.n_max = n_max;
    cert.n_max_sequence.push_back(n_max);

    const auto picked = levels_nearest_zero(spectrum.eigenvalues, k_levels);
    cert.levels.resize(static_cast<Eigen::Index>(picked.size()));
    cert.drift.resize(cert.levels.size());
    for (Eigen::Index i = 0; i < cert.levels.size(); ++i) {
      cert.levels(i) = spectrum.eigenvalues(picked[i]);
      cert.drift(i) = previous.size() ? distance_to_nearest(previous, cert.levels(i))
                                      : std::numeric_limits<double>::infinity();
    }
    spectrum.trusted_count = cert.trusted_count();
    result.spectrum = std::move(spectrum);
    cert.converged = cert.levels.size() == k_levels && cert.trusted_count() == k_levels;
    if (cert.converged) break;
    previous = result.spectrum.eigenvalues;
    if (n_max > options.cap_n_max / 2) break;
  }
  return result;
}

}  // namespace quasicollapse
