#include "quasicollapse/analytic.hpp"

#include "quasicollapse/eigensolver.hpp"
#include "quasicollapse/fock.hpp"
#include "quasicollapse/special_functions.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace quasicollapse {

std::string_view to_string(Branch branch) { return branch == Branch::Plus ? "plus" : "minus"; }

namespace {

void check_level(int n)
{
  if (n < 0) throw std::invalid_argument("level index must be >= 0");
}

double collapse_factor(double ratio) { return std::pow(1.0 - ratio * ratio, 0.75); }

}  // namespace

// -- energies ---------------------------------------------------------------------

double quasienergy_jc(int n, Sign sign, const ModelParams& params)
{
  check_level(n);
  if (params.eta() != 0.0) throw std::invalid_argument("quasienergy_jc: eta must be 0; use quasienergy_rabi");
  if (classify_regime(params) != Regime::Discrete)
    throw RegimeError("quasienergy_jc: drive at or above the critical value");
  return to_double(sign) * params.lambda() * collapse_factor(params.drive_ratio()) * std::sqrt(n + 1.0);
}

double quasienergy_rabi(int n, Sign sign, const ModelParams& params)
{
  check_level(n);
  if (classify_regime(params) != Regime::Discrete)
    throw RegimeError("quasienergy_rabi: drive at or above the critical value");
  const double ratio = 2.0 * params.epsilon_prime() / ((1.0 + params.eta()) * params.lambda_prime());
  return to_double(sign) * params.lambda() * collapse_factor(ratio) * std::sqrt(n + 1.0);
}

double rabi_quasienergy_formula(int n, Sign sign, double lambda, double drive, double eta)
{
  check_level(n);
  if (!(lambda > 0.0) || !(drive >= 0.0) || !(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("rabi_quasienergy_formula: need lambda > 0, drive >= 0, eta in [0, 1]");
  const double ratio = 2.0 * drive / ((1.0 + eta) * lambda);
  if (ratio >= 1.0) throw RegimeError("rabi_quasienergy_formula: drive at or above the critical value");
  return to_double(sign) * lambda * collapse_factor(ratio) * std::sqrt(n + 1.0);
}

double dirac_energy_discrete(int n, Sign sign, const FieldConfig& fields)
{
  check_level(n);
  fields.validate();
  if (!(fields.B > fields.E)) throw RegimeError("dirac_energy_discrete: requires B > E");
  const double beta = fields.beta_B();
  const double s2 = 1.0 - beta * beta;
  const double root = std::sqrt(std::pow(s2, 1.5) * (2.0 * n + 2.0) * fields.B + s2 * fields.k3 * fields.k3);
  return beta * fields.k2 + to_double(sign) * root;
}

double dirac_energy_privileged(int n, Sign sign, const FieldConfig& boosted)
{
  check_level(n);
  boosted.validate();
  if (boosted.E != 0.0) throw std::invalid_argument("dirac_energy_privileged: frame must have E' = 0");
  return to_double(sign) * std::sqrt((2.0 * n + 2.0) * boosted.B + boosted.k3 * boosted.k3);
}

double dirac_energy_via_boost(int n, Sign sign, const FieldConfig& fields)
{
  fields.validate();
  if (!(fields.B > fields.E)) throw RegimeError("dirac_energy_via_boost: requires B > E");
  const double beta = fields.beta_B();
  const double gamma = 1.0 / std::sqrt(1.0 - beta * beta);
  // Fields transform as E' = gamma (E - beta B) = 0, B' = gamma (B - beta E) = B / gamma;
  // k3 is transverse to the boost.
  FieldConfig boosted{0.0, gamma * (fields.B - beta * fields.E), 0.0, fields.k3};
  const double energy_prime = dirac_energy_privileged(n, sign, boosted);
  // (energy, k2) is a two-vector under the boost: energy' = gamma (energy - beta k2).
  return energy_prime / gamma + beta * fields.k2;
}

LorentzFactors lorentz_factors(double beta)
{
  if (!(std::abs(beta) <= 1.0)) throw std::invalid_argument("lorentz_factors: |beta| must not exceed 1");
  const double s = std::sqrt(1.0 - beta * beta);
  return {beta, std::sqrt(1.0 + s), std::sqrt(1.0 - s)};
}

// -- states -----------------------------------------------------------------------

void PositionGrid::validate() const
{
  if (count < 2 || !(stop > start)) throw std::invalid_argument("PositionGrid: need count >= 2 and stop > start");
}

std::vector<double> PositionGrid::points() const
{
  validate();
  std::vector<double> out(count);
  const double h = step();
  for (int i = 0; i < count; ++i) out[i] = start + i * h;
  out.back() = stop;
  return out;
}

namespace {

using Spinor = std::pair<cplx, cplx>;

// psi_n(u), zero far outside the classically allowed region
double oscillator(int n, double u)
{
  if (std::abs(u) < kHermiteRange) return hermite_psi(n, u);
  if (u * u > 4.0 * (2.0 * n + 1.0) + 100.0) return 0.0;
  throw std::out_of_range("spinor: grid extends beyond the evaluable oscillator support");
}

// (Xi+ + Xi- sigma_y) applied to (a, b)
Spinor boost_spinor(const LorentzFactors& f, Spinor chi)
{
  const cplx i(0.0, 1.0);
  return {f.xi_plus * chi.first - i * f.xi_minus * chi.second,
          f.xi_plus * chi.second + i * f.xi_minus * chi.first};
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& f)
{
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
  return sum;
}

double sample_norm(const SampledState& s)
{
  std::vector<double> density(s.x.size());
  for (std::size_t i = 0; i < s.x.size(); ++i) density[i] = std::norm(s.upper[i]) + std::norm(s.lower[i]);
  return std::sqrt(trapezoid(s.x, density));
}

void apply_branch_symmetry(SampledState& s)
{
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    s.upper[i] = std::conj(s.upper[i]);
    s.lower[i] = -std::conj(s.lower[i]);
  }
}

SampledState sample(const PositionGrid& grid, const std::function<Spinor(double)>& f)
{
  SampledState s;
  s.x = grid.points();
  s.upper.resize(s.x.size());
  s.lower.resize(s.x.size());
  for (std::size_t i = 0; i < s.x.size(); ++i) std::tie(s.upper[i], s.lower[i]) = f(s.x[i]);
  return s;
}

void normalize_l2(SampledState& s)
{
  s.quadrature_norm = sample_norm(s);
  if (!(s.quadrature_norm > 0.0)) throw std::domain_error("spinor: state vanishes on the grid");
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    s.upper[i] /= s.quadrature_norm;
    s.lower[i] /= s.quadrature_norm;
  }
}

struct DiscreteFrame {
  double beta, s, b_prime, kappa, center;
  LorentzFactors factors;
};

DiscreteFrame discrete_frame(const FieldConfig& fields)
{
  fields.validate();
  if (!(fields.B > fields.E)) throw RegimeError("discrete-regime state requires B > E");
  const double beta = fields.beta_B();
  const double s = std::sqrt(1.0 - beta * beta);
  const double b_prime = fields.B * s;
  return {beta, s, b_prime, fields.k3 / std::sqrt(b_prime), fields.k2 / fields.B, lorentz_factors(beta)};
}

}  // namespace

SampledState spinor_discrete(int n, Branch branch, Sign sign, const FieldConfig& fields, const PositionGrid& grid)
{
  check_level(n);
  const DiscreteFrame fr = discrete_frame(fields);
  const double m = std::sqrt(2.0 * (n + 1.0));
  const double nu = to_double(sign) * std::sqrt(m * m + fr.kappa * fr.kappa);
  const cplx weight = cplx(0.0, -1.0) * (nu - fr.kappa) / m;
  const double root_b = std::sqrt(fr.b_prime);

  SampledState state = sample(grid, [&](double x) {
    const double u = root_b * (x - fr.center) + fr.beta * nu;
    return boost_spinor(fr.factors, {oscillator(n, u), weight * oscillator(n + 1, u)});
  });
  normalize_l2(state);
  if (branch == Branch::Plus) apply_branch_symmetry(state);
  state.regime = Regime::Discrete;
  state.branch = branch;
  state.n = n;
  state.energy = fr.beta * fields.k2 + fr.s * root_b * nu;
  state.k2 = fields.k2;
  state.k3 = fields.k3;
  state.normalization = Normalization::L2;
  return state;
}

SampledState zero_mode_discrete(Branch branch, const FieldConfig& fields, const PositionGrid& grid)
{
  const DiscreteFrame fr = discrete_frame(fields);
  const double nu = -fr.kappa;
  const double root_b = std::sqrt(fr.b_prime);

  SampledState state = sample(grid, [&](double x) {
    const double u = root_b * (x - fr.center) + fr.beta * nu;
    return boost_spinor(fr.factors, {0.0, oscillator(0, u)});
  });
  normalize_l2(state);
  if (branch == Branch::Plus) apply_branch_symmetry(state);
  state.regime = Regime::Discrete;
  state.branch = branch;
  state.energy = fr.beta * fields.k2 + fr.s * root_b * nu;
  state.k2 = fields.k2;
  state.k3 = fields.k3;
  state.normalization = Normalization::L2;
  return state;
}

SampledState spinor_continuous(Branch branch, double energy, const FieldConfig& fields, const PositionGrid& grid)
{
  fields.validate();
  if (!(fields.E > fields.B)) throw RegimeError("spinor_continuous: requires E > B");
  const double beta = fields.beta_E();
  const double s = std::sqrt(1.0 - beta * beta);
  const double gamma = 1.0 / s;
  const double e_prime = fields.E * s;
  const double energy_prime = gamma * (energy - beta * fields.k2);
  const double k2_prime = gamma * (fields.k2 - beta * energy);
  const double center = energy_prime / e_prime;
  const double root_e = std::sqrt(e_prime);
  const cplx c = cplx(1.0, 1.0) * root_e;
  const cplx kappa(fields.k3, k2_prime);
  const double q = std::norm(kappa) / (2.0 * e_prime);
  const cplx order_even(0.0, q);
  const cplx order_odd(-1.0, q);
  const cplx odd_weight = kappa / (cplx(0.0, 1.0) * c);
  const LorentzFactors factors = lorentz_factors(beta);
  const double r = 1.0 / std::sqrt(2.0);

  auto raw = [&](double x) {
    const double t = root_e * (x - center);
    const cplx plus_x = odd_weight == 0.0 ? cplx(0.0) : odd_weight * pcf_d_on_ray(order_odd, t);
    const cplx minus_x = pcf_d_on_ray(order_even, t);
    return boost_spinor(factors, {r * (plus_x + minus_x), r * (plus_x - minus_x)});
  };

  const Spinor at_origin = raw(0.0);
  const cplx scale = std::abs(at_origin.first) > 0.0 ? at_origin.first : at_origin.second;
  if (scale == 0.0) throw std::domain_error("spinor_continuous: state vanishes at x = 0");

  SampledState state = sample(grid, [&](double x) {
    const Spinor v = raw(x);
    return Spinor{v.first / scale, v.second / scale};
  });
  state.quadrature_norm = sample_norm(state);
  if (branch == Branch::Minus) apply_branch_symmetry(state);
  state.regime = Regime::Continuous;
  state.branch = branch;
  state.energy = energy;
  state.k2 = fields.k2;
  state.k3 = fields.k3;
  state.normalization = Normalization::Delta;
  return state;
}

double eigen_residual(const SampledState& state, const FieldConfig& fields)
{
  const std::size_t count = state.x.size();
  if (count < 5) throw std::invalid_argument("eigen_residual: need at least 5 grid points");
  const double h = state.x[1] - state.x[0];
  const cplx i(0.0, 1.0);
  auto d = [&](const std::vector<cplx>& f, std::size_t k) {
    return (-f[k + 2] + 8.0 * f[k + 1] - 8.0 * f[k - 1] + f[k - 2]) / (12.0 * h);
  };
  double scale = 0.0;
  for (std::size_t k = 0; k < count; ++k)
    scale = std::max(scale, std::max(std::abs(state.upper[k]), std::abs(state.lower[k])));
  double worst = 0.0;
  for (std::size_t k = 2; k + 2 < count; ++k) {
    const double x = state.x[k];
    const cplx u = state.upper[k], l = state.lower[k];
    const double field = fields.B * x - fields.k2;
    const cplx hu = i * d(state.lower, k) + i * field * l + fields.k3 * u + fields.E * x * u;
    const cplx hl = i * d(state.upper, k) - i * field * u - fields.k3 * l + fields.E * x * l;
    worst = std::max(worst, std::max(std::abs(hu - state.energy * u), std::abs(hl - state.energy * l)));
  }
  return scale > 0.0 ? worst / scale : worst;
}

// -- polarization -------------------------------------------------------------------

namespace {

Polarization from_moments(cplx coherence, double upper_weight, double lower_weight)
{
  const double total = upper_weight + lower_weight;
  const cplx p = 2.0 * coherence / total;
  return {p, {p.real(), p.imag(), (upper_weight - lower_weight) / total}};
}

}  // namespace

Polarization polarization(const ModelParams& params, Branch branch)
{
  const Regime regime = classify_regime(params);
  if (regime == Regime::Critical) throw RegimeError("polarization: undefined at the critical drive");
  const double ratio = params.drive_ratio();
  if (regime == Regime::Discrete) {
    const cplx p(0.0, ratio);
    return {p, {0.0, ratio, -std::sqrt(1.0 - ratio * ratio)}};
  }
  const double b = 1.0 / ratio;
  const double re = (branch == Branch::Minus ? 1.0 : -1.0) * std::sqrt(1.0 - b * b);
  return {cplx(re, b), {re, b, 0.0}};
}

Polarization polarization_from_state(const SampledState& state)
{
  std::vector<double> re(state.x.size()), im(state.x.size()), up(state.x.size()), lo(state.x.size());
  for (std::size_t i = 0; i < state.x.size(); ++i) {
    const cplx c = std::conj(state.upper[i]) * state.lower[i];
    re[i] = c.real();
    im[i] = c.imag();
    up[i] = std::norm(state.upper[i]);
    lo[i] = std::norm(state.lower[i]);
  }
  return from_moments(cplx(trapezoid(state.x, re), trapezoid(state.x, im)), trapezoid(state.x, up),
                      trapezoid(state.x, lo));
}

Polarization polarization_from_vector(const std::vector<cplx>& vector)
{
  if (vector.size() < 2 || vector.size() % 2) throw std::invalid_argument("polarization_from_vector: bad length");
  cplx coherence = 0.0;
  double up = 0.0, lo = 0.0;
  for (std::size_t n = 0; n < vector.size() / 2; ++n) {
    const cplx g = vector[2 * n], e = vector[2 * n + 1];
    coherence += std::conj(e) * g;
    up += std::norm(e);
    lo += std::norm(g);
  }
  return from_moments(coherence, up, lo);
}

Polarization numeric_polarization(const ModelParams& params, int n_max)
{
  const ModelParams reduced(params.lambda(), params.epsilon());
  const BasisSpec basis(n_max);
  const TruncatedOperator h = gauge_to_real(build_h0(reduced, basis));
  const auto spectrum = eig_real_symmetric(h.dense().real(), true);

  std::vector<Eigen::Index> cluster;
  const double window = 1e-6 * std::max(1.0, h.max_abs());
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i)
    if (std::abs(spectrum.eigenvalues(i)) < window) cluster.push_back(i);
  if (cluster.empty()) cluster = levels_nearest_zero(spectrum.eigenvalues, 1);

  Eigen::MatrixXcd subspace(h.dim(), static_cast<Eigen::Index>(cluster.size()));
  // undo the gauge: the excited components carry a factor i
  Eigen::VectorXcd gauge(h.dim());
  for (Eigen::Index i = 0; i < h.dim(); ++i)
    gauge(i) = BasisSpec::spin(i) == Spin::Excited ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
  for (std::size_t k = 0; k < cluster.size(); ++k)
    subspace.col(k) = gauge.asDiagonal() * spectrum.eigenvectors.col(cluster[k]).cast<cplx>();
  Eigen::VectorXd photons(h.dim());
  for (Eigen::Index i = 0; i < h.dim(); ++i) photons(i) = BasisSpec::fock_level(i);
  Eigen::MatrixXcd number = subspace.adjoint() * photons.asDiagonal() * subspace;
  number = 0.5 * (number + number.adjoint()).eval();
  const auto inner = eig_hermitian(number, true);
  const Eigen::VectorXcd state = subspace * inner.eigenvectors.col(0);
  return polarization_from_vector(std::vector<cplx>(state.data(), state.data() + state.size()));
}

}  // namespace quasicollapse
