#ifndef QUASICOLLAPSE_ANALYTIC_HPP
#define QUASICOLLAPSE_ANALYTIC_HPP

// Closed-form quasienergies, Dirac energies in crossed fields, spinor states and
// the two-level polarization.
//
// Level index: a single n >= 0 is shared by the optical and Dirac pictures. The
// JC quasienergy sqrt(n+1) corresponds to the Landau factor sqrt(2n+2), i.e. the
// Landau index |n| equals the JC index n.
//
// Position-space convention (hbar = c = e = 1): the phi^- block reads
//   H = -sigma_x p - sigma_y (B x - k2) + k3 sigma_z + E x,   p = -i d/dx,
// with spinors ordered (upper = excited, lower = ground). The oscillator ladder
// a = (x/l_B + l_B d/dx)/sqrt(2) turns it into the driven JC Hamiltonian with
// lambda = sqrt(2B) and epsilon = E/sqrt(2B).

#include "quasicollapse/model.hpp"

#include <array>
#include <complex>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace quasicollapse {

using cplx = std::complex<double>;

/// Thrown when a formula is evaluated in the wrong regime.
class RegimeError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Sign of an energy branch.
enum class Sign : int { Minus = -1, Plus = 1 };

inline double to_double(Sign s) { return static_cast<double>(static_cast<int>(s)); }

/// Solution branch. Minus is the driven-JC state; Plus is its image under the
/// antiunitary symmetry sigma_z K of the phi^- Hamiltonian. Above the transition
/// the two branches differ by the sign of Re<sigma_->.
enum class Branch { Plus, Minus };

std::string_view to_string(Branch branch);

// -- energies ---------------------------------------------------------------------

/// +-lambda (1 - 4 eps^2/lambda^2)^{3/4} sqrt(n+1). Requires eta = 0 and the
/// discrete regime (RegimeError otherwise).
double quasienergy_jc(int n, Sign sign, const ModelParams& params);

/// Quasienergy of H_eta: +-lambda (1 - 4 eps'^2 / ((1+eta)^2 lambda'^2))^{3/4} sqrt(n+1).
/// Equals quasienergy_jc of the reduced parameters.
double quasienergy_rabi(int n, Sign sign, const ModelParams& params);

/// Raw expression +-lambda (1 - 4 drive^2/((1+eta)^2 lambda^2))^{3/4} sqrt(n+1) for
/// eta in [0, 1], including eta = 1 where no squeeze map exists.
double rabi_quasienergy_formula(int n, Sign sign, double lambda, double drive, double eta);

/// beta k2 +- sqrt((1-beta^2)^{3/2} (2n+2) B + (1-beta^2) k3^2) with beta = E/B.
/// Requires B > E (RegimeError otherwise).
double dirac_energy_discrete(int n, Sign sign, const FieldConfig& fields);

/// +-sqrt((2n+2) B' + k3'^2) in a frame without electric field. Requires E' = 0.
double dirac_energy_privileged(int n, Sign sign, const FieldConfig& boosted);

/// Lab energy obtained by boosting to the frame without electric field, evaluating
/// dirac_energy_privileged there, and transforming (energy, k2) back.
double dirac_energy_via_boost(int n, Sign sign, const FieldConfig& fields);

struct LorentzFactors {
  double beta;
  double xi_plus;   ///< sqrt(1 + sqrt(1 - beta^2))
  double xi_minus;  ///< sqrt(1 - sqrt(1 - beta^2))
};

/// Throws std::invalid_argument for |beta| > 1.
LorentzFactors lorentz_factors(double beta);

// -- states -----------------------------------------------------------------------

struct PositionGrid {
  double start = -10.0;
  double stop = 10.0;
  int count = 1001;

  /// Throws std::invalid_argument unless count >= 2 and stop > start.
  void validate() const;
  double step() const { return (stop - start) / (count - 1); }
  std::vector<double> points() const;
};

enum class Normalization { L2, Delta };

/// Two-component spinor sampled on a grid.
struct SampledState {
  Regime regime = Regime::Discrete;
  Branch branch = Branch::Minus;
  int n = -1;                       ///< level, or -1 for the zero mode and continuum states
  double energy = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  Normalization normalization = Normalization::L2;
  double quadrature_norm = 0.0;     ///< trapezoid L2 norm of the samples before normalization
  std::vector<double> x;
  std::vector<cplx> upper;
  std::vector<cplx> lower;
};

/// Discrete-regime eigenstate with energy dirac_energy_discrete(n, sign, fields),
/// L2-normalized on the grid. Branch Minus at k2 = k3 = 0 is the driven-JC eigenstate.
SampledState spinor_discrete(int n, Branch branch, Sign sign, const FieldConfig& fields,
                             const PositionGrid& grid);

/// Zero-quasienergy state of the discrete regime, energy beta k2 - sqrt(1-beta^2) k3.
/// At k = 0 it is a Gaussian times the constant spinor (-i Xi-, Xi+).
SampledState zero_mode_discrete(Branch branch, const FieldConfig& fields, const PositionGrid& grid);

/// Continuous-regime eigenstate at the given energy, built from parabolic cylinder
/// functions on the e^{i pi/4} ray and scaled so the upper component is 1 at x = 0
/// (the lower one if the upper vanishes there). Tagged delta-normalized.
SampledState spinor_continuous(Branch branch, double energy, const FieldConfig& fields,
                               const PositionGrid& grid);

/// Max over interior grid points of |H psi - E psi| / max|psi|, with H applied by
/// fourth-order central differences.
double eigen_residual(const SampledState& state, const FieldConfig& fields);

// -- polarization -------------------------------------------------------------------

struct Polarization {
  cplx sigma_minus_expectation;  ///< <sigma_x> + i <sigma_y>
  std::array<double, 3> bloch_vector;
};

/// Below the transition <sigma_-> = i beta with beta = 2 eps/lambda and the
/// state sits at z = -sqrt(1 - beta^2). Above it <sigma_-> = +-sqrt(1 - b^2) + i b
/// with b = lambda/(2 eps) on the equator; the branch selects the sign (Minus: +).
/// For eta > 0 the reduced parameters are used. Throws RegimeError at the transition.
Polarization polarization(const ModelParams& params, Branch branch = Branch::Minus);

/// Polarization of a sampled spinor by trapezoid quadrature.
Polarization polarization_from_state(const SampledState& state);

/// Polarization of a normalized Fock (x) spin vector in the interleaved ordering.
Polarization polarization_from_vector(const std::vector<cplx>& vector);

/// Polarization of the zero-quasienergy eigenvector of the truncated H0 of the
/// reduced parameters. The near-zero cluster also holds a truncation-edge state;
/// the member with the lowest mean photon number is taken.
Polarization numeric_polarization(const ModelParams& params, int n_max = 300);

}  // namespace quasicollapse

#endif  // QUASICOLLAPSE_ANALYTIC_HPP
