#ifndef QUASICOLLAPSE_MODEL_HPP
#define QUASICOLLAPSE_MODEL_HPP

// Parameter algebra for the driven Jaynes-Cummings(-Rabi) model and its
// charged-Dirac-particle dictionary. Units: hbar = c = e = 1.

#include <optional>
#include <string_view>

namespace quasicollapse {

/// Default tolerance on the ratio drive / critical drive used to call a point critical.
inline constexpr double kCriticalTolerance = 1e-12;

enum class Regime { Discrete, Critical, Continuous };

std::string_view to_string(Regime regime);

/// Coupling lambda, drive epsilon and counter-rotating weight eta of the reduced
/// (eta = 0) model. The scaled coupling lambda' and drive epsilon' that enter
/// H_eta are derived, never supplied:
///   lambda'  = lambda / sqrt(1 - eta^2)
///   epsilon' = epsilon (lambda'/lambda) (1 + eta)
/// so that S(z) H0(lambda, epsilon) S(z)^dagger = H_eta(lambda', epsilon').
class ModelParams {
public:
  /// Throws std::invalid_argument unless lambda > 0, epsilon >= 0 and 0 <= eta < 1.
  ModelParams(double lambda, double epsilon, double eta = 0.0);

  /// Builds the parameters from the drive amplitude epsilon' of H_eta.
  static ModelParams from_scaled_drive(double lambda, double epsilon_prime, double eta);

  double lambda() const { return lambda_; }
  double epsilon() const { return epsilon_; }
  double eta() const { return eta_; }
  double lambda_prime() const { return lambda_prime_; }
  double epsilon_prime() const { return epsilon_prime_; }

  /// Drive amplitude ratio 2 epsilon' / (lambda'(1 + eta)); equals 1 at the transition.
  double drive_ratio() const { return 2.0 * epsilon_ / lambda_; }

  ModelParams with_epsilon(double epsilon) const { return {lambda_, epsilon, eta_}; }

private:
  double lambda_;
  double epsilon_;
  double eta_;
  double lambda_prime_;
  double epsilon_prime_;
};

/// Crossed fields E e1, -B e3 and conserved transverse wavenumbers k2, k3.
struct FieldConfig {
  double E = 0.0;
  double B = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;

  /// Throws std::invalid_argument on negative or doubly vanishing fields.
  void validate() const;

  /// Boost velocity E/B to the frame without electric field. Requires B > 0.
  double beta_B() const;
  /// Boost velocity B/E to the frame without magnetic field. Requires E > 0.
  double beta_E() const;
  /// Magnetic length sqrt(hbar c / e B).
  double magnetic_length() const;
  /// Electric length sqrt(hbar c / e E).
  double electric_length() const;
};

// -- critical drive --------------------------------------------------------------

/// Critical value lambda'(1 + eta)/2 of the H_eta drive for a given scaled coupling.
/// Defined for eta in [0, 1], including the Rabi point eta = 1.
double critical_scaled_drive(double lambda_prime, double eta);

/// Critical value of epsilon' for these parameters; lambda/2 when eta = 0.
double critical_drive(const ModelParams& params);

/// Squeeze parameter z with cosh z = lambda'/lambda and sinh z = eta lambda'/lambda.
/// Throws std::domain_error for eta = 1.
double squeeze_parameter(double eta);
double squeeze_parameter(const ModelParams& params);

Regime classify_regime(const ModelParams& params, double tolerance = kCriticalTolerance);
Regime classify_regime(const FieldConfig& fields, double tolerance = kCriticalTolerance);

// -- optics <-> electromagnetic dictionary ----------------------------------------

/// lambda = sqrt(2) B l_B and epsilon = E l_B / sqrt(2). Requires eta = 0; apply the
/// squeeze reduction first otherwise (std::invalid_argument).
FieldConfig optics_to_fields(const ModelParams& params);

/// Inverse of optics_to_fields; requires B > 0.
ModelParams fields_to_optics(const FieldConfig& fields);

enum class LengthKind { Real, Critical, Complex };

struct InvariantLength {
  LengthKind kind;
  /// (hbar c / e sqrt|B^2 - E^2|)^{1/2}; infinity at the critical point.
  double magnitude;
};

InvariantLength invariant_length(const FieldConfig& fields);

}  // namespace quasicollapse

#endif  // QUASICOLLAPSE_MODEL_HPP
