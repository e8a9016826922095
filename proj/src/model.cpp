#include "quasicollapse/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace quasicollapse {

std::string_view to_string(Regime regime)
{
  switch (regime) {
    case Regime::Discrete: return "discrete";
    case Regime::Critical: return "critical";
    case Regime::Continuous: return "continuous";
  }
  return "unknown";
}

ModelParams::ModelParams(double lambda, double epsilon, double eta)
    : lambda_(lambda), epsilon_(epsilon), eta_(eta)
{
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("ModelParams: lambda must be positive and finite");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("ModelParams: epsilon must be non-negative and finite");
  if (!(eta >= 0.0 && eta < 1.0))
    throw std::invalid_argument(
        "ModelParams: eta must lie in [0, 1); the squeeze map diverges at eta = 1");
  lambda_prime_ = lambda_ / std::sqrt(1.0 - eta_ * eta_);
  epsilon_prime_ = epsilon_ * (lambda_prime_ / lambda_) * (1.0 + eta_);
}

ModelParams ModelParams::from_scaled_drive(double lambda, double epsilon_prime, double eta)
{
  if (!(eta >= 0.0 && eta < 1.0))
    throw std::invalid_argument("ModelParams: eta must lie in [0, 1)");
  return {lambda, epsilon_prime * std::sqrt((1.0 - eta) / (1.0 + eta)), eta};
}

void FieldConfig::validate() const
{
  if (!(E >= 0.0) || !(B >= 0.0) || !std::isfinite(E) || !std::isfinite(B))
    throw std::invalid_argument("FieldConfig: field magnitudes must be finite and >= 0");
  if (E == 0.0 && B == 0.0)
    throw std::invalid_argument("FieldConfig: E and B cannot both vanish");
  if (!std::isfinite(k2) || !std::isfinite(k3))
    throw std::invalid_argument("FieldConfig: wavenumbers must be finite");
}

double FieldConfig::beta_B() const
{
  if (!(B > 0.0)) throw std::domain_error("beta_B requires B > 0");
  return E / B;
}

double FieldConfig::beta_E() const
{
  if (!(E > 0.0)) throw std::domain_error("beta_E requires E > 0");
  return B / E;
}

double FieldConfig::magnetic_length() const
{
  if (!(B > 0.0)) throw std::domain_error("magnetic length requires B > 0");
  return 1.0 / std::sqrt(B);
}

double FieldConfig::electric_length() const
{
  if (!(E > 0.0)) throw std::domain_error("electric length requires E > 0");
  return 1.0 / std::sqrt(E);
}

double critical_scaled_drive(double lambda_prime, double eta)
{
  if (!(lambda_prime > 0.0)) throw std::invalid_argument("critical drive: lambda' must be > 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("critical drive: eta outside [0, 1]");
  return lambda_prime * (1.0 + eta) / 2.0;
}

double critical_drive(const ModelParams& params)
{
  return critical_scaled_drive(params.lambda_prime(), params.eta());
}

double squeeze_parameter(double eta)
{
  if (eta >= 1.0) throw std::domain_error("squeeze parameter diverges at eta = 1");
  if (!(eta >= 0.0)) throw std::invalid_argument("squeeze parameter: eta must be >= 0");
  // e^z = cosh z + sinh z = (1 + eta) / sqrt(1 - eta^2)
  return std::atanh(eta);
}

double squeeze_parameter(const ModelParams& params) { return squeeze_parameter(params.eta()); }

namespace {

Regime classify_ratio(double ratio, double tolerance)
{
  if (std::abs(ratio - 1.0) <= tolerance) return Regime::Critical;
  return ratio < 1.0 ? Regime::Discrete : Regime::Continuous;
}

}  // namespace

Regime classify_regime(const ModelParams& params, double tolerance)
{
  return classify_ratio(params.drive_ratio(), tolerance);
}

Regime classify_regime(const FieldConfig& fields, double tolerance)
{
  fields.validate();
  if (fields.B == 0.0) return Regime::Continuous;
  return classify_ratio(fields.E / fields.B, tolerance);
}

FieldConfig optics_to_fields(const ModelParams& params)
{
  if (params.eta() != 0.0)
    throw std::invalid_argument(
        "optics_to_fields: eta != 0; reduce H_eta to H0 with the squeeze map first");
  // lambda = sqrt(2) B l_B = sqrt(2B), epsilon = E l_B / sqrt(2) = E / lambda
  FieldConfig fields;
  fields.B = params.lambda() * params.lambda() / 2.0;
  fields.E = params.epsilon() * params.lambda();
  return fields;
}

ModelParams fields_to_optics(const FieldConfig& fields)
{
  fields.validate();
  if (!(fields.B > 0.0)) throw std::domain_error("fields_to_optics requires B > 0");
  const double lambda = std::sqrt(2.0 * fields.B);
  return {lambda, fields.E / lambda, 0.0};
}

InvariantLength invariant_length(const FieldConfig& fields)
{
  fields.validate();
  const double invariant = fields.B * fields.B - fields.E * fields.E;
  if (invariant == 0.0) return {LengthKind::Critical, std::numeric_limits<double>::infinity()};
  const double magnitude = 1.0 / std::sqrt(std::sqrt(std::abs(invariant)));
  return {invariant > 0.0 ? LengthKind::Real : LengthKind::Complex, magnitude};
}

}  // namespace quasicollapse
