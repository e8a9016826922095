#include "quasicollapse/experiments.hpp"

#include "quasicollapse/analytic.hpp"
#include "quasicollapse/eigensolver.hpp"
#include "quasicollapse/fock.hpp"
#include "quasicollapse/format.hpp"
#include "quasicollapse/special_functions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace quasicollapse {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::string_view to_string(Command command)
{
  switch (command) {
    case Command::Spectrum: return "spectrum";
    case Command::CollapseFit: return "collapse-fit";
    case Command::Polarization: return "polarization";
    case Command::Verify: return "verify";
    case Command::Dirac: return "dirac";
  }
  return "unknown";
}

Command parse_command(std::string_view name)
{
  for (Command c : {Command::Spectrum, Command::CollapseFit, Command::Polarization, Command::Verify, Command::Dirac})
    if (to_string(c) == name) return c;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

OutputFormat parse_format(std::string_view name)
{
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

// -- configuration ------------------------------------------------------------------

Settings parse_settings(std::istream& in, const std::string& source)
{
  Settings settings;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string origin = source + ":" + std::to_string(number);
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ": empty key");
    if (value.empty()) throw ConfigError(origin + ": key '" + key + "' has no value");
    settings[key] = {value, origin};
  }
  return settings;
}

void apply_overrides(Settings& settings, const std::vector<std::pair<std::string, std::string>>& overrides)
{
  for (const auto& [key, value] : overrides) settings[key] = {value, "--" + key};
}

std::vector<double> SweepGrid::points() const
{
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = (start * (count - 1 - i) + stop * i) / (count - 1);
  out.back() = stop;
  return out;
}

ModelParams RunConfig::params_for_drive(double drive) const
{
  return ModelParams::from_scaled_drive(lambda, drive, eta);
}

namespace {

class SettingReader {
public:
  explicit SettingReader(const Settings& settings) : settings_(settings) {}

  void read(const std::string& key, double& target)
  {
    if (const Setting* s = find(key)) {
      double v = 0.0;
      const char* end = s->value.data() + s->value.size();
      const auto r = std::from_chars(s->value.data(), end, v);
      if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) fail(*s, key, "expected a finite number");
      target = v;
    }
  }

  template <typename Int>
  void read_int(const std::string& key, Int& target)
  {
    if (const Setting* s = find(key)) {
      Int v = 0;
      const char* end = s->value.data() + s->value.size();
      const auto r = std::from_chars(s->value.data(), end, v);
      if (r.ec != std::errc() || r.ptr != end) fail(*s, key, "expected an integer");
      target = v;
    }
  }

  void read(const std::string& key, bool& target)
  {
    if (const Setting* s = find(key)) {
      if (s->value == "true" || s->value == "1") target = true;
      else if (s->value == "false" || s->value == "0") target = false;
      else fail(*s, key, "expected true or false");
    }
  }

  void read(const std::string& key, std::optional<Regime>& target)
  {
    if (const Setting* s = find(key)) {
      for (Regime r : {Regime::Discrete, Regime::Critical, Regime::Continuous})
        if (to_string(r) == s->value) {
          target = r;
          return;
        }
      fail(*s, key, "expected discrete, critical or continuous");
    }
  }

  void require(bool ok, const std::string& key, const std::string& problem) const
  {
    if (ok) return;
    const auto it = settings_.find(key);
    if (it != settings_.end()) fail(it->second, key, problem);
    throw ConfigError("key '" + key + "': " + problem);
  }

  void check_unknown() const
  {
    for (const auto& [key, setting] : settings_)
      if (!seen_.count(key) && key != "out" && key != "format" && key != "config")
        throw ConfigError(setting.origin + ": unknown key '" + key + "'");
  }

private:
  const Setting* find(const std::string& key)
  {
    seen_.insert(key);
    const auto it = settings_.find(key);
    return it == settings_.end() ? nullptr : &it->second;
  }

  [[noreturn]] static void fail(const Setting& s, const std::string& key, const std::string& problem)
  {
    throw ConfigError(s.origin + ": key '" + key + "' = '" + s.value + "': " + problem);
  }

  const Settings& settings_;
  std::set<std::string> seen_;
};

}  // namespace

RunConfig make_run_config(Command command, const Settings& settings)
{
  RunConfig c;
  c.command = command;
  if (command == Command::Verify) c.eta = 0.5;
  SettingReader r(settings);
  r.read("lambda", c.lambda);
  r.read("epsilon", c.epsilon);
  r.read("eta", c.eta);
  r.read("epsilon_start", c.sweep.start);
  r.read("epsilon_stop", c.sweep.stop);
  r.read_int("epsilon_count", c.sweep.count);
  r.read_int("levels", c.levels);
  r.read_int("start_n_max", c.start_n_max);
  r.read_int("n_max", c.cap_n_max);
  r.read("tolerance", c.tolerance);
  r.read("require_convergence", c.require_convergence);
  r.read("exclude_critical", c.exclude_critical);
  r.read_int("threads", c.threads);
  r.read_int("polarization_n_max", c.polarization_n_max);
  r.read("interior_fraction", c.interior_fraction);
  r.read_int("verify_n_max", c.verify_n_max);
  r.read("flip_squeeze_sign", c.flip_squeeze_sign);
  r.read_int("seed", c.seed);
  r.read("E", c.E);
  r.read("B", c.B);
  r.read("k2", c.k2);
  r.read("k3", c.k3);
  r.read_int("n_levels", c.n_levels);
  r.read("regime", c.expected_regime);
  r.check_unknown();

  r.require(c.lambda > 0.0, "lambda", "must be > 0");
  r.require(c.epsilon >= 0.0, "epsilon", "must be >= 0");
  r.require(c.eta >= 0.0 && c.eta < 1.0, "eta", "must lie in [0, 1)");
  r.require(c.sweep.count >= 2, "epsilon_count", "sweep count must be >= 2");
  r.require(c.sweep.start >= 0.0, "epsilon_start", "must be >= 0");
  r.require(c.sweep.stop > c.sweep.start, "epsilon_stop", "range must be ordered (stop > start)");
  r.require(c.levels >= 1, "levels", "must be >= 1");
  r.require(c.start_n_max >= 1, "start_n_max", "must be >= 1");
  r.require(c.cap_n_max >= c.start_n_max, "n_max", "must be >= start_n_max");
  r.require(c.tolerance > 0.0, "tolerance", "must be > 0");
  r.require(c.exclude_critical >= 0.0 && c.exclude_critical < 1.0, "exclude_critical", "must lie in [0, 1)");
  r.require(c.threads >= 0, "threads", "must be >= 0");
  r.require(c.polarization_n_max >= 8, "polarization_n_max", "must be >= 8");
  r.require(c.interior_fraction > 0.0 && c.interior_fraction <= 1.0, "interior_fraction", "must lie in (0, 1]");
  r.require(c.verify_n_max >= 8, "verify_n_max", "must be >= 8");
  r.require(c.n_levels >= 1, "n_levels", "must be >= 1");
  r.require(c.E >= 0.0 && c.B >= 0.0 && (c.E > 0.0 || c.B > 0.0), "E", "fields must be >= 0 and not both zero");
  return c;
}

int resolve_threads(const RunConfig& config)
{
  if (const char* env = std::getenv("QUASICOLLAPSE_THREADS")) {
    int v = 0;
    const std::string_view s(env);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || v < 1)
      throw ConfigError("QUASICOLLAPSE_THREADS must be a positive integer");
    return v;
  }
  if (config.threads > 0) return config.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

// -- outputs ------------------------------------------------------------------------

namespace {

std::string cell_text(const Cell& cell)
{
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      cell);
}

nlohmann::json cell_json(const Cell& cell)
{
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      cell);
}

}  // namespace

void write_csv(std::ostream& out, const Table& table)
{
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

nlohmann::json table_to_json(const Table& table)
{
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

void write_result(std::ostream& out, const CommandResult& result, OutputFormat format)
{
  if (format == OutputFormat::Csv) {
    write_csv(out, result.table);
  } else {
    out << result.json.dump(2) << '\n';
  }
}

// -- spectrum -------------------------------------------------------------------------

namespace {

ConvergedSpectrum sweep_point(const RunConfig& config, const ModelParams& params, int levels)
{
  ConvergenceOptions options;
  options.start_n_max = std::min(config.start_n_max, config.cap_n_max);
  options.cap_n_max = config.cap_n_max;
  options.tolerance = config.tolerance;
  return converged_spectrum(
      [params](int n_max) { return to_real_band(gauge_to_real(build_h_eta(params, BasisSpec(n_max)))); }, levels,
      options);
}

nlohmann::json with_command(const RunConfig& config, nlohmann::json body)
{
  body["command"] = std::string(to_string(config.command));
  return body;
}

}  // namespace

CommandResult cmd_spectrum(const RunConfig& config)
{
  const auto grid = config.sweep.points();
  const auto spectra = parallel_map<ConvergedSpectrum>(
      static_cast<int>(grid.size()), resolve_threads(config),
      [&](int i) { return sweep_point(config, config.params_for_drive(grid[i]), config.levels); });

  CommandResult result;
  result.table.columns = {"epsilon", "level_index", "quasienergy", "trusted_flag"};
  bool all_converged = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ConvergenceCertificate& cert = spectra[i].certificate;
    all_converged = all_converged && cert.converged;
    for (Eigen::Index k = 0; k < cert.levels.size(); ++k)
      result.table.rows.push_back({grid[i], static_cast<long long>(k), cert.levels(k), cert.trusted(k)});
  }
  result.json = with_command(config, table_to_json(result.table));
  if (config.require_convergence && !all_converged) result.exit_code = kExitConvergence;
  return result;
}

// -- collapse fit ---------------------------------------------------------------------

namespace {

// Two-sided 95% Student t quantile (Cornish-Fisher expansion for dof >= 3).
double t_quantile_975(int dof)
{
  if (dof <= 1) return 12.706204736;
  if (dof == 2) return 4.302652730;
  const double z = 1.959963985;
  const double v = dof;
  const double g1 = (std::pow(z, 3) + z) / 4.0;
  const double g2 = (5 * std::pow(z, 5) + 16 * std::pow(z, 3) + 3 * z) / 96.0;
  const double g3 = (3 * std::pow(z, 7) + 19 * std::pow(z, 5) + 17 * std::pow(z, 3) - 15 * z) / 384.0;
  return z + g1 / v + g2 / (v * v) + g3 / (v * v * v);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("collapse-fit: drive grid is degenerate");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) ss += std::pow(y[i] - f.intercept - f.slope * x[i], 2);
  f.rms = std::sqrt(ss / n);
  f.slope_stderr = x.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
  return f;
}

}  // namespace

CollapseReport collapse_fit(const RunConfig& config)
{
  if (config.sweep.count < 3) throw ConfigError("collapse-fit: the drive grid needs at least 3 points");
  const auto grid = config.sweep.points();
  const ModelParams reference = config.params_for_drive(0.0);
  const double critical = critical_scaled_drive(reference.lambda_prime(), config.eta);
  const double cutoff = (1.0 - config.exclude_critical) * critical;
  const int levels = std::max(4, std::min(config.levels, 6));

  const auto points = parallel_map<CollapsePoint>(
      static_cast<int>(grid.size()), resolve_threads(config), [&](int i) {
        CollapsePoint p;
        p.epsilon = grid[i];
        p.gap = kNaN;
        if (!(grid[i] < cutoff)) return p;
        const auto spec = sweep_point(config, config.params_for_drive(grid[i]), levels);
        const double floor = 1e-6 * config.lambda;
        for (Eigen::Index k = 0; k < spec.certificate.levels.size(); ++k) {
          const double level = spec.certificate.levels(k);
          if (level > floor) {
            p.gap = level;
            p.trusted = spec.certificate.trusted(k);
            break;
          }
        }
        p.used = p.trusted;
        return p;
      });

  CollapseReport report;
  report.points = points;
  report.critical_expected = critical;
  report.grid_step = config.sweep.step();

  std::vector<double> x, y, e2;
  bool missing = false;
  for (const auto& p : points) {
    if (p.epsilon < cutoff && !p.trusted) missing = true;
    if (!p.used) continue;
    const double ratio = p.epsilon / critical;
    x.push_back(std::log1p(-ratio * ratio));
    y.push_back(std::log(p.gap));
    e2.push_back(p.epsilon * p.epsilon);
  }
  if (x.size() < 3) throw ConvergenceCapError("collapse-fit: fewer than 3 trusted points inside the discrete regime");
  if (missing && config.require_convergence)
    throw ConvergenceCapError("collapse-fit: truncation cap reached before convergence at some grid point");

  const LineFit fit = fit_line(x, y);
  report.exponent = fit.slope;
  report.exponent_stderr = fit.slope_stderr;
  const double t = t_quantile_975(static_cast<int>(x.size()) - 2);
  report.ci_low = fit.slope - t * fit.slope_stderr;
  report.ci_high = fit.slope + t * fit.slope_stderr;
  report.fit_residual = fit.rms;
  report.points_used = static_cast<int>(x.size());

  std::vector<double> g;
  for (double v : y) g.push_back(std::exp(v / fit.slope));
  const LineFit linear = fit_line(e2, g);
  const double root2 = -linear.intercept / linear.slope;
  report.critical_detected = root2 > 0.0 ? std::sqrt(root2) : kNaN;
  return report;
}

CommandResult cmd_collapse_fit(const RunConfig& config)
{
  CommandResult result;
  const CollapseReport report = collapse_fit(config);
  result.table.columns = {"epsilon", "gap", "trusted", "used_in_fit"};
  for (const auto& p : report.points) result.table.rows.push_back({p.epsilon, p.gap, p.trusted, p.used});
  auto number = [](double v) -> nlohmann::json { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  result.json = with_command(config, {{"exponent", number(report.exponent)},
                                      {"exponent_stderr", number(report.exponent_stderr)},
                                      {"confidence_interval", {number(report.ci_low), number(report.ci_high)}},
                                      {"fit_residual", number(report.fit_residual)},
                                      {"points_used", report.points_used},
                                      {"critical_expected", number(report.critical_expected)},
                                      {"critical_detected", number(report.critical_detected)},
                                      {"grid_step", number(report.grid_step)},
                                      {"points", table_to_json(result.table)["rows"]}});
  return result;
}

// -- polarization ---------------------------------------------------------------------

CommandResult cmd_polarization(const RunConfig& config)
{
  const auto grid = config.sweep.points();
  struct Rows {
    std::vector<std::vector<Cell>> rows;
  };
  const auto blocks = parallel_map<Rows>(static_cast<int>(grid.size()), resolve_threads(config), [&](int i) {
    Rows out;
    const double drive = grid[i];
    const ModelParams params = config.params_for_drive(drive);
    const Regime regime = classify_regime(params);
    if (regime == Regime::Critical) return out;
    const double ratio = params.drive_ratio();
    if (regime == Regime::Discrete) {
      const cplx p = polarization(params).sigma_minus_expectation;
      out.rows.push_back({drive, p.real(), p.imag(), std::string("analytic")});
      if (ratio < 1.0 - config.exclude_critical) {
        const cplx q = numeric_polarization(params, config.polarization_n_max).sigma_minus_expectation;
        out.rows.push_back({drive, q.real(), q.imag(), std::string("numeric")});
      }
    } else {
      for (Branch b : {Branch::Minus, Branch::Plus}) {
        const cplx p = polarization(params, b).sigma_minus_expectation;
        out.rows.push_back({drive, p.real(), p.imag(), std::string("analytic")});
      }
    }
    return out;
  });

  CommandResult result;
  result.table.columns = {"epsilon", "re_sigma", "im_sigma", "source"};
  for (const auto& block : blocks)
    for (const auto& row : block.rows) result.table.rows.push_back(row);
  result.json = with_command(config, table_to_json(result.table));
  return result;
}

// -- verify -----------------------------------------------------------------------------

namespace {

struct Check {
  std::string name;
  double residual;
  double tolerance;
  bool pass;
};

Check make_check(std::string name, double residual, double tolerance)
{
  return {std::move(name), residual, tolerance, residual <= tolerance};
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<Check> squeeze_checks(const RunConfig& config)
{
  const ModelParams params(config.lambda, config.epsilon, config.eta);
  const SqueezeSign sign = config.flip_squeeze_sign ? SqueezeSign::Flipped : SqueezeSign::Pinned;
  std::vector<double> residuals;
  for (int n : {config.verify_n_max / 4, config.verify_n_max / 2, config.verify_n_max})
    residuals.push_back(verify_squeeze_identity(params, BasisSpec(n), config.interior_fraction, sign).relative());
  double increase = 0.0;
  for (std::size_t i = 1; i < residuals.size(); ++i) increase = std::max(increase, residuals[i] - residuals[i - 1]);

  const ModelParams reduced(config.lambda, config.epsilon);
  const BasisSpec basis(config.verify_n_max);
  const auto a = eig_banded_symmetric(to_real_band(gauge_to_real(build_h_eta(params, basis))));
  const auto b = eig_banded_symmetric(to_real_band(gauge_to_real(build_h0(reduced, basis))));
  const auto ia = levels_nearest_zero(a.eigenvalues, 8);
  const auto ib = levels_nearest_zero(b.eigenvalues, 8);
  double iso = 0.0;
  for (std::size_t i = 0; i < ia.size(); ++i) iso = std::max(iso, std::abs(a.eigenvalues(ia[i]) - b.eigenvalues(ib[i])));

  return {make_check("squeeze_identity", residuals.back(), 1e-6),
          make_check("squeeze_residual_monotone", increase, 0.0),
          make_check("squeeze_isospectral", iso, 1e-6)};
}

std::vector<Check> dictionary_checks(const RunConfig& config)
{
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double identity = 0.0, boost = 0.0, scaling = 0.0;
  for (int draw = 0; draw < 200; ++draw) {
    const double lambda = 0.1 + 4.9 * unit(rng);
    const double epsilon = 0.4999 * lambda * unit(rng);
    const int n = static_cast<int>(unit(rng) * 20);
    const Sign sign = unit(rng) < 0.5 ? Sign::Minus : Sign::Plus;
    const ModelParams params(lambda, epsilon);
    identity = std::max(identity, relative(dirac_energy_discrete(n, sign, optics_to_fields(params)),
                                           quasienergy_jc(n, sign, params)));

    const double b = 0.1 + 4.9 * unit(rng);
    const FieldConfig fields{0.999 * b * unit(rng), b, 4.0 * unit(rng) - 2.0, 4.0 * unit(rng) - 2.0};
    boost = std::max(boost, relative(dirac_energy_via_boost(n, sign, fields), dirac_energy_discrete(n, sign, fields)));
  }
  const ModelParams p(config.lambda, std::min(config.epsilon, 0.49 * config.lambda));
  const double expected = std::pow(1.0 - std::pow(p.drive_ratio(), 2), 0.75);
  const ModelParams free_params(p.lambda(), 0.0);
  for (int n = 0; n <= 50; ++n)
    scaling = std::max(scaling, relative(quasienergy_jc(n, Sign::Plus, p) / quasienergy_jc(n, Sign::Plus, free_params),
                                         expected));
  return {make_check("optics_dirac_identity", identity, 1e-12), make_check("boost_consistency", boost, 1e-12),
          make_check("collapse_scaling", scaling, 1e-12)};
}

std::vector<Check> polarization_checks(const RunConfig& config)
{
  const ModelParams below(config.lambda, std::min(config.epsilon, 0.45 * config.lambda));
  const FieldConfig fields = optics_to_fields(below);
  const double width = 12.0 / std::sqrt(fields.B * std::sqrt(1.0 - std::pow(fields.beta_B(), 2)));
  const auto zero = zero_mode_discrete(Branch::Minus, fields, {-width, width, 4001});
  const cplx p = polarization_from_state(zero).sigma_minus_expectation;
  const double zero_residual = std::abs(p - cplx(0.0, below.drive_ratio()));

  double modulus = 0.0;
  for (double factor : {1.01, 1.5, 2.0, 10.0}) {
    const ModelParams above(config.lambda, 0.5 * config.lambda * factor);
    for (Branch b : {Branch::Minus, Branch::Plus})
      modulus = std::max(modulus, std::abs(std::abs(polarization(above, b).sigma_minus_expectation) - 1.0));
  }
  return {make_check("zero_mode_polarization", zero_residual, 1e-10),
          make_check("equator_modulus", modulus, 1e-12)};
}

std::vector<Check> special_function_checks()
{
  double d0 = 0.0;
  for (int k = 0; k < 20; ++k) {
    const cplx xi = std::polar(0.3 + 0.25 * k, 0.37 * k);
    d0 = std::max(d0, std::abs(pcf_d(0.0, xi) - std::exp(-xi * xi / 4.0)) / std::abs(std::exp(-xi * xi / 4.0)));
  }

  double recurrence = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const cplx a(-2.0 + 0.45 * i, -1.0 + 0.2 * j);
      const cplx xi = std::polar(0.2 + 0.35 * j, -0.6 + 0.15 * i);
      const cplx up = pcf_d(a + 1.0, xi), mid = pcf_d(a, xi), down = pcf_d(a - 1.0, xi);
      const double scale = std::max({std::abs(up), std::abs(xi * mid), std::abs(a * down)});
      recurrence = std::max(recurrence, std::abs(up - xi * mid + a * down) / scale);
    }
  }

  double erfc_gap = 0.0;
  for (int k = 0; k <= 30; ++k) {
    const double x = 0.1 * k;
    const double oracle = std::sqrt(std::numbers::pi / 2.0) * std::exp(x * x / 4.0) * std::erfc(x / std::sqrt(2.0));
    erfc_gap = std::max(erfc_gap, std::abs(pcf_d(-1.0, x) - oracle));
  }

  double hermite = 0.0;
  double factorial = 1.0;
  for (int n = 0; n <= 5; ++n) {
    if (n > 0) factorial *= n;
    for (int k = 0; k <= 60; ++k) {
      const double x = -3.0 + 0.1 * k;
      const double oracle = std::sqrt(factorial * std::sqrt(std::numbers::pi)) * hermite_psi(n, x / std::sqrt(2.0));
      hermite = std::max(hermite, std::abs(pcf_d(double(n), x) - oracle));
    }
  }
  return {make_check("pcf_d0_gaussian", d0, 1e-12), make_check("pcf_recurrence", recurrence, 1e-8),
          make_check("pcf_erfc", erfc_gap, 1e-8), make_check("pcf_hermite", hermite, 1e-9)};
}

}  // namespace

CommandResult cmd_verify(const RunConfig& config)
{
  std::vector<Check> checks;
  for (auto& group : {squeeze_checks(config), dictionary_checks(config), polarization_checks(config),
                      special_function_checks()})
    checks.insert(checks.end(), group.begin(), group.end());

  CommandResult result;
  result.table.columns = {"name", "residual", "tolerance", "pass"};
  nlohmann::json items = nlohmann::json::array();
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.pass;
    result.table.rows.push_back({c.name, c.residual, c.tolerance, c.pass});
    items.push_back({{"name", c.name},
                     {"residual", std::isfinite(c.residual) ? nlohmann::json(c.residual) : nlohmann::json(nullptr)},
                     {"tolerance", c.tolerance},
                     {"pass", c.pass}});
  }
  result.exit_code = ok ? kExitOk : kExitVerification;
  result.json = {{"suite", "identities"}, {"checks", std::move(items)}, {"exit_code", result.exit_code}};
  return result;
}

// -- dirac ------------------------------------------------------------------------------

CommandResult cmd_dirac(const RunConfig& config)
{
  const FieldConfig fields{config.E, config.B, config.k2, config.k3};
  fields.validate();
  const Regime regime = classify_regime(fields);
  if (config.expected_regime && *config.expected_regime != regime)
    throw ConfigError("dirac: requested a " + std::string(to_string(*config.expected_regime)) +
                      " table but the fields are " + std::string(to_string(regime)));

  CommandResult result;
  result.table.columns = {"n", "k2", "k3", "E", "B", "energy_plus", "energy_minus", "regime"};
  for (int n = 0; n < config.n_levels; ++n) {
    double plus = kNaN, minus = kNaN;
    if (regime == Regime::Discrete) {
      plus = dirac_energy_discrete(n, Sign::Plus, fields);
      minus = dirac_energy_discrete(n, Sign::Minus, fields);
    }
    result.table.rows.push_back({static_cast<long long>(n), fields.k2, fields.k3, fields.E, fields.B, plus, minus,
                                 std::string(to_string(regime))});
  }
  result.json = with_command(config, table_to_json(result.table));
  return result;
}

CommandResult run_command(const RunConfig& config)
{
  switch (config.command) {
    case Command::Spectrum: return cmd_spectrum(config);
    case Command::CollapseFit: return cmd_collapse_fit(config);
    case Command::Polarization: return cmd_polarization(config);
    case Command::Verify: return cmd_verify(config);
    case Command::Dirac: return cmd_dirac(config);
  }
  throw ConfigError("unknown command");
}

}  // namespace quasicollapse
