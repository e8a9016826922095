#ifndef QUASICOLLAPSE_EXPERIMENTS_HPP
#define QUASICOLLAPSE_EXPERIMENTS_HPP

// Experiment drivers behind the quasicollapse command line: configuration,
// parameter sweeps and tabular / JSON output.

#include "quasicollapse/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace quasicollapse {

enum class Command { Spectrum, CollapseFit, Polarization, Verify, Dirac };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Command command);
/// Throws ConfigError for unknown names.
Command parse_command(std::string_view name);
OutputFormat parse_format(std::string_view name);

/// Exit codes of the command line.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitVerification = 2;
inline constexpr int kExitConvergence = 3;

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a run needs converged levels and the truncation cap was hit.
class ConvergenceCapError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// -- configuration ------------------------------------------------------------------

struct Setting {
  std::string value;
  std::string origin;  ///< "path:line" or "--flag"
};

using Settings = std::map<std::string, Setting>;

/// Flat `key = value` text, one pair per line, `#` starts a comment.
Settings parse_settings(std::istream& in, const std::string& source);
/// Later values win.
void apply_overrides(Settings& settings, const std::vector<std::pair<std::string, std::string>>& overrides);

struct SweepGrid {
  double start = 0.0;
  double stop = 0.45;
  int count = 19;

  std::vector<double> points() const;
  double step() const { return (stop - start) / (count - 1); }
};

struct RunConfig {
  Command command = Command::Spectrum;

  double lambda = 1.0;
  /// Drive of the diagonalized Hamiltonian: epsilon for eta = 0, epsilon' otherwise.
  double epsilon = 0.1;
  double eta = 0.0;
  SweepGrid sweep;

  int levels = 10;
  int start_n_max = 64;
  int cap_n_max = 4096;
  double tolerance = 1e-8;
  bool require_convergence = false;
  double exclude_critical = 0.02;  ///< relative half-width around the critical drive left out of fits
  int threads = 0;                 ///< 0: available parallelism

  int polarization_n_max = 300;

  double interior_fraction = 0.25;
  int verify_n_max = 256;
  bool flip_squeeze_sign = false;
  std::uint64_t seed = 20240521;

  double E = 0.0;
  double B = 1.0;
  double k2 = 0.0;
  double k3 = 0.0;
  int n_levels = 4;
  std::optional<Regime> expected_regime;

  /// Model parameters for a given H_eta drive.
  ModelParams params_for_drive(double drive) const;
};

/// Builds and validates a configuration. Unknown keys and malformed values raise
/// ConfigError naming the key and where it came from.
RunConfig make_run_config(Command command, const Settings& settings);

/// Worker count: QUASICOLLAPSE_THREADS if set, else config.threads, else hardware.
int resolve_threads(const RunConfig& config);

/// Calls task(i) for i in [0, count) on up to `threads` workers. Results keep index
/// order; the first exception by index is rethrown.
template <typename Result>
std::vector<Result> parallel_map(int count, int threads, const std::function<Result(int)>& task);

// -- outputs ------------------------------------------------------------------------

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct CommandResult {
  Table table;
  nlohmann::json json;
  int exit_code = kExitOk;
};

/// Header row, comma separated, LF line endings, shortest round-trip floats.
void write_csv(std::ostream& out, const Table& table);
nlohmann::json table_to_json(const Table& table);
void write_result(std::ostream& out, const CommandResult& result, OutputFormat format);

// -- experiments --------------------------------------------------------------------

struct CollapsePoint {
  double epsilon = 0.0;
  double gap = 0.0;
  bool trusted = false;
  bool used = false;
};

struct CollapseReport {
  std::vector<CollapsePoint> points;
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  double ci_low = 0.0;   ///< 95% confidence interval on the exponent
  double ci_high = 0.0;
  double fit_residual = 0.0;  ///< rms residual of the log-log fit
  int points_used = 0;
  double critical_expected = 0.0;
  double critical_detected = 0.0;
  double grid_step = 0.0;
};

/// Trusted quasienergies of H_eta nearest zero over the drive grid.
CommandResult cmd_spectrum(const RunConfig& config);

/// Least-squares slope of log gap against log(1 - (drive/critical)^2) over the
/// trusted discrete-regime points outside the critical neighborhood, plus a critical
/// drive estimate from the zero of gap^{1/p} as a linear function of drive^2.
CollapseReport collapse_fit(const RunConfig& config);
CommandResult cmd_collapse_fit(const RunConfig& config);

CommandResult cmd_polarization(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);
CommandResult cmd_dirac(const RunConfig& config);

CommandResult run_command(const RunConfig& config);

}  // namespace quasicollapse

#include "quasicollapse/parallel_map.ipp"

#endif  // QUASICOLLAPSE_EXPERIMENTS_HPP
