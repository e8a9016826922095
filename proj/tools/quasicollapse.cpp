// quasicollapse <spectrum|collapse-fit|polarization|verify|dirac> --config <path>
//               [--key value ...] --out <path> --format <csv|json>

#include "quasicollapse/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace quasicollapse;

namespace {

std::vector<std::pair<std::string, std::string>> parse_extras(const std::vector<std::string>& extras)
{
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() < 3) throw ConfigError("unexpected argument '" + arg + "'");
    const std::string body = arg.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else {
      if (i + 1 >= extras.size()) throw ConfigError("flag '" + arg + "' needs a value");
      out.emplace_back(body, extras[++i]);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Quasienergy spectra, spectral collapse and Dirac-analogue checks for the driven JC model"};
  std::string command_name, config_path, out_path, format_name;
  app.add_option("command", command_name, "spectrum, collapse-fit, polarization, verify or dirac")->required();
  app.add_option("--config", config_path, "flat key=value configuration file");
  app.add_option("--out", out_path, "output file (default: standard output)");
  app.add_option("--format", format_name, "csv or json");
  app.allow_extras();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Command command = parse_command(command_name);
    Settings settings;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
      settings = parse_settings(in, config_path);
    }
    apply_overrides(settings, parse_extras(app.remaining()));
    if (out_path.empty() && settings.count("out")) out_path = settings.at("out").value;
    if (format_name.empty())
      format_name = settings.count("format") ? settings.at("format").value
                                             : (command == Command::Verify ? "json" : "csv");
    const OutputFormat format = parse_format(format_name);
    const RunConfig config = make_run_config(command, settings);

    const CommandResult result = run_command(config);
    std::ostringstream buffer;
    write_result(buffer, result, format);
    if (out_path.empty() || out_path == "-") {
      std::cout << buffer.str();
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw ConfigError("cannot write output file '" + out_path + "'");
      out << buffer.str();
    }
    if (result.exit_code == kExitConvergence) std::cerr << "quasicollapse: truncation cap reached before convergence\n";
    if (result.exit_code == kExitVerification) std::cerr << "quasicollapse: verification failed\n";
    return result.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "quasicollapse: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConvergenceCapError& e) {
    std::cerr << "quasicollapse: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "quasicollapse: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "quasicollapse: " << e.what() << '\n';
    return kExitConfig;
  }
}
