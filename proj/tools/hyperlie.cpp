// hyperlie: verification suites and small utilities for SO(n+1,1).
//
// Exit codes: 0 success (all checks pass), 1 a check failed, 2 config, IO or
// input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hyperlie/commands.hpp"
#include "hyperlie/verify.hpp"

namespace {

using namespace hyperlie;

std::string config_path(const std::string& given) {
  if (!given.empty()) return given;
  if (const char* env = std::getenv(kConfigEnv)) return env;
  return {};
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text)) throw ConfigError("cannot write '" + path + "'");
}

std::ifstream open_config(const std::string& path) {
  if (path.empty()) throw ConfigError(std::string("no config given (use --config or set ") + kConfigEnv + ")");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return in;
}

int run_verify(const std::string& given) {
  const std::string path = config_path(given);
  const VerifyConfig config = path.empty() ? VerifyConfig{} : load_config(path);
  const VerifyReport report = run_suite(config);
  const std::string text = to_json(report).dump(2) + "\n";
  emit(text, config.output_path);
  for (const CheckRecord& c : report.checks)
    if (!c.pass) std::cerr << "FAIL " << c.id << ": residual " << c.residual << " vs " << c.tolerance << '\n';
  std::cerr << report.checks.size() - static_cast<std::size_t>(report.failed()) << "/" << report.checks.size()
            << " checks passed\n";
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperlie: Lie-theoretic checks for SO(n+1,1)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(HYPERLIE_VERSION));

  std::string verify_config;
  auto* verify = app.add_subcommand("verify", "run verification suites and print a JSON report");
  verify->add_option("--config", verify_config, std::string("config file (default: $") + kConfigEnv + ")");

  std::string matrix_path, sign_text;
  auto* decompose = app.add_subcommand("decompose", "Iwasawa factors of a group matrix");
  decompose->add_option("--matrix", matrix_path, "matrix file")->required();
  decompose->add_option("--sign", sign_text, "+ or -")->required();

  std::string poisson_config;
  auto* poisson = app.add_subcommand("poisson-eval", "Poisson transform on a grid, as CSV");
  poisson->add_option("--config", poisson_config, std::string("config file (default: $") + kConfigEnv + ")");

  std::string orbit_config;
  auto* orbit = app.add_subcommand("boundary-orbit", "orbit of a boundary point, as CSV");
  orbit->add_option("--config", orbit_config, std::string("config file (default: $") + kConfigEnv + ")");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) return run_verify(verify_config);
    if (*decompose) {
      std::cout << cmd_decompose(load_matrix(matrix_path), parse_sign(sign_text));
      return 0;
    }
    if (*poisson) {
      std::ifstream in = open_config(config_path(poisson_config));
      const PoissonEvalConfig c = parse_poisson_config(in);
      emit(cmd_poisson_eval(c), c.output_path);
      return 0;
    }
    if (*orbit) {
      std::ifstream in = open_config(config_path(orbit_config));
      const OrbitConfig c = parse_orbit_config(in);
      emit(cmd_orbit(c), c.output_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
