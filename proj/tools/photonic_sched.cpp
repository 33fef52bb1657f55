// photonic-sched: solve, sweep and validate circuit-switch schedules for
// collectives on a reconfigurable photonic interconnect.
//
// Exit codes: 0 ok, 1 runtime failure (including failed validation checks),
// 2 config or command-line error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "photonic/error.hpp"
#include "photonic/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config_path = "-";
  std::string out_path;
  unsigned workers = 1;
  double epsilon = 0.0;
  bool cap_theta = false;
  bool skip_identical = false;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) photonic::fail(photonic::ErrorKind::InvalidParameter, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) photonic::fail(photonic::ErrorKind::Internal, "cannot write '" + path + "'");
  out << text;
}

photonic::ExperimentConfig load_config(const Options& opts) {
  photonic::ExperimentConfig config = photonic::parse_config(read_input(opts.config_path));
  if (opts.epsilon != 0.0) config.params.epsilon = opts.epsilon;
  if (opts.cap_theta) config.params.cap_theta_at_one = true;
  if (opts.skip_identical) config.params.skip_identical_matched = true;
  config.params.validate();
  return config;
}

int exit_code_for(photonic::ErrorKind kind) {
  using photonic::ErrorKind;
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::InvalidParameter:
    case ErrorKind::UnsupportedSize:
    case ErrorKind::Validation:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circuit-switch schedule optimizer for collectives on photonic interconnects"};
  app.require_subcommand(1);
  Options opts;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON config path, '-' for standard input")->capture_default_str();
    sub->add_option("--out", opts.out_path, "Output path (standard output when omitted)");
    sub->add_option("--epsilon", opts.epsilon, "FPTAS accuracy override, in (0, 0.5]");
    sub->add_flag("--cap-theta", opts.cap_theta, "Cap the concurrent-flow value at 1");
    sub->add_flag("--skip-identical-matched", opts.skip_identical,
                  "Do not charge reconfiguration between consecutive identical matched steps");
  };
  CLI::App* solve_cmd = app.add_subcommand("solve", "Optimal schedule and baselines for one point (JSON)");
  add_common(solve_cmd);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "alpha_r x message-size grid (CSV)");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--workers", opts.workers, "Worker threads")->check(CLI::PositiveNumber);
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a collective or config for consistency");
  add_common(validate_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (solve_cmd->parsed()) {
      const auto config = load_config(opts);
      write_output(opts.out_path, photonic::solve_document(config).dump(2) + "\n");
    } else if (sweep_cmd->parsed()) {
      const auto config = load_config(opts);
      write_output(opts.out_path, photonic::sweep_csv(photonic::run_sweep(config, opts.workers)));
    } else if (validate_cmd->parsed()) {
      const auto report = photonic::validate_document(read_input(opts.config_path));
      write_output(opts.out_path, report.render());
      return report.passed() ? kExitOk : kExitRuntime;
    }
  } catch (const photonic::Error& e) {
    std::cerr << "error (" << photonic::to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
