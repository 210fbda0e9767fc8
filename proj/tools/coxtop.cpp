#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "coxtop/errors.hpp"
#include "coxtop/formats.hpp"
#include "coxtop/verifier.hpp"

using namespace coxtop;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::ConfigError, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& config_path, const std::string& output) {
  auto cfg = parse_config(slurp(config_path));
  auto report = run(cfg);
  auto text = report_to_json(report);
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    std::ofstream f(output);
    if (!f) throw Error(Errc::ConfigError, "cannot write " + output);
    f << text;
  }
  std::cerr << "coxtop: " << report.summary.pass << " pass, " << report.summary.fail << " fail, "
            << report.summary.unknown << " unknown\n";
  for (auto& n : report.notes) std::cerr << "note: " << n << "\n";
  return report.exit_code();
}

int cmd_presets() {
  for (auto& name : preset_names()) {
    auto sys = preset(name);
    std::cout << "# " << name << "\n" << format_matrix(*sys);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coxtop: verification of the braid word posets and the convolution Schubert category"};
  app.require_subcommand(1);

  std::string config, output;
  auto* run_cmd = app.add_subcommand("run", "run the suites of a configuration and print a JSON report");
  run_cmd->add_option("--config", config, "key = value configuration file")->required();
  run_cmd->add_option("-o,--output", output, "write the report here instead of stdout");

  std::string report_path, id;
  auto* explain_cmd = app.add_subcommand("explain", "explain one instance of a report");
  explain_cmd->add_option("--report", report_path, "report written by run")->required();
  explain_cmd->add_option("--id", id, "instance id, e.g. delete-thm:[s][s]")->required();

  auto* presets_cmd = app.add_subcommand("presets", "list the preset Coxeter systems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return cmd_run(config, output);
    if (*explain_cmd) {
      std::cout << explain(report_from_json(slurp(report_path)), id);
      return 0;
    }
    if (*presets_cmd) return cmd_presets();
  } catch (const Error& e) {
    std::cerr << "coxtop: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
