#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <stdexcept>
#include <iostream>

namespace {

using varleb::cli::json;

json readJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void emit(const json& report, const std::string& out) {
  if (out.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << report.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerics for variable-exponent Lebesgue spaces", "varleb"};
  app.set_version_flag("--version", VARLEB_VERSION);
  std::string configPath, outPath, command, reportPath;
  varleb::cli::Overrides ov;
  bool quiet = false;
  app.add_option("--config", configPath, "JSON config file");
  app.add_option("--out", outPath, "write the report here instead of stdout");
  app.add_option("--seed", ov.seed, "override the config seed");
  app.add_option("--resolution", ov.resolution, "override the grid resolution");
  app.add_option("--cube-depth", ov.cubeDepth, "override the dyadic cube depth");
  app.add_option("--tol", ov.tol, "override the relative tolerance");
  app.add_flag("--quiet", quiet, "suppress the summary line");
  app.add_option("command", command, "command name, or 'replay'");
  app.add_option("report", reportPath, "report file for 'replay'");
  app.footer("commands: replay, " + [] {
    std::string s;
    for (const auto& n : varleb::cli::commandNames()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }());
  CLI11_PARSE(app, argc, argv);

  try {
    if (command == "replay") {
      if (reportPath.empty()) throw std::runtime_error("replay needs a report file");
      const auto r = varleb::cli::replayReport(readJson(reportPath), ov);
      emit(r.run.report, outPath);
      if (!quiet)
        for (const auto& n : r.notes) std::cerr << "replay: " << n << "\n";
      if (!r.match) return 2;
      return r.run.exitCode;
    }
    if (configPath.empty()) throw std::runtime_error("--config is required");
    json config = readJson(configPath);
    if (!command.empty()) {
      if (config.contains("command") && config["command"] != command)
        throw std::runtime_error("command '" + command + "' disagrees with the config's '" +
                                  config["command"].get<std::string>() + "'");
      config["command"] = command;
    }
    const auto r = varleb::cli::runCommand(config, ov);
    if (outPath.empty() && config.contains("output")) outPath = config["output"].get<std::string>();
    emit(r.report, outPath);
    if (!quiet && !outPath.empty()) std::cout << r.summary << "\n";
    for (const auto& w : r.report["warnings"])
      if (!quiet) std::cerr << "warning: " << w.get<std::string>() << "\n";
    return r.exitCode;
  } catch (const varleb::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
  } catch (const varleb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}
