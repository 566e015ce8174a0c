// Command-line front end: acceptance suite, single quantities, probes and
// identity batches. stdout carries only the result; diagnostics go to stderr.
// Exit codes: 0 pass, 1 failed entry or undefined value, 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qred/commands.hpp"
#include "qred/suite.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int emit(const qred::SuiteReport& report, const std::string& out_path) {
  const std::string text = report.to_json().dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitUsage;
    }
    out << text;
  }
  for (const auto& e : report.entries) {
    if (e.pass) continue;
    std::cerr << "FAIL " << e.name << ": lhs=" << qred::format_value(e.lhs) << " rhs=" << qred::format_value(e.rhs)
              << " residual=" << qred::format_value(e.residual) << " tolerance=" << e.tolerance;
    if (!e.note.empty()) std::cerr << " (" << e.note << ")";
    std::cerr << "\n";
  }
  return report.all_pass() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative entropy disturbance toolkit"};
  app.require_subcommand(1);

  qred::SuiteConfig cfg;
  std::string out_path;
  auto* suite = app.add_subcommand("suite", "Run the full invariant suite and print a report");
  suite->add_option("--seed", cfg.seed, "Base seed")->capture_default_str();
  suite->add_option("--dims", cfg.dims, "Dimensions, e.g. 2,3,4")->delimiter(',')->capture_default_str();
  suite->add_option("--trials", cfg.trials, "Random trials per invariant")->capture_default_str();
  suite->add_option("--tolerance-scale", cfg.tolerance_scale, "Multiplier applied to every tolerance")
      ->capture_default_str();
  suite->add_option("--out", out_path, "Write the report here instead of stdout");

  std::string quantity;
  std::vector<std::string> files;
  auto* compute = app.add_subcommand("compute", "Evaluate one quantity on serialized inputs");
  compute->add_option("quantity", quantity, "One of: " + qred::quantity_names())->required();
  compute->add_option("files", files, "Input documents");

  std::string config_path;
  auto* probe = app.add_subcommand("probe", "Run a probe from a configuration document");
  probe->add_option("config", config_path, "Probe configuration")->required();
  probe->add_option("--out", out_path, "Write the report here instead of stdout");

  std::string manifest_path;
  auto* batch = app.add_subcommand("batch", "Evaluate identity residuals listed in a manifest");
  batch->add_option("manifest", manifest_path, "Manifest document")->required();
  batch->add_option("--out", out_path, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*suite) return emit(qred::run_suite(cfg), out_path);
    if (*compute) {
      std::cout << qred::format_value(qred::compute(quantity, files)) << "\n";
      return kExitPass;
    }
    if (*probe) return emit(qred::run_probe(qred::io::load_file(config_path), config_path), out_path);
    if (*batch) return emit(qred::run_batch_file(manifest_path), out_path);
  } catch (const qred::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qred::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "undefined: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
