#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "tl/io.hpp"
#include "tl/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"local trajectory analysis of finite dynamical systems"};
  app.require_subcommand(1);

  std::string path;
  std::string element_path;
  bool json = false;
  std::uint64_t seed = 12345;
  int samples = 25;

  auto add_common = [&](CLI::App* cmd, bool with_element) {
    cmd->add_option("file", path, "system description file")->required();
    if (with_element)
      cmd->add_option("--element", element_path, "element file with one coefficient per group element")
          ->required();
    cmd->add_flag("--json", json, "emit the report as a structured document");
    cmd->add_option("--seed", seed, "seed for the sampled sweeps");
    cmd->add_option("--samples", samples, "sampled cases per sweep or probe trials");
    return cmd;
  };

  CLI::App* validate =
      add_common(app.add_subcommand("validate", "check a system description against every invariant"),
                 false);
  CLI::App* conditions = add_common(
      app.add_subcommand("conditions", "freeness verdict plus sampled central comparison sweeps"),
      false);
  CLI::App* isom = add_common(
      app.add_subcommand("isom", "rank checks for the coefficient map and the orbit map"), false);
  CLI::App* invert = add_common(
      app.add_subcommand("invert", "orbit-wise invertibility of an element with the direct check"),
      true);
  CLI::App* norms = add_common(
      app.add_subcommand("norms", "universal norm of an element against the orbit norms"), true);
  CLI::App* family = add_common(
      app.add_subcommand("family", "verdicts for the orbit representation family"), false);
  CLI::App* witness = add_common(
      app.add_subcommand("witness", "kernel witness of the coefficient map and zero divisor probe"),
      false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  tl::ReportOptions opts;
  opts.json = json;
  opts.seed = seed;
  opts.samples = samples;

  try {
    std::string report;
    if (validate->parsed()) {
      report = tl::report_validate(tl::load_system_raw(path), path, opts);
    } else if (conditions->parsed()) {
      report = tl::report_conditions(tl::load_system(path), path, opts);
    } else if (isom->parsed()) {
      report = tl::report_isom(tl::load_system(path), path, opts);
    } else if (invert->parsed()) {
      const tl::DynSystem sys = tl::load_system(path);
      report = tl::report_invert(sys, tl::load_element(sys, element_path), path, element_path, opts);
    } else if (norms->parsed()) {
      const tl::DynSystem sys = tl::load_system(path);
      report = tl::report_norms(sys, tl::load_element(sys, element_path), path, element_path, opts);
    } else if (family->parsed()) {
      report = tl::report_family(tl::load_system(path), path, opts);
    } else if (witness->parsed()) {
      report = tl::report_witness(tl::load_system(path), path, opts);
    }
    std::cout << report;
    return 0;
  } catch (const tl::parse_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const tl::validation_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
