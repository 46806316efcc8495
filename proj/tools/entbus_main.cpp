// Command-line experiment runner for the detuning-modulation entanglement
// simulator.  Verbs: run, sweep, compare, presets.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "entbus/run.hpp"

namespace {

using entbus::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw entbus::config_error("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw entbus::config_error(std::string("config parse error in ") + path +
                               ": " + e.what());
  }
  return j;
}

entbus::RunConfig resolve_config(const std::string& config_path,
                                 const std::string& preset,
                                 std::optional<double> dtau,
                                 std::optional<double> tau_end,
                                 std::string* name_out) {
  if (config_path.empty() == preset.empty())
    throw entbus::config_error("specify exactly one of --config and --preset");
  entbus::RunConfig c;
  if (!preset.empty()) {
    c = entbus::preset_config(preset);
    if (name_out) *name_out = preset;
  } else {
    c = entbus::parse_run_config(load_json(config_path));
    if (name_out)
      *name_out = std::filesystem::path(config_path).stem().string();
  }
  if (dtau) c.dtau = *dtau;
  if (tau_end) c.tau_end = *tau_end;
  return c;
}

void write_output(const std::string& out_dir, const std::string& name,
                  const std::string& ext, const std::string& content) {
  if (out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path p =
      std::filesystem::path(out_dir) / (name + "." + ext);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw entbus::config_error("cannot write output file: " + p.string());
  out << content;
  std::cerr << "wrote " << p.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entbus: steady-state two-qubit entanglement in a lossy cavity "
               "bus, generated and protected by detuning modulation"};
  app.require_subcommand(1);

  std::string config_path, preset, out_dir, format = "csv";
  std::optional<double> dtau_override, tau_end_override;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration file");
    cmd->add_option("--preset", preset, "named preset (see `presets`)");
    cmd->add_option("--out", out_dir, "output directory (default: stdout)");
    cmd->add_option("--format", format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--dtau", dtau_override, "override integration step");
    cmd->add_option("--tau-end", tau_end_override, "override end time");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "integrate one configuration");
  add_common(cmd_run);

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run a parameter grid");
  std::string sweep_config;
  cmd_sweep->add_option("--config", sweep_config, "JSON sweep configuration")
      ->required();
  cmd_sweep->add_option("--out", out_dir, "output directory (default: stdout)");

  CLI::App* cmd_cmp = app.add_subcommand("compare", "compare two runs");
  std::string cfg_a, cfg_b, preset_a, preset_b, metric = "concurrence_clamped";
  double threshold = -1.0, tau_min = 0.0;
  cmd_cmp->add_option("--config-a", cfg_a, "first run config");
  cmd_cmp->add_option("--config-b", cfg_b, "second run config");
  cmd_cmp->add_option("--preset-a", preset_a, "first run preset");
  cmd_cmp->add_option("--preset-b", preset_b, "second run preset");
  cmd_cmp->add_option("--metric", metric, "metric the threshold applies to");
  cmd_cmp->add_option("--threshold", threshold,
                      "max allowed |diff| of --metric (exit 3 on violation)");
  cmd_cmp->add_option("--tau-min", tau_min, "ignore samples before this time");
  cmd_cmp->add_option("--dtau", dtau_override, "override integration step");
  cmd_cmp->add_option("--tau-end", tau_end_override, "override end time");

  CLI::App* cmd_presets = app.add_subcommand("presets", "list named presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return (e.get_exit_code() == 0) ? 0 : 1;
  }

  try {
    if (cmd_run->parsed()) {
      std::string name;
      const entbus::RunConfig c = resolve_config(
          config_path, preset, dtau_override, tau_end_override, &name);
      const entbus::RunResult r = entbus::run(c);
      if (format == "csv") {
        write_output(out_dir, name, "csv", entbus::render_csv(r, c.do_postselect));
      } else {
        json doc;
        doc["config"] = entbus::run_config_to_json(c);
        doc["samples"] = entbus::render_json(r, c.do_postselect);
        write_output(out_dir, name, "json", doc.dump(2) + "\n");
      }
    } else if (cmd_sweep->parsed()) {
      const entbus::SweepConfig c = entbus::parse_sweep_config(load_json(sweep_config));
      const std::string csv = entbus::run_sweep(c);
      const std::string name =
          std::filesystem::path(sweep_config).stem().string();
      write_output(out_dir, name, "csv", csv);
    } else if (cmd_cmp->parsed()) {
      std::string na, nb;
      const entbus::RunConfig a =
          resolve_config(cfg_a, preset_a, dtau_override, tau_end_override, &na);
      const entbus::RunConfig b =
          resolve_config(cfg_b, preset_b, dtau_override, tau_end_override, &nb);
      const entbus::CompareReport rep =
          entbus::compare_runs(a, b, metric, threshold, tau_min);
      std::cout << "A: " << na << "\nB: " << nb << "\n" << rep.text;
      if (!rep.pass) return 3;
    } else if (cmd_presets->parsed()) {
      for (const entbus::Preset& p : entbus::preset_catalog()) {
        std::cout << p.name << "\n    " << p.description << "\n    config: "
                  << p.config.dump() << "\n";
      }
    }
  } catch (const entbus::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const entbus::numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
