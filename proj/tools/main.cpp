#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "partcheck/commands.hpp"

using partcheck::CommonOptions;

namespace {

void add_common(CLI::App* cmd, CommonOptions& common, std::string& fit_text) {
  cmd->add_option("--config", common.config_path, "project config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", [&common](const CLI::results_t& res) {
        common.seed = std::stoull(res[0]);
        return true;
      },
      "random seed (overrides the config)");
  cmd->add_option("--fit", fit_text, "fit kind override: constant|pwc|pwl");
  cmd->add_option("--thresholds", [&common](const CLI::results_t& res) {
        common.thresholds = std::stoi(res[0]);
        return true;
      },
      "number of thresholds per regulated promoter (including bounds)");
  cmd->add_option("--out", [&common](const CLI::results_t& res) {
        common.out = res[0];
        return true;
      },
      "output directory (overrides the config)");
}

void finish_common(CommonOptions& common, const std::string& fit_text) {
  if (!fit_text.empty()) common.fit = partcheck::fit_kind_from_string(fit_text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model identification and LTL verification for gene-network devices"};
  app.require_subcommand(1);

  CommonOptions c_char, c_sim, c_ver, c_exp, c_dot;
  std::string fit_char, fit_sim, fit_ver, fit_exp, fit_dot;

  std::string promoter;
  auto* characterize = app.add_subcommand(
      "characterize", "fit a promoter's rate range from its trajectory data");
  add_common(characterize, c_char, fit_char);
  characterize->add_option("--promoter", promoter, "promoter id")->required();

  std::string sim_promoter;
  int cells = 10;
  int steps = 18;
  auto* simulate = app.add_subcommand(
      "simulate-characterization", "generate synthetic characterization trajectories");
  add_common(simulate, c_sim, fit_sim);
  simulate->add_option("--promoter", sim_promoter, "promoter id")->required();
  simulate->add_option("--cells", cells, "number of cells (default 10)");
  simulate->add_option("--steps", steps, "steps of 10 min (default 18, i.e. 3 h)");

  std::string device, spec;
  std::optional<double> min_satisfying;
  auto* verify =
      app.add_subcommand("verify", "model-check a device against a specification");
  add_common(verify, c_ver, fit_ver);
  verify->add_option("--device", device, "device name")->required();
  verify->add_option("--spec", spec, "specification name")->required();
  verify->add_option("--min-satisfying", [&min_satisfying](const CLI::results_t& res) {
        min_satisfying = std::stod(res[0]);
        return true;
      },
      "exit nonzero when the satisfying fraction falls below this");

  std::string topology = "mutual-repression";
  std::vector<std::string> specs;
  auto* explore = app.add_subcommand(
      "explore", "enumerate and rank all devices of a topology template");
  add_common(explore, c_exp, fit_exp);
  explore->add_option("--topology", topology, "template (mutual-repression)");
  explore->add_option("--specs", specs, "specification names (default: all)")->delimiter(',');

  std::string dot_device;
  std::string dot_spec;
  auto* export_q = app.add_subcommand("export-quotient", "write the quotient as a DOT graph");
  add_common(export_q, c_dot, fit_dot);
  export_q->add_option("--device", dot_device, "device name")->required();
  export_q->add_option("--spec", dot_spec, "annotate nodes with verdicts for this spec");

  CLI11_PARSE(app, argc, argv);

  try {
    if (characterize->parsed()) {
      finish_common(c_char, fit_char);
      return partcheck::cmd_characterize(c_char, promoter);
    }
    if (simulate->parsed()) {
      finish_common(c_sim, fit_sim);
      return partcheck::cmd_simulate(c_sim, sim_promoter, cells, steps);
    }
    if (verify->parsed()) {
      finish_common(c_ver, fit_ver);
      return partcheck::cmd_verify(c_ver, device, spec, min_satisfying);
    }
    if (explore->parsed()) {
      finish_common(c_exp, fit_exp);
      return partcheck::cmd_explore(c_exp, topology, specs);
    }
    if (export_q->parsed()) {
      finish_common(c_dot, fit_dot);
      std::optional<std::string> s;
      if (!dot_spec.empty()) s = dot_spec;
      return partcheck::cmd_export_quotient(c_dot, dot_device, s);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
