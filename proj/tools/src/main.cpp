#include <iostream>

#include "CLI11.hpp"
#include "ndsp_cli/app.hpp"

using namespace ndsp::cli;

int main(int argc, char** argv) {
  CLI::App app{"Finite-resolution pressure estimates for nonautonomous systems"};
  app.require_subcommand(1);

  std::string config;
  Overrides o;
  std::string out_dir, mode;
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "config file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--mode", mode, "solver mode")->check(CLI::IsMember({"exact", "greedy"}));
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for relabelings and random subsets");
  };

  auto* run_cmd = app.add_subcommand("run", "compute estimates and run the configured checks");
  common(run_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep", "rerun varying one config field");
  common(sweep_cmd);
  std::string parameter;
  std::vector<std::string> values;
  sweep_cmd->add_option("--param", parameter, "epsilon | n_max | seed | mode | power | tail_window | /json/pointer")
      ->required();
  sweep_cmd->add_option("--values", values, "values, comma separated")->delimiter(',');
  auto* list_cmd = app.add_subcommand("list-checks", "print the harness check ids");
  auto* validate_cmd = app.add_subcommand("validate-config", "check a config without computing");
  common(validate_cmd);

  CLI11_PARSE(app, argc, argv);

  if (!out_dir.empty()) o.out_dir = out_dir;
  if (!mode.empty()) o.mode = mode;
  if (threads) o.threads = threads;
  if (sweep_cmd->parsed() || run_cmd->parsed() || validate_cmd->parsed())
    if (app.get_subcommands().front()->count("--seed")) o.seed = seed;

  if (list_cmd->parsed()) {
    for (const auto& [id, text] : list_checks()) std::cout << id << "  " << text << '\n';
    return kOk;
  }
  Outcome r;
  if (run_cmd->parsed())
    r = run(config, o);
  else if (sweep_cmd->parsed())
    r = sweep(config, parameter, values, o);
  else
    r = validate(config, o);
  (r.exit_code == kOk ? std::cout : std::cerr) << r.message << '\n';
  return r.exit_code;
}
