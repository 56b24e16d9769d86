#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace sgpvm;

  CLI::App app{"Event-driven linear GP engine: evolve, bench, replay"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SGPVM_VERSION);

  cli::GlobalOptions global;
  std::uint64_t seed = 0;
  std::string backend;
  std::string out_dir;
  auto* seed_opt = app.add_option("--seed", seed, "Override the master seed");
  auto* backend_opt =
      app.add_option("--backend", backend, "lite or flex (bench: default both)")
          ->check(CLI::IsMember({"lite", "flex"}));
  auto* out_opt =
      app.add_option("--out-dir", out_dir, "Directory for all run outputs");

  cli::EvolveOptions evolve;
  auto* evolve_cmd = app.add_subcommand("evolve", "Run evolution replicates");
  evolve_cmd->fallthrough();
  evolve_cmd->add_option("config", evolve.config, "Experiment config (INI)")
      ->required()
      ->check(CLI::ExistingFile);
  evolve_cmd->add_option("-j,--jobs", evolve.jobs,
                         "Replicates to run concurrently")
      ->check(CLI::Range(1, 1024));

  cli::BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the microbenchmarks");
  bench_cmd->fallthrough();
  bench_cmd
      ->add_option("--benchmark", bench.benchmarks,
                   "control,nop,arithmetic,complete,sans_regulation")
      ->delimiter(',');
  bench_cmd->add_option("--agents", bench.agents, "Comma-separated agent counts")
      ->delimiter(',');
  bench_cmd->add_option("--replicates", bench.replicates)
      ->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Timing CSV path")
      ->capture_default_str();
  bench_cmd->add_option("--min-time-ms", bench.min_time_ms,
                        "Timed region per replicate")
      ->capture_default_str();

  cli::ReplayOptions replay;
  auto* replay_cmd = app.add_subcommand("replay", "Recompute a run's CSVs");
  replay_cmd->fallthrough();
  replay_cmd->add_option("manifest", replay.manifest, "Manifest JSON")
      ->required()
      ->check(CLI::ExistingFile);
  replay_cmd->add_option("--replicate", replay.replicate,
                         "Replay one replicate only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kConfigError;
  }

  if (*seed_opt) global.seed = seed;
  if (*backend_opt) global.backend = backend_from_name(backend);
  if (*out_opt) global.out_dir = out_dir;

  if (*evolve_cmd) return cli::cmd_evolve(global, evolve, std::cerr);
  if (*bench_cmd) return cli::cmd_bench(global, bench, std::cerr);
  return cli::cmd_replay(global, replay, std::cerr);
}
