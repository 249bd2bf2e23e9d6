#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_util.hpp"
#include "commands.hpp"
#include "depnet/depnet.hpp"

namespace depnet::cli {

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"depnet: dependency networks over finite discrete variables -- structure/parameter "
               "learning, pseudo-Gibbs sampling, exact stationary analysis, and "
               "information-geometric diagnostics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  app.footer("Thread count is taken from DEPNET_THREADS (default: hardware concurrency).\n"
             "Exit codes: 0 ok, 1 usage, 2 data/model error, 3 capacity, 4 non-convergence.");

  int exit_code = kExitOk;

  auto* gen = app.add_subcommand("gen", "generate synthetic datasets with exact joints");
  gen->require_subcommand(1);

  GenIsingOptions ising;
  auto* gen_ising = gen->add_subcommand("ising", "grid Ising model (free boundary)");
  gen_ising->add_option("--rows", ising.rows, "grid rows")->capture_default_str();
  gen_ising->add_option("--cols", ising.cols, "grid columns")->capture_default_str();
  gen_ising->add_option("--coupling,-J", ising.coupling, "pairwise coupling J")
      ->capture_default_str();
  gen_ising->add_option("--field,-H", ising.field, "external field h")->capture_default_str();
  gen_ising->add_option("--n", ising.n, "sample count")->capture_default_str();
  gen_ising->add_option("--seed", ising.seed, "RNG seed")->capture_default_str();
  gen_ising->add_option("--out", ising.out, "output prefix (.csv and .json)")->required();
  gen_ising->callback([&] { exit_code = cmd_gen_ising(ising, args); });

  GenRandbnOptions randbn;
  auto* gen_randbn = gen->add_subcommand("randbn", "random Bayesian network (binary variables)");
  gen_randbn->add_option("--nodes", randbn.nodes, "node count")->capture_default_str();
  gen_randbn->add_option("--edges", randbn.edges, "edge count")->capture_default_str();
  gen_randbn->add_option("--n", randbn.n, "sample count")->capture_default_str();
  gen_randbn->add_option("--seed", randbn.seed, "RNG seed")->capture_default_str();
  gen_randbn->add_option("--out", randbn.out, "output prefix (.csv and .json)")->required();
  gen_randbn->callback([&] { exit_code = cmd_gen_randbn(randbn, args); });

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "learn a dependency network from a dataset CSV");
  train_cmd->add_option("--data", train.data, "dataset CSV")->required();
  train_cmd->add_option("--penalty", train.penalty, "complexity penalty: mdl | none")
      ->capture_default_str();
  train_cmd->add_option("--alpha-s", train.alpha_s,
                        "additive smoothing for sampling tables (default 1/N)");
  train_cmd->add_option("--merge-cap", train.merge_cap,
                        "max merge candidates per iteration (-1 unlimited, 0 split-only)")
      ->capture_default_str();
  train_cmd->add_option("--out", train.out, "model JSON path")->required();
  train_cmd->callback([&] { exit_code = cmd_train(train, args); });

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "pseudo-Gibbs sampling from a model");
  sample_cmd->add_option("--model", sample.model, "model JSON")->required();
  sample_cmd->add_option("--n", sample.n, "recorded sample count")->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed, "RNG seed")->capture_default_str();
  sample_cmd->add_option("--scan", sample.scan, "node selection: random | sequential")
      ->capture_default_str();
  sample_cmd->add_option("--clamp", sample.clamp, "clamped variables, e.g. \"X0=1,X3=0\"");
  sample_cmd->add_option("--burn-in", sample.burn_in,
                         "steps discarded before recording (default 10 * n * largest table)");
  sample_cmd->add_option("--thin", sample.thin, "keep every k-th state")->capture_default_str();
  sample_cmd->add_option("--out", sample.out, "output CSV")->required();
  sample_cmd->callback([&] { exit_code = cmd_sample(sample, args); });

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand(
      "eval", "evaluate a model against data: FC-limit, per-node divergences, exact stationary");
  eval_cmd->add_option("--model", eval.model, "model JSON")->required();
  eval_cmd->add_option("--data", eval.data, "dataset CSV")->required();
  eval_cmd->add_flag("--exact", eval.exact,
                     "solve for the stationary distribution and report FC/KL against it");
  eval_cmd->add_option("--method", eval.method, "stationary solver: auto | direct | power")
      ->capture_default_str();
  eval_cmd->add_option("--clamp-vars", eval.clamp_vars,
                       "report the conditional-inference decomposition over these variables, "
                       "e.g. \"X0,X2\"");
  eval_cmd->add_option("--stationary-out", eval.stationary_out,
                       "write the exact stationary distribution CSV here");
  eval_cmd->add_option("--out", eval.report_out, "write the JSON report here");
  eval_cmd->callback([&] { exit_code = cmd_eval(eval, args); });

  Table1Options table1;
  auto* table1_cmd = app.add_subcommand(
      "reproduce-table1",
      "run the four standard verification protocols (Ising4x3S/L, RB12-21S/L) and compare "
      "FC(p^D||pi) with FC_lim(p^D) against the reference measurements");
  table1_cmd->add_option("--seed", table1.seed, "base RNG seed")->capture_default_str();
  table1_cmd->add_option("--coupling", table1.coupling, "Ising coupling for the 4x3 grid")
      ->capture_default_str();
  table1_cmd->add_option("--out", table1.report_out, "write the JSON report here");
  table1_cmd->callback([&] { exit_code = cmd_reproduce_table1(table1, args); });

  std::string manifest_path;
  auto* rerun_cmd = app.add_subcommand("rerun", "re-execute a command from its manifest");
  rerun_cmd->add_option("--manifest", manifest_path, "manifest JSON")->required();
  rerun_cmd->callback([&] { exit_code = run_cli(read_manifest_argv(manifest_path)); });

  try {
    // CLI11's vector overload expects the arguments reversed.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  return exit_code;
}

}  // namespace depnet::cli

int main(int argc, char** argv) {
  using namespace depnet;
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return cli::run_cli(args);
  } catch (const CapacityError& e) {
    std::cerr << "error (capacity): " << e.what() << "\n";
    return cli::kExitCapacity;
  } catch (const ConvergenceError& e) {
    std::cerr << "error (non-convergence): " << e.what() << "\n";
    return cli::kExitNumerical;
  } catch (const DegeneracyError& e) {
    std::cerr << "error (degenerate chain): " << e.what() << "\n";
    return cli::kExitNumerical;
  } catch (const ModelError& e) {
    std::cerr << "error (model): " << e.what() << "\n";
    return cli::kExitData;
  } catch (const DomainError& e) {
    std::cerr << "error (data): " << e.what() << "\n";
    return cli::kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitData;
  }
}
