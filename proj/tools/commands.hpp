#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace depnet::cli {

struct GenIsingOptions {
  int rows = 4;
  int cols = 3;
  double coupling = 1.0;
  double field = 0.0;
  std::size_t n = 1000;
  std::uint64_t seed = 7;
  std::string out;
};

struct GenRandbnOptions {
  int nodes = 12;
  int edges = 21;
  std::size_t n = 1000;
  std::uint64_t seed = 7;
  std::string out;
};

struct TrainOptions {
  std::string data;
  std::string penalty = "mdl";
  double alpha_s = -1.0;
  std::int64_t merge_cap = -1;
  std::string out;
};

struct SampleOptions {
  std::string model;
  std::size_t n = 10000;
  std::uint64_t seed = 7;
  std::string scan = "random";
  std::string clamp;
  std::int64_t burn_in = -1;  // <0: default 10 * n_nodes * largest table
  std::int64_t thin = 1;
  std::string out;
};

struct EvalOptions {
  std::string model;
  std::string data;
  bool exact = false;
  std::string method = "auto";
  std::string clamp_vars;
  std::string stationary_out;
  std::string report_out;
};

struct Table1Options {
  std::uint64_t seed = 7;
  double coupling = 1.0;
  std::string report_out;
};

int cmd_gen_ising(const GenIsingOptions& opt, const std::vector<std::string>& argv);
int cmd_gen_randbn(const GenRandbnOptions& opt, const std::vector<std::string>& argv);
int cmd_train(const TrainOptions& opt, const std::vector<std::string>& argv);
int cmd_sample(const SampleOptions& opt, const std::vector<std::string>& argv);
int cmd_eval(const EvalOptions& opt, const std::vector<std::string>& argv);
int cmd_reproduce_table1(const Table1Options& opt, const std::vector<std::string>& argv);

/// Full dispatcher (also used by `depnet rerun`).
int run_cli(const std::vector<std::string>& args);

}  // namespace depnet::cli
