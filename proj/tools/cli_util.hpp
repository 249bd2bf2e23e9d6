#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "depnet/depnet.hpp"

namespace depnet::cli {

// Exit codes: 0 success, 1 usage, 2 data/model error, 3 capacity,
// 4 numerical non-convergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitNumerical = 4;

/// Shortest-exact decimal with 17 significant digits.
std::string format_double(double v);
std::string format_ext(const ExtReal& v);

/// Parses "X0=1,X3=2" against a space; names are the canonical X<k>.
std::vector<ClampEntry> parse_clamp(const std::string& text, const VariableSpace& space);

/// Parses "X0,X3" (names only).
std::vector<int> parse_clamp_vars(const std::string& text, const VariableSpace& space);

/// Every output file is accompanied by <file>.manifest.json recording the
/// command line; `depnet rerun` replays it.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;  // full argv minus the program name
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double wall_clock_sec = 0.0;
};

void write_manifest(const std::string& primary_output, const RunManifest& manifest);
std::vector<std::string> read_manifest_argv(const std::string& path);

class WallClock {
 public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Writes atomically: to <path>.tmp then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace depnet::cli
