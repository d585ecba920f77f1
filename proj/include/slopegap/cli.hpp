#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace slopegap::cli {

inline constexpr const char* kVersion = "1.0.0";

// Resolved configuration of one invocation; echoed into every report so that
// identical (args, seed) reproduce byte-identical output.
struct RunConfig {
  std::string command;
  long Q = 0;
  std::vector<long> Qs;
  std::string surface = "torus";
  double interval_a = 0, interval_b = 0;
  bool has_interval = false;
  std::string output = "-";
  std::string format = "csv";
  std::uint64_t seed = 12345;
  long samples = 1000000;
  std::string grid;         // lo:hi:count
  std::string start;        // orbit start "a,b" (rationals in exact mode)
  long steps = 0;
  bool exact = false;
  bool gaps = false;
  bool kinks = false;
  bool validate_only = false;
  std::string quantity = "ks";
  double density_h = 1e-4;

  std::string describe() const;
};

// Entry point behind the binary; returns the process exit code
// (0 success, 2 argument/validation failure, 1 internal error).
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace slopegap::cli
