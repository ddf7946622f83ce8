#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gcollage::cli {

/// Parsed and validated parameters of one command.
struct RunConfig {
  std::string command;
  int d = 1;
  int alpha = 1;
  double p = 2.0;
  double a = 0.0; // 0 means "use alpha"
  double n = 256.0;
  double delta = 0.0; // 0 means default_delta(p)
  std::string base = "smolyak";
  int psi = -1; // -1 means family default, 0 disables
  std::string variant = "direct";
  double theta = 1.5;
  int m = 100'000;
  std::string out;
  std::string in;
  std::string alphas = "1,2,3";
  std::string n_list = "32..2048x2";
  bool timing = false;
  std::uint64_t seed = 1;
  std::string set = "sg";
  double xi = 4.0;
  int samples = 1000;
  double radius = 3.0;
};

/// Budget list: comma-separated values and/or ranges a..bxk (a, a k, a k^2,
/// ... up to b).
std::vector<double> parse_budget_list(const std::string &text);
std::vector<int> parse_int_list(const std::string &text);

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success, 2 invalid arguments, 3 construction failure, 1 anything else.
int run(std::vector<std::string> args, std::ostream &out, std::ostream &err);

} // namespace gcollage::cli
