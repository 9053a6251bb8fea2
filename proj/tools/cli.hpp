#pragma once

// Batch front end: one subcommand per report.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace maxlat::cli {

struct RunConfig {
  std::string command;
  std::string media_path;
  std::optional<double> lambda;
  std::optional<int> grid;
  std::optional<double> tol;
  std::vector<std::string> xi;  // "a,b,c" with rational entries such as 1/2
  std::string out;              // empty = stdout
  std::string csv;              // fermi point cloud
  std::uint64_t seed = 0;
  std::string perturbation_path;
  std::string kint_path;        // JSON list of sites, default {0}
  int box = 6;                  // cube [-box, box]^3
  std::string variant = "anywhere";
  bool planted = false;
  bool float_mode = false;
  std::optional<std::vector<double>> v_h;
};

/// 0 success, 1 usage or input error, 2 failed certificate or check.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and runs. Help exits 0.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace maxlat::cli
