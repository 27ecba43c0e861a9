// Command-line front end. Subcommands:
//   acs {validate,coframe,alpha,integrable,gcy-check}
//   plurigenus, kodaira, scan, oracle
// Exit status 0 on success, 1 for invalid input (parse, validation,
// unsupported request, rejected certificate, usage), 2 for an internal
// invariant breach.
#pragma once

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kod/oracle.hpp"

namespace kod {

struct RunConfig {
  std::string command;  // "acs validate", "plurigenus", "scan", ...
  std::string manifold, acs = "builtin", family, samples = "builtin", gcy = "builtin";
  std::optional<long> m;
  bool m_symbolic = false;
  std::optional<long> max_m;
  bool symbolic = false;
  bool json = false;
  bool oracle = false;
  OracleOptions oracle_options;
  std::string verify_path, certificate_path, out_path, plot_path, csv_path;
  int usc = 0;  // length of the approach sequences added by scan
};

/// Checks the combination of options (ValidationError when inconsistent).
void validate_config(const RunConfig& c);

int execute(const RunConfig& c, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and executes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Prints the error and returns its exit status (1 or 2).
int failure_status(std::exception_ptr e, std::ostream& err);

inline constexpr const char* kVersion = "kod 0.1.0";

}  // namespace kod
