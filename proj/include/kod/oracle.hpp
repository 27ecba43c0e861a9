// Numerical estimate of dim ker(f -> (Xbar_j f + m a_j f)_j) on a grid.
// Independent of the exact pipeline and never certified: derivatives are
// forward and backward differences stacked as separate rows (this removes
// the alternating modes that central differences leave in the kernel), the
// non-periodic coordinate is glued through the lattice shift, and the kernel
// dimension is the number of singular values below a threshold.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "kod/acs.hpp"

namespace kod {

struct OracleOptions {
  int grid = 8;
  std::map<std::string, int> grid_overrides;  // per coordinate
  double threshold = 0.1;                     // on singular values
  std::string method = "blocks";              // or "dense": full matrix, small grids only
};

struct OracleResult {
  int dimension = 0;
  long unknowns = 0;
  std::string method;
  std::vector<double> smallest;  // up to six smallest singular values among densely solved blocks
  int count_half = 0, count_double = 0;  // counts at threshold / 2 and 2 * threshold
  bool warning = false;
  std::string message;
};

OracleResult oracle_numeric_kernel(const AcsData& acs, long m, const OracleOptions& opt = {});

}  // namespace kod
