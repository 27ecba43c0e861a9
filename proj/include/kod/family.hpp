#pragma once

#include <string>
#include <vector>

#include "kod/exterior.hpp"

namespace kod {

/// A family J(t) of almost complex structures on a fixed manifold, with
/// entries rational in the real and imaginary parts of t.
struct FamilySpec {
  std::string name;
  ManifoldSpec base;
  /// Names of Re(t) and Im(t).
  std::vector<std::string> parameters{"ret", "imt"};
  /// Family defined for |t| < radius.
  Scalar radius;
  RatMatrix J;
};

}  // namespace kod
