// Kodaira dimension from plurigenus reports, and the upper-semicontinuity
// check on tables of P_m over a parameter t.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kod/plurigenera.hpp"

namespace kod {

enum class KodKind { NegInfinity, Exact, Estimate };

struct KodairaVerdict {
  KodKind kind = KodKind::Estimate;
  int value = 0;          // Exact
  double exponent = 0.0;  // Estimate, and the raw exponent behind a growth-based Exact
  /// NegInfinity/Exact backed by an all-m argument rather than finite data.
  bool certified = false;
  /// Range of concrete m the verdict rests on (0, 0 for symbolic).
  long m_min = 0, m_max = 0;
  std::string rationale;
};

std::string to_string(const KodairaVerdict& v);
/// "-inf", "0", "1", or the exponent for estimates; used in CSV cells.
std::string short_string(const KodairaVerdict& v);

/// Symbolic reports are used when they settle every m; otherwise the
/// concrete reports must cover m = 1..M contiguously.
KodairaVerdict kod_from_reports(const std::vector<PlurigenusReport>& reports);

/// Tolerance for snapping a growth exponent to an integer.
inline constexpr double kGrowthSnap = 0.15;

struct GrowthEstimate {
  double exponent = 0.0;
  std::optional<int> snapped;
  int windows = 0;
};

/// Largest least-squares slope of log E_m against log m over the tail
/// windows m in [m0, M], m0 from M/2 to 3M/4, where E_m = max_{k <= m} P_k
/// and only m with E_m > 0 enter.
/// `values` maps m >= 1 to P_m. Throws ValidationError when no P_m is nonzero.
GrowthEstimate growth_exponent(const std::map<long, double>& values);

// ---------------------------------------------------------------- semicontinuity

/// P_m (and optionally kod, with -infinity allowed) at one sample t.
struct UscRow {
  Scalar t;
  std::map<long, long> P;
  std::optional<double> kod;
};

/// Samples t_k converging to `limit`, listed in approach order.
struct UscSequence {
  Scalar limit;
  std::vector<Scalar> points;
};

struct UscViolation {
  long m = 0;  // 0 for the kod row
  Scalar limit;
  double at_limit = 0.0;
  double eventual = 0.0;
  std::string detail;
};

/// For each sequence and each m present at the limit and along the tail
/// (the last ceil(k/2) points) of the sequence, flags value(limit) <
/// max over the tail. Sequence points and limits must be rows of the table
/// and the distances to the limit must strictly decrease.
std::vector<UscViolation> usc_table_check(const std::vector<UscRow>& rows, const std::vector<UscSequence>& sequences);

}  // namespace kod
