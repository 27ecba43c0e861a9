// Families J(t) of almost complex structures: validation, evaluation at
// exact t, the total space on M x disc with its projection, and scans of
// plurigenera and Kodaira dimension over sample points.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kod/acs.hpp"
#include "kod/family.hpp"
#include "kod/kodaira.hpp"
#include "kod/plurigenera.hpp"

namespace kod {

struct FamilyCheck {
  bool ok = true;
  std::string witness;  // first entry of J^2 + I that is not identically zero
};

/// J(t)^2 = -I as an identity of rational functions in (ret, imt).
FamilyCheck family_validate(const FamilySpec& fam);

/// True when |t| < radius, decided exactly.
bool in_domain(const FamilySpec& fam, const Scalar& t);

/// J at t. ValidationError when t is outside the disc or a denominator
/// vanishes there.
PolyMatrix family_evaluate(const FamilySpec& fam, const Scalar& t);

AcsData family_fiber(const FamilySpec& fam, const Scalar& t);

/// M x disc with frame e_1..e_2n, then d/d(ret), d/d(imt).
struct TotalSpace {
  ManifoldSpec manifold;
  RatMatrix J;         // (2n+2) x (2n+2), fiber block J(t), disc block J_disc
  RatMatrix dpi;       // 2 x (2n+2)
  RatMatrix J_disc;    // standard structure on the disc
  bool pseudoholomorphic = false;
};

TotalSpace total_space(const FamilySpec& fam);

/// The fiber block of a total-space J with (ret, imt) bound to t.
PolyMatrix fiber_block(const TotalSpace& ts, const FamilySpec& fam, const Scalar& t);

/// Samples converging to `limit` from the other side of the dichotomy:
/// points q*pi for a rational limit, rational points for a limit in pi*Q.
/// Uses continued-fraction convergents (or 2^-k when the limit is 0).
/// UnsupportedError for limits in neither class.
std::vector<Scalar> crossing_sequence(const Scalar& limit, int count);

struct ScanCell {
  long m = 0;
  std::optional<long> value;  // exact P_m when determined
  long lower = 0;
  std::optional<long> upper;
  bool certified = false;
  std::vector<ExpSection> sections;
};

struct ScanRow {
  Scalar t;
  std::string label;
  bool pi_rational = false;
  std::vector<ScanCell> cells;
  KodairaVerdict kod;
  /// Resonance period of P_m in m, when P_m is periodic (0 otherwise).
  int period = 0;
  std::vector<int> counts;
  /// Smallest m with P_m > 0 according to the all-m analysis.
  std::optional<long> first_resonant_m;
};

struct ScanTable {
  std::string family;
  long max_m = 0;
  std::vector<ScanRow> rows;
  std::vector<std::string> notices;
};

/// Rows follow sample order; samples outside the disc are skipped with a
/// notice. workers <= 0 reads KOD_WORKERS.
ScanTable scan(const FamilySpec& fam, const std::vector<Scalar>& samples, long max_m, int workers = 0);

/// Columns t, is_pi_rational, P_m and P_m_certified for each m, kod,
/// kod_certified. A bound is written as lo..hi or lo.. when open.
std::string to_csv(const ScanTable& table);
/// Lines t_label,m,P_m for plotting.
std::string plot_data(const ScanTable& table);

std::vector<UscRow> usc_rows(const ScanTable& table);

}  // namespace kod
