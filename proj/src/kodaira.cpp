#include "kod/kodaira.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kod {

namespace {

std::string range_text(long a, long b) { return "m = " + std::to_string(a) + ".." + std::to_string(b); }

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

KodairaVerdict neg_infinity(bool certified, std::string why) {
  KodairaVerdict v;
  v.kind = KodKind::NegInfinity;
  v.certified = certified;
  v.rationale = std::move(why);
  return v;
}

KodairaVerdict exact(int value, bool certified, std::string why) {
  KodairaVerdict v;
  v.kind = KodKind::Exact;
  v.value = value;
  v.exponent = value;
  v.certified = certified;
  v.rationale = std::move(why);
  return v;
}

// Verdict from a report valid for every m, if it settles kod.
std::optional<KodairaVerdict> from_symbolic(const PlurigenusReport& r) {
  if (!r.certified) return std::nullopt;
  switch (r.kind) {
    case VerdictKind::VanishAllM:
      return neg_infinity(true, "P_m = 0 for every m >= 1 (vanishing certificate)");
    case VerdictKind::ExactDim:
      if (r.dim == 0) return neg_infinity(true, "P_m = 0 for every m >= 1");
      return exact(0, true, "P_m = " + std::to_string(r.dim) + " for every m >= 1");
    case VerdictKind::PeriodicDim: {
      long top = 0;
      for (int c : r.counts) top = std::max<long>(top, c);
      if (top == 0) return neg_infinity(true, "P_m = 0 for every m >= 1");
      return exact(0, true,
                   "P_m is periodic in m with period " + std::to_string(r.period) + ", bounded by " +
                       std::to_string(top) + " and not identically zero");
    }
    case VerdictKind::Bounds:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(const KodairaVerdict& v) {
  std::string range = v.m_max > 0 ? range_text(v.m_min, v.m_max) : "";
  switch (v.kind) {
    case KodKind::NegInfinity:
      if (v.certified) return "kod = −∞ (certified)";
      return "kod = −∞ (evidence only, " + range + ")";
    case KodKind::Exact:
      if (v.certified) return "kod = " + std::to_string(v.value) + " (certified)";
      return "kod = " + std::to_string(v.value) + " (from growth of P_m, " + range + ")";
    case KodKind::Estimate:
      return "kod ≈ " + fixed(v.exponent, 3) + " (estimate, " + range + ")";
  }
  return "";
}

std::string short_string(const KodairaVerdict& v) {
  switch (v.kind) {
    case KodKind::NegInfinity:
      return "-inf";
    case KodKind::Exact:
      return std::to_string(v.value);
    case KodKind::Estimate:
      return fixed(v.exponent, 3);
  }
  return "";
}

GrowthEstimate growth_exponent(const std::map<long, double>& values) {
  std::vector<std::pair<double, double>> pts;  // (log m, log P_m)
  long top = 0;
  for (const auto& [m, p] : values) {
    if (m < 1) throw ValidationError("growth_exponent: m must be >= 1, got " + std::to_string(m));
    if (p < 0) throw ValidationError("growth_exponent: negative P_" + std::to_string(m));
    top = std::max(top, m);
  }
  // fit the running maximum: it has the same limsup growth as P_m and does
  // not swing with resonances that switch P_m on and off along m
  double env = 0;
  for (const auto& [m, p] : values) {
    env = std::max(env, p);
    if (env > 0) pts.emplace_back(std::log(static_cast<double>(m)), std::log(env));
  }
  if (pts.empty()) throw ValidationError("growth_exponent: every P_m is zero");

  auto slope = [&](double from) -> std::optional<double> {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& [x, y] : pts) {
      if (x < from) continue;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n < 2) return std::nullopt;
    double den = n * sxx - sx * sx;
    if (den <= 0) return std::nullopt;
    return (n * sxy - sx * sy) / den;
  };

  GrowthEstimate g;
  bool any = false;
  const long lo = std::max<long>(1, (top + 1) / 2), hi = std::max<long>(lo, (3 * top) / 4);
  for (long m0 = lo; m0 <= hi; ++m0) {
    if (auto s = slope(std::log(static_cast<double>(m0)) - 1e-12)) {
      g.exponent = any ? std::max(g.exponent, *s) : *s;
      any = true;
      ++g.windows;
    }
  }
  if (!any) {
    // too few nonzero values in the tail: fall back to all of them
    if (auto s = slope(-1.0)) {
      g.exponent = *s;
      g.windows = 1;
    } else {
      g.exponent = 0.0;  // a single nonzero value carries no growth information
    }
  }
  double r = std::round(g.exponent);
  if (std::abs(g.exponent - r) <= kGrowthSnap) g.snapped = static_cast<int>(r);
  return g;
}

KodairaVerdict kod_from_reports(const std::vector<PlurigenusReport>& reports) {
  if (reports.empty()) throw ValidationError("kod_from_reports: no reports");
  for (const auto& r : reports)
    if (r.m == 0)
      if (auto v = from_symbolic(r)) return *v;

  std::map<long, const PlurigenusReport*> by_m;
  for (const auto& r : reports) {
    if (r.m == 0) continue;
    if (r.m < 0) throw ValidationError("kod_from_reports: negative m");
    if (!by_m.emplace(r.m, &r).second) throw ValidationError("kod_from_reports: two reports for m = " + std::to_string(r.m));
  }
  if (by_m.empty()) throw ValidationError("kod_from_reports: the symbolic report does not settle kod and no concrete m was given");
  const long M = by_m.rbegin()->first;
  if (by_m.begin()->first != 1 || static_cast<long>(by_m.size()) != M)
    throw ValidationError("kod_from_reports: concrete reports must cover m = 1..M without gaps");

  std::map<long, double> values;
  bool all_certified = true;
  bool all_zero = true;
  for (const auto& [m, r] : by_m) {
    auto v = r->value_at(m);
    long p = v ? *v : r->lower;
    all_certified = all_certified && v.has_value() && r->certified;
    all_zero = all_zero && p == 0 && v.has_value();
    values[m] = static_cast<double>(p);
  }

  KodairaVerdict out;
  if (all_zero) {
    out = neg_infinity(false, "P_m = 0 for " + range_text(1, M) + "; no certificate for larger m");
  } else {
    bool any_nonzero = std::any_of(values.begin(), values.end(), [](const auto& kv) { return kv.second > 0; });
    if (!any_nonzero) {
      out.kind = KodKind::Estimate;
      out.exponent = -std::numeric_limits<double>::infinity();
      out.rationale = "only lower bounds 0 are known on " + range_text(1, M);
    } else {
      GrowthEstimate g = growth_exponent(values);
      out.exponent = g.exponent;
      if (g.snapped) {
        out.kind = KodKind::Exact;
        out.value = *g.snapped;
        out.rationale = "tail slope of log max_{k<=m} P_k against log m is " + fixed(g.exponent, 3) + ", within " +
                        fixed(kGrowthSnap, 2) + " of " + std::to_string(*g.snapped);
      } else {
        out.kind = KodKind::Estimate;
        out.rationale = "tail slope of log max_{k<=m} P_k against log m is " + fixed(g.exponent, 3);
      }
      if (!all_certified) out.rationale += "; some P_m are only lower bounds";
    }
  }
  out.m_min = 1;
  out.m_max = M;
  return out;
}

std::vector<UscViolation> usc_table_check(const std::vector<UscRow>& rows, const std::vector<UscSequence>& sequences) {
  auto find = [&](const Scalar& t) -> const UscRow& {
    for (const auto& r : rows)
      if (r.t == t) return r;
    throw ValidationError("usc_table_check: no table row for t = " + to_string(t));
  };
  std::vector<UscViolation> out;
  for (const auto& seq : sequences) {
    if (seq.points.empty()) continue;
    const UscRow& base = find(seq.limit);
    double prev = std::numeric_limits<double>::infinity();
    std::vector<const UscRow*> tail;
    const size_t start = seq.points.size() / 2;
    for (size_t k = 0; k < seq.points.size(); ++k) {
      double d = std::abs(seq.points[k].to_complex() - seq.limit.to_complex());
      if (!(d < prev) || seq.points[k] == seq.limit)
        throw ValidationError("usc_table_check: sequence towards " + to_string(seq.limit) +
                              " does not approach it strictly at " + to_string(seq.points[k]));
      prev = d;
      const UscRow& r = find(seq.points[k]);
      if (k >= start) tail.push_back(&r);
    }
    for (const auto& [m, at] : base.P) {
      long eventual = -1;
      bool complete = true;
      for (const auto* r : tail) {
        auto it = r->P.find(m);
        if (it == r->P.end()) complete = false;
        else eventual = std::max(eventual, it->second);
      }
      if (!complete || at >= eventual) continue;
      UscViolation v;
      v.m = m;
      v.limit = seq.limit;
      v.at_limit = static_cast<double>(at);
      v.eventual = static_cast<double>(eventual);
      v.detail = "P_" + std::to_string(m) + "(" + to_string(seq.limit) + ") = " + std::to_string(at) +
                 " but P_" + std::to_string(m) + " = " + std::to_string(eventual) + " along the approach";
      out.push_back(std::move(v));
    }
    if (base.kod) {
      double eventual = -std::numeric_limits<double>::infinity();
      bool complete = true;
      for (const auto* r : tail) {
        if (!r->kod) complete = false;
        else eventual = std::max(eventual, *r->kod);
      }
      if (complete && *base.kod < eventual) {
        UscViolation v;
        v.limit = seq.limit;
        v.at_limit = *base.kod;
        v.eventual = eventual;
        auto txt = [](double d) { return std::isinf(d) ? std::string(d < 0 ? "-inf" : "inf") : fixed(d, 0); };
        v.detail = "kod(" + to_string(seq.limit) + ") = " + txt(*base.kod) + " but kod = " + txt(eventual) +
                   " along the approach";
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

}  // namespace kod
