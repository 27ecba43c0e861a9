#include "kod/deformation.hpp"

#include <functional>
#include <limits>

#include "kod/workers.hpp"

namespace kod {

namespace {

std::map<std::string, Poly> parameter_bindings(const FamilySpec& fam, const Scalar& t) {
  return {{fam.parameters[0], Poly(t.real())}, {fam.parameters[1], Poly(t.imag())}};
}

PolyMatrix evaluate_block(const RatMatrix& J, Eigen::Index n, const std::map<std::string, Poly>& at,
                          const Scalar& t) {
  PolyMatrix out = zeros<Poly>(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      try {
        out(r, c) = J(r, c).substitute(at).as_polynomial();
      } catch (const MathError&) {
        throw ValidationError("J(" + std::to_string(r + 1) + "," + std::to_string(c + 1) +
                              ") = " + to_string(J(r, c)) + " has a vanishing denominator at t = " + to_string(t));
      }
    }
  return out;
}

Integer floor_of(const Rational& q) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

// Convergents p/q (q >= 3) of the irrational number enclosed by x(bits).
std::vector<Rational> convergents(const std::function<std::pair<Rational, Rational>(unsigned)>& x, int count) {
  for (unsigned bits = 256; bits <= 8192; bits *= 2) {
    auto [lo, hi] = x(bits);
    std::vector<Rational> out;
    Integer h1 = 1, h2 = 0, k1 = 0, k2 = 1;
    while (static_cast<int>(out.size()) < count) {
      Integer a = floor_of(lo);
      if (floor_of(hi) != a) break;
      Integer h = a * h1 + h2, k = a * k1 + k2;
      h2 = h1;
      h1 = h;
      k2 = k1;
      k1 = k;
      if (k >= 3) out.push_back(make_rational(h, k));
      Rational flo = lo - a, fhi = hi - a;
      if (sgn(flo) <= 0) break;
      lo = 1 / fhi;
      hi = 1 / flo;
    }
    if (static_cast<int>(out.size()) == count) return out;
  }
  throw MathError("crossing_sequence: continued fraction needs more precision than available");
}

std::pair<Rational, Rational> scaled_enclosure(const Rational& q, const Rational& lo, const Rational& hi) {
  if (sgn(q) >= 0) return {q * lo, q * hi};
  return {q * hi, q * lo};
}

}  // namespace

FamilyCheck family_validate(const FamilySpec& fam) {
  const Eigen::Index n = fam.J.rows();
  FamilyCheck out;
  if (n != fam.J.cols() || n % 2) {
    out.ok = false;
    out.witness = "J is not a square matrix of even size";
    return out;
  }
  RatMatrix sq = mul<RatFn>(fam.J, fam.J);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      RatFn e = sq(r, c) + RatFn(r == c ? 1 : 0);
      if (!e.is_zero()) {
        out.ok = false;
        out.witness = "entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ") of J^2 + I is " + to_string(e);
        return out;
      }
    }
  return out;
}

bool in_domain(const FamilySpec& fam, const Scalar& t) {
  Scalar norm = t * t.conj();
  return compare(norm, fam.radius * fam.radius) < 0;
}

PolyMatrix family_evaluate(const FamilySpec& fam, const Scalar& t) {
  if (!in_domain(fam, t))
    throw ValidationError("t = " + to_string(t) + " is outside the disc |t| < " + to_string(fam.radius));
  PolyMatrix J = evaluate_block(fam.J, fam.J.rows(), parameter_bindings(fam, t), t);
  validate_square_minus_identity(J);
  return J;
}

AcsData family_fiber(const FamilySpec& fam, const Scalar& t) { return make_acs(fam.base, family_evaluate(fam, t)); }

TotalSpace total_space(const FamilySpec& fam) {
  FamilyCheck check = family_validate(fam);
  if (!check.ok) throw ValidationError("family " + fam.name + ": " + check.witness);
  const ManifoldSpec& b = fam.base;
  const int n = b.dimension, N = n + 2;
  TotalSpace ts;
  ManifoldSpec& m = ts.manifold;
  m.name = b.name + "_x_disc";
  m.dimension = N;
  m.structure_only = b.structure_only;
  if (b.structure_only) {
    m.structure = b.structure;
    m.structure.resize(N);
  } else {
    m.coordinates = b.coordinates;
    m.coordinates.insert(m.coordinates.end(), fam.parameters.begin(), fam.parameters.end());
    m.periodic = b.periodic;
    m.frame = identity<Poly>(N);
    m.coframe = identity<Poly>(N);
    m.frame.topLeftCorner(n, n) = b.frame;
    m.coframe.topLeftCorner(n, n) = b.coframe;
    for (const auto& s : b.lattice_shifts) {
      LatticeShift ext = s;
      for (const auto& p : fam.parameters) ext.images.push_back(Poly::var(p));
      m.lattice_shifts.push_back(std::move(ext));
    }
  }
  ts.J_disc = zeros<RatFn>(2, 2);
  ts.J_disc(0, 1) = RatFn(-1);
  ts.J_disc(1, 0) = RatFn(1);
  ts.J = zeros<RatFn>(N, N);
  ts.J.topLeftCorner(n, n) = fam.J;
  ts.J.bottomRightCorner(2, 2) = ts.J_disc;
  ts.dpi = zeros<RatFn>(2, N);
  ts.dpi(0, n) = RatFn(1);
  ts.dpi(1, n + 1) = RatFn(1);
  ts.pseudoholomorphic = pseudoholomorphic_check<RatFn>(ts.dpi, ts.J, ts.J_disc);
  return ts;
}

PolyMatrix fiber_block(const TotalSpace& ts, const FamilySpec& fam, const Scalar& t) {
  const Eigen::Index n = fam.base.dimension;
  return evaluate_block(ts.J, n, parameter_bindings(fam, t), t);
}

std::vector<Scalar> crossing_sequence(const Scalar& limit, int count) {
  if (count < 1) throw ValidationError("crossing_sequence: count must be positive");
  std::vector<Scalar> out;
  if (limit.is_zero()) {
    for (int k = 0; k < count; ++k) out.push_back(Scalar(GaussRational(make_rational(1, Integer(1) << (k + 3)))));
    return out;
  }
  Rational q;
  if (is_pi_rational(limit, &q)) {
    // rational points converging to q*pi
    for (const auto& c : convergents([&](unsigned bits) {
           auto [lo, hi] = pi_enclosure(bits);
           return scaled_enclosure(q, lo, hi);
         }, count))
      out.push_back(Scalar(GaussRational(c)));
    return out;
  }
  if (limit.is_rational()) {
    // points c*pi with c converging to limit/pi
    Rational r = limit.as_rational();
    for (const auto& c : convergents([&](unsigned bits) {
           auto [lo, hi] = pi_enclosure(bits);
           return scaled_enclosure(r, 1 / hi, 1 / lo);
         }, count))
      out.push_back(Scalar(GaussRational(c)) * Scalar::pi());
    return out;
  }
  throw UnsupportedError("crossing_sequence: " + to_string(limit) + " is neither rational nor a rational multiple of pi");
}

ScanTable scan(const FamilySpec& fam, const std::vector<Scalar>& samples, long max_m, int workers) {
  if (max_m < 1) throw ValidationError("scan: the m range must contain at least m = 1");
  ScanTable table;
  table.family = fam.name;
  table.max_m = max_m;
  FamilyCheck check = family_validate(fam);
  if (!check.ok) throw ValidationError("family " + fam.name + ": " + check.witness);

  std::vector<Scalar> kept;
  for (const auto& t : samples) {
    if (in_domain(fam, t)) kept.push_back(t);
    else table.notices.push_back("skipped t = " + to_string(t) + ": outside |t| < " + to_string(fam.radius));
  }
  std::vector<AcsData> fibers;
  for (const auto& t : kept) fibers.push_back(family_fiber(fam, t));

  // one job per (t, m); m = 0 is the all-m analysis
  const size_t per = static_cast<size_t>(max_m) + 1;
  std::function<PlurigenusReport(size_t)> job = [&](size_t k) {
    return plurigenus(fibers[k / per], static_cast<long>(k % per));
  };
  auto reports = parallel_map<PlurigenusReport>(kept.size() * per, workers > 0 ? workers : worker_count(), job);

  for (size_t s = 0; s < kept.size(); ++s) {
    ScanRow row;
    row.t = kept[s];
    row.label = to_string(kept[s]);
    row.pi_rational = is_pi_rational(kept[s]);
    std::vector<PlurigenusReport> mine(reports.begin() + s * per, reports.begin() + (s + 1) * per);
    const PlurigenusReport& all = mine[0];
    for (long m = 1; m <= max_m; ++m) {
      const PlurigenusReport& r = mine[m];
      ScanCell c;
      c.m = m;
      c.value = r.value_at(m);
      c.lower = c.value ? *c.value : r.lower;
      c.upper = c.value ? c.value : r.upper;
      c.certified = r.certified && c.value.has_value();
      c.sections = r.basis;
      row.cells.push_back(std::move(c));
    }
    row.kod = kod_from_reports(mine);
    if (all.kind == VerdictKind::PeriodicDim) {
      row.period = all.period;
      row.counts = all.counts;
      for (int k = 0; k < all.period; ++k)
        if (all.counts[k] > 0) {
          row.first_resonant_m = k + 1;
          break;
        }
    } else if (all.kind == VerdictKind::ExactDim && all.dim > 0) {
      row.first_resonant_m = 1;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

std::string cell_text(const ScanCell& c) {
  if (c.value) return std::to_string(*c.value);
  return std::to_string(c.lower) + ".." + (c.upper ? std::to_string(*c.upper) : "");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

std::string to_csv(const ScanTable& table) {
  std::string out = "t,is_pi_rational";
  for (long m = 1; m <= table.max_m; ++m)
    out += ",P_" + std::to_string(m) + ",P_" + std::to_string(m) + "_certified";
  out += ",kod,kod_certified\n";
  for (const auto& r : table.rows) {
    out += csv_field(r.label) + (r.pi_rational ? ",true" : ",false");
    for (const auto& c : r.cells) out += "," + cell_text(c) + (c.certified ? ",true" : ",false");
    out += "," + short_string(r.kod) + (r.kod.certified ? ",true" : ",false") + "\n";
  }
  return out;
}

std::string plot_data(const ScanTable& table) {
  std::string out = "t_label,m,P_m\n";
  for (const auto& r : table.rows)
    for (const auto& c : r.cells) out += csv_field(r.label) + "," + std::to_string(c.m) + "," + cell_text(c) + "\n";
  return out;
}

std::vector<UscRow> usc_rows(const ScanTable& table) {
  std::vector<UscRow> rows;
  for (const auto& r : table.rows) {
    UscRow u;
    u.t = r.t;
    for (const auto& c : r.cells)
      if (c.value) u.P[c.m] = *c.value;
    switch (r.kod.kind) {
      case KodKind::NegInfinity:
        u.kod = -std::numeric_limits<double>::infinity();
        break;
      case KodKind::Exact:
        u.kod = r.kod.value;
        break;
      case KodKind::Estimate:
        u.kod = r.kod.exponent;
        break;
    }
    rows.push_back(std::move(u));
  }
  return rows;
}

}  // namespace kod
