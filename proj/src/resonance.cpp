#include <algorithm>
#include <numeric>

#include "kod/plurigenera.hpp"

namespace kod {

namespace {

Scalar two_pi_i() { return Scalar(2) * Scalar::pi() * Scalar::i(); }

Poly integer_poly(const Integer& v) { return Poly(Scalar(GaussRational(Rational(v)))); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

// Rational affine solution of a linear system, pivots expressed in the free variables.
struct AffineSolution {
  bool consistent = true;
  std::vector<std::string> vars;
  // pivot variable -> (constant, coefficient per variable index)
  std::map<std::string, std::pair<Rational, std::vector<Rational>>> pivots;
  std::vector<std::string> free;
};

AffineSolution solve_linear(const std::vector<Poly>& equations, const std::vector<std::string>& vars) {
  const size_t nv = vars.size();
  std::vector<std::vector<Rational>> rows;
  for (const auto& e : equations) {
    std::vector<Rational> row(nv + 1, 0);
    for (const auto& [mono, c] : e.terms()) {
      if (!c.is_rational()) throw MathError("solve_linear: non-rational coefficient in " + to_string(e));
      if (mono.is_one()) {
        row[nv] = -c.as_rational();
        continue;
      }
      if (mono.degree() != 1)
        throw UnsupportedError("quantization condition is not linear in the indices: " + to_string(e));
      auto it = std::find(vars.begin(), vars.end(), mono.factors()[0].first);
      if (it == vars.end()) throw MathError("solve_linear: unexpected symbol in " + to_string(e));
      row[static_cast<size_t>(it - vars.begin())] = c.as_rational();
    }
    rows.push_back(row);
  }
  AffineSolution sol;
  sol.vars = vars;
  size_t r = 0;
  std::vector<int> pivot_col;
  for (size_t c = 0; c < nv && r < rows.size(); ++c) {
    size_t p = r;
    while (p < rows.size() && sgn(rows[p][c]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    Rational inv = 1 / rows[r][c];
    for (auto& v : rows[r]) v *= inv;
    for (size_t q = 0; q < rows.size(); ++q) {
      if (q == r || sgn(rows[q][c]) == 0) continue;
      Rational f = rows[q][c];
      for (size_t k = 0; k <= nv; ++k) rows[q][k] -= f * rows[r][k];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (size_t q = r; q < rows.size(); ++q)
    if (sgn(rows[q][nv])) sol.consistent = false;
  std::vector<bool> is_pivot(nv, false);
  for (size_t q = 0; q < pivot_col.size(); ++q) {
    is_pivot[pivot_col[q]] = true;
    std::vector<Rational> coeffs(nv, 0);
    for (size_t k = 0; k < nv; ++k)
      if (static_cast<int>(k) != pivot_col[q]) coeffs[k] = -rows[q][k];
    sol.pivots[vars[pivot_col[q]]] = {rows[q][nv], coeffs};
  }
  for (size_t k = 0; k < nv; ++k)
    if (!is_pivot[k]) sol.free.push_back(vars[k]);
  return sol;
}

struct Shift {
  Rational p;  // x -> x + p
  LatticeShift s;
};

std::map<std::string, Poly> shift_bindings(const ManifoldSpec& man, const LatticeShift& s) {
  std::map<std::string, Poly> b;
  for (size_t k = 0; k < man.coordinates.size(); ++k) b[man.coordinates[k]] = s.images[k];
  return b;
}

class Resolver {
 public:
  Resolver(const FourierSystem& sys, const ManifoldSpec& man, long m) : sys_(sys), man_(man), m_(m) {
    for (const auto& s : man.lattice_shifts) {
      Rational p = 0;
      if (!sys.x.empty()) {
        int xi = man.coordinate_index(sys.x);
        Poly diff = s.images[xi] - Poly::var(sys.x);
        auto c = diff.constant();
        if (!c || !c->is_rational())
          throw UnsupportedError("lattice shift must translate " + sys.x + " by a rational constant, got " +
                                 to_string(s.images[xi]));
        p = c->as_rational();
      }
      shifts_.push_back({p, s});
    }
  }

  bool symbolic() const { return m_ == 0; }

  std::map<std::string, Poly> base_bindings(const Region& r) const {
    auto b = r.bindings();
    if (!symbolic()) b["m"] = Poly(m_);
    return b;
  }

  ForcingProblem problem(std::vector<Poly> polys, const std::string& x) const {
    ForcingProblem p;
    p.polys = std::move(polys);
    p.x = x;
    p.index = sys_.index;
    p.m_symbolic = symbolic();
    return p;
  }

  ResonanceRecord resolve(const Region& region) {
    ResonanceRecord rec;
    rec.region = region;
    auto b = base_bindings(region);
    Poly lambda;
    std::vector<Poly> conditions;
    if (!sys_.x.empty()) {
      int r0 = -1;
      Scalar n0;
      for (size_t r = 0; r < sys_.N.size(); ++r) {
        Poly n = sys_.N[r][0].substitute(b);
        if (n.is_zero()) continue;
        auto c = n.constant();
        if (!c) {
          rec.outcome = "gap";
          rec.detail = "derivative coefficient depends on " + sys_.x + ": " + to_string(n);
          rec.gaps.push_back(region);
          return rec;
        }
        if (r0 < 0) {
          r0 = static_cast<int>(r);
          n0 = *c;
          lambda = -sys_.M[r][0].substitute(b) / n0;
        } else {
          conditions.push_back(n * lambda + sys_.M[r][0].substitute(b));
        }
      }
      if (r0 < 0) {
        rec.outcome = "gap";
        rec.detail = "no equation involves d/d" + sys_.x;
        rec.gaps.push_back(region);
        return rec;
      }
      Poly x_part = lambda - lambda.substitute({{sys_.x, Poly(0)}});
      if (!x_part.is_zero()) conditions.push_back(x_part);
      if (!std::any_of(shifts_.begin(), shifts_.end(), [](const Shift& s) { return sgn(s.p) != 0; })) {
        rec.outcome = "gap";
        rec.detail = "no lattice shift moves " + sys_.x;
        rec.gaps.push_back(region);
        return rec;
      }
    }
    rec.lambda = lambda;

    std::vector<Region> live = {region};
    if (!conditions.empty()) live = sieve(rec, problem(conditions, sys_.x), live, false);

    // indices moved by a lattice shift are not resolved here
    std::vector<Poly> moved, xphase;
    for (const auto& sh : shifts_) {
      Poly ph = sys_.phase({});
      Poly delta = ph.substitute(shift_bindings(man_, sh.s)) - ph;
      for (size_t k = 0; k < sys_.periodic.size(); ++k) {
        Poly coef = delta.coefficients_in(sys_.periodic[k])[1];
        Scalar w = Scalar(2) * Scalar::pi() / Scalar(GaussRational(sys_.periods[k]));
        if (!coef.is_zero()) moved.push_back(coef / (Scalar::i() * w));
      }
      if (!sys_.x.empty()) {
        Poly coef = delta.coefficients_in(sys_.x)[1];
        if (!coef.is_zero()) xphase.push_back(coef);
      }
    }
    if (!moved.empty()) live = sieve(rec, problem(moved, ""), live, true);
    if (!xphase.empty()) live = sieve(rec, problem(xphase, ""), live, false);

    for (const auto& reg : live) quantize(rec, reg);
    if (!rec.gaps.empty()) rec.outcome = "gap";
    else if (rec.sections.empty() && rec.period == 0) rec.outcome = "no sections";
    else rec.outcome = "solutions";
    return rec;
  }

  // Runs a case tree on conditions; returns the regions where all of them
  // vanish. Forced regions are either zero (moved_is_gap false) or gaps.
  std::vector<Region> sieve(ResonanceRecord& rec, const ForcingProblem& p, const std::vector<Region>& regions,
                            bool moved_is_gap) {
    std::vector<Region> out;
    for (const auto& r : regions) {
      CaseNode tree = force(p, r);
      for (const auto* leaf : leaves(tree, CaseNode::Kind::Escape)) out.push_back(leaf->region);
      for (const auto* leaf : leaves(tree, CaseNode::Kind::Stuck)) rec.gaps.push_back(leaf->region);
      if (moved_is_gap)
        for (const auto* leaf : leaves(tree, CaseNode::Kind::Forced)) rec.gaps.push_back(leaf->region);
      rec.subtrees.push_back(std::move(tree));
    }
    return out;
  }

  void quantize(ResonanceRecord& rec, const Region& region) {
    auto b = base_bindings(region);
    Poly lam = rec.lambda.substitute(b);
    if (!sys_.x.empty()) lam = lam.substitute({{sys_.x, Poly(0)}});
    std::vector<std::string> vars;
    for (const auto& v : sys_.index)
      if (!region.fixed.count(v)) vars.push_back(v);
    const size_t n_index = vars.size();
    std::vector<Poly> equations;
    for (size_t s = 0; s < shifts_.size(); ++s) {
      Poly ph = sys_.phase({}).substitute(b);
      Poly delta = ph.substitute(shift_bindings(man_, shifts_[s].s)) - ph;
      for (const auto& c : sys_.periodic) delta = delta.substitute({{c, Poly(0)}});
      if (!sys_.x.empty()) delta = delta.substitute({{sys_.x, Poly(0)}});
      std::string k = "k" + std::to_string(s + 1);
      vars.push_back(k);
      Poly e = lam * Scalar(GaussRational(shifts_[s].p)) + delta - two_pi_i() * Poly::var(k);
      for (const auto& [key, q] : components(e, "")) equations.push_back(q);
    }
    if (symbolic() && !region.fixed.count("m")) vars.push_back("m");
    AffineSolution sol = solve_linear(equations, vars);
    if (!sol.consistent) return;

    // no x: a constant mode needs every index fixed by the region or the equations
    for (const auto& f : sol.free) {
      if (f == "m") continue;
      bool index_var = std::find(vars.begin(), vars.begin() + static_cast<long>(n_index), f) !=
                       vars.begin() + static_cast<long>(n_index);
      bool affects = false;
      for (size_t q = 0; q < n_index; ++q) {
        auto it = sol.pivots.find(vars[q]);
        size_t fi = static_cast<size_t>(std::find(vars.begin(), vars.end(), f) - vars.begin());
        if (it != sol.pivots.end() && sgn(it->second.second[fi])) affects = true;
      }
      if (index_var || affects) {
        rec.gaps.push_back(region);
        rec.detail = "infinitely many escaping indices on " + region.describe();
        return;
      }
    }
    if (symbolic() && !region.fixed.count("m")) {
      auto mp = sol.pivots.find("m");
      if (mp != sol.pivots.end()) {
        // solvable only at one value of m
        const Rational& m0 = mp->second.first;
        if (m0 >= 1 && is_integer(m0)) {
          rec.gaps.push_back(region);
          rec.detail = "resonance only at m = " + m0.get_str();
        }
        return;
      }
      const size_t mi = vars.size() - 1;
      Integer period = 1;
      for (size_t q = 0; q + 1 < vars.size(); ++q) {
        auto it = sol.pivots.find(vars[q]);
        if (it == sol.pivots.end()) continue;
        const Rational& v = it->second.second[mi];
        if (sgn(v) == 0) continue;
        if (q < n_index && constrained(region, vars[q])) {
          rec.gaps.push_back(region);
          rec.detail = "constrained index depends on m on " + region.describe();
          return;
        }
        mpz_lcm(period.get_mpz_t(), period.get_mpz_t(), v.get_den_mpz_t());
      }
      if (!period.fits_sint_p() || period > 100000) throw UnsupportedError("resonance period too large");
      int per = static_cast<int>(period.get_si());
      std::vector<int> counts(per, 0);
      for (int r = 1; r <= per; ++r) {
        auto pt = point_at(sol, vars, n_index, region, Rational(r));
        if (pt) ++counts[r - 1];
      }
      merge_period(rec, per, counts);
      return;
    }
    Rational mval = symbolic() ? Rational(region.fixed.at("m")) : Rational(m_);
    auto pt = point_at(sol, vars, n_index, region, mval);
    if (!pt) return;
    if (symbolic()) {
      // an isolated resonant m on a region fixing m
      rec.gaps.push_back(region);
      rec.detail = "resonance only at m = " + mval.get_str();
      return;
    }
    ExpSection s;
    s.index = *pt;
    std::map<std::string, Poly> ib;
    for (const auto& [v, z] : *pt) ib[v] = integer_poly(z);
    ib["m"] = Poly(m_);
    Poly l = rec.lambda.substitute(ib);
    if (!sys_.x.empty()) l = l.substitute({{sys_.x, Poly(0)}});
    s.lambda = *l.constant();
    s.exponent = sys_.phase(ib);
    if (!sys_.x.empty()) s.exponent += Poly(s.lambda) * Poly::var(sys_.x);
    rec.sections.push_back(s);
  }

  static bool constrained(const Region& r, const std::string& v) {
    if (r.nonzero.count(v) || r.excluded.count(v)) return true;
    for (const auto& s : r.not_all_zero)
      if (s.count(v)) return true;
    return false;
  }

  std::optional<std::map<std::string, Integer>> point_at(const AffineSolution& sol, const std::vector<std::string>& vars,
                                                         size_t n_index, const Region& region, const Rational& m) {
    std::map<std::string, Integer> pt = region.fixed;
    pt.erase("m");
    for (size_t q = 0; q < vars.size(); ++q) {
      if (vars[q] == "m") continue;
      auto it = sol.pivots.find(vars[q]);
      Rational val = 0;
      if (it != sol.pivots.end()) {
        val = it->second.first;
        for (size_t f = 0; f < vars.size(); ++f)
          if (vars[f] == "m") val += it->second.second[f] * m;
      }
      if (!is_integer(val)) return std::nullopt;
      if (q < n_index) pt[vars[q]] = val.get_num();
    }
    if (!region.contains(pt)) return std::nullopt;
    return pt;
  }

  static void merge_period(ResonanceRecord& rec, int per, const std::vector<int>& counts) {
    if (rec.period == 0) {
      rec.period = per;
      rec.counts = counts;
      return;
    }
    int l = std::lcm(rec.period, per);
    std::vector<int> merged(l, 0);
    for (int r = 1; r <= l; ++r) merged[r - 1] = rec.counts[(r - 1) % rec.period] + counts[(r - 1) % per];
    rec.period = l;
    rec.counts = merged;
  }

 private:
  const FourierSystem& sys_;
  const ManifoldSpec& man_;
  long m_;
  std::vector<Shift> shifts_;
};

}  // namespace

ResonanceResult resolve_escapes(const FourierSystem& sys, const ManifoldSpec& manifold, const CaseNode& tree, long m) {
  if (sys.real_form) throw UnsupportedError("resonance analysis runs on the complex form");
  Resolver res(sys, manifold, m);
  ResonanceResult out;
  for (const auto* leaf : leaves(tree, CaseNode::Kind::Escape)) {
    ResonanceRecord rec = res.resolve(leaf->region);
    if (!rec.gaps.empty()) out.has_gap = true;
    out.sections.insert(out.sections.end(), rec.sections.begin(), rec.sections.end());
    out.records.push_back(std::move(rec));
  }
  for (const auto* leaf : leaves(tree, CaseNode::Kind::Stuck)) {
    ResonanceRecord rec;
    rec.region = leaf->region;
    rec.outcome = "gap";
    rec.detail = "case analysis unresolved";
    rec.gaps.push_back(leaf->region);
    out.has_gap = true;
    out.records.push_back(std::move(rec));
  }
  if (m == 0) {
    out.symbolic_ok = !out.has_gap;
    int per = 1;
    for (const auto& r : out.records)
      if (r.period) per = std::lcm(per, r.period);
    out.period = per;
    out.counts.assign(per, 0);
    for (const auto& r : out.records)
      if (r.period)
        for (int k = 1; k <= per; ++k) out.counts[k - 1] += r.counts[(k - 1) % r.period];
  }
  return out;
}

bool verify_section(const SectionEquation& eq, const ManifoldSpec& manifold, const FourierSystem& sys,
                    const ExpSection& s, long m) {
  for (int j = 0; j < eq.n; ++j)
    if (!eq.apply_exp(j, s.exponent, Poly(m)).is_zero()) return false;
  auto in_2pi_i_z = [](const Poly& p) {
    auto c = p.constant();
    if (!c) return false;
    Scalar q = *c / two_pi_i();
    return q.is_rational() && is_integer(q.as_rational());
  };
  for (size_t k = 0; k < sys.periodic.size(); ++k) {
    Poly w = Poly::var(sys.periodic[k]);
    Poly shifted = s.exponent.substitute({{sys.periodic[k], w + Poly(Scalar(GaussRational(sys.periods[k])))}});
    if (!in_2pi_i_z(shifted - s.exponent)) return false;
  }
  for (const auto& sh : manifold.lattice_shifts)
    if (!in_2pi_i_z(s.exponent.substitute(shift_bindings(manifold, sh)) - s.exponent)) return false;
  return true;
}

}  // namespace kod
