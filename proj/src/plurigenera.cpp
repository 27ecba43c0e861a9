#include <algorithm>
#include <sstream>

#include "kod/plurigenera.hpp"

namespace kod {

// ---------------------------------------------------------------- max principle

MaxPrincipleResult strategy_max_principle(const SectionEquation& eq, const ManifoldSpec& man) {
  MaxPrincipleResult res;
  for (int j = 0; j < eq.n; ++j)
    if (eq.a[j].is_zero()) res.pure_equations.push_back(j);
  if (res.pure_equations.empty()) {
    res.detail = "no equation of the form Xbar_j(f) = 0";
    return res;
  }
  const int dim = man.dimension;
  auto brackets = structure_constants(man);
  if (!brackets) {
    res.outcome = MaxPrincipleResult::Outcome::Unknown;
    res.detail = "frame brackets are not constant";
    return res;
  }
  // X_j Xbar_j = (V^2 + W^2 + i[V, W]) / 4 for Xbar_j = (V + iW) / 2
  res.symbol = zeros<Poly>(dim, dim);
  std::vector<Scalar> imaginary(dim);
  for (int j : res.pure_equations) {
    std::vector<Scalar> V(dim), W(dim);
    for (int i = 0; i < dim; ++i) {
      auto c = eq.frame_coeffs[j][i].constant();
      V[i] = Scalar(2) * c->real();
      W[i] = Scalar(2) * c->imag();
    }
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) res.symbol(a, b) += Poly(V[a] * V[b] + W[a] * W[b]);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        if (V[a].is_zero() || W[b].is_zero()) continue;
        for (int k = 0; k < dim; ++k) imaginary[k] += V[a] * W[b] * (*brackets)[(size_t(a) * dim + b) * dim + k];
      }
  }
  for (int r = 1; r <= dim; ++r) {
    PolyMatrix lead = res.symbol.topLeftCorner(r, r);
    Scalar minor = *determinant<Poly>(lead).constant();
    if (sign(minor) <= 0) {
      res.outcome = MaxPrincipleResult::Outcome::Unknown;
      res.detail = "symbol degenerate: leading minor of order " + std::to_string(r) + " is " + to_string(minor);
      return res;
    }
  }
  for (int k = 0; k < dim; ++k)
    if (!imaginary[k].is_zero()) {
      res.outcome = MaxPrincipleResult::Outcome::Unknown;
      res.detail = "operator sum X_j Xbar_j has an imaginary first order part";
      return res;
    }
  res.outcome = MaxPrincipleResult::Outcome::Constant;
  res.detail = "sum X_j Xbar_j is a real elliptic operator without zeroth order term; solutions are constant";
  return res;
}

// ---------------------------------------------------------------- forcing

CaseNode strategy_algebraic_forcing(const FourierSystem& sys, bool m_symbolic, long m) {
  ForcingProblem p;
  p.x = sys.x;
  p.index = sys.index;
  p.m_symbolic = m_symbolic;
  for (const auto& poly : sys.forcing_polynomials())
    p.polys.push_back(m_symbolic ? poly : poly.substitute({{"m", Poly(m)}}));
  return force(p, Region{});
}

// ---------------------------------------------------------------- reports

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::VanishAllM: return "VanishAllM";
    case VerdictKind::ExactDim: return "ExactDim";
    case VerdictKind::Bounds: return "Bounds";
    case VerdictKind::PeriodicDim: return "PeriodicDim";
  }
  return "?";
}

std::optional<long> PlurigenusReport::value_at(long mm) const {
  switch (kind) {
    case VerdictKind::VanishAllM: return 0;
    case VerdictKind::ExactDim:
      if (m == 0 || m == mm) return dim;
      return std::nullopt;
    case VerdictKind::PeriodicDim: return counts[(mm - 1) % period];
    case VerdictKind::Bounds:
      if (m == mm && upper && *upper == lower) return lower;
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

std::string tree_summary(const CaseNode& t) {
  return std::to_string(leaves(t, CaseNode::Kind::Forced).size()) + " forced, " +
         std::to_string(leaves(t, CaseNode::Kind::Escape).size()) + " escaped, " +
         std::to_string(leaves(t, CaseNode::Kind::Stuck).size()) + " unresolved";
}

void set_vanishing(PlurigenusReport& r) {
  if (r.m == 0) {
    r.kind = VerdictKind::VanishAllM;
  } else {
    r.kind = VerdictKind::ExactDim;
    r.dim = 0;
  }
  r.certified = true;
}

}  // namespace

PlurigenusReport plurigenus(const AcsData& acs, long m) {
  if (m < 0) throw ValidationError("m must be >= 1, got " + std::to_string(m));
  PlurigenusReport rep;
  rep.manifold = acs.manifold.name;
  rep.m = m;
  SectionEquation eq = build_section_equation(acs);

  MaxPrincipleResult mp = strategy_max_principle(eq, acs.manifold);
  rep.strategy_trace.push_back("max_principle: " + mp.detail);
  if (mp.outcome == MaxPrincipleResult::Outcome::Constant) {
    bool all_pure = static_cast<int>(mp.pure_equations.size()) == eq.n;
    rep.kind = VerdictKind::ExactDim;
    rep.dim = all_pure ? 1 : 0;
    rep.certified = true;
    if (all_pure) {
      rep.basis.push_back(ExpSection{{}, Scalar(0), Poly()});
      rep.strategy_trace.push_back("constant sections: E_j(1) = m a_j = 0 for all j");
    } else {
      rep.strategy_trace.push_back("constant sections: some a_j != 0 forces the constant to vanish");
    }
    if (m == 0 && !all_pure) rep.kind = VerdictKind::VanishAllM;
    return rep;
  }
  if (acs.manifold.structure_only) {
    rep.kind = VerdictKind::Bounds;
    rep.lower = 0;
    rep.reason = "no coordinates for Fourier reduction and the maximum principle does not apply";
    rep.strategy_trace.push_back("fourier: not applicable");
    return rep;
  }

  const bool symbolic = m == 0;
  FourierSystem real_sys = fourier_reduce(eq, acs.manifold, true);
  rep.real_tree = strategy_algebraic_forcing(real_sys, symbolic, m);
  rep.strategy_trace.push_back("algebraic_forcing (real form): " + tree_summary(*rep.real_tree));
  FourierSystem cx = fourier_reduce(eq, acs.manifold, false);
  rep.complex_tree = strategy_algebraic_forcing(cx, symbolic, m);
  rep.strategy_trace.push_back("algebraic_forcing (complex form): " + tree_summary(*rep.complex_tree));
  const bool real_forced = all_forced(*rep.real_tree);
  const bool complex_forced = all_forced(*rep.complex_tree);
  if (real_forced || complex_forced) {
    set_vanishing(rep);
    if (real_forced && complex_forced) rep.strategy_trace.push_back("cross-check: both forms force every index");
    return rep;
  }

  ResonanceResult res = resolve_escapes(cx, acs.manifold, *rep.complex_tree, m);
  rep.resonance = res.records;
  rep.strategy_trace.push_back("resonance: " + std::to_string(res.records.size()) + " escaped region(s)" +
                               (res.has_gap ? ", with unresolved indices" : ""));
  if (symbolic) {
    if (!res.symbolic_ok) {
      rep.kind = VerdictKind::Bounds;
      rep.lower = 0;
      rep.reason = "escaped indices not resolved for symbolic m";
      return rep;
    }
    if (std::all_of(res.counts.begin(), res.counts.end(), [](int c) { return c == 0; })) {
      set_vanishing(rep);
      rep.strategy_trace.push_back("quantization: no solutions for any m >= 1");
      return rep;
    }
    rep.kind = VerdictKind::PeriodicDim;
    rep.period = res.period;
    rep.counts = res.counts;
    rep.certified = true;
    return rep;
  }
  for (const auto& s : res.sections)
    if (!verify_section(eq, acs.manifold, cx, s, m))
      throw InvariantError("constructed section exp(" + to_string(s.exponent) + ") does not solve E_j = 0");
  rep.basis = res.sections;
  if (res.has_gap) {
    rep.kind = VerdictKind::Bounds;
    rep.lower = static_cast<long>(res.sections.size());
    rep.reason = "some escaped indices are not resolved";
    return rep;
  }
  rep.kind = VerdictKind::ExactDim;
  rep.dim = static_cast<long>(res.sections.size());
  rep.certified = true;
  return rep;
}

std::string render_text(const PlurigenusReport& r) {
  std::ostringstream o;
  o << "manifold: " << r.manifold << "\n";
  o << "m: " << (r.m == 0 ? std::string("symbolic") : std::to_string(r.m)) << "\n";
  o << "verdict: " << to_string(r.kind);
  switch (r.kind) {
    case VerdictKind::ExactDim: o << " " << r.dim; break;
    case VerdictKind::Bounds:
      o << " [" << r.lower << ", " << (r.upper ? std::to_string(*r.upper) : std::string("?")) << "] (" << r.reason
        << ")";
      break;
    case VerdictKind::PeriodicDim: {
      o << " period " << r.period << ", P_m for m = 1.." << r.period << ":";
      for (int c : r.counts) o << " " << c;
      break;
    }
    case VerdictKind::VanishAllM: break;
  }
  o << "\n";
  for (const auto& s : r.strategy_trace) o << "  " << s << "\n";
  if (r.real_tree) o << "case tree (real form):\n" << to_string(*r.real_tree, 1);
  if (r.complex_tree) o << "case tree (complex form):\n" << to_string(*r.complex_tree, 1);
  for (const auto& rec : r.resonance) {
    o << "escaped region " << rec.region.describe() << ": " << rec.outcome;
    if (!rec.lambda.is_zero()) o << ", lambda = " << to_string(rec.lambda);
    if (!rec.detail.empty()) o << " (" << rec.detail << ")";
    o << "\n";
  }
  for (const auto& s : r.basis) o << "section: exp(" << to_string(s.exponent) << ") psi^m\n";
  return o.str();
}

}  // namespace kod
