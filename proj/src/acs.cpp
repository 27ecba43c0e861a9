#include "kod/acs.hpp"

#include <bit>

namespace kod {

bool AcsData::constant_coefficients() const {
  for (Eigen::Index i = 0; i < J.rows(); ++i)
    for (Eigen::Index j = 0; j < J.cols(); ++j)
      if (!J(i, j).is_constant()) return false;
  return true;
}

Form AcsData::alpha_form() const {
  Form f(manifold.dimension, BasisKind::Complex, 1);
  for (int j = 0; j < n(); ++j) f.add(Mask(1) << (n() + j), alpha[j]);
  return f;
}

PolyMatrix coframe10(const PolyMatrix& J) {
  const Eigen::Index dim = J.rows();
  const Eigen::Index n = dim / 2;
  const Scalar half_i = Scalar::i() / Scalar(2);
  std::vector<std::vector<Poly>> chosen;
  std::vector<Eigen::Index> pivots;
  for (Eigen::Index r = 0; r < dim && static_cast<Eigen::Index>(chosen.size()) < n; ++r) {
    std::vector<Poly> row(dim);
    for (Eigen::Index c = 0; c < dim; ++c) row[c] = J(r, c) * (-half_i) + Poly(r == c ? Scalar::rational(1, 2) : Scalar(0));
    for (size_t k = 0; k < chosen.size(); ++k) {
      Poly f = row[pivots[k]];
      if (f.is_zero()) continue;
      for (Eigen::Index c = 0; c < dim; ++c) row[c] -= f * chosen[k][c];
    }
    Eigen::Index p = 0;
    while (p < dim && row[p].is_zero()) ++p;
    if (p == dim) continue;
    auto lead = row[p].constant();
    if (!lead) throw UnsupportedError("(1,0)-coframe needs a non-constant pivot " + to_string(row[p]));
    Scalar inv = lead->inverse();
    for (auto& e : row) e *= inv;
    chosen.push_back(std::move(row));
    pivots.push_back(p);
  }
  if (static_cast<Eigen::Index>(chosen.size()) != n)
    throw InvariantError("projector onto (1,0)-forms has rank " + std::to_string(chosen.size()));
  PolyMatrix out(n, dim);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index c = 0; c < dim; ++c) out(k, c) = chosen[k][c];
  return out;
}

AcsData make_acs(const ManifoldSpec& m, const PolyMatrix& J) {
  if (J.rows() != m.dimension)
    throw ValidationError("J must be " + std::to_string(m.dimension) + "x" + std::to_string(m.dimension));
  validate_square_minus_identity(J);
  auto symbols = m.symbols();
  for (Eigen::Index i = 0; i < J.rows(); ++i)
    for (Eigen::Index j = 0; j < J.cols(); ++j)
      for (const auto& s : J(i, j).symbols())
        if (!symbols.count(s))
          throw ValidationError("J entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                ") uses undeclared symbol '" + s + "'");
  AcsData acs;
  acs.manifold = m;
  acs.J = J;
  const int dim = m.dimension;
  const int n = dim / 2;
  PolyMatrix phi = coframe10(J);
  acs.Q = PolyMatrix(dim, dim);
  acs.Q.topRows(n) = phi;
  acs.Q.bottomRows(n) = conj(phi);
  try {
    acs.R = inverse(acs.Q);
  } catch (const MathError&) {
    throw UnsupportedError("complex coframe cannot be inverted with constant pivots");
  }
  acs.psi = Form::monomial(dim, BasisKind::Complex, (Mask(1) << n) - 1, Poly(1));
  Form dbar_psi = delbar(acs.psi, acs);
  // conj(phi)^j ^ psi = (-1)^n psi ^ conj(phi)^j
  for (int j = 0; j < n; ++j) {
    Poly c = dbar_psi.coefficient(((Mask(1) << n) - 1) | (Mask(1) << (n + j)));
    acs.alpha.push_back(n % 2 ? -c : c);
  }
  if (wedge(acs.alpha_form(), acs.psi) != dbar_psi)
    throw InvariantError("dbar psi is not alpha ^ psi");
  return acs;
}

Form to_complex(const Form& a, const AcsData& acs) {
  if (a.kind() == BasisKind::Complex) return a;
  if (a.kind() != BasisKind::Frame) throw MathError("to_complex expects a frame-basis form");
  return change_basis(a, acs.R, BasisKind::Complex);
}

Form to_frame(const Form& a, const AcsData& acs) {
  if (a.kind() == BasisKind::Frame) return a;
  if (a.kind() != BasisKind::Complex) throw MathError("to_frame expects a complex-basis form");
  return change_basis(a, acs.Q, BasisKind::Frame);
}

std::pair<int, int> bidegree(Mask mask, int n) {
  Mask low = (Mask(1) << n) - 1;
  return {std::popcount(mask & low), std::popcount(mask >> n)};
}

std::map<std::pair<int, int>, Form> bidegree_split(const Form& a, const AcsData& acs) {
  Form c = to_complex(a, acs);
  std::map<std::pair<int, int>, Form> out;
  for (const auto& [mask, coeff] : c.terms()) {
    auto pq = bidegree(mask, acs.n());
    auto it = out.try_emplace(pq, c.dim(), BasisKind::Complex, c.degree()).first;
    it->second.add(mask, coeff);
  }
  return out;
}

Form d_complex(const Form& a, const AcsData& acs) {
  return to_complex(d(to_frame(a, acs), acs.manifold), acs);
}

namespace {

Form component(const Form& a, const AcsData& acs, int dp, int dq, const char* name) {
  Form c = to_complex(a, acs);
  std::optional<std::pair<int, int>> type;
  for (const auto& [mask, coeff] : c.terms()) {
    auto pq = bidegree(mask, acs.n());
    if (type && *type != pq)
      throw MathError(std::string(name) + " needs a form of pure type (p,q); use bidegree_split first");
    type = pq;
  }
  Form out(c.dim(), BasisKind::Complex, c.degree() + 1);
  if (!type) return out;
  Form da = d_complex(c, acs);
  const std::pair<int, int> want{type->first + dp, type->second + dq};
  for (const auto& [mask, coeff] : da.terms())
    if (bidegree(mask, acs.n()) == want) out.add(mask, coeff);
  return out;
}

}  // namespace

Form mu(const Form& a, const AcsData& acs) { return component(a, acs, 2, -1, "mu"); }
Form del(const Form& a, const AcsData& acs) { return component(a, acs, 1, 0, "del"); }
Form delbar(const Form& a, const AcsData& acs) { return component(a, acs, 0, 1, "delbar"); }
Form mubar(const Form& a, const AcsData& acs) { return component(a, acs, -1, 2, "mubar"); }

IntegrabilityResult is_integrable(const AcsData& acs) {
  IntegrabilityResult r;
  for (int k = 0; k < acs.n(); ++k) {
    Form w = mubar(acs.phi(k), acs);
    if (!w.is_zero()) {
      r.integrable = false;
      r.witness_index = k;
      r.witness = w;
      return r;
    }
  }
  return r;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "unknown";
  }
}

std::optional<std::vector<Scalar>> structure_constants(const ManifoldSpec& m) {
  const int dim = m.dimension;
  std::vector<Scalar> c(size_t(dim) * dim * dim);
  auto de = structure_equations(m);
  for (int k = 0; k < dim; ++k)
    for (const auto& [mask, coeff] : de[k].terms()) {
      auto v = coeff.constant();
      if (!v) return std::nullopt;
      int a = std::countr_zero(mask);
      int b = std::countr_zero(mask & (mask - 1));
      // de^k(e_a, e_b) = -e^k([e_a, e_b])
      c[(size_t(a) * dim + b) * dim + k] = -*v;
      c[(size_t(b) * dim + a) * dim + k] = *v;
    }
  return c;
}

namespace {

long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

bool all_constant(const Form& f) {
  for (const auto& [mask, c] : f.terms())
    if (!c.is_constant()) return false;
  return true;
}

}  // namespace

GcyReport gcy_check(const AcsData& acs, const Form& sigma_in, const Form& epsilon) {
  const ManifoldSpec& m = acs.manifold;
  const int dim = m.dimension;
  const int n = acs.n();
  Form sigma = sigma_in.kind() == BasisKind::Frame ? sigma_in : to_frame(sigma_in, acs);
  if (sigma.degree() != 2 && !sigma.is_zero()) throw ValidationError("sigma must be a 2-form");
  if (sigma.conj() != sigma) throw ValidationError("sigma must be real");
  if (!d(sigma, m).is_zero()) throw ValidationError("sigma is not closed");
  Form top = Form::function(dim, BasisKind::Frame, Poly(1));
  for (int k = 0; k < n; ++k) top = wedge(top, sigma);
  if (top.is_zero()) throw ValidationError("sigma is degenerate (sigma^n = 0)");
  Form eps = to_complex(epsilon, acs);
  for (const auto& [mask, c] : eps.terms())
    if (bidegree(mask, n) != std::make_pair(n, 0)) throw ValidationError("epsilon must be an (n,0)-form");

  GcyReport rep;
  const bool invariant = acs.constant_coefficients() && all_constant(sigma) && all_constant(eps);
  ScalarMatrix S = zeros<Scalar>(dim, dim), Jc = zeros<Scalar>(dim, dim), G;
  if (invariant) {
    for (const auto& [mask, c] : sigma.terms()) {
      int a = std::countr_zero(mask);
      int b = std::countr_zero(mask & (mask - 1));
      S(a, b) = *c.constant();
      S(b, a) = -*c.constant();
    }
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) Jc(i, j) = *acs.J(i, j).constant();
    G = mul<Scalar>(S, Jc);  // g(e_a, e_b) = sigma(e_a, J e_b)
  }

  // (1) metric
  bool usable_metric = false;  // symmetric, J-invariant, nondegenerate: enough for (3)
  if (!invariant) {
    rep.metric = {Verdict::Unknown, "sigma or J has non-constant coefficients"};
  } else {
    if (first_difference<Scalar>(G, G.transpose())) {
      rep.metric = {Verdict::Fail, "g is not symmetric"};
    } else if (first_difference<Scalar>(mul<Scalar>(mul<Scalar>(Jc.transpose(), G), Jc), G)) {
      rep.metric = {Verdict::Fail, "g is not J-invariant"};
    } else {
      usable_metric = !determinant<Scalar>(G).is_zero();
      rep.metric = {Verdict::Pass, "g positive definite and J-Hermitian"};
      for (int k = 1; k <= dim; ++k) {
        Scalar minor = determinant<Scalar>(G.topLeftCorner(k, k));
        if (!minor.is_real()) {
          rep.metric = {Verdict::Fail, "leading minor " + std::to_string(k) + " is not real"};
          break;
        }
        if (sign(minor) <= 0) {
          rep.metric = {Verdict::Fail, "leading principal minor " + std::to_string(k) + " = " + to_string(minor) + " is not positive"};
          break;
        }
      }
    }
  }

  // (2) volume normalization, an exact form identity
  {
    Form ef = to_frame(eps, acs);
    Form lhs = wedge(ef, ef.conj());
    Scalar factor = Scalar(((n * (n + 1) / 2) % 2) ? -1 : 1) * pow(Scalar::i(), n) / Scalar(factorial(n));
    Form rhs = top * Poly(factor);
    if (lhs == rhs) rep.volume = {Verdict::Pass, "eps ^ conj(eps) matches sigma^n"};
    else rep.volume = {Verdict::Fail, "eps ^ conj(eps) - rhs = " + to_string(lhs - rhs, default_basis_names(m, BasisKind::Frame))};
  }

  // (3) parallel canonical section
  auto brackets = structure_constants(m);
  // the Levi-Civita connection of c*g is that of g for any constant c != 0,
  // so an indefinite or negative g still decides (3)
  if (!invariant || !brackets || !usable_metric) {
    std::string why = !invariant ? "non-constant coefficients" : !brackets ? "frame brackets are not constant"
                                                                           : "g is degenerate or not J-invariant";
    rep.parallel = {Verdict::Unknown, why};
    return rep;
  }
  ScalarMatrix Ginv = inverse(G);
  auto br = [&](int a, int b, int k) { return (*brackets)[(size_t(a) * dim + b) * dim + k]; };
  auto g_of_bracket = [&](int a, int b, int z) {
    Scalar s;
    for (int k = 0; k < dim; ++k)
      if (!br(a, b, k).is_zero()) s += br(a, b, k) * G(k, z);
    return s;
  };
  Form result(dim, BasisKind::Frame, n);
  Form ef = to_frame(eps, acs);
  for (int a = 0; a < dim; ++a) {
    ScalarMatrix A = zeros<Scalar>(dim, dim);  // nabla_{e_a} e_b = sum_c A(c, b) e_c
    for (int b = 0; b < dim; ++b) {
      std::vector<Scalar> lower(dim);
      for (int z = 0; z < dim; ++z)
        lower[z] = (g_of_bracket(a, b, z) - g_of_bracket(b, z, a) + g_of_bracket(z, a, b)) / Scalar(2);
      for (int c = 0; c < dim; ++c)
        for (int z = 0; z < dim; ++z)
          if (!lower[z].is_zero()) A(c, b) += Ginv(c, z) * lower[z];
    }
    ScalarMatrix B = A - mul<Scalar>(mul<Scalar>(Jc, A), Jc) / Scalar(2);
    // derivation on covectors: nabla e^c = -sum_b B(c, b) e^b
    Form out(dim, BasisKind::Frame, n);
    for (const auto& [mask, coeff] : ef.terms()) {
      for (Mask rest = mask; rest; rest &= rest - 1) {
        int c = std::countr_zero(rest);
        Form pre = Form::function(dim, BasisKind::Frame, coeff);
        for (Mask r2 = mask; r2; r2 &= r2 - 1) {
          int k = std::countr_zero(r2);
          if (k != c) {
            pre = wedge(pre, Form::basis(dim, BasisKind::Frame, k));
            continue;
          }
          Form cov(dim, BasisKind::Frame, 1);
          for (int b = 0; b < dim; ++b) cov.add(Mask(1) << b, Poly(-B(c, b)));
          pre = wedge(pre, cov);
        }
        out += pre;
      }
    }
    if (!out.is_zero()) {
      rep.parallel = {Verdict::Fail, "nabla^J_e" + std::to_string(a + 1) + " eps = " +
                                         to_string(out, default_basis_names(m, BasisKind::Frame))};
      return rep;
    }
  }
  rep.parallel = {Verdict::Pass, "nabla^J eps = 0"};
  return rep;
}

}  // namespace kod
