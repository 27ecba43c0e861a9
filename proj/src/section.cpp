#include <algorithm>

#include "kod/plurigenera.hpp"

namespace kod {

namespace {

Poly m_symbol() { return Poly::var("m"); }

// Multiplies a row by the lcm of its denominators, then by a rational so
// that the rational coefficients are coprime integers.
void normalize_row(const std::vector<Poly*>& row) {
  PiPoly l(1);
  for (const Poly* p : row) {
    PiPoly d = p->denominator_lcm();
    if (d.is_one()) continue;
    PiPoly g = PiPoly::gcd(l, d);
    l = PiPoly::divmod(l * d, g).first.monic();
  }
  if (!l.is_one())
    for (Poly* p : row) *p *= Scalar(l);
  Integer num_gcd = 0, den_lcm = 1;
  for (const Poly* p : row)
    for (const auto& [mono, c] : p->terms())
      for (const auto& g : c.num().coeffs())
        for (const Rational* q : {&g.re(), &g.im()}) {
          if (sgn(*q) == 0) continue;
          mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), q->get_num_mpz_t());
          mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q->get_den_mpz_t());
        }
  if (num_gcd == 0) return;
  Scalar factor(GaussRational(Rational(den_lcm, num_gcd)));
  if (factor.is_one()) return;
  for (Poly* p : row) *p *= factor;
}

std::string term_string(const Poly& c, const std::string& what) {
  if (c == Poly(1)) return what;
  if (c == Poly(-1)) return "-" + what;
  std::string cs = to_string(c);
  bool atomic = c.terms().size() == 1 && (c.terms().begin()->first.is_one()
                                              ? is_atomic_factor(c.terms().begin()->second)
                                              : (c.terms().begin()->second.is_one() ||
                                                 is_atomic_factor(c.terms().begin()->second)));
  if (cs[0] == '-' && atomic) return cs + "*" + what;
  return atomic ? cs + "*" + what : "(" + cs + ")*" + what;
}

std::string join_terms(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  std::string out = terms[0];
  for (size_t k = 1; k < terms.size(); ++k) {
    if (terms[k][0] == '-') out += " - " + terms[k].substr(1);
    else out += " + " + terms[k];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- equations

SectionEquation build_section_equation(const AcsData& acs) {
  for (Eigen::Index i = 0; i < acs.J.rows(); ++i)
    for (Eigen::Index j = 0; j < acs.J.cols(); ++j)
      if (!acs.J(i, j).is_constant())
        throw UnsupportedError("section equations need J with constant frame coefficients; entry (" +
                               std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is " + to_string(acs.J(i, j)));
  SectionEquation eq;
  const int n = acs.n();
  const int dim = acs.manifold.dimension;
  eq.n = n;
  eq.coordinates = acs.manifold.coordinates;
  eq.a = acs.alpha;
  for (int j = 0; j < n; ++j) {
    std::vector<Poly> c(dim);
    for (int i = 0; i < dim; ++i) c[i] = acs.R(i, n + j);
    eq.frame_coeffs.push_back(c);
    if (acs.manifold.structure_only) continue;
    std::vector<Poly> v(dim);
    for (int k = 0; k < dim; ++k)
      for (int i = 0; i < dim; ++i) v[k] += c[i] * acs.manifold.frame(i, k);
    eq.coord_coeffs.push_back(v);
  }
  return eq;
}

Poly SectionEquation::apply(int j, const Poly& f, const Poly& m) const {
  if (coord_coeffs.empty()) throw UnsupportedError("section equations on a manifold without coordinates");
  Poly r = m * a[j] * f;
  for (size_t k = 0; k < coordinates.size(); ++k)
    if (!coord_coeffs[j][k].is_zero()) r += coord_coeffs[j][k] * f.derivative(coordinates[k]);
  return r;
}

Poly SectionEquation::apply_exp(int j, const Poly& g, const Poly& m) const {
  if (coord_coeffs.empty()) throw UnsupportedError("section equations on a manifold without coordinates");
  Poly r = m * a[j];
  for (size_t k = 0; k < coordinates.size(); ++k)
    if (!coord_coeffs[j][k].is_zero()) r += coord_coeffs[j][k] * g.derivative(coordinates[k]);
  return r;
}

std::vector<RealEquation> real_form(const SectionEquation& eq) {
  std::vector<RealEquation> out;
  const Poly m = m_symbol();
  const size_t dim = eq.frame_coeffs.empty() ? 0 : eq.frame_coeffs[0].size();
  for (int j = 0; j < eq.n; ++j) {
    RealEquation re, im;
    re.du.resize(dim);
    re.dv.resize(dim);
    im.du.resize(dim);
    im.dv.resize(dim);
    for (size_t i = 0; i < dim; ++i) {
      auto [p, q] = eq.frame_coeffs[j][i].real_imag();
      re.du[i] = p;
      re.dv[i] = -q;
      im.du[i] = q;
      im.dv[i] = p;
    }
    auto [al, be] = eq.a[j].real_imag();
    re.cu = m * al;
    re.cv = -(m * be);
    im.cu = m * be;
    im.cv = m * al;
    for (RealEquation* e : {&re, &im}) {
      std::vector<Poly*> row;
      for (auto& p : e->du) row.push_back(&p);
      for (auto& p : e->dv) row.push_back(&p);
      row.push_back(&e->cu);
      row.push_back(&e->cv);
      normalize_row(row);
    }
    out.push_back(re);
    out.push_back(im);
  }
  return out;
}

std::string to_string(const RealEquation& e) {
  std::vector<std::string> terms;
  for (size_t i = 0; i < e.du.size(); ++i)
    if (!e.du[i].is_zero()) terms.push_back(term_string(e.du[i], "e" + std::to_string(i + 1) + "(u)"));
  for (size_t i = 0; i < e.dv.size(); ++i)
    if (!e.dv[i].is_zero()) terms.push_back(term_string(e.dv[i], "e" + std::to_string(i + 1) + "(v)"));
  if (!e.cu.is_zero()) terms.push_back(term_string(e.cu, "u"));
  if (!e.cv.is_zero()) terms.push_back(term_string(e.cv, "v"));
  return join_terms(terms) + " = 0";
}

// ---------------------------------------------------------------- Fourier

std::vector<std::string> index_symbols(const ManifoldSpec& m) {
  std::set<std::string> used(m.coordinates.begin(), m.coordinates.end());
  used.insert({"m", "i", "pi", "k"});
  std::vector<std::string> out;
  char next = 'a';
  for (size_t k = 0; k < m.periodic.size(); ++k) {
    while (next <= 'z' && used.count(std::string(1, next))) ++next;
    if (next > 'z') throw UnsupportedError("too many periodic coordinates");
    out.emplace_back(1, next);
    used.insert(out.back());
  }
  return out;
}

PolyMatrix FourierSystem::algebraic() const {
  std::vector<size_t> rows;
  for (size_t r = 0; r < N.size(); ++r)
    if (std::all_of(N[r].begin(), N[r].end(), [](const Poly& p) { return p.is_zero(); })) rows.push_back(r);
  PolyMatrix a(static_cast<Eigen::Index>(rows.size()), unknowns());
  for (size_t k = 0; k < rows.size(); ++k)
    for (int c = 0; c < unknowns(); ++c) a(static_cast<Eigen::Index>(k), c) = M[rows[k]][c];
  return a;
}

std::vector<Poly> FourierSystem::forcing_polynomials() const {
  PolyMatrix a = algebraic();
  if (a.rows() < a.cols()) return {};
  if (a.rows() == a.cols()) return {determinant<Poly>(a)};
  return maximal_minors<Poly>(a);
}

Poly FourierSystem::phase(const std::map<std::string, Poly>& index_values) const {
  Poly g;
  for (size_t k = 0; k < periodic.size(); ++k) {
    Scalar w = Scalar(2) * Scalar::pi() / Scalar(GaussRational(periods[k]));
    auto it = index_values.find(index[k]);
    Poly ik = it == index_values.end() ? Poly::var(index[k]) : it->second;
    g += Scalar::i() * w * ik * Poly::var(periodic[k]);
  }
  return g;
}

FourierSystem fourier_reduce(const SectionEquation& eq, const ManifoldSpec& man, bool real) {
  if (man.structure_only) throw UnsupportedError("Fourier reduction needs coordinates; " + man.name + " has none");
  FourierSystem sys;
  sys.real_form = real;
  for (const auto& [c, period] : man.periodic) {
    sys.periodic.push_back(c);
    sys.periods.push_back(period);
  }
  for (const auto& c : man.coordinates) {
    if (man.is_periodic(c)) continue;
    if (!sys.x.empty())
      throw UnsupportedError("Fourier reduction needs at most one non-periodic coordinate; found " + sys.x + " and " +
                             c);
    sys.x = c;
  }
  sys.index = index_symbols(man);
  const int dim = man.dimension;
  std::vector<Scalar> omega;
  for (const auto& period : sys.periods) omega.push_back(Scalar(2) * Scalar::pi() / Scalar(GaussRational(period)));

  // vector field components in coordinates -> (N, M) contributions
  auto transform = [&](const std::vector<Poly>& v, Poly& n, Poly& mcoef) {
    for (int k = 0; k < dim; ++k) {
      if (v[k].is_zero()) continue;
      const std::string& c = man.coordinates[k];
      if (c == sys.x) {
        n += v[k];
        continue;
      }
      auto it = std::find(sys.periodic.begin(), sys.periodic.end(), c);
      size_t p = static_cast<size_t>(it - sys.periodic.begin());
      mcoef += v[k] * (Scalar::i() * omega[p]) * Poly::var(sys.index[p]);
    }
  };
  auto to_coords = [&](const std::vector<Poly>& frame_coeffs) {
    std::vector<Poly> v(dim);
    for (int k = 0; k < dim; ++k)
      for (int i = 0; i < dim; ++i) v[k] += frame_coeffs[i] * man.frame(i, k);
    return v;
  };

  if (!real) {
    for (int j = 0; j < eq.n; ++j) {
      std::vector<Poly> nrow(1), mrow(1);
      mrow[0] = m_symbol() * eq.a[j];
      transform(eq.coord_coeffs[j], nrow[0], mrow[0]);
      normalize_row({&nrow[0], &mrow[0]});
      sys.N.push_back(nrow);
      sys.M.push_back(mrow);
    }
    return sys;
  }
  for (const auto& e : real_form(eq)) {
    std::vector<Poly> nrow(2), mrow(2);
    mrow[0] = e.cu;
    mrow[1] = e.cv;
    transform(to_coords(e.du), nrow[0], mrow[0]);
    transform(to_coords(e.dv), nrow[1], mrow[1]);
    normalize_row({&nrow[0], &nrow[1], &mrow[0], &mrow[1]});
    sys.N.push_back(nrow);
    sys.M.push_back(mrow);
  }
  return sys;
}

}  // namespace kod
