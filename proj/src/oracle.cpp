#include "kod/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "kod/plurigenera.hpp"

namespace kod {

namespace {

using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cd>;

constexpr long kDenseLimit = 1600;

struct Grid {
  std::vector<int> size;
  std::vector<double> step;
  std::vector<long> stride;
  int xdim = -1;  // index of the non-periodic coordinate
  // w-part of the lattice shift on flat indices with x index zeroed
  std::vector<long> shift, unshift;
  long total = 1;

  long flat(const std::vector<int>& idx) const {
    long f = 0;
    for (size_t k = 0; k < idx.size(); ++k) f += idx[k] * stride[k];
    return f;
  }
  std::vector<int> unflat(long f) const {
    std::vector<int> idx(size.size());
    for (size_t k = 0; k < size.size(); ++k) idx[k] = static_cast<int>((f / stride[k]) % size[k]);
    return idx;
  }
  // flat index of the neighbor of p in direction k, distance dir = +-1
  long neighbor(long p, int k, int dir) const {
    auto idx = unflat(p);
    int v = idx[k] + dir;
    if (k != xdim) {
      idx[k] = (v + size[k]) % size[k];
      return flat(idx);
    }
    if (v >= 0 && v < size[k]) {
      idx[k] = v;
      return flat(idx);
    }
    idx[k] = 0;
    long w = flat(idx);
    if (v == size[k]) {  // f(p, w) = f(0, A^-1 w)
      auto j = unflat(unshift[w]);
      j[k] = 0;
      return flat(j);
    }
    auto j = unflat(shift[w]);  // f(-h, w) = f(p - h, A w)
    j[k] = size[k] - 1;
    return flat(j);
  }
};

Grid make_grid(const ManifoldSpec& man, const OracleOptions& opt, std::string& message) {
  Grid g;
  const int dim = man.dimension;
  g.size.resize(dim);
  g.step.resize(dim);
  g.stride.resize(dim);
  std::vector<Rational> h(dim);
  for (int k = 0; k < dim; ++k) {
    const std::string& c = man.coordinates[k];
    auto it = opt.grid_overrides.find(c);
    g.size[k] = it == opt.grid_overrides.end() ? opt.grid : it->second;
    if (g.size[k] < 3) throw ValidationError("grid resolution must be >= 3, got " + std::to_string(g.size[k]));
    if (!man.is_periodic(c)) {
      if (g.xdim >= 0) throw UnsupportedError("oracle needs at most one non-periodic coordinate");
      g.xdim = k;
    }
  }
  Rational xperiod = 0;
  const LatticeShift* sh = nullptr;
  if (g.xdim >= 0) {
    for (const auto& s : man.lattice_shifts) {
      auto c = (s.images[g.xdim] - Poly::var(man.coordinates[g.xdim])).constant();
      if (!c || !c->is_rational()) throw UnsupportedError("lattice shift must translate the non-periodic coordinate");
      if (sgn(c->as_rational()) == 0) throw UnsupportedError("oracle supports only shifts that move " + man.coordinates[g.xdim]);
      if (sh) throw UnsupportedError("oracle supports a single lattice shift");
      sh = &s;
      xperiod = abs(c->as_rational());
      if (sgn(c->as_rational()) < 0) throw UnsupportedError("lattice shift must move the non-periodic coordinate forward");
    }
    if (!sh) throw UnsupportedError("no lattice shift closes up the non-periodic coordinate");
  } else if (!man.lattice_shifts.empty()) {
    throw UnsupportedError("oracle does not support lattice shifts without a non-periodic coordinate");
  }
  long stride = 1;
  for (int k = dim - 1; k >= 0; --k) {
    g.stride[k] = stride;
    stride *= g.size[k];
  }
  g.total = stride;
  for (int k = 0; k < dim; ++k) {
    const std::string& c = man.coordinates[k];
    Rational period = k == g.xdim ? xperiod : Rational(0);
    for (const auto& [pc, L] : man.periodic)
      if (pc == c) period = L;
    h[k] = period / g.size[k];
    g.step[k] = h[k].get_d();
  }
  if (!sh) return g;

  // affine integer action of the shift on w-grid indices
  std::vector<std::vector<Integer>> lin(dim, std::vector<Integer>(dim, 0));
  std::vector<Integer> off(dim, 0);
  for (int k = 0; k < dim; ++k) {
    if (k == g.xdim) continue;
    const Poly& img = sh->images[k];
    for (const auto& [mono, c] : img.terms()) {
      if (!c.is_rational()) throw UnsupportedError("lattice shift with non-rational coefficients");
      Rational q = c.as_rational();
      if (mono.is_one()) {
        Rational v = q / h[k];
        if (v.get_den() != 1) message += "shift offset of " + man.coordinates[k] + " is not on the grid; ";
        off[k] = v.get_num();
        continue;
      }
      if (mono.degree() != 1) throw UnsupportedError("lattice shift is not affine");
      int l = man.coordinate_index(mono.factors()[0].first);
      if (l == g.xdim) throw UnsupportedError("lattice shift mixes the non-periodic coordinate into " + man.coordinates[k]);
      Rational v = q * h[l] / h[k];
      if (v.get_den() != 1)
        throw UnsupportedError("grid incompatible with the lattice shift in " + man.coordinates[k] +
                               "; choose resolutions so that shifts map grid points to grid points");
      lin[k][l] = v.get_num();
    }
  }
  g.shift.assign(g.total, -1);
  g.unshift.assign(g.total, -1);
  for (long p = 0; p < g.total; ++p) {
    auto idx = g.unflat(p);
    if (idx[g.xdim] != 0) continue;
    std::vector<int> out(dim, 0);
    for (int k = 0; k < dim; ++k) {
      if (k == g.xdim) continue;
      Integer v = off[k];
      for (int l = 0; l < dim; ++l) v += lin[k][l] * idx[l];
      Integer r = v % g.size[k];
      if (r < 0) r += g.size[k];
      out[k] = static_cast<int>(r.get_si());
    }
    long q = g.flat(out);
    g.shift[p] = q;
    if (g.unshift[q] != -1) throw UnsupportedError("lattice shift is not a bijection of the grid");
    g.unshift[q] = p;
  }
  return g;
}

}  // namespace

namespace {

double two_pi() { return 2 * std::acos(-1.0); }

struct Assembly {
  const SectionEquation& eq;
  const Grid& g;
  std::vector<cd> a;
  std::string xname;
  std::vector<int> wdims;  // periodic coordinate indices

  cd coeff(int j, int k, int ix) const {
    std::map<std::string, double> at;
    if (g.xdim >= 0) at[xname] = ix * g.step[g.xdim];
    return eq.coord_coeffs[j][k].evaluate(at);
  }
};

// Full finite-difference matrix on the grid (small problems only).
SpMat assemble(const Assembly& as) {
  const Grid& g = as.g;
  std::vector<Eigen::Triplet<cd>> trip;
  const double scale = 1.0 / std::sqrt(2.0);
  long row = 0;
  for (int j = 0; j < as.eq.n; ++j)
    for (int dir : {+1, -1})
      for (long p = 0; p < g.total; ++p, ++row) {
        auto idx = g.unflat(p);
        int ix = g.xdim >= 0 ? idx[g.xdim] : 0;
        trip.emplace_back(row, p, scale * as.a[j]);
        for (size_t k = 0; k < g.size.size(); ++k) {
          if (as.eq.coord_coeffs[j][k].is_zero()) continue;
          cd v = as.coeff(j, static_cast<int>(k), ix) * scale / g.step[k];
          long q = g.neighbor(p, static_cast<int>(k), dir);
          // forward: (f(p+1) - f(p)) / h; backward: (f(p) - f(p-1)) / h
          trip.emplace_back(row, q, dir > 0 ? v : -v);
          trip.emplace_back(row, p, dir > 0 ? -v : v);
        }
      }
  SpMat A(row, g.total);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

// Singular values via the unitary DFT in the periodic coordinates. The
// operator coefficients depend on x only, so each Fourier mode couples only
// to the modes in its orbit under the gluing map.
struct BlockSpectrum {
  std::vector<double> sv;  // singular values of blocks solved densely
  // counts below threshold / 2, threshold, 2 * threshold from blocks solved by inertia
  int below[3] = {0, 0, 0};
};

constexpr long kDenseBlock = 256;

// Eigenvalues of H below t^2 by the inertia of an LDL^H factorization of H - t^2.
int inertia_below(const SpMat& H, double t) {
  SpMat S = H;
  for (Eigen::Index i = 0; i < S.rows(); ++i) S.coeffRef(i, i) -= t * t;
  Eigen::SimplicialLDLT<SpMat> ldlt(S);
  if (ldlt.info() != Eigen::Success) throw InvariantError("oracle: LDL factorization failed");
  int c = 0;
  for (Eigen::Index i = 0; i < ldlt.vectorD().size(); ++i)
    if (ldlt.vectorD()(i).real() < 0) ++c;
  return c;
}

BlockSpectrum block_spectrum(const Assembly& as, double tau) {
  const Grid& g = as.g;
  const int nw = static_cast<int>(as.wdims.size());
  std::vector<int> wsize;
  for (int k : as.wdims) wsize.push_back(g.size[k]);
  long nmodes = 1;
  for (int r : wsize) nmodes *= r;
  auto mode_of = [&](long f) {
    std::vector<int> J(nw);
    for (int t = nw - 1; t >= 0; --t) {
      J[t] = static_cast<int>(f % wsize[t]);
      f /= wsize[t];
    }
    return J;
  };
  auto flat_mode = [&](const std::vector<int>& J) {
    long f = 0;
    for (int t = 0; t < nw; ++t) f = f * wsize[t] + J[t];
    return f;
  };
  auto grid_point = [&](const std::vector<int>& w) {
    std::vector<int> idx(g.size.size(), 0);
    for (int t = 0; t < nw; ++t) idx[as.wdims[t]] = w[t];
    return g.flat(idx);
  };
  auto wpart = [&](long p) {
    auto idx = g.unflat(p);
    std::vector<int> w(nw);
    for (int t = 0; t < nw; ++t) w[t] = idx[as.wdims[t]];
    return w;
  };
  auto character = [&](const std::vector<int>& J, const std::vector<int>& w) {
    double ang = 0;
    for (int t = 0; t < nw; ++t) ang += two_pi() * double(J[t]) * w[t] / wsize[t];
    return std::polar(1.0, ang);
  };

  // chi_J o S^-1 = phase(J) chi_{P(J)}
  std::vector<long> P(nmodes), Pinv(nmodes, -1);
  std::vector<cd> phase(nmodes, 1.0);
  const int R = g.xdim >= 0 ? g.size[g.xdim] : 1;
  if (g.xdim >= 0) {
    std::vector<int> zero(nw, 0);
    for (long f = 0; f < nmodes; ++f) {
      auto J = mode_of(f);
      auto at = [&](const std::vector<int>& w) { return character(J, wpart(g.unshift[grid_point(w)])); };
      cd ph = at(zero);
      std::vector<int> K(nw);
      for (int t = 0; t < nw; ++t) {
        std::vector<int> e(nw, 0);
        e[t] = 1;
        double ang = std::arg(at(e) / ph) * wsize[t] / two_pi();
        K[t] = static_cast<int>(std::lround(ang)) % wsize[t];
        if (K[t] < 0) K[t] += wsize[t];
      }
      for (long q = 0; q < nmodes; ++q) {
        auto w = mode_of(q);  // reuse the index space for grid points
        if (std::abs(at(w) - ph * character(K, w)) > 1e-9)
          throw UnsupportedError("lattice shift does not act on grid characters; use the dense method");
      }
      P[f] = flat_mode(K);
      phase[f] = ph;
      if (Pinv[P[f]] != -1) throw UnsupportedError("lattice shift is not invertible on grid characters");
      Pinv[P[f]] = f;
    }
  } else {
    for (long f = 0; f < nmodes; ++f) P[f] = Pinv[f] = f;
  }

  BlockSpectrum out;
  std::vector<bool> seen(nmodes, false);
  const double scale = 1.0 / std::sqrt(2.0);
  const int n = as.eq.n;
  // coefficient tables per x index
  std::vector<std::vector<std::vector<cd>>> coef(n, std::vector<std::vector<cd>>(g.size.size(), std::vector<cd>(R)));
  for (int j = 0; j < n; ++j)
    for (size_t k = 0; k < g.size.size(); ++k)
      if (!as.eq.coord_coeffs[j][k].is_zero())
        for (int i = 0; i < R; ++i) coef[j][k][i] = as.coeff(j, static_cast<int>(k), i);

  for (long f0 = 0; f0 < nmodes; ++f0) {
    if (seen[f0]) continue;
    std::vector<long> orbit;
    for (long f = f0; !seen[f]; f = P[f]) {
      seen[f] = true;
      orbit.push_back(f);
    }
    const long L = static_cast<long>(orbit.size());
    std::map<long, long> pos;
    for (long t = 0; t < L; ++t) pos[orbit[t]] = t;
    const long cols = L * R;
    std::vector<Eigen::Triplet<cd>> B;
    long row = 0;
    for (int j = 0; j < n; ++j)
      for (int dir : {+1, -1})
        for (long t = 0; t < L; ++t) {
          auto J = mode_of(orbit[t]);
          for (int i = 0; i < R; ++i, ++row) {
            const long c = t * R + i;
            cd diag = as.a[j];
            for (int u = 0; u < nw; ++u) {
              const int k = as.wdims[u];
              if (as.eq.coord_coeffs[j][k].is_zero()) continue;
              cd z = std::polar(1.0, two_pi() * J[u] / wsize[u]);
              cd sym = dir > 0 ? (z - 1.0) : (1.0 - 1.0 / z);
              diag += coef[j][k][i] * sym / g.step[k];
            }
            B.emplace_back(row, c, scale * diag);
            if (g.xdim < 0 || as.eq.coord_coeffs[j][g.xdim].is_zero()) continue;
            cd v = coef[j][g.xdim][i] * scale / g.step[g.xdim];
            long nb;
            cd w = 1.0;
            if (dir > 0) {
              if (i + 1 < R) {
                nb = c + 1;
              } else {  // f(x_R, .) = f(x_0, S^-1 .)
                long src = Pinv[orbit[t]];
                nb = pos.at(src) * R;
                w = phase[src];
              }
              B.emplace_back(row, nb, v * w);
              B.emplace_back(row, c, -v);
            } else {
              if (i > 0) {
                nb = c - 1;
              } else {  // f(x_-1, .) = f(x_{R-1}, S .)
                long src = P[orbit[t]];
                nb = pos.at(src) * R + R - 1;
                w = 1.0 / phase[orbit[t]];
              }
              B.emplace_back(row, c, v);
              B.emplace_back(row, nb, -v * w);
            }
          }
        }
    SpMat Bm(row, cols);
    Bm.setFromTriplets(B.begin(), B.end());
    SpMat H = SpMat(Bm.adjoint()) * Bm;
    if (cols <= kDenseBlock) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(H), Eigen::EigenvaluesOnly);
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        out.sv.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(k))));
    } else {
      out.below[0] += inertia_below(H, tau / 2);
      out.below[1] += inertia_below(H, tau);
      out.below[2] += inertia_below(H, tau * 2);
    }
  }
  return out;
}

}  // namespace

OracleResult oracle_numeric_kernel(const AcsData& acs, long m, const OracleOptions& opt) {
  if (m < 0) throw ValidationError("m must be >= 0");
  if (opt.threshold <= 0) throw ValidationError("oracle threshold must be positive");
  OracleResult res;
  SectionEquation eq = build_section_equation(acs);
  if (eq.coord_coeffs.empty()) throw UnsupportedError("oracle needs coordinates");
  const ManifoldSpec& man = acs.manifold;
  Grid g = make_grid(man, opt, res.message);
  res.unknowns = g.total;
  Assembly as{eq, g, {}, g.xdim >= 0 ? man.coordinates[g.xdim] : "", {}};
  for (int j = 0; j < eq.n; ++j) as.a.push_back((Poly(m) * eq.a[j]).evaluate({}));
  for (int k = 0; k < man.dimension; ++k)
    if (k != g.xdim) as.wdims.push_back(k);

  std::vector<double> sv;  // sorted
  int extra[3] = {0, 0, 0};
  if (opt.method == "dense") {
    if (g.total > kDenseLimit)
      throw ValidationError("dense oracle limited to " + std::to_string(kDenseLimit) + " unknowns, grid has " +
                            std::to_string(g.total));
    res.method = "dense";
    SpMat A = assemble(as);
    Eigen::MatrixXcd H = Eigen::MatrixXcd(SpMat(A.adjoint()) * A);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) sv.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
  } else if (opt.method == "blocks") {
    res.method = "blocks";
    BlockSpectrum bs = block_spectrum(as, opt.threshold);
    sv = bs.sv;
    for (int k = 0; k < 3; ++k) extra[k] = bs.below[k];
  } else {
    throw ValidationError("unknown oracle method '" + opt.method + "' (expected blocks or dense)");
  }
  std::sort(sv.begin(), sv.end());
  auto count = [&](double t) { return static_cast<int>(std::lower_bound(sv.begin(), sv.end(), t) - sv.begin()); };
  const double tau = opt.threshold;
  res.dimension = count(tau) + extra[1];
  res.count_half = count(tau / 2) + extra[0];
  res.count_double = count(tau * 2) + extra[2];
  for (size_t i = 0; i < std::min<size_t>(sv.size(), 6); ++i) res.smallest.push_back(sv[i]);
  if (res.count_half != res.dimension || res.count_double != res.dimension) {
    res.warning = true;
    res.message += "singular values close to the threshold (counts " + std::to_string(res.count_half) + "/" +
                   std::to_string(res.dimension) + "/" + std::to_string(res.count_double) +
                   " at threshold x0.5/x1/x2); resolution may be too coarse";
  }
  return res;
}

}  // namespace kod
