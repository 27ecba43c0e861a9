// Shared fixtures for the unit tests.
#pragma once

#include <random>
#include <string>

#include "kod/acs.hpp"
#include "kod/expr.hpp"
#include "kod/spec_io.hpp"

namespace kod::test {

inline Scalar S(const std::string& text) { return parse_scalar(text); }
inline Poly P(const std::string& text) { return parse_polynomial(text); }

/// Form in the given basis from (mask, coefficient text) pairs.
inline Form form(int dim, BasisKind kind, int degree, std::initializer_list<std::pair<Mask, const char*>> terms) {
  Form f(dim, kind, degree);
  for (const auto& [mask, c] : terms) f.add(mask, P(c));
  return f;
}

inline Mask bits(std::initializer_list<int> one_based) {
  Mask m = 0;
  for (int k : one_based) m |= Mask(1) << (k - 1);
  return m;
}

/// Random small Gaussian rational, occasionally involving pi.
inline Scalar random_scalar(std::mt19937_64& rng, bool allow_pi = true) {
  std::uniform_int_distribution<int> small(-6, 6), den(1, 5), pick(0, 5);
  Scalar s = Scalar(GaussRational(make_rational(small(rng), den(rng)), make_rational(small(rng), den(rng))));
  if (allow_pi && pick(rng) == 0) s += Scalar(small(rng)) * Scalar::pi();
  if (allow_pi && pick(rng) == 0) {
    Scalar d = Scalar::pi() + Scalar(small(rng));
    s /= d;
  }
  return s;
}

inline Scalar random_nonzero_scalar(std::mt19937_64& rng) {
  for (;;) {
    Scalar s = random_scalar(rng);
    if (!s.is_zero()) return s;
  }
}

/// Random polynomial of low degree in the given symbols.
inline Poly random_poly(std::mt19937_64& rng, const std::vector<std::string>& symbols, int max_terms = 3,
                        int max_degree = 2, bool allow_pi = false) {
  std::uniform_int_distribution<int> nterms(0, max_terms), deg(0, max_degree);
  std::uniform_int_distribution<size_t> which(0, symbols.empty() ? 0 : symbols.size() - 1);
  Poly p;
  int t = nterms(rng);
  for (int k = 0; k < t; ++k) {
    Poly term(random_scalar(rng, allow_pi));
    if (!symbols.empty()) {
      int d = deg(rng);
      for (int e = 0; e < d; ++e) term *= Poly::var(symbols[which(rng)]);
    }
    p += term;
  }
  return p;
}

inline Form random_form(std::mt19937_64& rng, const ManifoldSpec& m, BasisKind kind, int degree,
                        bool constant = false) {
  const int dim = m.dimension;
  Form f(dim, kind, degree);
  std::vector<std::string> syms = constant ? std::vector<std::string>{} : m.coordinates;
  for (Mask mask = 0; mask < (Mask(1) << dim); ++mask) {
    if (__builtin_popcount(mask) != degree) continue;
    if (rng() % 2) continue;
    f.add(mask, random_poly(rng, syms, 2, 2));
  }
  return f;
}

inline const ManifoldSpec& manifold(const std::string& name) {
  static std::map<std::string, ManifoldSpec> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, load_manifold(name)).first;
  return it->second;
}

inline const AcsData& builtin_acs(const std::string& name) {
  static std::map<std::string, AcsData> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, load_acs(manifold(name), "builtin")).first;
  return it->second;
}

}  // namespace kod::test
