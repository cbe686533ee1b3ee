#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "contact3/errors.hpp"
#include "contact3/jet.hpp"
#include "contact3/util.hpp"

namespace contact3 {

// Axis-aligned sampling box.
struct Box {
  std::vector<double> lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }

  std::vector<double> sample(Rng& rng) const {
    std::vector<double> x(lo.size());
    for (size_t k = 0; k < lo.size(); ++k) x[k] = rng.uniform(lo[k], hi[k]);
    return x;
  }

  bool contains(std::span<const double> x, double pad = 0.0) const {
    if (x.size() != lo.size()) return false;
    for (size_t k = 0; k < lo.size(); ++k)
      if (x[k] < lo[k] - pad || x[k] > hi[k] + pad) return false;
    return true;
  }

  Box extended(double new_lo, double new_hi) const {
    Box b = *this;
    b.lo.push_back(new_lo);
    b.hi.push_back(new_hi);
    return b;
  }

  static Box cube(int dim, double half) {
    Box b;
    b.lo.assign(dim, -half);
    b.hi.assign(dim, half);
    return b;
  }
};

struct PointRef {
  int chart = 0;
  std::vector<double> x;
};

// Smooth coordinate map between charts, acting on jets so all derivative
// channels propagate through it.
using CoordMap = std::function<std::vector<Jet>(std::span<const Jet>)>;

// A two-chart overlap with its transition maps and a sampling box (expressed
// in each chart's coordinates) contained well inside the overlap.
struct Transition {
  int a = 0, b = 0;
  CoordMap fwd;  // chart-a coords -> chart-b coords
  CoordMap bwd;
  Box box_a, box_b;
};

struct TripleOverlap {
  int a = 0, b = 0, c = 0;
  Box box_a;
};

// Canonical jet seeding: coordinate k becomes the k-th independent variable.
inline std::vector<Jet> seed_jets(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<Jet> j(n);
  for (int k = 0; k < n; ++k) j[k] = Jet::variable(x[k], k, n);
  return j;
}

inline bool is_canonical(std::span<const Jet> x) {
  const int n = static_cast<int>(x.size());
  for (int k = 0; k < n; ++k) {
    if (x[k].dim() != n) return false;
    for (int a = 0; a < n; ++a) {
      if (x[k].d(a) != (a == k ? 1.0 : 0.0)) return false;
      for (int b = 0; b <= a; ++b)
        if (x[k].d2(a, b) != 0.0) return false;
    }
  }
  return true;
}

inline std::vector<double> jet_values(std::span<const Jet> x) {
  std::vector<double> v(x.size());
  for (size_t k = 0; k < x.size(); ++k) v[k] = x[k].value();
  return v;
}

// F given as a jet with respect to n intermediate variables; X = jets of those
// variables with respect to the ambient parameters.  Returns the jet of the
// composite, exact through second order (invalid channels of F must be zero).
inline Jet compose(const Jet& F, std::span<const Jet> X) {
  const int n = F.dim();
  const int m = X.empty() ? 0 : X[0].dim();
  Jet r(F.value(), m);
  for (int a = 0; a < n; ++a) {
    const double Fa = F.d(a);
    if (Fa != 0.0)
      for (int s = 0; s < m; ++s) r.gref(s) += Fa * X[a].d(s);
  }
  for (int s = 0; s < m; ++s)
    for (int t = 0; t <= s; ++t) {
      double acc = 0.0;
      for (int a = 0; a < n; ++a) {
        const double Fa = F.d(a);
        if (Fa != 0.0) acc += Fa * X[a].d2(s, t);
        for (int b = 0; b < n; ++b) {
          const double Fab = F.d2(a, b);
          if (Fab != 0.0) acc += Fab * X[a].d(s) * X[b].d(t);
        }
      }
      r.href(s, t) = acc;
    }
  return r;
}

// Widens a jet in k variables to n >= k variables; the new trailing variables
// get zero derivatives (exact for quantities independent of them).
inline Jet promote(const Jet& a, int newdim) {
  Jet r(a.value(), newdim);
  for (int k = 0; k < a.dim(); ++k) r.gref(k) = a.d(k);
  for (int k = 0; k < a.dim(); ++k)
    for (int l = 0; l <= k; ++l) r.href(k, l) = a.d2(k, l);
  return r;
}

}  // namespace contact3
