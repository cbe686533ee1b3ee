#include "contact3/metric.hpp"

#include <algorithm>
#include <cmath>

#include "contact3/smallmat.hpp"

namespace contact3 {

namespace {

Jet partial(const Jet& f, int a) {
  Jet r(f.d(a), f.dim());
  for (int s = 0; s < f.dim(); ++s) r.gref(s) = f.d2(a, s);
  return r;
}

Mat<Jet> inverse_metric(const TensorValue& g) {
  const int n = g.dim;
  Mat<Jet> gm(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) gm(a, b) = g.at(a, b);
  return LU<Jet>(gm).inverse();
}

}  // namespace

TensorValue christoffel_at(const TensorValue& g) {
  if (g.up != 0 || g.low != 2) throw ValenceMismatch("christoffel needs a (0,2) field");
  const int n = g.dim;
  const Mat<Jet> ginv = inverse_metric(g);
  TensorValue gam = TensorValue::zeros(n, 1, 2, std::max(0, g.ord - 1));
  for (int b = 0; b < n; ++b)
    for (int cc = b; cc < n; ++cc) {
      std::vector<Jet> low(n);
      for (int d = 0; d < n; ++d)
        low[d] = (partial(g.at(d, cc), b) + partial(g.at(d, b), cc) -
                  partial(g.at(b, cc), d)) * 0.5;
      for (int a = 0; a < n; ++a) {
        Jet acc(0.0, 0);
        for (int d = 0; d < n; ++d) acc = acc + ginv(a, d) * low[d];
        gam.at(a, b, cc) = acc;
        gam.at(a, cc, b) = acc;
      }
    }
  gam.clamp_order(gam.ord);
  return gam;
}

TensorField levi_civita(const TensorField& g) {
  return derived_field(1, 2, std::max(0, g.ord() - 1),
                       [g](int chart, std::span<const Jet> x) {
                         return christoffel_at(g.eval(chart, x));
                       });
}

CurvatureAt curvature_at(const TensorValue& g) {
  const int n = g.dim;
  const TensorValue gam = christoffel_at(g);
  CurvatureAt cv;
  cv.dim = n;
  cv.riemann.assign(static_cast<size_t>(n) * n * n * n, 0.0);
  cv.ricci.assign(static_cast<size_t>(n) * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          double r = gam.at(a, d, b).d(cc) - gam.at(a, cc, b).d(d);
          for (int e = 0; e < n; ++e)
            r += gam.at(a, cc, e).value() * gam.at(e, d, b).value() -
                 gam.at(a, d, e).value() * gam.at(e, cc, b).value();
          cv.riemann[((static_cast<size_t>(a) * n + b) * n + cc) * n + d] = r;
        }
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double r = 0.0;
      for (int a = 0; a < n; ++a) r += cv.riem(a, b, a, d);
      cv.ricci[static_cast<size_t>(b) * n + d] = r;
    }
  Mat<double> gm(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) gm(a, b) = g.at(a, b).value();
  const Mat<double> gi = LU<double>(gm).inverse();
  double sc = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) sc += gi(a, b) * cv.ric(a, b);
  cv.scalar = sc;
  return cv;
}

TensorField covariant_derivative(const TensorField& g, const TensorField& x) {
  if (x.up() != 1 || x.low() != 0)
    throw ValenceMismatch("covariant_derivative implemented for vector fields");
  const int out_ord = std::max(0, std::min(g.ord(), x.ord()) - 1);
  return derived_field(1, 1, out_ord,
                       [g, x](int chart, std::span<const Jet> s) {
                         const TensorValue gv = g.eval(chart, s);
                         const TensorValue xv = x.eval(chart, s);
                         const TensorValue gam = christoffel_at(gv);
                         const int n = gv.dim;
                         TensorValue r = TensorValue::zeros(
                             n, 1, 1, std::max(0, std::min(gv.ord, xv.ord) - 1));
                         for (int a = 0; a < n; ++a)
                           for (int b = 0; b < n; ++b) {
                             Jet acc = partial(xv.at(a), b);
                             for (int cc = 0; cc < n; ++cc)
                               acc = acc + gam.at(a, b, cc) * xv.at(cc);
                             r.at(a, b) = acc;
                           }
                         r.clamp_order(r.ord);
                         return r;
                       });
}

double nabla_g_residual(const TensorValue& g) {
  const int n = g.dim;
  const TensorValue gam = christoffel_at(g);
  double worst = 0.0;
  for (int cc = 0; cc < n; ++cc)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double r = g.at(a, b).d(cc);
        for (int d = 0; d < n; ++d)
          r -= gam.at(d, cc, a).value() * g.at(d, b).value() +
               gam.at(d, cc, b).value() * g.at(a, d).value();
        worst = std::max(worst, std::fabs(r));
      }
  return worst;
}

double killing_residual(const TensorValue& g, const TensorValue& x) {
  const int n = g.dim;
  const TensorValue gam = christoffel_at(g);
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double r = 0.0;
      for (int cc = 0; cc < n; ++cc) {
        double da = x.at(cc).d(a);
        double db = x.at(cc).d(b);
        for (int d = 0; d < n; ++d) {
          da += gam.at(cc, a, d).value() * x.at(d).value();
          db += gam.at(cc, b, d).value() * x.at(d).value();
        }
        r += g.at(cc, b).value() * da + g.at(a, cc).value() * db;
      }
      worst = std::max(worst, std::fabs(r));
    }
  return worst;
}

}  // namespace contact3
