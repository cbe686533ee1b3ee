#include "contact3/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "contact3/smallmat.hpp"

namespace contact3 {

namespace {

size_t component_count(int dim, int slots) {
  size_t n = 1;
  for (int k = 0; k < slots; ++k) n *= static_cast<size_t>(dim);
  return n;
}

// Derivative of a canonical-jet scalar along coordinate a: one order lower.
Jet partial(const Jet& f, int a) {
  Jet r(f.d(a), f.dim());
  for (int s = 0; s < f.dim(); ++s) r.gref(s) = f.d2(a, s);
  return r;
}

void check_shape(const TensorValue& a, const TensorValue& b) {
  if (a.dim != b.dim || a.up != b.up || a.low != b.low)
    throw ValenceMismatch("tensor shapes differ");
}

}  // namespace

TensorValue TensorValue::zeros(int dim, int up, int low, int ord) {
  TensorValue t;
  t.dim = dim;
  t.up = up;
  t.low = low;
  t.ord = ord;
  t.c.assign(component_count(dim, up + low), Jet(0.0, dim));
  return t;
}

double TensorValue::max_abs_value() const {
  double m = 0.0;
  for (const Jet& j : c) m = std::max(m, std::fabs(j.value()));
  return m;
}

void TensorValue::clamp_order(int new_ord) {
  ord = std::min(ord, new_ord);
  if (ord >= 2) return;
  for (Jet& j : c) {
    for (int k = 0; k < j.dim(); ++k)
      for (int l = 0; l <= k; ++l) j.href(k, l) = 0.0;
    if (ord < 1)
      for (int k = 0; k < j.dim(); ++k) j.gref(k) = 0.0;
  }
}

TensorField::TensorField(int up, int low, int ord, Evaluator ev)
    : up_(up), low_(low), ord_(ord),
      ev_(std::make_shared<const Evaluator>(std::move(ev))) {}

TensorValue TensorField::eval(int chart, std::span<const Jet> x) const {
  if (!ev_) throw ValenceMismatch("evaluating an empty field");
  return (*ev_)(chart, x);
}

TensorValue TensorField::at_point(int chart, std::span<const double> x) const {
  const std::vector<Jet> s = seed_jets(x);
  return eval(chart, s);
}

TensorValue compose_components(const TensorValue& t, std::span<const Jet> x) {
  TensorValue r = t;
  r.dim = t.dim;
  for (size_t i = 0; i < t.c.size(); ++i) r.c[i] = compose(t.c[i], x);
  r.clamp_order(t.ord);  // re-zero channels the chain rule cannot certify
  return r;
}

TensorField derived_field(
    int up, int low, int ord,
    std::function<TensorValue(int chart, std::span<const Jet>)> assemble) {
  auto fn = std::make_shared<
      std::function<TensorValue(int, std::span<const Jet>)>>(std::move(assemble));
  return TensorField(up, low, ord,
                     [fn](int chart, std::span<const Jet> x) -> TensorValue {
                       if (is_canonical(x)) return (*fn)(chart, x);
                       const std::vector<double> v = jet_values(x);
                       const std::vector<Jet> canon = seed_jets(v);
                       TensorValue t = (*fn)(chart, canon);
                       return compose_components(t, x);
                     });
}

TensorValue add_values(const TensorValue& a, const TensorValue& b) {
  check_shape(a, b);
  TensorValue r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] + b.c[i];
  r.ord = std::min(a.ord, b.ord);
  return r;
}

TensorValue sub_values(const TensorValue& a, const TensorValue& b) {
  check_shape(a, b);
  TensorValue r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] - b.c[i];
  r.ord = std::min(a.ord, b.ord);
  return r;
}

TensorValue scale_value(const TensorValue& a, double s) {
  TensorValue r = a;
  for (Jet& j : r.c) j = j * s;
  return r;
}

TensorField add(const TensorField& a, const TensorField& b) {
  return TensorField(a.up(), a.low(), std::min(a.ord(), b.ord()),
                     [a, b](int chart, std::span<const Jet> x) {
                       return add_values(a.eval(chart, x), b.eval(chart, x));
                     });
}

TensorField sub(const TensorField& a, const TensorField& b) {
  return TensorField(a.up(), a.low(), std::min(a.ord(), b.ord()),
                     [a, b](int chart, std::span<const Jet> x) {
                       return sub_values(a.eval(chart, x), b.eval(chart, x));
                     });
}

TensorField scale(const TensorField& a, double s) {
  return TensorField(a.up(), a.low(), a.ord(),
                     [a, s](int chart, std::span<const Jet> x) {
                       return scale_value(a.eval(chart, x), s);
                     });
}

TensorValue endo_compose(const TensorValue& p, const TensorValue& q) {
  if (p.up != 1 || p.low != 1 || q.up != 1 || q.low != 1)
    throw ValenceMismatch("endo_compose needs (1,1) tensors");
  const int n = p.dim;
  TensorValue r = TensorValue::zeros(n, 1, 1, std::min(p.ord, q.ord));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet acc(0.0, 0);
      for (int d = 0; d < n; ++d) acc = acc + p.at(a, d) * q.at(d, b);
      r.at(a, b) = acc;
    }
  r.clamp_order(r.ord);
  return r;
}

TensorValue endo_apply(const TensorValue& p, const TensorValue& x) {
  if (p.up != 1 || p.low != 1 || x.up != 1 || x.low != 0)
    throw ValenceMismatch("endo_apply needs (1,1) acting on (1,0)");
  const int n = p.dim;
  TensorValue r = TensorValue::zeros(n, 1, 0, std::min(p.ord, x.ord));
  for (int a = 0; a < n; ++a) {
    Jet acc(0.0, 0);
    for (int b = 0; b < n; ++b) acc = acc + p.at(a, b) * x.at(b);
    r.at(a) = acc;
  }
  r.clamp_order(r.ord);
  return r;
}

TensorValue outer_endo(const TensorValue& xi, const TensorValue& eta) {
  if (xi.up != 1 || xi.low != 0 || eta.up != 0 || eta.low != 1)
    throw ValenceMismatch("outer_endo needs a vector and a one-form");
  const int n = xi.dim;
  TensorValue r = TensorValue::zeros(n, 1, 1, std::min(xi.ord, eta.ord));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) r.at(a, b) = xi.at(a) * eta.at(b);
  r.clamp_order(r.ord);
  return r;
}

TensorValue oneform_endo(const TensorValue& eta, const TensorValue& p) {
  if (eta.up != 0 || eta.low != 1 || p.up != 1 || p.low != 1)
    throw ValenceMismatch("oneform_endo needs a one-form and a (1,1) tensor");
  const int n = eta.dim;
  TensorValue r = TensorValue::zeros(n, 0, 1, std::min(eta.ord, p.ord));
  for (int b = 0; b < n; ++b) {
    Jet acc(0.0, 0);
    for (int d = 0; d < n; ++d) acc = acc + eta.at(d) * p.at(d, b);
    r.at(b) = acc;
  }
  r.clamp_order(r.ord);
  return r;
}

TensorValue pair_form_vector(const TensorValue& eta, const TensorValue& x) {
  if (eta.low != 1 || eta.up != 0 || x.up != 1 || x.low != 0)
    throw ValenceMismatch("pair_form_vector needs a one-form and a vector");
  TensorValue r = TensorValue::zeros(eta.dim, 0, 0, std::min(eta.ord, x.ord));
  Jet acc(0.0, 0);
  for (int a = 0; a < eta.dim; ++a) acc = acc + eta.at(a) * x.at(a);
  r.at() = acc;
  r.clamp_order(r.ord);
  return r;
}

TensorValue metric_apply(const TensorValue& g, const TensorValue& x) {
  if (g.up != 0 || g.low != 2 || x.up != 1 || x.low != 0)
    throw ValenceMismatch("metric_apply needs a (0,2) tensor and a vector");
  const int n = g.dim;
  TensorValue r = TensorValue::zeros(n, 0, 1, std::min(g.ord, x.ord));
  for (int b = 0; b < n; ++b) {
    Jet acc(0.0, 0);
    for (int a = 0; a < n; ++a) acc = acc + g.at(a, b) * x.at(a);
    r.at(b) = acc;
  }
  r.clamp_order(r.ord);
  return r;
}

TensorValue metric_pair(const TensorValue& g, const TensorValue& x,
                        const TensorValue& y) {
  return pair_form_vector(metric_apply(g, x), y);
}

TensorValue form_from_endo(const TensorValue& g, const TensorValue& p) {
  if (g.up != 0 || g.low != 2 || p.up != 1 || p.low != 1)
    throw ValenceMismatch("form_from_endo needs a (0,2) tensor and a (1,1) tensor");
  const int n = g.dim;
  TensorValue r = TensorValue::zeros(n, 0, 2, std::min(g.ord, p.ord));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet acc(0.0, 0);
      for (int d = 0; d < n; ++d) acc = acc + p.at(d, a) * g.at(d, b);
      r.at(a, b) = acc;
    }
  r.clamp_order(r.ord);
  return r;
}

TensorValue interior_product(const TensorValue& x, const TensorValue& w) {
  if (x.up != 1 || x.low != 0 || w.up != 0 || w.low != 2)
    throw ValenceMismatch("interior_product implemented for 2-forms");
  const int n = w.dim;
  TensorValue r = TensorValue::zeros(n, 0, 1, std::min(x.ord, w.ord));
  for (int b = 0; b < n; ++b) {
    Jet acc(0.0, 0);
    for (int a = 0; a < n; ++a) acc = acc + x.at(a) * w.at(a, b);
    r.at(b) = acc;
  }
  r.clamp_order(r.ord);
  return r;
}

namespace {

// sign of the permutation that pulls the positions selected by `pick` (a
// bitmask over slot positions 0..total-1) to the front, order preserved.
int shuffle_sign(uint32_t pick, int total) {
  int inversions = 0, seen_unpicked = 0;
  for (int i = 0; i < total; ++i) {
    if (pick & (1u << i))
      inversions += seen_unpicked;
    else
      ++seen_unpicked;
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace

TensorValue wedge(const TensorValue& a, const TensorValue& b) {
  if (a.up != 0 || b.up != 0) throw ValenceMismatch("wedge needs forms");
  const int p = a.low, q = b.low, total = p + q;
  if (total > 4) throw ValenceMismatch("dense wedge limited to total degree 4");
  if (a.dim != b.dim) throw ValenceMismatch("wedge operands on different spaces");
  const int n = a.dim;
  TensorValue r = TensorValue::zeros(n, 0, total, std::min(a.ord, b.ord));

  std::vector<uint32_t> picks;
  for (uint32_t m = 0; m < (1u << total); ++m)
    if (std::popcount(m) == p) picks.push_back(m);

  std::vector<int> idx(total, 0);
  const size_t count = component_count(n, total);
  for (size_t flat = 0; flat < count; ++flat) {
    size_t rest = flat;
    for (int s = total - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(rest % n);
      rest /= n;
    }
    Jet acc(0.0, 0);
    for (uint32_t pick : picks) {
      int ia[4], ib[4], na = 0, nb = 0;
      for (int s = 0; s < total; ++s) {
        if (pick & (1u << s))
          ia[na++] = idx[s];
        else
          ib[nb++] = idx[s];
      }
      const Jet& av = (p == 0)   ? a.at()
                      : (p == 1) ? a.at(ia[0])
                      : (p == 2) ? a.at(ia[0], ia[1])
                                 : a.at(ia[0], ia[1], ia[2]);
      const Jet& bv = (q == 0)   ? b.at()
                      : (q == 1) ? b.at(ib[0])
                      : (q == 2) ? b.at(ib[0], ib[1])
                                 : b.at(ib[0], ib[1], ib[2]);
      const double sg = shuffle_sign(pick, total);
      acc = acc + av * bv * sg;
    }
    r.c[flat] = acc;
  }
  r.clamp_order(r.ord);
  return r;
}

TensorField exterior_derivative(const TensorField& w) {
  if (w.up() != 0 || w.low() > 3)
    throw ValenceMismatch("exterior derivative implemented for forms of degree <= 3");
  const int k = w.low();
  const int out_ord = std::max(0, w.ord() - 1);
  return derived_field(
      0, k + 1, out_ord,
      [w, k](int chart, std::span<const Jet> x) -> TensorValue {
        const TensorValue wv = w.eval(chart, x);
        const int n = wv.dim;
        TensorValue r = TensorValue::zeros(n, 0, k + 1, std::max(0, wv.ord - 1));
        std::vector<int> idx(k + 1, 0);
        const size_t count = component_count(n, k + 1);
        for (size_t flat = 0; flat < count; ++flat) {
          size_t rest = flat;
          for (int s = k; s >= 0; --s) {
            idx[s] = static_cast<int>(rest % n);
            rest /= n;
          }
          Jet acc(0.0, 0);
          for (int j = 0; j <= k; ++j) {
            int sub[3], ns = 0;
            for (int s = 0; s <= k; ++s)
              if (s != j) sub[ns++] = idx[s];
            const Jet& comp = (k == 0)   ? wv.at()
                              : (k == 1) ? wv.at(sub[0])
                              : (k == 2) ? wv.at(sub[0], sub[1])
                                         : wv.at(sub[0], sub[1], sub[2]);
            const Jet term = partial(comp, idx[j]);
            acc = (j % 2 == 0) ? acc + term : acc - term;
          }
          r.c[flat] = acc;
        }
        r.clamp_order(std::max(0, wv.ord - 1));
        return r;
      });
}

TensorField lie_bracket(const TensorField& x, const TensorField& y) {
  if (x.up() != 1 || x.low() != 0 || y.up() != 1 || y.low() != 0)
    throw ValenceMismatch("lie_bracket needs vector fields");
  const int out_ord = std::max(0, std::min(x.ord(), y.ord()) - 1);
  return derived_field(
      1, 0, out_ord,
      [x, y](int chart, std::span<const Jet> s) -> TensorValue {
        const TensorValue xv = x.eval(chart, s);
        const TensorValue yv = y.eval(chart, s);
        const int n = xv.dim;
        TensorValue r =
            TensorValue::zeros(n, 1, 0, std::max(0, std::min(xv.ord, yv.ord) - 1));
        for (int a = 0; a < n; ++a) {
          Jet acc(0.0, 0);
          for (int b = 0; b < n; ++b)
            acc = acc + xv.at(b) * partial(yv.at(a), b) -
                  yv.at(b) * partial(xv.at(a), b);
          r.at(a) = acc;
        }
        r.clamp_order(r.ord);
        return r;
      });
}

namespace {

TensorField nijenhuis_components(const TensorField& p) {
  const int out_ord = std::max(0, p.ord() - 1);
  return derived_field(
      1, 2, out_ord,
      [p](int chart, std::span<const Jet> s) -> TensorValue {
        const TensorValue pv = p.eval(chart, s);
        const int n = pv.dim;
        TensorValue r = TensorValue::zeros(n, 1, 2, std::max(0, pv.ord - 1));
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc) {
              Jet acc(0.0, 0);
              for (int d = 0; d < n; ++d) {
                acc = acc + pv.at(d, b) * partial(pv.at(a, cc), d) -
                      pv.at(d, cc) * partial(pv.at(a, b), d) +
                      pv.at(a, d) *
                          (partial(pv.at(d, b), cc) - partial(pv.at(d, cc), b));
              }
              r.at(a, b, cc) = acc;
            }
        r.clamp_order(r.ord);
        return r;
      });
}

}  // namespace

TensorField nijenhuis_endo(const TensorField& p) {
  if (p.up() != 1 || p.low() != 1)
    throw ValenceMismatch("nijenhuis_endo needs a (1,1) field");
  return nijenhuis_components(p);
}

TensorField nijenhuis_complex(const TensorField& j) {
  if (j.up() != 1 || j.low() != 1)
    throw ValenceMismatch("nijenhuis_complex needs a (1,1) field");
  return nijenhuis_components(j);
}

TensorValue pullback_value(const TensorValue& t_at_image,
                           std::span<const Jet> image_jets, int src_dim) {
  const int nd = t_at_image.dim;
  if (static_cast<int>(image_jets.size()) != nd)
    throw ValenceMismatch("pullback image dimension mismatch");
  const int up = t_at_image.up, low = t_at_image.low;
  if (up > 0 && src_dim != nd)
    throw ValenceMismatch("contravariant pullback needs equal dimensions");

  // Components of the tensor as functions of the source coordinates.
  TensorValue th = t_at_image;
  th.dim = nd;
  for (Jet& comp : th.c) comp = compose(comp, image_jets);
  th.clamp_order(std::min(t_at_image.ord, 2));

  // Jacobian (and, when needed, its inverse) as source-coordinate jets.
  Mat<Jet> jac(nd, src_dim);
  for (int b = 0; b < nd; ++b)
    for (int a = 0; a < src_dim; ++a) jac(b, a) = partial(image_jets[b], a);
  Mat<Jet> jinv(0, 0);
  if (up > 0) jinv = LU<Jet>(jac).inverse();

  const int slots = up + low;
  TensorValue r = TensorValue::zeros(src_dim, up, low, 0);
  std::vector<int> out(slots, 0), in(slots, 0);
  const size_t out_count = component_count(src_dim, slots);
  const size_t in_count = component_count(nd, slots);
  for (size_t oflat = 0; oflat < out_count; ++oflat) {
    size_t rest = oflat;
    for (int s = slots - 1; s >= 0; --s) {
      out[s] = static_cast<int>(rest % src_dim);
      rest /= src_dim;
    }
    Jet acc(0.0, 0);
    for (size_t iflat = 0; iflat < in_count; ++iflat) {
      size_t irest = iflat;
      for (int s = slots - 1; s >= 0; --s) {
        in[s] = static_cast<int>(irest % nd);
        irest /= nd;
      }
      Jet w = th.c[iflat];
      for (int s = 0; s < slots; ++s)
        w = w * ((s < up) ? jinv(out[s], in[s]) : jac(in[s], out[s]));
      acc = acc + w;
    }
    r.c[oflat] = acc;
  }
  const int jac_ord = 1;  // entries of jac/jinv are order-1 jets
  r.ord = (slots == 0) ? std::min(t_at_image.ord, 2)
                       : std::min(std::min(t_at_image.ord, 2), jac_ord);
  r.clamp_order(r.ord);
  return r;
}

TensorField pullback(const FieldMap& mp, const TensorField& t) {
  const int out_ord = (t.up() + t.low() == 0) ? t.ord() : std::min(t.ord(), 1);
  auto map = mp.map;
  const int src = mp.src_chart, dst = mp.dst_chart;
  // pullback_value composes the components itself, so the tensor must be
  // handed over in canonical jets at the image point
  return derived_field(t.up(), t.low(), out_ord,
                       [map, src, dst, t](int chart, std::span<const Jet> x) {
                         if (chart != src)
                           throw UnknownChart("pullback evaluated off its source chart");
                         const std::vector<Jet> img = map(x);
                         const std::vector<Jet> at_img = seed_jets(jet_values(img));
                         const TensorValue tv = t.eval(dst, at_img);
                         return pullback_value(tv, img, static_cast<int>(x.size()));
                       });
}

double form_on_vectors(const TensorValue& w,
                       std::span<const std::vector<double>> v) {
  if (w.up != 0 || w.low != static_cast<int>(v.size()))
    throw ValenceMismatch("form degree does not match vector count");
  const int k = w.low, n = w.dim;
  double acc = 0.0;
  std::vector<int> idx(k, 0);
  const size_t count = component_count(n, k);
  for (size_t flat = 0; flat < count; ++flat) {
    size_t rest = flat;
    for (int s = k - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(rest % n);
      rest /= n;
    }
    double t = w.c[flat].value();
    for (int s = 0; s < k && t != 0.0; ++s) t *= v[s][idx[s]];
    acc += t;
  }
  return acc;
}

namespace {

template <class S>
S wedge_eval_rec(std::span<const WedgeFactor<S>> fs, size_t fidx, int dim,
                 std::span<const int> axes, uint32_t mask) {
  if (fidx == fs.size()) return S(1);
  const WedgeFactor<S>& f = fs[fidx];
  S acc(0);
  if (f.degree == 1) {
    int pos = 0;
    for (int i = 0; i < static_cast<int>(axes.size()); ++i) {
      if (!(mask & (1u << i))) continue;
      const S comp = f.comp[axes[i]];
      if (comp != S(0)) {
        const S rest =
            wedge_eval_rec(fs, fidx + 1, dim, axes, mask & ~(1u << i));
        const S term = comp * rest;
        acc += (pos % 2 == 0) ? term : -term;
      }
      ++pos;
    }
  } else if (f.degree == 2) {
    int pi = 0;
    for (int i = 0; i < static_cast<int>(axes.size()); ++i) {
      if (!(mask & (1u << i))) continue;
      int pj = pi + 1;
      for (int j = i + 1; j < static_cast<int>(axes.size()); ++j) {
        if (!(mask & (1u << j))) continue;
        const S comp = f.comp[axes[i] * dim + axes[j]];
        if (comp != S(0)) {
          const S rest = wedge_eval_rec(fs, fidx + 1, dim, axes,
                                        mask & ~(1u << i) & ~(1u << j));
          const S term = comp * rest;
          acc += ((pi + pj - 1) % 2 == 0) ? term : -term;
        }
        ++pj;
      }
      ++pi;
    }
  } else {
    throw ValenceMismatch("wedge factors must have degree 1 or 2");
  }
  return acc;
}

template <class S>
double max_coeff_impl(std::span<const WedgeFactor<S>> fs, int dim) {
  int total = 0;
  for (const auto& f : fs) total += f.degree;
  if (total > dim) throw ValenceMismatch("wedge degree exceeds dimension");
  double best = 0.0;
  std::vector<int> axes(total);
  // enumerate increasing subsets of {0..dim-1} of size `total`
  std::vector<int> comb(total);
  for (int i = 0; i < total; ++i) comb[i] = i;
  while (true) {
    for (int i = 0; i < total; ++i) axes[i] = comb[i];
    const uint32_t full = (1u << total) - 1u;
    const S val = wedge_eval_rec(fs, 0, dim, std::span<const int>(axes), full);
    best = std::max(best, std::abs(val));
    int i = total - 1;
    while (i >= 0 && comb[i] == dim - total + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < total; ++j) comb[j] = comb[j - 1] + 1;
  }
  return best;
}

}  // namespace

double wedge_eval(std::span<const WedgeFactor<double>> fs, int dim,
                  std::span<const int> axes) {
  const uint32_t full = (1u << axes.size()) - 1u;
  return wedge_eval_rec(fs, 0, dim, axes, full);
}

std::complex<double> wedge_eval(
    std::span<const WedgeFactor<std::complex<double>>> fs, int dim,
    std::span<const int> axes) {
  const uint32_t full = (1u << axes.size()) - 1u;
  return wedge_eval_rec(fs, 0, dim, axes, full);
}

double wedge_max_coeff(std::span<const WedgeFactor<double>> fs, int dim) {
  return max_coeff_impl(fs, dim);
}

double wedge_max_coeff(std::span<const WedgeFactor<std::complex<double>>> fs,
                       int dim) {
  return max_coeff_impl(fs, dim);
}

}  // namespace contact3
