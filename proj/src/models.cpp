#include "contact3/models.hpp"

#include <array>
#include <cmath>

#include "contact3/hermitian.hpp"

namespace contact3 {

namespace {

std::vector<Jet> complex_pair_to_real(std::span<const CJet> w) {
  std::vector<Jet> r(2 * w.size());
  for (size_t k = 0; k < w.size(); ++k) {
    r[2 * k] = w[k].re;
    r[2 * k + 1] = w[k].im;
  }
  return r;
}

std::shared_ptr<const Model> make_flat(int n) {
  if (n < 1 || n > 2)
    throw UnsupportedDimension("flat model supports n = 1 or 2");
  auto md = std::make_shared<Model>();
  md->name = (n == 1) ? "flat3" : "flat5";
  md->doc = "single-chart affine space with constant contact data and unit weight";
  md->n = n;
  md->m = 2 * n + 1;
  md->d = 2 * md->m;
  md->charts = 1;
  md->boxes = {Box::cube(md->d, 1.0)};
  const int m = md->m;
  md->data = [m](int chart, std::span<const Jet> x) {
    if (chart != 0) throw UnknownChart("flat model has one chart");
    ChartData cd;
    cd.theta.assign(m, CJet{Jet(0.0, 0), Jet(0.0, 0)});
    cd.dtheta.assign(m * m, CJet{Jet(0.0, 0), Jet(0.0, 0)});
    cd.theta[0] = CJet{Jet(1.0, 0), Jet(0.0, 0)};
    for (int k = 1; k + 1 < m; k += 2) {
      cd.theta[k + 1] = cx(x, k);
      cd.dtheta[k * m + k + 1] = CJet{Jet(1.0, 0), Jet(0.0, 0)};
      cd.dtheta[(k + 1) * m + k] = CJet{Jet(-1.0, 0), Jet(0.0, 0)};
    }
    cd.h = Jet(1.0, 0);
    cd.dlogh.assign(m, CJet{Jet(0.0, 0), Jet(0.0, 0)});
    return cd;
  };
  md->cocycle = [](int, int, std::span<const Jet>) -> CJet {
    throw UnknownChart("flat model has no overlaps");
  };
  const int d = md->d;
  md->gref = [d](int, std::span<const Jet>) {
    std::vector<Jet> g(static_cast<size_t>(d) * d, Jet(0.0, 0));
    for (int a = 0; a < d; ++a) g[a * d + a] = Jet(1.0, 0);
    return g;
  };
  return md;
}

// ---- projective twistor atlas -------------------------------------------
//
// Four affine charts of the quadric-free projective 3-space carrying
// Θ = z0 dz1 − z1 dz0 + z2 dz3 − z3 dz2.  Chart i uses w_j = z_j / z_i for
// j ≠ i in increasing order.

const int kChartCoords[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};

// slot of global index j within chart i, or -1
int slot_of(int i, int j) {
  for (int s = 0; s < 3; ++s)
    if (kChartCoords[i][s] == j) return s;
  return -1;
}

// all four projective ratios W_j = z_j / z_i as seen from chart i
std::array<CJet, 4> ratios(int i, std::span<const Jet> x) {
  std::array<CJet, 4> w;
  w[i] = CJet{Jet(1.0, 0), Jet(0.0, 0)};
  for (int s = 0; s < 3; ++s) w[kChartCoords[i][s]] = cx(x, s);
  return w;
}

ChartData projective_data(int chart, std::span<const Jet> x) {
  const int m = 3;
  const auto w = ratios(chart, x);
  ChartData cd;
  cd.theta.assign(m, CJet{Jet(0.0, 0), Jet(0.0, 0)});
  cd.dtheta.assign(m * m, CJet{Jet(0.0, 0), Jet(0.0, 0)});
  const CJet one{Jet(1.0, 0), Jet(0.0, 0)};
  const CJet two{Jet(2.0, 0), Jet(0.0, 0)};
  switch (chart) {
    case 0:  // dw1 + w2 dw3 − w3 dw2
      cd.theta[0] = one;
      cd.theta[1] = -w[3];
      cd.theta[2] = w[2];
      cd.dtheta[1 * m + 2] = two;
      cd.dtheta[2 * m + 1] = -two;
      break;
    case 1:  // −dw0 + w2 dw3 − w3 dw2
      cd.theta[0] = -one;
      cd.theta[1] = -w[3];
      cd.theta[2] = w[2];
      cd.dtheta[1 * m + 2] = two;
      cd.dtheta[2 * m + 1] = -two;
      break;
    case 2:  // w0 dw1 − w1 dw0 + dw3
      cd.theta[0] = -w[1];
      cd.theta[1] = w[0];
      cd.theta[2] = one;
      cd.dtheta[0 * m + 1] = two;
      cd.dtheta[1 * m + 0] = -two;
      break;
    default:  // w0 dw1 − w1 dw0 − dw2
      cd.theta[0] = -w[1];
      cd.theta[1] = w[0];
      cd.theta[2] = -one;
      cd.dtheta[0 * m + 1] = two;
      cd.dtheta[1 * m + 0] = -two;
      break;
  }
  Jet s2(1.0, 0);  // Σ |z_j|^2 / |z_i|^2
  for (int sidx = 0; sidx < 3; ++sidx) s2 = s2 + abs2(cx(x, sidx));
  cd.h = s2 * s2 * 0.25;
  cd.dlogh.resize(m);
  for (int sidx = 0; sidx < 3; ++sidx) cd.dlogh[sidx] = (2.0 * conj(cx(x, sidx))) / CJet{s2, Jet(0.0, 0)};
  return cd;
}

std::vector<Jet> projective_gref(int /*chart*/, std::span<const Jet> x) {
  const int m = 3;
  Jet s2(1.0, 0);
  for (int sidx = 0; sidx < 3; ++sidx) s2 = s2 + abs2(cx(x, sidx));
  std::vector<CJet> beta(m * m);
  const Jet inv2 = Jet(1.0, 0) / (s2 * s2);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      CJet b = (-2.0) * (conj(cx(x, k)) * cx(x, l));
      if (k == l) b = b + CJet{s2 * 2.0, Jet(0.0, 0)};
      beta[k * m + l] = b * inv2;
    }
  return hermitian_to_real_metric(m, beta);
}

Box projective_overlap_box(int i, int j, double other_half) {
  Box b = Box::cube(6, other_half);
  const int s = slot_of(i, j);
  b.lo[2 * s] = 0.75;
  b.hi[2 * s] = 1.25;
  b.lo[2 * s + 1] = -0.25;
  b.hi[2 * s + 1] = 0.25;
  return b;
}

CoordMap projective_map(int i, int j) {
  return [i, j](std::span<const Jet> x) {
    const auto w = ratios(i, x);
    std::array<CJet, 3> out;
    for (int s = 0; s < 3; ++s) out[s] = w[kChartCoords[j][s]] / w[j];
    return complex_pair_to_real(out);
  };
}

std::shared_ptr<const Model> make_projective() {
  auto md = std::make_shared<Model>();
  md->name = "cp3";
  md->doc = "four-chart projective twistor atlas with quartic weight";
  md->n = 1;
  md->m = 3;
  md->d = 6;
  md->charts = 4;
  md->boxes.assign(4, Box::cube(6, 0.75));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      Transition t;
      t.a = i;
      t.b = j;
      t.fwd = projective_map(i, j);
      t.bwd = projective_map(j, i);
      t.box_a = projective_overlap_box(i, j, 0.75);
      t.box_b = projective_overlap_box(j, i, 0.75);
      md->transitions.push_back(std::move(t));
    }
  const int trip[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : trip) {
    TripleOverlap to;
    to.a = t[0];
    to.b = t[1];
    to.c = t[2];
    Box b = Box::cube(6, 0.5);
    for (int other : {t[1], t[2]}) {
      const int s = slot_of(t[0], other);
      b.lo[2 * s] = 0.75;
      b.hi[2 * s] = 1.25;
      b.lo[2 * s + 1] = -0.25;
      b.hi[2 * s + 1] = 0.25;
    }
    to.box_a = b;
    md->triples.push_back(std::move(to));
  }
  md->data = [](int chart, std::span<const Jet> x) {
    if (chart < 0 || chart > 3) throw UnknownChart("projective atlas has four charts");
    return projective_data(chart, x);
  };
  md->cocycle = [](int a, int b, std::span<const Jet> x) {
    if (a < 0 || a > 3 || b < 0 || b > 3 || a == b)
      throw UnknownChart("cocycle needs two distinct charts");
    const auto w = ratios(a, x);
    return w[b] * w[b];
  };
  md->gref = projective_gref;
  md->expect.sasaki = true;
  md->expect.omega1_exact = true;
  md->expect.fano = true;
  return md;
}

// ---- cotangent model -----------------------------------------------------
//
// Two charts glued along the fiber coordinate: A = (q1, q2, λ),
// B = (q1, q2, μ = 1/λ), with θ_A = dq1 + λ dq2 and weight 1 + |λ|².

ChartData cotangent_data(int chart, std::span<const Jet> x) {
  const int m = 3;
  ChartData cd;
  cd.theta.assign(m, CJet{Jet(0.0, 0), Jet(0.0, 0)});
  cd.dtheta.assign(m * m, CJet{Jet(0.0, 0), Jet(0.0, 0)});
  const CJet one{Jet(1.0, 0), Jet(0.0, 0)};
  const CJet fib = cx(x, 2);
  if (chart == 0) {
    cd.theta[0] = one;
    cd.theta[1] = fib;
    // dθ = dλ ∧ dq2 = −dq2 ∧ dλ
    cd.dtheta[1 * m + 2] = -one;
    cd.dtheta[2 * m + 1] = one;
  } else if (chart == 1) {
    cd.theta[0] = fib;
    cd.theta[1] = one;
    // dθ = dμ ∧ dq1 = −dq1 ∧ dμ
    cd.dtheta[0 * m + 2] = -one;
    cd.dtheta[2 * m + 0] = one;
  } else {
    throw UnknownChart("cotangent model has two charts");
  }
  const Jet a2 = abs2(fib);
  cd.h = a2 + 1.0;
  cd.dlogh.assign(m, CJet{Jet(0.0, 0), Jet(0.0, 0)});
  cd.dlogh[2] = conj(fib) / CJet{cd.h, Jet(0.0, 0)};
  return cd;
}

std::vector<Jet> cotangent_gref(int /*chart*/, std::span<const Jet> x) {
  const int d = 6;
  std::vector<Jet> g(static_cast<size_t>(d) * d, Jet(0.0, 0));
  for (int a = 0; a < 4; ++a) g[a * d + a] = Jet(1.0, 0);
  const Jet den = abs2(cx(x, 2)) + 1.0;
  const Jet fs = Jet(4.0, 0) / (den * den);
  g[4 * d + 4] = fs;
  g[5 * d + 5] = fs;
  return g;
}

std::shared_ptr<const Model> make_cotangent() {
  auto md = std::make_shared<Model>();
  md->name = "cotangent";
  md->doc = "two-chart model over the plane, fiber coordinate inverted across charts";
  md->n = 1;
  md->m = 3;
  md->d = 6;
  md->charts = 2;
  md->boxes.assign(2, Box::cube(6, 0.8));
  Transition t;
  t.a = 0;
  t.b = 1;
  t.fwd = [](std::span<const Jet> x) {
    std::array<CJet, 3> out = {cx(x, 0), cx(x, 1),
                               CJet{Jet(1.0, 0), Jet(0.0, 0)} / cx(x, 2)};
    return complex_pair_to_real(out);
  };
  t.bwd = t.fwd;
  Box ob = Box::cube(6, 0.8);
  ob.lo[4] = 0.8;
  ob.hi[4] = 1.3;
  ob.lo[5] = -0.25;
  ob.hi[5] = 0.25;
  t.box_a = ob;
  t.box_b = ob;
  md->transitions.push_back(std::move(t));
  md->data = cotangent_data;
  md->cocycle = [](int a, int b, std::span<const Jet> x) {
    if (!((a == 0 && b == 1) || (a == 1 && b == 0)))
      throw UnknownChart("cocycle needs two distinct charts");
    return cx(x, 2);
  };
  md->gref = cotangent_gref;
  return md;
}

}  // namespace

std::shared_ptr<const Model> build_flat_model(int n) { return make_flat(n); }
std::shared_ptr<const Model> build_projective_twistor() { return make_projective(); }
std::shared_ptr<const Model> build_cotangent_model() { return make_cotangent(); }

std::shared_ptr<const Model> model_by_name(const std::string& name) {
  if (name == "flat3") return build_flat_model(1);
  if (name == "cp3") return build_projective_twistor();
  if (name == "cotangent") return build_cotangent_model();
  throw UnknownModel(name);
}

std::vector<std::string> model_names() { return {"flat3", "cp3", "cotangent"}; }

}  // namespace contact3
