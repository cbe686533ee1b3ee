#include "contact3/contact.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "contact3/hermitian.hpp"
#include "contact3/smallmat.hpp"

namespace contact3 {

namespace {

Mat<Jet> to_mat(const std::vector<Jet>& a, int d) {
  Mat<Jet> m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = a[i * d + j];
  return m;
}

std::vector<Jet> to_flat(const Mat<Jet>& m) {
  const int r = m.rows(), c = m.cols();
  std::vector<Jet> a(static_cast<size_t>(r) * c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) a[i * c + j] = m(i, j);
  return a;
}

void symmetrize(Mat<Jet>& m) {
  const int n = m.rows();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const Jet s = (m(i, j) + m(j, i)) * 0.5;
      m(i, j) = s;
      m(j, i) = s;
    }
}

}  // namespace

BaseFrame analyze(const Model& md, int chart, std::span<const Jet> x) {
  md.check_chart(chart);
  const int m = md.m, d = md.d;
  const int jd = x.empty() ? 0 : x[0].dim();

  BaseFrame fr;
  fr.m = m;
  fr.d = d;

  ChartData cd = md.data(chart, x);
  fr.theta = std::move(cd.theta);
  fr.dtheta = std::move(cd.dtheta);
  fr.p = std::move(cd.dlogh);
  fr.h = cd.h;
  if (!(fr.h.value() > 0.0)) throw InvalidWeight(md.name);
  fr.sqh = sqrt(fr.h);
  const Jet inv_sqh = 1.0 / fr.sqh;

  // ϖ = θ/√h and Ω = dθ/√h − ∂log h ∧ ϖ, all in the dz-basis
  std::vector<CJet> pi(m);
  for (int k = 0; k < m; ++k) pi[k] = fr.theta[k] * inv_sqh;
  fr.omega.assign(static_cast<size_t>(m) * m, CJet{Jet(0.0, 0), Jet(0.0, 0)});
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      if (k == l) continue;
      fr.omega[k * m + l] =
          fr.dtheta[k * m + l] * inv_sqh - (fr.p[k] * pi[l] - fr.p[l] * pi[k]);
    }

  std::vector<Jet> pre, pim;
  complex_oneform_to_real(m, pi, pre, pim);
  fr.u = std::move(pre);
  fr.v.resize(d);
  for (int a = 0; a < d; ++a) fr.v[a] = -pim[a];

  fr.sigma.assign(d, Jet(0.0, 0));
  for (int k = 0; k < m; ++k) {
    fr.sigma[2 * k] = fr.p[k].im;
    fr.sigma[2 * k + 1] = fr.p[k].re;
  }

  complex_twoform_to_real(m, fr.omega, fr.ghat, fr.hhat);
  fr.gref = md.gref(chart, x);

  // vertical frame: Ĝ + u⊗u + v⊗v is invertible exactly when the kernel of Ω
  // is a 2-plane on which (u, v) stays a coframe, and then A, B solve
  // Ĝ(·,A) = 0, u(A) = 1, v(A) = 0 (resp. B) in one shot
  Mat<Jet> S(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      S(a, b) = fr.ghat[a * d + b] + fr.u[a] * fr.u[b] + fr.v[a] * fr.v[b];
  Mat<Jet> rhs(d, 2);
  for (int a = 0; a < d; ++a) {
    rhs(a, 0) = fr.u[a];
    rhs(a, 1) = fr.v[a];
  }
  Mat<Jet> AB(d, 2);
  try {
    AB = LU<Jet>(std::move(S)).solve(rhs);
  } catch (const SingularMetric&) {
    throw DegenerateVerticalDistribution(md.name);
  }
  fr.A.resize(d);
  fr.B.resize(d);
  for (int a = 0; a < d; ++a) {
    fr.A[a] = AB(a, 0);
    fr.B[a] = AB(a, 1);
  }

  // auxiliary metric: reference on the horizontal projection, (u,v)-coframe
  // square on the vertical
  Mat<Jet> proj = Mat<Jet>::identity(d, jd);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      proj(a, b) -= fr.A[a] * fr.u[b] + fr.B[a] * fr.v[b];
  const Mat<Jet> gr = to_mat(fr.gref, d);
  Mat<Jet> g1 = proj.transposed() * gr * proj;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      g1(a, b) += fr.u[a] * fr.u[b] + fr.v[a] * fr.v[b];
  symmetrize(g1);

  // polar step: g_Z is the metric geometric mean of g₁ and
  // M = −Ĝ g₁⁻¹ Ĝ + u⊗u + v⊗v, which makes g_Z⁻¹Ĝ an almost complex
  // structure on the horizontal distribution
  const Mat<Jet> gh = to_mat(fr.ghat, d);
  Mat<Jet> mm = gh * LU<Jet>(g1).solve(gh) * (-1.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      mm(a, b) += fr.u[a] * fr.u[b] + fr.v[a] * fr.v[b];
  symmetrize(mm);

  const Mat<Jet> L = cholesky(g1);
  const LU<Jet> llu(L);
  const Mat<Jet> z = llu.solve(mm);
  Mat<Jet> y = llu.solve(z.transposed());
  symmetrize(y);
  Mat<Jet> gz = L * sqrt_spd(y, jd) * L.transposed();
  symmetrize(gz);

  const LU<Jet> gzlu(gz);
  fr.G = to_flat(gzlu.solve(gh));
  fr.H = to_flat(gzlu.solve(to_mat(fr.hhat, d)));
  fr.g1 = to_flat(g1);
  fr.gz = to_flat(gz);
  return fr;
}

BaseGeometry::BaseGeometry(std::shared_ptr<const Model> model)
    : model_(std::move(model)) {}

namespace {

// The cache holds the model alive so that pointer identity cannot alias a
// freed model with a new allocation at the same address.
struct FrameCache {
  std::shared_ptr<const Model> md;
  int chart = -1;
  int d = 0;
  std::array<double, kMaxDim> x{};
  std::shared_ptr<const BaseFrame> fr;
};

}  // namespace

std::shared_ptr<const BaseFrame> BaseGeometry::frame(
    int chart, std::span<const double> x) const {
  thread_local FrameCache cache;
  const int d = static_cast<int>(x.size());
  if (cache.fr && cache.md.get() == model_.get() && cache.chart == chart &&
      cache.d == d && std::equal(x.begin(), x.end(), cache.x.begin()))
    return cache.fr;
  const std::vector<Jet> xj = seed_jets(x);
  auto fr = std::make_shared<const BaseFrame>(analyze(*model_, chart, xj));
  cache.md = model_;
  cache.chart = chart;
  cache.d = d;
  std::copy(x.begin(), x.end(), cache.x.begin());
  cache.fr = fr;
  return fr;
}

TensorField BaseGeometry::frame_slice(
    int up, int low, std::vector<Jet> BaseFrame::*member) const {
  auto self = shared_from_this();
  return derived_field(
      up, low, 2, [self, member, up, low](int chart, std::span<const Jet> xj) {
        auto fr = self->frame(chart, jet_values(xj));
        TensorValue t = TensorValue::zeros(fr->d, up, low, 2);
        t.c = (*fr).*member;
        return t;
      });
}

TensorField BaseGeometry::u_form() const { return frame_slice(0, 1, &BaseFrame::u); }
TensorField BaseGeometry::v_form() const { return frame_slice(0, 1, &BaseFrame::v); }
TensorField BaseGeometry::sigma_form() const { return frame_slice(0, 1, &BaseFrame::sigma); }
TensorField BaseGeometry::ghat_form() const { return frame_slice(0, 2, &BaseFrame::ghat); }
TensorField BaseGeometry::hhat_form() const { return frame_slice(0, 2, &BaseFrame::hhat); }
TensorField BaseGeometry::metric() const { return frame_slice(0, 2, &BaseFrame::gz); }
TensorField BaseGeometry::endo_G() const { return frame_slice(1, 1, &BaseFrame::G); }
TensorField BaseGeometry::endo_H() const { return frame_slice(1, 1, &BaseFrame::H); }
TensorField BaseGeometry::vert_A() const { return frame_slice(1, 0, &BaseFrame::A); }
TensorField BaseGeometry::vert_B() const { return frame_slice(1, 0, &BaseFrame::B); }
TensorField BaseGeometry::gref_field() const { return frame_slice(0, 2, &BaseFrame::gref); }

TensorField BaseGeometry::complex_structure() const {
  const int d = model_->d;
  return TensorField(1, 1, 2, [d](int, std::span<const Jet> x) {
    const int jd = x.empty() ? 0 : x[0].dim();
    TensorValue t = TensorValue::zeros(d, 1, 1, 2);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const double s = std_complex_structure(a, b);
        if (s != 0.0) t.at(a, b) = Jet(s, jd);
      }
    return t;
  });
}

double atlas_theta_residual(const Model& md, const Transition& tr,
                            std::span<const double> x) {
  const std::vector<Jet> xj = seed_jets(x);
  const std::vector<Jet> img = tr.fwd(xj);
  const ChartData ca = md.data(tr.a, xj);
  const ChartData cb = md.data(tr.b, seed_jets(jet_values(img)));
  const CJet f = md.cocycle(tr.a, tr.b, xj);

  std::vector<Jet> are, aim, bre, bim;
  complex_oneform_to_real(md.m, ca.theta, are, aim);
  complex_oneform_to_real(md.m, cb.theta, bre, bim);
  TensorValue tre = TensorValue::zeros(md.d, 0, 1, 2);
  TensorValue tim = TensorValue::zeros(md.d, 0, 1, 2);
  tre.c = std::move(bre);
  tim.c = std::move(bim);
  const TensorValue pre = pullback_value(tre, img, md.d);
  const TensorValue pim = pullback_value(tim, img, md.d);

  double worst = 0.0;
  for (int a = 0; a < md.d; ++a) {
    const double rhs_re =
        f.re.value() * pre.at(a).value() - f.im.value() * pim.at(a).value();
    const double rhs_im =
        f.re.value() * pim.at(a).value() + f.im.value() * pre.at(a).value();
    worst = std::max({worst, std::fabs(are[a].value() - rhs_re),
                      std::fabs(aim[a].value() - rhs_im)});
  }
  return worst;
}

double atlas_weight_residual(const Model& md, const Transition& tr,
                             std::span<const double> x) {
  const std::vector<Jet> xj = seed_jets(x);
  const std::vector<Jet> img = tr.fwd(xj);
  const ChartData ca = md.data(tr.a, xj);
  const ChartData cb = md.data(tr.b, img);
  const CJet f = md.cocycle(tr.a, tr.b, xj);
  return std::fabs(ca.h.value() - abs2(f).value() * cb.h.value());
}

namespace {

const Transition* find_transition(const Model& md, int a, int b) {
  for (const Transition& tr : md.transitions)
    if (tr.a == a && tr.b == b) return &tr;
  return nullptr;
}

std::vector<Jet> cross_chart(const Model& md, int a, int b,
                             std::span<const Jet> x) {
  if (const Transition* tr = find_transition(md, a, b)) return tr->fwd(x);
  if (const Transition* tr = find_transition(md, b, a)) return tr->bwd(x);
  throw UnknownChart(md.name);
}

}  // namespace

double atlas_cocycle_residual(const Model& md, const TripleOverlap& to,
                              std::span<const double> x) {
  const std::vector<Jet> xj = seed_jets(x);
  const std::vector<Jet> yb = cross_chart(md, to.a, to.b, xj);
  const CJet fab = md.cocycle(to.a, to.b, xj);
  const CJet fbc = md.cocycle(to.b, to.c, yb);
  const CJet fac = md.cocycle(to.a, to.c, xj);
  const CJet diff = fac - fab * fbc;
  return abs(diff).value();
}

void validate_atlas(const Model& md, Rng& rng, int samples, double tol) {
  for (int chart = 0; chart < md.charts; ++chart)
    for (int s = 0; s < samples; ++s) {
      const std::vector<double> x = md.boxes[chart].sample(rng);
      const ChartData cd = md.data(chart, seed_jets(x));
      if (!(cd.h.value() > 0.0)) throw InvalidWeight(md.name);
    }
  for (const Transition& tr : md.transitions)
    for (int s = 0; s < samples; ++s) {
      const std::vector<double> x = tr.box_a.sample(rng);
      if (atlas_theta_residual(md, tr, x) > tol ||
          atlas_weight_residual(md, tr, x) > tol)
        throw GaugeInconsistency(md.name);
    }
  for (const TripleOverlap& to : md.triples)
    for (int s = 0; s < samples; ++s) {
      const std::vector<double> x = to.box_a.sample(rng);
      if (atlas_cocycle_residual(md, to, x) > tol)
        throw GaugeInconsistency(md.name);
    }
}

Jet gauge(const Model& md, const Transition& tr, std::span<const Jet> x) {
  const CJet f = md.cocycle(tr.a, tr.b, x);
  return atan2(f.im, f.re);
}

double omega_two_route_residual(const BaseGeometry& geo, int chart,
                                std::span<const double> x) {
  const TensorField uf = geo.u_form(), vf = geo.v_form(), sf = geo.sigma_form();
  const TensorValue du = exterior_derivative(uf).at_point(chart, x);
  const TensorValue dv = exterior_derivative(vf).at_point(chart, x);
  const TensorValue sv = sf.at_point(chart, x);
  const TensorValue uv = uf.at_point(chart, x);
  const TensorValue vv = vf.at_point(chart, x);
  // dϖ − iσ∧ϖ has real part du − σ∧v and imaginary part −(dv + σ∧u)
  const TensorValue re_def = sub_values(du, wedge(sv, vv));
  const TensorValue im_def = scale_value(add_values(dv, wedge(sv, uv)), -1.0);
  const TensorValue gh = geo.ghat_form().at_point(chart, x);
  const TensorValue hh = geo.hhat_form().at_point(chart, x);
  return std::max(sub_values(re_def, gh).max_abs_value(),
                  sub_values(im_def, hh).max_abs_value());
}

std::vector<double> vertical_singvals(const BaseFrame& fr) {
  const int d = fr.d;
  Mat<double> gsq(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double s = 0.0;
      for (int c = 0; c < d; ++c)
        s -= fr.ghat[a * d + c].value() * fr.ghat[c * d + b].value();
      gsq(a, b) = s;
    }
  std::vector<double> w;
  Mat<double> vecs;
  jacobi_eigen(gsq, w, vecs);
  for (double& e : w) e = std::sqrt(std::max(e, 0.0));
  std::sort(w.begin(), w.end());
  return w;
}

std::vector<double> vertical_principal_angles(const BaseGeometry& geo,
                                              const Transition& tr,
                                              std::span<const double> x) {
  const auto fra = geo.frame(tr.a, x);
  const std::vector<Jet> img = tr.fwd(seed_jets(x));
  const std::vector<double> yv = jet_values(img);
  const auto frb = geo.frame(tr.b, yv);
  const int d = fra->d;

  // Jacobian of the reverse map at the image pushes chart-b vectors to chart a
  const std::vector<Jet> back = tr.bwd(seed_jets(yv));
  auto push = [&](const std::vector<Jet>& vb) {
    std::vector<double> va(d, 0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) va[i] += back[i].d(j) * vb[j].value();
    return va;
  };
  const std::vector<double> pa = push(frb->A), pb = push(frb->B);

  std::vector<std::vector<double>> ea = {jet_values(fra->A), jet_values(fra->B)};
  std::vector<std::vector<double>> eb = {pa, pb};
  auto dot = [&](const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) s += fra->gref[a * d + b].value() * p[a] * q[b];
    return s;
  };
  auto orthonormalize = [&](std::vector<std::vector<double>>& e) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < i; ++j) {
        const double c = dot(e[i], e[j]);
        for (int a = 0; a < d; ++a) e[i][a] -= c * e[j][a];
      }
      const double nrm = std::sqrt(dot(e[i], e[i]));
      for (int a = 0; a < d; ++a) e[i][a] /= nrm;
    }
  };
  orthonormalize(ea);
  orthonormalize(eb);

  Mat<double> overlap(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) overlap(i, j) = dot(ea[i], eb[j]);
  std::vector<double> w;
  Mat<double> vecs;
  jacobi_eigen(overlap.transposed() * overlap, w, vecs);
  std::vector<double> angles;
  for (double e : w) {
    const double c = std::sqrt(std::clamp(e, 0.0, 1.0));
    angles.push_back(std::acos(std::min(c, 1.0)));
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

}  // namespace contact3
