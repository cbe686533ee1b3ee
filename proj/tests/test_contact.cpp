#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <memory>
#include <vector>

#include "contact3/contact.hpp"
#include "contact3/hermitian.hpp"
#include "contact3/models.hpp"
#include "contact3/smallmat.hpp"
#include "contact3/tensor.hpp"
#include "doctest.h"

using namespace contact3;

namespace {

std::vector<double> values_of(const std::vector<Jet>& a) {
  std::vector<double> v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[i] = a[i].value();
  return v;
}

TensorValue wrap(const std::vector<Jet>& comps, int d, int up, int low) {
  TensorValue t = TensorValue::zeros(d, up, low, 2);
  t.c = comps;
  return t;
}

// worst |(P Q)^a_b − R^a_b| over the d×d grid, all flat row-major arrays
double endo_product_residual(const std::vector<double>& p,
                             const std::vector<double>& q,
                             const std::vector<double>& r, int d) {
  double worst = 0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double s = 0;
      for (int c = 0; c < d; ++c) s += p[a * d + c] * q[c * d + b];
      worst = std::max(worst, std::fabs(s - r[a * d + b]));
    }
  return worst;
}

std::vector<double> jmat(int d) {
  std::vector<double> j(static_cast<size_t>(d) * d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) j[a * d + b] = std_complex_structure(a, b);
  return j;
}

// a minimal single-chart atlas whose vertical distribution collapses
std::shared_ptr<const Model> make_collapsed(double weight) {
  auto md = std::make_shared<Model>();
  md->name = "collapsed";
  md->n = 1;
  md->m = 3;
  md->d = 6;
  md->charts = 1;
  md->boxes = {Box::cube(6, 1.0)};
  md->data = [weight](int, std::span<const Jet>) {
    ChartData cd;
    cd.theta.assign(3, CJet{Jet(0.0, 0), Jet(0.0, 0)});
    cd.dtheta.assign(9, CJet{Jet(0.0, 0), Jet(0.0, 0)});
    cd.theta[0] = CJet{Jet(1.0, 0), Jet(0.0, 0)};
    cd.h = Jet(weight, 0);
    cd.dlogh.assign(3, CJet{Jet(0.0, 0), Jet(0.0, 0)});
    return cd;
  };
  md->cocycle = [](int, int, std::span<const Jet>) -> CJet {
    throw UnknownChart("collapsed");
  };
  md->gref = [](int, std::span<const Jet>) {
    std::vector<Jet> g(36, Jet(0.0, 0));
    for (int a = 0; a < 6; ++a) g[a * 6 + a] = Jet(1.0, 0);
    return g;
  };
  return md;
}

}  // namespace

TEST_CASE("flat frame in closed form") {
  auto geo = std::make_shared<BaseGeometry>(build_flat_model(1));
  const std::vector<double> origin(6, 0.0);
  auto fr = geo->frame(0, origin);

  CHECK(fr->h.value() == doctest::Approx(1.0));
  for (int a = 0; a < 6; ++a) {
    CHECK(fr->u[a].value() == doctest::Approx(a == 0 ? 1.0 : 0.0).scale(1.0));
    CHECK(fr->v[a].value() == doctest::Approx(a == 1 ? -1.0 : 0.0).scale(1.0));
    CHECK(fr->sigma[a].value() == doctest::Approx(0.0).scale(1.0));
    CHECK(fr->A[a].value() == doctest::Approx(a == 0 ? 1.0 : 0.0).scale(1.0));
    CHECK(fr->B[a].value() == doctest::Approx(a == 1 ? -1.0 : 0.0).scale(1.0));
    for (int b = 0; b < 6; ++b)
      CHECK(fr->gz[a * 6 + b].value() ==
            doctest::Approx(a == b ? 1.0 : 0.0).scale(1.0));
  }
  CHECK(fr->ghat[2 * 6 + 4].value() == doctest::Approx(1.0));
  CHECK(fr->ghat[3 * 6 + 5].value() == doctest::Approx(-1.0));
  CHECK(fr->G[2 * 6 + 4].value() == doctest::Approx(1.0));
  CHECK(fr->G[5 * 6 + 3].value() == doctest::Approx(1.0));
  CHECK(fr->H[2 * 6 + 5].value() == doctest::Approx(1.0));
  CHECK(fr->H[3 * 6 + 4].value() == doctest::Approx(1.0));

  // the vertical frame of the flat model is position independent
  const std::vector<double> p = {0.3, -0.2, 0.5, 0.1, -0.4, 0.2};
  auto fp = geo->frame(0, p);
  for (int a = 0; a < 6; ++a) {
    CHECK(fp->A[a].value() == doctest::Approx(a == 0 ? 1.0 : 0.0).scale(1.0));
    CHECK(fp->B[a].value() == doctest::Approx(a == 1 ? -1.0 : 0.0).scale(1.0));
  }
}

TEST_CASE("projective frame at a chart center in closed form") {
  auto geo = std::make_shared<BaseGeometry>(build_projective_twistor());
  const std::vector<double> origin(6, 0.0);
  auto fr = geo->frame(0, origin);

  CHECK(fr->h.value() == doctest::Approx(0.25));
  for (int a = 0; a < 6; ++a) {
    CHECK(fr->u[a].value() == doctest::Approx(a == 0 ? 2.0 : 0.0).scale(1.0));
    CHECK(fr->v[a].value() == doctest::Approx(a == 1 ? -2.0 : 0.0).scale(1.0));
    CHECK(fr->A[a].value() == doctest::Approx(a == 0 ? 0.5 : 0.0).scale(1.0));
    CHECK(fr->B[a].value() == doctest::Approx(a == 1 ? -0.5 : 0.0).scale(1.0));
    for (int b = 0; b < 6; ++b) {
      CHECK(fr->gref[a * 6 + b].value() ==
            doctest::Approx(a == b ? 4.0 : 0.0).scale(1.0));
      CHECK(fr->gz[a * 6 + b].value() ==
            doctest::Approx(a == b ? 4.0 : 0.0).scale(1.0));
    }
  }
  CHECK(fr->ghat[2 * 6 + 4].value() == doctest::Approx(4.0));
  CHECK(fr->ghat[3 * 6 + 5].value() == doctest::Approx(-4.0));
  CHECK(fr->hhat[2 * 6 + 5].value() == doctest::Approx(4.0));
  CHECK(fr->hhat[3 * 6 + 4].value() == doctest::Approx(4.0));
  CHECK(fr->G[2 * 6 + 4].value() == doctest::Approx(1.0));
  CHECK(fr->G[4 * 6 + 2].value() == doctest::Approx(-1.0));
  CHECK(fr->H[2 * 6 + 5].value() == doctest::Approx(1.0));
  CHECK(fr->H[5 * 6 + 2].value() == doctest::Approx(-1.0));
}

TEST_CASE("frame identities hold at random points of every model") {
  for (const auto& name : model_names()) {
    auto md = model_by_name(name);
    auto geo = std::make_shared<BaseGeometry>(md);
    const int d = md->d;
    const auto J = jmat(d);
    Rng rng(401);
    for (int chart = 0; chart < md->charts; ++chart) {
      CAPTURE(name);
      CAPTURE(chart);
      for (int trial = 0; trial < 4; ++trial) {
        const std::vector<double> x = md->boxes[chart].sample(rng);
        auto fr = geo->frame(chart, x);
        const auto u = values_of(fr->u), v = values_of(fr->v);
        const auto A = values_of(fr->A), B = values_of(fr->B);
        const auto gz = values_of(fr->gz), gh = values_of(fr->ghat);
        const auto G = values_of(fr->G), H = values_of(fr->H);

        auto pair = [&](const std::vector<double>& form,
                        const std::vector<double>& vec) {
          double s = 0;
          for (int a = 0; a < d; ++a) s += form[a] * vec[a];
          return s;
        };
        CHECK(pair(u, A) == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(pair(v, B) == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(pair(u, B) == doctest::Approx(0.0).scale(1.0).epsilon(1e-11));
        CHECK(pair(v, A) == doctest::Approx(0.0).scale(1.0).epsilon(1e-11));

        // A and B span the kernel of Ĝ
        for (int a = 0; a < d; ++a) {
          double ga = 0, gb = 0;
          for (int b = 0; b < d; ++b) {
            ga += gh[a * d + b] * A[b];
            gb += gh[a * d + b] * B[b];
          }
          CHECK(ga == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
          CHECK(gb == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
        }

        // the metric pairs the vertical frame with its coframe
        for (int a = 0; a < d; ++a) {
          double gza = 0, gzb = 0;
          for (int b = 0; b < d; ++b) {
            gza += gz[a * d + b] * A[b];
            gzb += gz[a * d + b] * B[b];
          }
          CHECK(gza == doctest::Approx(u[a]).scale(1.0).epsilon(1e-9));
          CHECK(gzb == doctest::Approx(v[a]).scale(1.0).epsilon(1e-9));
        }

        // symmetry, positivity, invariance under J
        Mat<double> gm(d, d);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) gm(a, b) = gz[a * d + b];
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b)
            CHECK(gm(a, b) == doctest::Approx(gm(b, a)).scale(1.0).epsilon(1e-10));
        CHECK_NOTHROW(cholesky(gm));
        double jinv_res = 0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            double s = 0;
            for (int c = 0; c < d; ++c)
              for (int e = 0; e < d; ++e)
                s += J[c * d + a] * gz[c * d + e] * J[e * d + b];
            jinv_res = std::max(jinv_res, std::fabs(s - gz[a * d + b]));
          }
        CHECK(jinv_res < 1e-9);

        // G² = H² = −Id + A⊗u + B⊗v
        std::vector<double> minus_proj(static_cast<size_t>(d) * d, 0.0);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b)
            minus_proj[a * d + b] =
                (a == b ? -1.0 : 0.0) + A[a] * u[b] + B[a] * v[b];
        CHECK(endo_product_residual(G, G, minus_proj, d) < 1e-9);
        CHECK(endo_product_residual(H, H, minus_proj, d) < 1e-9);

        // H = J∘G and GJ = −JG
        std::vector<double> jg(static_cast<size_t>(d) * d, 0.0);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            double s = 0;
            for (int c = 0; c < d; ++c) s += J[a * d + c] * G[c * d + b];
            jg[a * d + b] = s;
          }
        double hres = 0;
        for (size_t i = 0; i < jg.size(); ++i)
          hres = std::max(hres, std::fabs(jg[i] - H[i]));
        CHECK(hres < 1e-10);
        std::vector<double> minus_gj(static_cast<size_t>(d) * d, 0.0);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            double s = 0;
            for (int c = 0; c < d; ++c) s += G[a * d + c] * J[c * d + b];
            minus_gj[a * d + b] = -s;
          }
        double anti = 0;
        for (size_t i = 0; i < jg.size(); ++i)
          anti = std::max(anti, std::fabs(jg[i] - minus_gj[i]));
        CHECK(anti < 1e-10);

        // compatibility: g_Z(G·, G·) = g_Z − u⊗u − v⊗v
        double compat = 0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            double s = 0;
            for (int c = 0; c < d; ++c)
              for (int e = 0; e < d; ++e)
                s += G[c * d + a] * gz[c * d + e] * G[e * d + b];
            const double want = gz[a * d + b] - u[a] * u[b] - v[a] * v[b];
            compat = std::max(compat, std::fabs(s - want));
          }
        CHECK(compat < 1e-9);

        // two-dimensional kernel with a clean spectral gap; the zero
        // eigenvalues of −Ĝ² carry O(ε‖Ĝ‖²) noise, so their square roots
        // are only clean to its square root
        const auto sv = vertical_singvals(*fr);
        CHECK(sv[0] < 1e-6);
        CHECK(sv[1] < 1e-6);
        CHECK(sv[2] > 1e-2);

        CHECK(omega_two_route_residual(*geo, chart, x) < 1e-8);
      }
    }
  }
}

TEST_CASE("associated metric derivatives match finite differences") {
  for (const auto& name : {"flat3", "cp3"}) {
    auto geo = std::make_shared<BaseGeometry>(model_by_name(name));
    CAPTURE(name);
    const int d = 6;
    std::vector<double> x = {0.13, -0.21, 0.32, 0.05, -0.17, 0.24};
    const TensorField gzf = geo->metric();
    const TensorValue at = gzf.eval(0, seed_jets(x));
    const double step = 1e-5;
    for (int k = 0; k < d; ++k) {
      std::vector<double> xp = x, xm = x;
      xp[k] += step;
      xm[k] -= step;
      const TensorValue tp = gzf.at_point(0, xp), tm = gzf.at_point(0, xm);
      const TensorValue t0 = gzf.at_point(0, x);
      for (int i = 0; i < d * d; ++i) {
        const double fd = (tp.c[i].value() - tm.c[i].value()) / (2 * step);
        CHECK(at.c[i].d(k) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
        const double fd2 = (tp.c[i].value() - 2 * t0.c[i].value() + tm.c[i].value()) /
                           (step * step);
        CHECK(at.c[i].d2(k, k) == doctest::Approx(fd2).epsilon(1e-3).scale(1.0));
      }
    }
  }
}

TEST_CASE("associated metric is chart independent") {
  for (const auto& name : {"cp3", "cotangent"}) {
    auto md = model_by_name(name);
    auto geo = std::make_shared<BaseGeometry>(md);
    CAPTURE(name);
    const int d = md->d;
    for (const Transition& tr : md->transitions) {
      Rng rng(577 + 11 * tr.a + tr.b);
      for (int trial = 0; trial < 4; ++trial) {
        const std::vector<double> x = tr.box_a.sample(rng);
        const std::vector<Jet> img = tr.fwd(seed_jets(x));
        auto fra = geo->frame(tr.a, x);
        auto frb = geo->frame(tr.b, jet_values(img));
        const TensorValue pulled =
            pullback_value(wrap(frb->gz, d, 0, 2), img, d);
        double worst = 0;
        for (int i = 0; i < d * d; ++i)
          worst = std::max(worst,
                           std::fabs(pulled.c[i].value() - fra->gz[i].value()));
        CHECK(worst < 1e-8);
      }
    }
  }
}

TEST_CASE("transition gauge rotates the frame and shifts sigma") {
  for (const auto& name : {"cp3", "cotangent"}) {
    auto md = model_by_name(name);
    auto geo = std::make_shared<BaseGeometry>(md);
    CAPTURE(name);
    const int d = md->d;
    for (const Transition& tr : md->transitions) {
      Rng rng(733 + 17 * tr.a + tr.b);
      for (int trial = 0; trial < 4; ++trial) {
        const std::vector<double> x = tr.box_a.sample(rng);
        const std::vector<Jet> xj = seed_jets(x);
        const std::vector<Jet> img = tr.fwd(xj);
        auto fra = geo->frame(tr.a, x);
        auto frb = geo->frame(tr.b, jet_values(img));
        const Jet psi = gauge(*md, tr, xj);
        const double c = std::cos(psi.value()), s = std::sin(psi.value());

        const TensorValue ub = pullback_value(wrap(frb->u, d, 0, 1), img, d);
        const TensorValue vb = pullback_value(wrap(frb->v, d, 0, 1), img, d);
        for (int a = 0; a < d; ++a) {
          const double urot = c * ub.c[a].value() + s * vb.c[a].value();
          const double vrot = c * vb.c[a].value() - s * ub.c[a].value();
          CHECK(fra->u[a].value() ==
                doctest::Approx(urot).scale(1.0).epsilon(1e-9));
          CHECK(fra->v[a].value() ==
                doctest::Approx(vrot).scale(1.0).epsilon(1e-9));
        }

        const TensorValue sb = pullback_value(wrap(frb->sigma, d, 0, 1), img, d);
        for (int a = 0; a < d; ++a)
          CHECK(fra->sigma[a].value() ==
                doctest::Approx(sb.c[a].value() + psi.d(a))
                    .scale(1.0)
                    .epsilon(1e-9));

        const TensorValue gb = pullback_value(wrap(frb->G, d, 1, 1), img, d);
        const TensorValue hb = pullback_value(wrap(frb->H, d, 1, 1), img, d);
        double worst = 0;
        for (int i = 0; i < d * d; ++i) {
          const double grot = c * gb.c[i].value() - s * hb.c[i].value();
          const double hrot = s * gb.c[i].value() + c * hb.c[i].value();
          worst = std::max({worst, std::fabs(grot - fra->G[i].value()),
                            std::fabs(hrot - fra->H[i].value())});
        }
        CHECK(worst < 1e-8);
      }
    }
  }
}

TEST_CASE("vertical plane is transition invariant") {
  for (const auto& name : {"cp3", "cotangent"}) {
    auto md = model_by_name(name);
    auto geo = std::make_shared<BaseGeometry>(md);
    CAPTURE(name);
    for (const Transition& tr : md->transitions) {
      Rng rng(811 + 5 * tr.a + tr.b);
      for (int trial = 0; trial < 3; ++trial) {
        const std::vector<double> x = tr.box_a.sample(rng);
        const auto angles = vertical_principal_angles(*geo, tr, x);
        for (const double a : angles) CHECK(a < 1e-7);
      }
    }
  }
}

TEST_CASE("degenerate vertical distribution is reported") {
  auto md = make_collapsed(1.0);
  const std::vector<Jet> xj = seed_jets(std::vector<double>(6, 0.1));
  CHECK_THROWS_AS(analyze(*md, 0, xj), DegenerateVerticalDistribution);
}

TEST_CASE("non-positive weight is reported") {
  auto md = make_collapsed(-2.0);
  const std::vector<Jet> xj = seed_jets(std::vector<double>(6, 0.1));
  CHECK_THROWS_AS(analyze(*md, 0, xj), InvalidWeight);
}

TEST_CASE("frame analysis is memoized per point") {
  auto geo = std::make_shared<BaseGeometry>(build_flat_model(1));
  const std::vector<double> x = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  auto f1 = geo->frame(0, x);
  auto f2 = geo->frame(0, x);
  CHECK(f1.get() == f2.get());
  const std::vector<double> y = {0.1, 0.2, 0.3, 0.4, 0.5, 0.7};
  auto f3 = geo->frame(0, y);
  CHECK(f3.get() != f1.get());
}

TEST_CASE("frame fields compose through arbitrary incoming jets") {
  auto geo = std::make_shared<BaseGeometry>(build_projective_twistor());
  // restrict u along a curve s ↦ x + s e_2 and compare the s-derivative of the
  // composite with the directional derivative of the canonical evaluation
  const std::vector<double> x = {0.13, -0.21, 0.32, 0.05, -0.17, 0.24};
  const TensorField uf = geo->u_form();
  const TensorValue base = uf.eval(0, seed_jets(x));
  std::vector<Jet> curve(6);
  for (int a = 0; a < 6; ++a) {
    curve[a] = Jet(x[a], 1);
    if (a == 2) curve[a].gref(0) = 1.0;
  }
  const TensorValue along = uf.eval(0, curve);
  for (int a = 0; a < 6; ++a) {
    CHECK(along.c[a].value() == doctest::Approx(base.c[a].value()).scale(1.0));
    CHECK(along.c[a].d(0) ==
          doctest::Approx(base.c[a].d(2)).scale(1.0).epsilon(1e-10));
  }
}
