#pragma once

#include <span>
#include <vector>

#include "contact3/jet.hpp"

namespace contact3 {

// Complex coordinate k occupies real slots (2k, 2k+1), z_k = x_k + i y_k.
inline CJet cx(std::span<const Jet> x, int k) { return CJet{x[2 * k], x[2 * k + 1]}; }

// dz^k(∂_a): 1 on the x-slot, i on the y-slot.
inline CJet dz_on_axis(int k, int a, const Jet& one) {
  CJet r{Jet(0.0, 0), Jet(0.0, 0)};
  if (a == 2 * k) r.re = one;
  if (a == 2 * k + 1) r.im = one;
  return r;
}

// Real components of the 2-form Σ_{k<l} E_{kl} dz^k ∧ dz^l (E antisymmetric,
// given as a full m×m array): Ω_{ab} = Σ_{k,l} E_{kl} dz^k(∂_a) dz^l(∂_b).
// Writes the real and imaginary parts into d×d arrays (d = 2m).
inline void complex_twoform_to_real(int m, std::span<const CJet> E,
                                    std::vector<Jet>& re_out,
                                    std::vector<Jet>& im_out) {
  const int d = 2 * m;
  re_out.assign(static_cast<size_t>(d) * d, Jet(0.0, 0));
  im_out.assign(static_cast<size_t>(d) * d, Jet(0.0, 0));
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      const CJet& e = E[k * m + l];
      // (a,b) = (x_k,x_l): e ; (x_k,y_l): i e ; (y_k,x_l): i e ; (y_k,y_l): -e
      re_out[(2 * k) * d + 2 * l] = re_out[(2 * k) * d + 2 * l] + e.re;
      im_out[(2 * k) * d + 2 * l] = im_out[(2 * k) * d + 2 * l] + e.im;
      re_out[(2 * k) * d + 2 * l + 1] = re_out[(2 * k) * d + 2 * l + 1] - e.im;
      im_out[(2 * k) * d + 2 * l + 1] = im_out[(2 * k) * d + 2 * l + 1] + e.re;
      re_out[(2 * k + 1) * d + 2 * l] = re_out[(2 * k + 1) * d + 2 * l] - e.im;
      im_out[(2 * k + 1) * d + 2 * l] = im_out[(2 * k + 1) * d + 2 * l] + e.re;
      re_out[(2 * k + 1) * d + 2 * l + 1] = re_out[(2 * k + 1) * d + 2 * l + 1] - e.re;
      im_out[(2 * k + 1) * d + 2 * l + 1] = im_out[(2 * k + 1) * d + 2 * l + 1] - e.im;
    }
}

// Real components of the 1-form Σ_k c_k dz^k.
inline void complex_oneform_to_real(int m, std::span<const CJet> c,
                                    std::vector<Jet>& re_out,
                                    std::vector<Jet>& im_out) {
  const int d = 2 * m;
  re_out.assign(d, Jet(0.0, 0));
  im_out.assign(d, Jet(0.0, 0));
  for (int k = 0; k < m; ++k) {
    re_out[2 * k] = c[k].re;
    im_out[2 * k] = c[k].im;
    re_out[2 * k + 1] = -c[k].im;
    im_out[2 * k + 1] = c[k].re;
  }
}

// Riemannian metric of a positive hermitian form: g = 2 Re Σ β_{k l̄} dz^k ⊗ dz̄^l.
inline std::vector<Jet> hermitian_to_real_metric(int m, std::span<const CJet> beta) {
  const int d = 2 * m;
  std::vector<Jet> g(static_cast<size_t>(d) * d, Jet(0.0, 0));
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      const CJet& b = beta[k * m + l];
      g[(2 * k) * d + 2 * l] = g[(2 * k) * d + 2 * l] + b.re * 2.0;
      g[(2 * k) * d + 2 * l + 1] = g[(2 * k) * d + 2 * l + 1] + b.im * 2.0;
      g[(2 * k + 1) * d + 2 * l] = g[(2 * k + 1) * d + 2 * l] - b.im * 2.0;
      g[(2 * k + 1) * d + 2 * l + 1] = g[(2 * k + 1) * d + 2 * l + 1] + b.re * 2.0;
    }
  return g;
}

// The standard complex structure in the interleaved real coordinates:
// J ∂_{x_k} = ∂_{y_k}, J ∂_{y_k} = −∂_{x_k}.
inline double std_complex_structure(int a, int b) {
  if (a == b + 1 && b % 2 == 0) return 1.0;
  if (b == a + 1 && a % 2 == 0) return -1.0;
  return 0.0;
}

}  // namespace contact3
