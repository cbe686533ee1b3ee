#pragma once

// Second-order forward-mode jets: value, gradient and Hessian of a scalar
// quantity with respect to up to kMaxDim seed variables.  All derivative
// propagation is exact (truncated Taylor arithmetic), no finite differences.

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>

namespace contact3 {

inline constexpr int kMaxDim = 12;
inline constexpr int kMaxHess = kMaxDim * (kMaxDim + 1) / 2;

// packed lower-triangular index, requires k >= l
inline constexpr int hidx(int k, int l) { return k * (k + 1) / 2 + l; }

class Jet {
public:
  Jet() = default;
  explicit Jet(double v, int dim = 0) : v_(v), n_(dim) {}

  static Jet constant(double v, int dim = 0) { return Jet(v, dim); }

  static Jet variable(double v, int slot, int dim) {
    assert(slot >= 0 && slot < dim && dim <= kMaxDim);
    Jet j(v, dim);
    j.g_[slot] = 1.0;
    return j;
  }

  double value() const { return v_; }
  int dim() const { return n_; }
  double d(int k) const { return g_[k]; }
  double d2(int k, int l) const { return k >= l ? h_[hidx(k, l)] : h_[hidx(l, k)]; }

  double& gref(int k) { return g_[k]; }
  double& href(int k, int l) { return k >= l ? h_[hidx(k, l)] : h_[hidx(l, k)]; }

  Jet operator-() const {
    Jet r(*this);
    r.v_ = -r.v_;
    for (int k = 0; k < r.n_; ++k) r.g_[k] = -r.g_[k];
    const int m = r.n_ * (r.n_ + 1) / 2;
    for (int k = 0; k < m; ++k) r.h_[k] = -r.h_[k];
    return r;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r = widen(a, b);
    r.v_ = a.v_ + b.v_;
    const int n = r.n_, m = n * (n + 1) / 2;
    for (int k = 0; k < n; ++k) r.g_[k] = a.g_[k] + b.g_[k];
    for (int k = 0; k < m; ++k) r.h_[k] = a.h_[k] + b.h_[k];
    return r;
  }

  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r = widen(a, b);
    r.v_ = a.v_ - b.v_;
    const int n = r.n_, m = n * (n + 1) / 2;
    for (int k = 0; k < n; ++k) r.g_[k] = a.g_[k] - b.g_[k];
    for (int k = 0; k < m; ++k) r.h_[k] = a.h_[k] - b.h_[k];
    return r;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r = widen(a, b);
    const int n = r.n_;
    r.v_ = a.v_ * b.v_;
    for (int k = 0; k < n; ++k) r.g_[k] = a.g_[k] * b.v_ + a.v_ * b.g_[k];
    for (int k = 0; k < n; ++k)
      for (int l = 0; l <= k; ++l)
        r.h_[hidx(k, l)] = a.h_[hidx(k, l)] * b.v_ + a.v_ * b.h_[hidx(k, l)] +
                           a.g_[k] * b.g_[l] + a.g_[l] * b.g_[k];
    return r;
  }

  friend Jet operator+(const Jet& a, double c) { Jet r(a); r.v_ += c; return r; }
  friend Jet operator+(double c, const Jet& a) { return a + c; }
  friend Jet operator-(const Jet& a, double c) { Jet r(a); r.v_ -= c; return r; }
  friend Jet operator-(double c, const Jet& a) { return (-a) + c; }
  friend Jet operator*(const Jet& a, double c) {
    Jet r(a);
    r.v_ *= c;
    for (int k = 0; k < r.n_; ++k) r.g_[k] *= c;
    const int m = r.n_ * (r.n_ + 1) / 2;
    for (int k = 0; k < m; ++k) r.h_[k] *= c;
    return r;
  }
  friend Jet operator*(double c, const Jet& a) { return a * c; }
  friend Jet operator/(const Jet& a, double c) { return a * (1.0 / c); }
  friend Jet operator/(double c, const Jet& b) { return Jet(c, 0) / b; }

  friend Jet operator/(const Jet& a, const Jet& b) {
    const double iv = 1.0 / b.v_;
    return a * chain(b, iv, -iv * iv, 2.0 * iv * iv * iv);
  }

  Jet& operator+=(const Jet& o) { *this = *this + o; return *this; }
  Jet& operator-=(const Jet& o) { *this = *this - o; return *this; }
  Jet& operator*=(const Jet& o) { *this = *this * o; return *this; }

  // f(a) with f0 = f(a.v), f1 = f'(a.v), f2 = f''(a.v)
  static Jet chain(const Jet& a, double f0, double f1, double f2) {
    Jet r(f0, a.n_);
    const int n = a.n_;
    for (int k = 0; k < n; ++k) r.g_[k] = f1 * a.g_[k];
    for (int k = 0; k < n; ++k)
      for (int l = 0; l <= k; ++l)
        r.h_[hidx(k, l)] = f1 * a.h_[hidx(k, l)] + f2 * a.g_[k] * a.g_[l];
    return r;
  }

  // F(a,b) with given first and second partials at (a.v, b.v)
  static Jet chain2(const Jet& a, const Jet& b, double F, double Fa, double Fb,
                    double Faa, double Fab, double Fbb) {
    Jet r = widen(a, b);
    const int n = r.n_;
    r.v_ = F;
    for (int k = 0; k < n; ++k) r.g_[k] = Fa * a.g_[k] + Fb * b.g_[k];
    for (int k = 0; k < n; ++k)
      for (int l = 0; l <= k; ++l)
        r.h_[hidx(k, l)] = Fa * a.h_[hidx(k, l)] + Fb * b.h_[hidx(k, l)] +
                           Faa * a.g_[k] * a.g_[l] + Fbb * b.g_[k] * b.g_[l] +
                           Fab * (a.g_[k] * b.g_[l] + a.g_[l] * b.g_[k]);
    return r;
  }

private:
  static Jet widen(const Jet& a, const Jet& b) {
    assert(a.n_ == b.n_ || a.n_ == 0 || b.n_ == 0);
    Jet r;
    r.n_ = a.n_ > b.n_ ? a.n_ : b.n_;
    return r;
  }

  double v_ = 0.0;
  int n_ = 0;
  std::array<double, kMaxDim> g_{};
  std::array<double, kMaxHess> h_{};
};

inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.value());
  return Jet::chain(a, s, 0.5 / s, -0.25 / (s * a.value()));
}
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return Jet::chain(a, e, e, e);
}
inline Jet log(const Jet& a) {
  const double iv = 1.0 / a.value();
  return Jet::chain(a, std::log(a.value()), iv, -iv * iv);
}
inline Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet::chain(a, s, c, -s);
}
inline Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet::chain(a, c, -s, -c);
}

// atan2(y, x), smooth away from the branch cut on the negative x-axis
inline Jet atan2(const Jet& y, const Jet& x) {
  const double xv = x.value(), yv = y.value();
  const double r2 = xv * xv + yv * yv;
  const double r4 = r2 * r2;
  return Jet::chain2(y, x, std::atan2(yv, xv), xv / r2, -yv / r2,
                     -2.0 * xv * yv / r4, (yv * yv - xv * xv) / r4,
                     2.0 * xv * yv / r4);
}

inline Jet pow_int(const Jet& a, int p) {
  Jet r = Jet::constant(1.0, a.dim());
  Jet base = a;
  int e = p < 0 ? -p : p;
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  if (p < 0) return 1.0 / r;
  return r;
}

// complex jet: re + i*im
struct CJet {
  Jet re, im;

  CJet() = default;
  CJet(const Jet& r) : re(r) {}
  CJet(const Jet& r, const Jet& i) : re(r), im(i) {}
  static CJet constant(double r, double i, int dim) {
    return CJet(Jet::constant(r, dim), Jet::constant(i, dim));
  }

  CJet operator-() const { return CJet(-re, -im); }
  friend CJet operator+(const CJet& a, const CJet& b) { return {a.re + b.re, a.im + b.im}; }
  friend CJet operator-(const CJet& a, const CJet& b) { return {a.re - b.re, a.im - b.im}; }
  friend CJet operator*(const CJet& a, const CJet& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend CJet operator*(const Jet& a, const CJet& b) { return {a * b.re, a * b.im}; }
  friend CJet operator*(const CJet& a, const Jet& b) { return {a.re * b, a.im * b}; }
  friend CJet operator*(double c, const CJet& a) { return {c * a.re, c * a.im}; }
  friend CJet operator/(const CJet& a, const CJet& b) {
    Jet inv = 1.0 / (b.re * b.re + b.im * b.im);
    return {(a.re * b.re + a.im * b.im) * inv, (a.im * b.re - a.re * b.im) * inv};
  }
  CJet& operator+=(const CJet& o) { *this = *this + o; return *this; }
  CJet& operator-=(const CJet& o) { *this = *this - o; return *this; }
};

inline CJet conj(const CJet& a) { return {a.re, -a.im}; }
inline Jet abs2(const CJet& a) { return a.re * a.re + a.im * a.im; }
inline Jet abs(const CJet& a) { return sqrt(abs2(a)); }

}  // namespace contact3
