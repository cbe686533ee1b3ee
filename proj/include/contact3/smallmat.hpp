#pragma once

// Dense linear algebra on small matrices (dim <= kMaxDim), templated over the
// scalar so the same factorizations run on plain doubles and on jets.  Pivot
// selection always compares values only, so a factorization applied to jets
// stays a smooth function of the inputs near the sample point.

#include <stdexcept>
#include <type_traits>
#include <vector>

#include "contact3/errors.hpp"
#include "contact3/jet.hpp"

namespace contact3 {

inline double scalar_value(double x) { return x; }
inline double scalar_value(const Jet& x) { return x.value(); }

inline double sqrt_scalar(double x) { return std::sqrt(x); }
inline Jet sqrt_scalar(const Jet& x) { return sqrt(x); }

template <class S>
class Mat {
public:
  Mat() : r_(0), c_(0) {}
  Mat(int r, int c) : r_(r), c_(c), a_(static_cast<size_t>(r) * c) {}
  static Mat identity(int n, int jetdim = 0) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = one(jetdim);
    return m;
  }
  int rows() const { return r_; }
  int cols() const { return c_; }
  S& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  const S& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

  Mat operator+(const Mat& o) const {
    Mat m(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + o.a_[k];
    return m;
  }
  Mat operator-(const Mat& o) const {
    Mat m(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] - o.a_[k];
    return m;
  }
  Mat operator*(const Mat& o) const {
    Mat m(r_, o.c_);
    for (int i = 0; i < r_; ++i)
      for (int k = 0; k < c_; ++k) {
        const S& aik = (*this)(i, k);
        for (int j = 0; j < o.c_; ++j) m(i, j) += aik * o(k, j);
      }
    return m;
  }
  Mat operator*(double s) const {
    Mat m(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] * s;
    return m;
  }
  Mat transposed() const {
    Mat m(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }
  std::vector<S> apply(const std::vector<S>& x) const {
    std::vector<S> y(r_);
    for (int i = 0; i < r_; ++i) {
      S acc{};
      for (int j = 0; j < c_; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
    return y;
  }

private:
  static S one(int jetdim) {
    if constexpr (std::is_same_v<S, double>)
      return 1.0;
    else
      return S(1.0, jetdim);
  }
  int r_, c_;
  std::vector<S> a_;
};

// LU with partial pivoting.  Throws SingularMetric when the pivot vanishes.
template <class S>
struct LU {
  explicit LU(Mat<S> m) : lu_(std::move(m)), piv_(lu_.rows()) {
    const int n = lu_.rows();
    for (int i = 0; i < n; ++i) piv_[i] = i;
    for (int k = 0; k < n; ++k) {
      int p = k;
      double best = std::abs(scalar_value(lu_(k, k)));
      for (int i = k + 1; i < n; ++i) {
        const double v = std::abs(scalar_value(lu_(i, k)));
        if (v > best) { best = v; p = i; }
      }
      if (!(best > 1e-300)) throw SingularMetric("LU pivot vanished");
      if (p != k) {
        std::swap(piv_[p], piv_[k]);
        for (int j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(k, j));
        sign_ = -sign_;
      }
      for (int i = k + 1; i < n; ++i) {
        lu_(i, k) = lu_(i, k) / lu_(k, k);
        for (int j = k + 1; j < n; ++j) lu_(i, j) -= lu_(i, k) * lu_(k, j);
      }
    }
  }

  std::vector<S> solve(const std::vector<S>& b) const {
    const int n = lu_.rows();
    std::vector<S> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[piv_[i]];
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
      x[i] = x[i] / lu_(i, i);
    }
    return x;
  }

  Mat<S> solve(const Mat<S>& B) const {
    const int n = lu_.rows();
    Mat<S> X(n, B.cols());
    std::vector<S> col(n);
    for (int j = 0; j < B.cols(); ++j) {
      for (int i = 0; i < n; ++i) col[i] = B(i, j);
      auto x = solve(col);
      for (int i = 0; i < n; ++i) X(i, j) = x[i];
    }
    return X;
  }

  Mat<S> inverse() const {
    const int n = lu_.rows();
    Mat<S> I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = I(i, i) + 1.0;
    return solve(I);
  }

  S det() const {
    const int n = lu_.rows();
    S d = lu_(0, 0);
    for (int i = 1; i < n; ++i) d = d * lu_(i, i);
    return d * sign_;
  }

  Mat<S> lu_;
  std::vector<int> piv_;
  double sign_ = 1.0;
};

// Cholesky of a symmetric positive definite matrix, lower factor.
template <class S>
Mat<S> cholesky(const Mat<S>& A) {
  const int n = A.rows();
  Mat<S> L(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      S s = A(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      if (i == j) {
        if (!(scalar_value(s) > 0.0)) throw SingularMetric("Cholesky: not positive definite");
        L(i, i) = sqrt_scalar(s);
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }
  return L;
}

// Jacobi eigensolver for symmetric double matrices; returns eigenvalues and
// the orthogonal basis as columns of V.
inline void jacobi_eigen(Mat<double> A, std::vector<double>& w, Mat<double>& V) {
  const int n = A.rows();
  V = Mat<double>::identity(n);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
  }
  w.resize(n);
  for (int i = 0; i < n; ++i) w[i] = A(i, i);
}

// Principal square root of a symmetric positive definite jet matrix.
// Value part by spectral decomposition; first and second derivative channels
// solve the Lyapunov equations  dX X + X dX = dM  in the eigenbasis
// (Daleckii-Krein), which is basis independent and safe across eigenvalue
// crossings since sqrt(l_a) + sqrt(l_b) > 0.
inline Mat<Jet> sqrt_spd(const Mat<Jet>& M, int jetdim) {
  const int n = M.rows();
  Mat<double> M0(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M0(i, j) = M(i, j).value();

  std::vector<double> w;
  Mat<double> V;
  jacobi_eigen(M0, w, V);
  std::vector<double> sw(n);
  for (int i = 0; i < n; ++i) {
    if (!(w[i] > 0.0)) throw SingularMetric("sqrt_spd: matrix not positive definite");
    sw[i] = std::sqrt(w[i]);
  }

  // rotate a double matrix into the eigenbasis, divide by sqrt-sums, rotate back
  auto lyapunov = [&](const Mat<double>& R) {
    Mat<double> T = V.transposed() * R * V;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) T(a, b) /= (sw[a] + sw[b]);
    return V * T * V.transposed();
  };

  Mat<double> X0 = V;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X0(i, j) = V(i, j) * sw[j];
  X0 = X0 * V.transposed();  // V diag(sw) V^T

  std::vector<Mat<double>> dX(jetdim);
  for (int k = 0; k < jetdim; ++k) {
    Mat<double> dM(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dM(i, j) = M(i, j).d(k);
    dX[k] = lyapunov(dM);
  }

  Mat<Jet> X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet e(X0(i, j), jetdim);
      for (int k = 0; k < jetdim; ++k) e.gref(k) = dX[k](i, j);
      X(i, j) = e;
    }

  for (int k = 0; k < jetdim; ++k)
    for (int l = 0; l <= k; ++l) {
      Mat<double> R(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = M(i, j).d2(k, l);
          for (int m = 0; m < n; ++m)
            s -= dX[k](i, m) * dX[l](m, j) + dX[l](i, m) * dX[k](m, j);
          R(i, j) = s;
        }
      Mat<double> H = lyapunov(R);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) X(i, j).href(k, l) = H(i, j);
    }
  return X;
}

}  // namespace contact3
