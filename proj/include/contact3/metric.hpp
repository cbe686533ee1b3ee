#pragma once

#include "contact3/tensor.hpp"

namespace contact3 {

// Γ^a_{bc} of a metric value given against canonical jets; (1,2), symmetric in
// the lower pair, one order below the metric.
TensorValue christoffel_at(const TensorValue& g);

TensorField levi_civita(const TensorField& g);

// Value-level curvature data from an order-2 metric value at a point.
struct CurvatureAt {
  int dim = 0;
  std::vector<double> riemann;  // R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}
  std::vector<double> ricci;    // Ric_{bd} = R^a_{bad}
  double scalar = 0.0;

  double riem(int a, int b, int c, int d) const {
    return riemann[((a * dim + b) * dim + c) * dim + d];
  }
  double ric(int b, int d) const { return ricci[b * dim + d]; }
};
CurvatureAt curvature_at(const TensorValue& g);

// (∇x)^a_b = ∂_b x^a + Γ^a_{bc} x^c.
TensorField covariant_derivative(const TensorField& g, const TensorField& x);

// max |∇_c g_{ab}| at a point (should vanish identically).
double nabla_g_residual(const TensorValue& g);

// max |g(∇_a x, ∂_b) + g(∇_b x, ∂_a)| at a point.
double killing_residual(const TensorValue& g, const TensorValue& x);

}  // namespace contact3
