#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "contact3/errors.hpp"
#include "contact3/jet.hpp"
#include "contact3/manifold.hpp"

namespace contact3 {

// Dense tensor of jets at a point.  Contravariant slots first, then covariant;
// row-major over the combined slot index.  `ord` is the number of derivative
// channels that are trustworthy (2 = value+gradient+hessian, 1 = no hessian,
// 0 = value only); channels beyond `ord` are kept identically zero.
struct TensorValue {
  int dim = 0, up = 0, low = 0, ord = 0;
  std::vector<Jet> c;

  static TensorValue zeros(int dim, int up, int low, int ord);

  int slots() const { return up + low; }

  Jet& at() { return c[0]; }
  const Jet& at() const { return c[0]; }
  Jet& at(int a) { return c[a]; }
  const Jet& at(int a) const { return c[a]; }
  Jet& at(int a, int b) { return c[a * dim + b]; }
  const Jet& at(int a, int b) const { return c[a * dim + b]; }
  Jet& at(int a, int b, int d) { return c[(a * dim + b) * dim + d]; }
  const Jet& at(int a, int b, int d) const { return c[(a * dim + b) * dim + d]; }

  double max_abs_value() const;
  void clamp_order(int new_ord);  // zeros channels above new_ord
};

using Evaluator = std::function<TensorValue(int chart, std::span<const Jet>)>;

class TensorField {
 public:
  TensorField() = default;
  TensorField(int up, int low, int ord, Evaluator ev);

  TensorValue eval(int chart, std::span<const Jet> x) const;
  TensorValue at_point(int chart, std::span<const double> x) const;

  int up() const { return up_; }
  int low() const { return low_; }
  int ord() const { return ord_; }
  bool valid() const { return static_cast<bool>(ev_); }

 private:
  int up_ = 0, low_ = 0, ord_ = 0;
  std::shared_ptr<const Evaluator> ev_;
};

// Re-expresses a tensor computed against canonical coordinate jets in terms of
// arbitrary incoming jets of the same coordinates.
TensorValue compose_components(const TensorValue& t, std::span<const Jet> x);

// Wraps `assemble` (which always sees canonical jets) into a field usable with
// arbitrary incoming jets.  This is the one pattern every derivative-taking
// construction goes through.
TensorField derived_field(
    int up, int low, int ord,
    std::function<TensorValue(int chart, std::span<const Jet>)> assemble);

// Pointwise algebra (shapes must match; ord = min of operand ords).
TensorField add(const TensorField& a, const TensorField& b);
TensorField sub(const TensorField& a, const TensorField& b);
TensorField scale(const TensorField& a, double s);
TensorValue add_values(const TensorValue& a, const TensorValue& b);
TensorValue sub_values(const TensorValue& a, const TensorValue& b);
TensorValue scale_value(const TensorValue& a, double s);

// (1,1) endomorphism algebra and pairings.
TensorValue endo_compose(const TensorValue& p, const TensorValue& q);
TensorValue endo_apply(const TensorValue& p, const TensorValue& x);
TensorValue outer_endo(const TensorValue& xi, const TensorValue& eta);  // xi^a eta_b
TensorValue oneform_endo(const TensorValue& eta, const TensorValue& p);  // (eta ∘ p)_b
TensorValue pair_form_vector(const TensorValue& eta, const TensorValue& x);  // scalar
TensorValue metric_apply(const TensorValue& g, const TensorValue& x);  // g(x,·)
TensorValue metric_pair(const TensorValue& g, const TensorValue& x, const TensorValue& y);
TensorValue form_from_endo(const TensorValue& g, const TensorValue& p);  // g(p·, ·)
TensorValue interior_product(const TensorValue& x, const TensorValue& w);  // ι_x w, w 2-form

// Antisymmetrized product of forms with total degree <= 4 (determinant
// convention: (a∧b)(X,Y) = a(X)b(Y) − a(Y)b(X)).
TensorValue wedge(const TensorValue& a, const TensorValue& b);

// d of a k-form field (k <= 3); result ord = input ord − 1.
TensorField exterior_derivative(const TensorField& w);

TensorField lie_bracket(const TensorField& x, const TensorField& y);

// Nijenhuis torsion of a (1,1) field:
//   N^a_{bc} = p^d_b ∂_d p^a_c − p^d_c ∂_d p^a_b + p^a_d(∂_c p^d_b − ∂_b p^d_c).
TensorField nijenhuis_endo(const TensorField& p);
// Same components, checked against p² = −Id before use.
TensorField nijenhuis_complex(const TensorField& j);

// Pullback through a chart map of the source manifold into the target:
// contravariant slots via the inverse Jacobian, covariant via the Jacobian.
// `mp` maps source coords (as jets) to target coords.
struct FieldMap {
  int src_chart = 0, dst_chart = 0;
  CoordMap map;
};
TensorValue pullback_value(const TensorValue& t_at_image,
                           std::span<const Jet> image_jets, int src_dim);
TensorField pullback(const FieldMap& mp, const TensorField& t);

// Evaluates a k-form value on k vector values (all value-level).
double form_on_vectors(const TensorValue& w, std::span<const std::vector<double>> v);

// Lazy wedge of low-degree factors, evaluated on a subset of coordinate
// directions without materializing the full product.  Factors are value-level
// dense component arrays of degree-1 or degree-2 forms.
template <class S>
struct WedgeFactor {
  int degree = 1;               // 1 or 2
  std::vector<S> comp;          // dim (deg 1) or dim*dim antisymmetric (deg 2)
};
double wedge_eval(std::span<const WedgeFactor<double>> fs, int dim,
                  std::span<const int> axes);
std::complex<double> wedge_eval(std::span<const WedgeFactor<std::complex<double>>> fs,
                                int dim, std::span<const int> axes);

// Max |coefficient| of the wedge over all increasing axis subsets of the right
// size (the full coordinate top-form when sizes match).
double wedge_max_coeff(std::span<const WedgeFactor<double>> fs, int dim);
double wedge_max_coeff(std::span<const WedgeFactor<std::complex<double>>> fs, int dim);

}  // namespace contact3
