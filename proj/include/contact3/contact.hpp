#pragma once

#include <memory>
#include <span>
#include <vector>

#include "contact3/models.hpp"
#include "contact3/tensor.hpp"
#include "contact3/util.hpp"

namespace contact3 {

// Pointwise analysis of the atlas data: the normalized frame, the associated
// metric, and every intermediate, all as canonical jets in chart coordinates.
struct BaseFrame {
  int m = 0, d = 0;
  Jet h, sqh;
  std::vector<CJet> theta, dtheta, p;  // chart data (p = ∂ log h)
  std::vector<CJet> omega;  // m×m: Ω = dθ/√h − ∂log h ∧ ϖ, ϖ = θ/√h
  std::vector<Jet> u, v;    // ϖ = u − i v
  std::vector<Jet> sigma;   // Im ∂ log h
  std::vector<Jet> ghat, hhat;  // d×d real and imaginary parts of Ω
  std::vector<Jet> gref;        // d×d
  std::vector<Jet> A, B;  // vertical frame: u(A) = v(B) = 1, u(B) = v(A) = 0
  std::vector<Jet> g1, gz;      // auxiliary and associated metrics, d×d
  std::vector<Jet> G, H;        // g_Z⁻¹ Ĝ and g_Z⁻¹ Ĥ, d×d endos

  Jet& gz_at(int a, int b) { return gz[a * d + b]; }
  const Jet& gz_at(int a, int b) const { return gz[a * d + b]; }
};

BaseFrame analyze(const Model& md, int chart, std::span<const Jet> x);

// Memoizing wrapper exposing the analysis as tensor fields over the base.
class BaseGeometry : public std::enable_shared_from_this<BaseGeometry> {
 public:
  explicit BaseGeometry(std::shared_ptr<const Model> model);

  const Model& model() const { return *model_; }
  std::shared_ptr<const Model> model_ptr() const { return model_; }

  std::shared_ptr<const BaseFrame> frame(int chart, std::span<const double> x) const;

  TensorField u_form() const;
  TensorField v_form() const;
  TensorField sigma_form() const;
  TensorField ghat_form() const;
  TensorField hhat_form() const;
  TensorField metric() const;  // the associated metric
  TensorField endo_G() const;
  TensorField endo_H() const;
  TensorField vert_A() const;
  TensorField vert_B() const;
  TensorField gref_field() const;
  TensorField complex_structure() const;

 private:
  TensorField frame_slice(int up, int low,
                          std::vector<Jet> BaseFrame::*member) const;
  std::shared_ptr<const Model> model_;
};

// residuals of the atlas laws at overlap points (value level)
double atlas_theta_residual(const Model& md, const Transition& tr,
                            std::span<const double> x);
double atlas_weight_residual(const Model& md, const Transition& tr,
                             std::span<const double> x);
double atlas_cocycle_residual(const Model& md, const TripleOverlap& to,
                              std::span<const double> x);

// samples every overlap; throws InvalidWeight or GaugeInconsistency when a
// law fails beyond tol
void validate_atlas(const Model& md, Rng& rng, int samples, double tol);

// branch-safe rotation angle of a transition at a point, with derivatives
Jet gauge(const Model& md, const Transition& tr, std::span<const Jet> x);

// |Ω − (dϖ − i σ∧ϖ)| at a point: the closed-form route against the
// definitional route (value level)
double omega_two_route_residual(const BaseGeometry& geo, int chart,
                                std::span<const double> x);

// singular values of Ĝ at a point, ascending
std::vector<double> vertical_singvals(const BaseFrame& fr);

// principal angles between the two-planes spanned by (A,B) in two charts,
// measured against the reference metric after pushing through the transition
std::vector<double> vertical_principal_angles(const BaseGeometry& geo,
                                              const Transition& tr,
                                              std::span<const double> x);

}  // namespace contact3
