#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "contact3/jet.hpp"
#include "contact3/manifold.hpp"

namespace contact3 {

// Closed-form chart data of a complex-contact atlas.  Real coordinates
// interleave as (x_0, y_0, x_1, y_1, ...) with z_k = x_k + i y_k.
struct ChartData {
  std::vector<CJet> theta;   // m components: θ = Σ theta[k] dz^k
  std::vector<CJet> dtheta;  // m×m antisymmetric: dθ = Σ_{k<l} dtheta[k*m+l] dz^k ∧ dz^l
  Jet h;                     // positive weight
  std::vector<CJet> dlogh;   // ∂ log h / ∂ z_k
};

struct Model {
  std::string name, doc;
  int n = 1, m = 3, d = 6;  // complex contact dim m = 2n+1, real dim d = 2m
  int charts = 1;
  std::vector<Box> boxes;
  std::vector<Transition> transitions;
  std::vector<TripleOverlap> triples;

  std::function<ChartData(int chart, std::span<const Jet> x)> data;
  // cocycle f_{ab} in chart-a coordinates, defined on the (a,b) overlap
  std::function<CJet(int a, int b, std::span<const Jet> x)> cocycle;
  // hermitian reference metric (real d×d components) used to pick the
  // associated metric; positive and invariant under the complex structure
  std::function<std::vector<Jet>(int chart, std::span<const Jet> x)> gref;

  struct Expect {
    bool sasaki = false;        // first structure expected Sasakian on the nose
    bool omega1_exact = false;  // dω_1 expected to vanish upstairs
    bool fano = false;          // projective atlas pairing against the
                                // anticanonical square holds
  } expect;

  void check_chart(int chart) const {
    if (chart < 0 || chart >= charts) throw UnknownChart(name);
  }
};

std::shared_ptr<const Model> build_flat_model(int n);
std::shared_ptr<const Model> build_projective_twistor();
std::shared_ptr<const Model> build_cotangent_model();

std::shared_ptr<const Model> model_by_name(const std::string& name);
std::vector<std::string> model_names();

}  // namespace contact3
