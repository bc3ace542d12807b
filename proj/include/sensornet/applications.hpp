#pragma once

#include <cstdint>
#include <vector>

#include "sensornet/estimation.hpp"
#include "sensornet/field_model.hpp"
#include "sensornet/quadrature.hpp"
#include "sensornet/types.hpp"

namespace sensornet {

// Spatial kernel for functional targets q = int_R k(x) f(x; theta) dx.
struct Kernel {
  enum class Type { Uniform, Gaussian, Delta };
  Type type = Type::Uniform;
  Vector center;      // Gaussian center / Delta point
  double width = 1.0; // Gaussian width

  double eval(const Vector& x) const;
};

// What to estimate: a linear combination of parameters, the field value at a
// point without a sensor, or a kernel functional over a region.
struct FunctionSpec {
  enum class Kind { LinearCombination, FieldAtPoint, KernelFunctional };

  Kind kind = Kind::LinearCombination;
  Vector alpha;       // LinearCombination coefficients
  Vector point;       // FieldAtPoint target
  Kernel kernel;      // KernelFunctional
  Region region;
  int quadrature_order = 8;
  int quadrature_panels = 4;

  static FunctionSpec linear_combination(Vector alpha);
  static FunctionSpec field_at_point(Vector x0);
  static FunctionSpec kernel_functional(Kernel kernel, Region region, int order = 8,
                                        int panels = 4);
};

// q(theta) and grad q(theta) for a spec over a model.
double eval_function(const FieldModel& model, const FunctionSpec& spec, const Vector& theta);
Vector function_gradient(const FieldModel& model, const FunctionSpec& spec,
                         const Vector& theta);

// (G, alpha) for interpolating the field at x0: alpha_m = df(x0)/dtheta_m at
// theta_ref, G from the sensors at theta_ref.
EstimationProblem build_interpolation(const FieldModel& model, const Vector& x0,
                                      const Vector& theta_ref);

// (G, alpha) for a kernel functional; alpha by composite Gauss-Legendre
// quadrature. Delta kernels route to build_interpolation.
EstimationProblem build_functional(const FieldModel& model, const FunctionSpec& spec,
                                   const Vector& theta_ref);

EstimationProblem build_problem(const FieldModel& model, const FunctionSpec& spec,
                                const Vector& theta_ref);

struct PlacementOptions {
  int budget = 400;        // objective evaluations per restart
  int restarts = 4;
  std::uint64_t seed = 1;
  double initial_step = 0.25;  // fraction of the box edge
  double shrink = 0.7;         // step multiplier per sweep without improvement
  double min_step = 1e-7;      // fraction of the box edge
};

struct PlacementResult {
  std::vector<Vector> positions;
  double u_prime = 0.0;
  std::vector<std::pair<int, double>> history;  // (evaluation index, best value)
  bool budget_exhausted = false;
};

// Derivative-free local search over sensor positions minimizing u' for the
// given target. Per-coordinate random perturbations with a shrinking step,
// independent restarts merged by best value (lowest restart index wins ties).
// Candidates failing identifiability are skipped. Returns a local optimum.
PlacementResult optimize_placement(const FieldModel& model_family, const FunctionSpec& q_spec,
                                   const Vector& theta_ref,
                                   const std::vector<std::pair<double, double>>& bounds,
                                   int sensor_count, const PlacementOptions& options);

}  // namespace sensornet
