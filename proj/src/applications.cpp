#include "sensornet/applications.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "sensornet/rng.hpp"

namespace sensornet {

double Kernel::eval(const Vector& x) const {
  switch (type) {
    case Type::Uniform:
      return 1.0;
    case Type::Gaussian:
      return std::exp(-(x - center).squaredNorm() / (2.0 * width * width));
    case Type::Delta:
      throw DimensionError("delta kernels cannot be evaluated pointwise");
  }
  return 0.0;
}

FunctionSpec FunctionSpec::linear_combination(Vector alpha) {
  FunctionSpec s;
  s.kind = Kind::LinearCombination;
  s.alpha = std::move(alpha);
  return s;
}

FunctionSpec FunctionSpec::field_at_point(Vector x0) {
  FunctionSpec s;
  s.kind = Kind::FieldAtPoint;
  s.point = std::move(x0);
  return s;
}

FunctionSpec FunctionSpec::kernel_functional(Kernel kernel, Region region, int order,
                                             int panels) {
  FunctionSpec s;
  s.kind = Kind::KernelFunctional;
  s.kernel = std::move(kernel);
  s.region = std::move(region);
  s.quadrature_order = order;
  s.quadrature_panels = panels;
  return s;
}

double eval_function(const FieldModel& model, const FunctionSpec& spec,
                     const Vector& theta) {
  switch (spec.kind) {
    case FunctionSpec::Kind::LinearCombination:
      if (spec.alpha.size() != model.param_dim())
        throw DimensionError("alpha length does not match model parameters");
      return spec.alpha.dot(theta);
    case FunctionSpec::Kind::FieldAtPoint:
      return model.field_value_at(spec.point, theta);
    case FunctionSpec::Kind::KernelFunctional:
      if (spec.kernel.type == Kernel::Type::Delta)
        return model.field_value_at(spec.kernel.center, theta);
      return integrate(
          [&](const Vector& x) { return spec.kernel.eval(x) * model.field_value_at(x, theta); },
          spec.region, spec.quadrature_order, spec.quadrature_panels);
  }
  throw DimensionError("unknown function kind");
}

Vector function_gradient(const FieldModel& model, const FunctionSpec& spec,
                         const Vector& theta) {
  switch (spec.kind) {
    case FunctionSpec::Kind::LinearCombination:
      if (spec.alpha.size() != model.param_dim())
        throw DimensionError("alpha length does not match model parameters");
      return spec.alpha;
    case FunctionSpec::Kind::FieldAtPoint:
      return model.field_param_gradient_at(spec.point, theta);
    case FunctionSpec::Kind::KernelFunctional: {
      if (spec.kernel.type == Kernel::Type::Delta)
        return model.field_param_gradient_at(spec.kernel.center, theta);
      Vector alpha = Vector::Zero(model.param_dim());
      for (int m = 0; m < model.param_dim(); ++m) {
        alpha(m) = integrate(
            [&](const Vector& x) {
              return spec.kernel.eval(x) * model.field_param_gradient_at(x, theta)(m);
            },
            spec.region, spec.quadrature_order, spec.quadrature_panels);
      }
      return alpha;
    }
  }
  throw DimensionError("unknown function kind");
}

EstimationProblem build_interpolation(const FieldModel& model, const Vector& x0,
                                      const Vector& theta_ref) {
  if (!model.supports_point_evaluation())
    throw DimensionError("interpolation needs a spatially evaluable model");
  const Vector alpha = model.field_param_gradient_at(x0, theta_ref);
  return EstimationProblem(model.gradient_matrix(theta_ref), alpha);
}

EstimationProblem build_functional(const FieldModel& model, const FunctionSpec& spec,
                                   const Vector& theta_ref) {
  if (spec.kind != FunctionSpec::Kind::KernelFunctional)
    throw DimensionError("build_functional expects a kernel functional spec");
  if (spec.kernel.type == Kernel::Type::Delta)
    return build_interpolation(model, spec.kernel.center, theta_ref);
  if (spec.quadrature_order < 2)
    throw DimensionError("quadrature order must be at least 2");
  const Vector alpha = function_gradient(model, spec, theta_ref);
  return EstimationProblem(model.gradient_matrix(theta_ref), alpha);
}

EstimationProblem build_problem(const FieldModel& model, const FunctionSpec& spec,
                                const Vector& theta_ref) {
  switch (spec.kind) {
    case FunctionSpec::Kind::LinearCombination:
      return EstimationProblem(model.gradient_matrix(theta_ref), spec.alpha);
    case FunctionSpec::Kind::FieldAtPoint:
      return build_interpolation(model, spec.point, theta_ref);
    case FunctionSpec::Kind::KernelFunctional:
      return build_functional(model, spec, theta_ref);
  }
  throw DimensionError("unknown function kind");
}

namespace {

// u' at the candidate placement, or +inf when the candidate cannot be
// evaluated: unidentifiable, geometrically singular (a sensor on a source),
// or so extreme that the LP breaks down numerically. Probes are disposable;
// the returned optimum is always re-solvable.
double placement_objective(const FieldModel& family, const FunctionSpec& q_spec,
                           const Vector& theta_ref, const std::vector<Vector>& positions) {
  try {
    const FieldModel candidate = family.with_sensor_positions(positions);
    const Matrix g = candidate.gradient_matrix(theta_ref).entries;
    const Vector alpha = function_gradient(candidate, q_spec, theta_ref);
    if (!check_identifiability(g, alpha))
      return std::numeric_limits<double>::infinity();
    return solve_protocol(EstimationProblem(g, alpha)).u_prime;
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

PlacementResult optimize_placement(const FieldModel& model_family, const FunctionSpec& q_spec,
                                   const Vector& theta_ref,
                                   const std::vector<std::pair<double, double>>& bounds,
                                   int sensor_count, const PlacementOptions& options) {
  const int space_dim = static_cast<int>(bounds.size());
  if (space_dim < 1) throw DimensionError("placement needs coordinate bounds");
  if (sensor_count < model_family.param_dim())
    throw DimensionError("placement needs at least as many sensors as parameters");
  for (const auto& [lo, hi] : bounds) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi <= lo)
      throw DimensionError("placement bounds must be finite nonempty intervals");
  }

  PlacementResult best;
  best.u_prime = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < options.restarts; ++restart) {
    Rng rng(Rng::derive_stream(options.seed, static_cast<std::uint64_t>(restart)));

    std::vector<Vector> pos(sensor_count, Vector::Zero(space_dim));
    for (auto& x : pos)
      for (int a = 0; a < space_dim; ++a)
        x(a) = rng.uniform(bounds[a].first, bounds[a].second);

    double value = placement_objective(model_family, q_spec, theta_ref, pos);
    std::vector<std::pair<int, double>> history;
    history.emplace_back(0, value);

    std::vector<double> step(space_dim);
    for (int a = 0; a < space_dim; ++a)
      step[a] = options.initial_step * (bounds[a].second - bounds[a].first);

    int used = 1;
    while (used < options.budget) {
      bool improved = false;
      for (int s = 0; s < sensor_count && used < options.budget; ++s) {
        for (int a = 0; a < space_dim && used < options.budget; ++a) {
          std::vector<Vector> cand = pos;
          cand[s](a) += step[a] * rng.uniform(-1.0, 1.0);
          cand[s](a) = std::clamp(cand[s](a), bounds[a].first, bounds[a].second);
          const double v = placement_objective(model_family, q_spec, theta_ref, cand);
          ++used;
          if (v < value) {
            value = v;
            pos = std::move(cand);
            improved = true;
          }
          history.emplace_back(used - 1, value);
        }
      }
      if (!improved) {
        bool all_tiny = true;
        for (int a = 0; a < space_dim; ++a) {
          step[a] *= options.shrink;
          if (step[a] > options.min_step * (bounds[a].second - bounds[a].first))
            all_tiny = false;
        }
        if (all_tiny) break;
      }
    }

    if (value < best.u_prime) {
      best.u_prime = value;
      best.positions = pos;
      best.history = std::move(history);
      best.budget_exhausted = used >= options.budget;
    }
  }

  if (!std::isfinite(best.u_prime))
    throw InconsistentConstraintError("every candidate placement was unidentifiable");
  return best;
}

}  // namespace sensornet
