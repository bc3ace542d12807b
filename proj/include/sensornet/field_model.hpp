#pragma once

#include <vector>

#include "sensornet/types.hpp"

namespace sensornet {

// Scalar basis function for LinearBasis fields. The catalog is fixed:
// monomials, Gaussians, inverse distance.
struct BasisFunction {
  enum class Type { Monomial, Gaussian, InverseDistance };

  Type type = Type::Monomial;
  std::vector<int> exponents;  // Monomial: prod_a x_a^e_a
  Vector center;               // Gaussian center
  double width = 1.0;          // Gaussian width
  Vector pole;                 // InverseDistance pole

  static BasisFunction monomial(std::vector<int> exponents);
  static BasisFunction gaussian(Vector center, double width);
  static BasisFunction inverse_distance(Vector pole);

  double eval(const Vector& x) const;
};

enum class FieldKind { LinearBasis, PointSources, ExplicitLinear, SourceLocations };

struct GradientMatrix {
  Matrix entries;     // d x k, entries(i, m) = df_i/dtheta_m
  Vector eval_point;  // theta at which it was computed
};

// A parametrized scalar field f(x; theta) probed by d sensors at fixed
// positions. Immutable after construction; safe for concurrent reads.
//
// Kinds:
//   LinearBasis     f(x; theta) = sum_m theta_m b_m(x)
//   PointSources    f(x; theta) = sum_j theta_j / |x - p_j|   (fixed p_j)
//   ExplicitLinear  f = G theta + c, sensors only
//   SourceLocations f(x; theta) = sum_j c_j / |x - p_j(theta)|, where theta
//                   packs the unknown source coordinates (the one kind whose
//                   gradient depends on theta)
class FieldModel {
 public:
  // Empty model; every factory below returns a usable one.
  FieldModel() = default;

  static FieldModel explicit_linear(Matrix gradient, Vector offset);
  static FieldModel linear_basis(std::vector<Vector> sensor_positions,
                                 std::vector<BasisFunction> basis);
  static FieldModel point_sources(std::vector<Vector> sensor_positions,
                                  std::vector<Vector> source_positions);
  static FieldModel source_locations(std::vector<Vector> sensor_positions,
                                     Vector source_strengths, int space_dim);

  FieldKind kind() const { return kind_; }
  int sensor_count() const { return sensor_count_; }
  int param_dim() const { return param_dim_; }
  int space_dim() const { return space_dim_; }

  // True for every kind except SourceLocations.
  bool gradient_is_constant() const { return kind_ != FieldKind::SourceLocations; }

  // ExplicitLinear has no spatial structure beyond its sensors.
  bool supports_point_evaluation() const { return kind_ != FieldKind::ExplicitLinear; }

  const std::vector<Vector>& sensor_positions() const { return sensor_positions_; }

  // Same field family with relocated sensors (placement search).
  FieldModel with_sensor_positions(std::vector<Vector> positions) const;

  Vector field_vector(const Vector& theta) const;
  GradientMatrix gradient_matrix(const Vector& theta) const;
  GradientMatrix finite_diff_gradient(const Vector& theta, double h) const;

  double field_value_at(const Vector& x, const Vector& theta) const;
  Vector field_param_gradient_at(const Vector& x, const Vector& theta) const;

  const Vector& offset() const { return offset_; }

 private:
  void check_theta(const Vector& theta) const;

  FieldKind kind_ = FieldKind::ExplicitLinear;
  int sensor_count_ = 0;
  int param_dim_ = 0;
  int space_dim_ = 0;

  std::vector<Vector> sensor_positions_;
  std::vector<BasisFunction> basis_;
  std::vector<Vector> source_positions_;
  Vector source_strengths_;
  Matrix explicit_gradient_;
  Vector offset_;
};

}  // namespace sensornet
