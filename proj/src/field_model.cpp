#include "sensornet/field_model.hpp"

#include <cmath>
#include <utility>

namespace sensornet {

namespace {

constexpr double kMinSourceDistance = 1e-12;

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw DimensionError(std::string(what) + " has non-finite entries");
}

double distance(const Vector& a, const Vector& b) { return (a - b).norm(); }

}  // namespace

BasisFunction BasisFunction::monomial(std::vector<int> exponents) {
  BasisFunction b;
  b.type = Type::Monomial;
  b.exponents = std::move(exponents);
  return b;
}

BasisFunction BasisFunction::gaussian(Vector center, double width) {
  if (width <= 0.0) throw DimensionError("gaussian basis width must be positive");
  BasisFunction b;
  b.type = Type::Gaussian;
  b.center = std::move(center);
  b.width = width;
  return b;
}

BasisFunction BasisFunction::inverse_distance(Vector pole) {
  BasisFunction b;
  b.type = Type::InverseDistance;
  b.pole = std::move(pole);
  return b;
}

double BasisFunction::eval(const Vector& x) const {
  switch (type) {
    case Type::Monomial: {
      double v = 1.0;
      for (int a = 0; a < static_cast<int>(exponents.size()) && a < x.size(); ++a) {
        for (int e = 0; e < exponents[a]; ++e) v *= x(a);
      }
      return v;
    }
    case Type::Gaussian: {
      const double r2 = (x - center).squaredNorm();
      return std::exp(-r2 / (2.0 * width * width));
    }
    case Type::InverseDistance: {
      const double r = (x - pole).norm();
      if (r <= kMinSourceDistance)
        throw SingularGeometryError("inverse-distance basis evaluated at its pole");
      return 1.0 / r;
    }
  }
  return 0.0;
}

FieldModel FieldModel::explicit_linear(Matrix gradient, Vector offset) {
  if (gradient.rows() < 1 || gradient.cols() < 1)
    throw DimensionError("explicit gradient must be at least 1x1");
  if (offset.size() == 0) offset = Vector::Zero(gradient.rows());
  if (offset.size() != gradient.rows())
    throw DimensionError("offset length does not match sensor count");
  if (!gradient.allFinite()) throw DimensionError("gradient has non-finite entries");
  require_finite(offset, "offset");

  FieldModel m;
  m.kind_ = FieldKind::ExplicitLinear;
  m.sensor_count_ = static_cast<int>(gradient.rows());
  m.param_dim_ = static_cast<int>(gradient.cols());
  m.space_dim_ = 0;
  m.explicit_gradient_ = std::move(gradient);
  m.offset_ = std::move(offset);
  return m;
}

FieldModel FieldModel::linear_basis(std::vector<Vector> sensor_positions,
                                    std::vector<BasisFunction> basis) {
  if (sensor_positions.empty()) throw DimensionError("need at least one sensor");
  if (basis.empty()) throw DimensionError("need at least one basis function");
  const int dim = static_cast<int>(sensor_positions.front().size());
  for (const auto& x : sensor_positions) {
    require_finite(x, "sensor position");
    if (static_cast<int>(x.size()) != dim)
      throw DimensionError("sensor positions have mixed dimensions");
  }

  FieldModel m;
  m.kind_ = FieldKind::LinearBasis;
  m.sensor_count_ = static_cast<int>(sensor_positions.size());
  m.param_dim_ = static_cast<int>(basis.size());
  m.space_dim_ = dim;
  m.sensor_positions_ = std::move(sensor_positions);
  m.basis_ = std::move(basis);
  m.offset_ = Vector::Zero(m.sensor_count_);
  return m;
}

FieldModel FieldModel::point_sources(std::vector<Vector> sensor_positions,
                                     std::vector<Vector> source_positions) {
  if (sensor_positions.empty()) throw DimensionError("need at least one sensor");
  if (source_positions.empty()) throw DimensionError("need at least one source");
  const int dim = static_cast<int>(sensor_positions.front().size());
  for (const auto& x : sensor_positions) {
    require_finite(x, "sensor position");
    if (static_cast<int>(x.size()) != dim)
      throw DimensionError("sensor positions have mixed dimensions");
  }
  for (const auto& p : source_positions) {
    require_finite(p, "source position");
    if (static_cast<int>(p.size()) != dim)
      throw DimensionError("source position dimension does not match sensors");
  }
  // Singular configurations are rejected here, not at evaluation.
  for (const auto& x : sensor_positions)
    for (const auto& p : source_positions)
      if (distance(x, p) <= kMinSourceDistance)
        throw SingularGeometryError("sensor coincides with a point source");

  FieldModel m;
  m.kind_ = FieldKind::PointSources;
  m.sensor_count_ = static_cast<int>(sensor_positions.size());
  m.param_dim_ = static_cast<int>(source_positions.size());
  m.space_dim_ = dim;
  m.sensor_positions_ = std::move(sensor_positions);
  m.source_positions_ = std::move(source_positions);
  m.offset_ = Vector::Zero(m.sensor_count_);
  return m;
}

FieldModel FieldModel::source_locations(std::vector<Vector> sensor_positions,
                                        Vector source_strengths, int space_dim) {
  if (sensor_positions.empty()) throw DimensionError("need at least one sensor");
  if (source_strengths.size() < 1) throw DimensionError("need at least one source");
  if (space_dim < 1) throw DimensionError("space dimension must be at least 1");
  for (const auto& x : sensor_positions) {
    require_finite(x, "sensor position");
    if (static_cast<int>(x.size()) != space_dim)
      throw DimensionError("sensor position dimension mismatch");
  }
  require_finite(source_strengths, "source strengths");

  FieldModel m;
  m.kind_ = FieldKind::SourceLocations;
  m.sensor_count_ = static_cast<int>(sensor_positions.size());
  m.param_dim_ = static_cast<int>(source_strengths.size()) * space_dim;
  m.space_dim_ = space_dim;
  m.sensor_positions_ = std::move(sensor_positions);
  m.source_strengths_ = std::move(source_strengths);
  m.offset_ = Vector::Zero(m.sensor_count_);
  return m;
}

FieldModel FieldModel::with_sensor_positions(std::vector<Vector> positions) const {
  switch (kind_) {
    case FieldKind::LinearBasis:
      return linear_basis(std::move(positions), basis_);
    case FieldKind::PointSources:
      return point_sources(std::move(positions), source_positions_);
    case FieldKind::SourceLocations:
      return source_locations(std::move(positions), source_strengths_, space_dim_);
    case FieldKind::ExplicitLinear:
      throw DimensionError("explicit-linear models have no sensor coordinates");
  }
  throw DimensionError("unknown field kind");
}

void FieldModel::check_theta(const Vector& theta) const {
  if (theta.size() != param_dim_)
    throw DimensionError("theta has length " + std::to_string(theta.size()) +
                         ", expected " + std::to_string(param_dim_));
  require_finite(theta, "theta");
}

Vector FieldModel::field_vector(const Vector& theta) const {
  check_theta(theta);
  switch (kind_) {
    case FieldKind::ExplicitLinear:
      return explicit_gradient_ * theta + offset_;
    case FieldKind::LinearBasis:
    case FieldKind::PointSources:
      return gradient_matrix(theta).entries * theta;
    case FieldKind::SourceLocations: {
      Vector f(sensor_count_);
      for (int i = 0; i < sensor_count_; ++i)
        f(i) = field_value_at(sensor_positions_[i], theta);
      return f;
    }
  }
  throw DimensionError("unknown field kind");
}

GradientMatrix FieldModel::gradient_matrix(const Vector& theta) const {
  check_theta(theta);
  Matrix g(sensor_count_, param_dim_);
  switch (kind_) {
    case FieldKind::ExplicitLinear:
      g = explicit_gradient_;
      break;
    case FieldKind::LinearBasis:
      for (int i = 0; i < sensor_count_; ++i)
        for (int m = 0; m < param_dim_; ++m)
          g(i, m) = basis_[m].eval(sensor_positions_[i]);
      break;
    case FieldKind::PointSources:
      for (int i = 0; i < sensor_count_; ++i)
        for (int m = 0; m < param_dim_; ++m)
          g(i, m) = 1.0 / distance(sensor_positions_[i], source_positions_[m]);
      break;
    case FieldKind::SourceLocations:
      for (int i = 0; i < sensor_count_; ++i)
        g.row(i) = field_param_gradient_at(sensor_positions_[i], theta).transpose();
      break;
  }
  return GradientMatrix{std::move(g), theta};
}

GradientMatrix FieldModel::finite_diff_gradient(const Vector& theta, double h) const {
  check_theta(theta);
  if (h <= 0.0) throw DimensionError("finite-difference step must be positive");
  Matrix g(sensor_count_, param_dim_);
  for (int m = 0; m < param_dim_; ++m) {
    Vector tp = theta;
    Vector tm = theta;
    tp(m) += h;
    tm(m) -= h;
    g.col(m) = (field_vector(tp) - field_vector(tm)) / (2.0 * h);
  }
  return GradientMatrix{std::move(g), theta};
}

double FieldModel::field_value_at(const Vector& x, const Vector& theta) const {
  check_theta(theta);
  switch (kind_) {
    case FieldKind::ExplicitLinear:
      throw DimensionError("explicit-linear models cannot be evaluated off-sensor");
    case FieldKind::LinearBasis: {
      double v = 0.0;
      for (int m = 0; m < param_dim_; ++m) v += theta(m) * basis_[m].eval(x);
      return v;
    }
    case FieldKind::PointSources: {
      double v = 0.0;
      for (int m = 0; m < param_dim_; ++m) {
        const double r = distance(x, source_positions_[m]);
        if (r <= kMinSourceDistance)
          throw SingularGeometryError("field evaluated at a point source");
        v += theta(m) / r;
      }
      return v;
    }
    case FieldKind::SourceLocations: {
      double v = 0.0;
      const int n_sources = static_cast<int>(source_strengths_.size());
      for (int j = 0; j < n_sources; ++j) {
        const Vector p = theta.segment(j * space_dim_, space_dim_);
        const double r = (x - p).norm();
        if (r <= kMinSourceDistance)
          throw SingularGeometryError("field evaluated at a point source");
        v += source_strengths_(j) / r;
      }
      return v;
    }
  }
  throw DimensionError("unknown field kind");
}

Vector FieldModel::field_param_gradient_at(const Vector& x, const Vector& theta) const {
  check_theta(theta);
  Vector g(param_dim_);
  switch (kind_) {
    case FieldKind::ExplicitLinear:
      throw DimensionError("explicit-linear models cannot be evaluated off-sensor");
    case FieldKind::LinearBasis:
      for (int m = 0; m < param_dim_; ++m) g(m) = basis_[m].eval(x);
      return g;
    case FieldKind::PointSources:
      for (int m = 0; m < param_dim_; ++m) {
        const double r = distance(x, source_positions_[m]);
        if (r <= kMinSourceDistance)
          throw SingularGeometryError("field evaluated at a point source");
        g(m) = 1.0 / r;
      }
      return g;
    case FieldKind::SourceLocations: {
      // d/dp_a of c/|x-p| is c (x-p)_a / |x-p|^3
      const int n_sources = static_cast<int>(source_strengths_.size());
      for (int j = 0; j < n_sources; ++j) {
        const Vector p = theta.segment(j * space_dim_, space_dim_);
        const Vector diff = x - p;
        const double r = diff.norm();
        if (r <= kMinSourceDistance)
          throw SingularGeometryError("field evaluated at a point source");
        g.segment(j * space_dim_, space_dim_) = source_strengths_(j) * diff / (r * r * r);
      }
      return g;
    }
  }
  throw DimensionError("unknown field kind");
}

}  // namespace sensornet
