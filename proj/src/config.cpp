#include "sensornet/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sensornet {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  require_object(j, path);
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key))
      throw ConfigError(path + ": unknown key '" + key + "'");
  }
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path + ": expected a string");
  return j.get<std::string>();
}

Vector as_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a nonempty array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<int>(i)) = as_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

// A position may be written as a number (1D) or an array of coordinates.
Vector as_position(const json& j, const std::string& path) {
  if (j.is_number()) {
    Vector v(1);
    v(0) = j.get<double>();
    return v;
  }
  return as_vector(j, path);
}

std::vector<Vector> as_positions(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a nonempty array");
  std::vector<Vector> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_position(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Matrix as_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a nonempty array");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const Vector row = as_vector(j[r], path + "[" + std::to_string(r) + "]");
    if (r == 0) {
      cols = static_cast<std::size_t>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<std::size_t>(row.size()) != cols) {
      throw ConfigError(path + ": rows have mixed lengths");
    }
    m.row(static_cast<int>(r)) = row.transpose();
  }
  return m;
}

BasisFunction parse_basis_function(const json& j, const std::string& path) {
  check_keys(j, path, {"type", "exponents", "degree", "center", "width", "pole"});
  const std::string type = as_string(j.at("type"), path + ".type");
  if (type == "monomial") {
    std::vector<int> exps;
    if (j.contains("exponents")) {
      for (std::size_t i = 0; i < j.at("exponents").size(); ++i)
        exps.push_back(as_int(j.at("exponents")[i], path + ".exponents"));
    } else if (j.contains("degree")) {
      exps.push_back(as_int(j.at("degree"), path + ".degree"));
    } else {
      throw ConfigError(path + ": monomial needs 'exponents' or 'degree'");
    }
    return BasisFunction::monomial(std::move(exps));
  }
  if (type == "gaussian") {
    if (!j.contains("center") || !j.contains("width"))
      throw ConfigError(path + ": gaussian needs 'center' and 'width'");
    return BasisFunction::gaussian(as_position(j.at("center"), path + ".center"),
                                   as_number(j.at("width"), path + ".width"));
  }
  if (type == "inverse_distance") {
    if (!j.contains("pole")) throw ConfigError(path + ": inverse_distance needs 'pole'");
    return BasisFunction::inverse_distance(as_position(j.at("pole"), path + ".pole"));
  }
  throw ConfigError(path + ".type: unknown basis function '" + type + "'");
}

FieldModel parse_model(const json& j, const std::string& path) {
  require_object(j, path);
  if (!j.contains("kind")) throw ConfigError(path + ": missing 'kind'");
  const std::string kind = as_string(j.at("kind"), path + ".kind");

  if (kind == "explicit_linear") {
    check_keys(j, path, {"kind", "gradient", "offset"});
    if (!j.contains("gradient")) throw ConfigError(path + ": missing 'gradient'");
    Matrix g = as_matrix(j.at("gradient"), path + ".gradient");
    Vector offset;
    if (j.contains("offset")) offset = as_vector(j.at("offset"), path + ".offset");
    return FieldModel::explicit_linear(std::move(g), std::move(offset));
  }
  if (kind == "linear_basis") {
    check_keys(j, path, {"kind", "positions", "basis"});
    if (!j.contains("positions") || !j.contains("basis"))
      throw ConfigError(path + ": linear_basis needs 'positions' and 'basis'");
    std::vector<BasisFunction> basis;
    const json& jb = j.at("basis");
    if (!jb.is_array() || jb.empty())
      throw ConfigError(path + ".basis: expected a nonempty array");
    for (std::size_t i = 0; i < jb.size(); ++i)
      basis.push_back(parse_basis_function(jb[i], path + ".basis[" + std::to_string(i) + "]"));
    return FieldModel::linear_basis(as_positions(j.at("positions"), path + ".positions"),
                                    std::move(basis));
  }
  if (kind == "point_sources") {
    check_keys(j, path, {"kind", "positions", "sources"});
    if (!j.contains("positions") || !j.contains("sources"))
      throw ConfigError(path + ": point_sources needs 'positions' and 'sources'");
    return FieldModel::point_sources(as_positions(j.at("positions"), path + ".positions"),
                                     as_positions(j.at("sources"), path + ".sources"));
  }
  if (kind == "source_locations") {
    check_keys(j, path, {"kind", "positions", "strengths"});
    if (!j.contains("positions") || !j.contains("strengths"))
      throw ConfigError(path + ": source_locations needs 'positions' and 'strengths'");
    auto positions = as_positions(j.at("positions"), path + ".positions");
    const int dim = static_cast<int>(positions.front().size());
    return FieldModel::source_locations(std::move(positions),
                                        as_vector(j.at("strengths"), path + ".strengths"),
                                        dim);
  }
  throw ConfigError(path + ".kind: unknown model kind '" + kind + "'");
}

Kernel parse_kernel(const json& j, const std::string& path) {
  check_keys(j, path, {"type", "center", "width", "point"});
  const std::string type = as_string(j.at("type"), path + ".type");
  Kernel k;
  if (type == "uniform") {
    k.type = Kernel::Type::Uniform;
  } else if (type == "gaussian") {
    if (!j.contains("center") || !j.contains("width"))
      throw ConfigError(path + ": gaussian kernel needs 'center' and 'width'");
    k.type = Kernel::Type::Gaussian;
    k.center = as_position(j.at("center"), path + ".center");
    k.width = as_number(j.at("width"), path + ".width");
    if (k.width <= 0.0) throw ConfigError(path + ".width: must be positive");
  } else if (type == "delta") {
    if (!j.contains("point")) throw ConfigError(path + ": delta kernel needs 'point'");
    k.type = Kernel::Type::Delta;
    k.center = as_position(j.at("point"), path + ".point");
  } else {
    throw ConfigError(path + ".type: unknown kernel '" + type + "'");
  }
  return k;
}

Region parse_region(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected [[lo, hi], ...]");
  Region region;
  for (std::size_t a = 0; a < j.size(); ++a) {
    const std::string p = path + "[" + std::to_string(a) + "]";
    if (!j[a].is_array() || j[a].size() != 2) throw ConfigError(p + ": expected [lo, hi]");
    region.bounds.emplace_back(as_number(j[a][0], p), as_number(j[a][1], p));
  }
  return region;
}

FunctionSpec parse_function(const json& j, const std::string& path) {
  require_object(j, path);
  if (!j.contains("kind")) throw ConfigError(path + ": missing 'kind'");
  const std::string kind = as_string(j.at("kind"), path + ".kind");
  if (kind == "linear_combination") {
    check_keys(j, path, {"kind", "alpha"});
    if (!j.contains("alpha")) throw ConfigError(path + ": missing 'alpha'");
    return FunctionSpec::linear_combination(as_vector(j.at("alpha"), path + ".alpha"));
  }
  if (kind == "field_at_point") {
    check_keys(j, path, {"kind", "point"});
    if (!j.contains("point")) throw ConfigError(path + ": missing 'point'");
    return FunctionSpec::field_at_point(as_position(j.at("point"), path + ".point"));
  }
  if (kind == "kernel_functional") {
    check_keys(j, path, {"kind", "kernel", "region", "quadrature_order", "quadrature_panels"});
    if (!j.contains("kernel") || !j.contains("region"))
      throw ConfigError(path + ": kernel_functional needs 'kernel' and 'region'");
    int order = 8;
    int panels = 4;
    if (j.contains("quadrature_order"))
      order = as_int(j.at("quadrature_order"), path + ".quadrature_order");
    if (j.contains("quadrature_panels"))
      panels = as_int(j.at("quadrature_panels"), path + ".quadrature_panels");
    if (order < 2) throw ConfigError(path + ".quadrature_order: must be at least 2");
    if (panels < 1) throw ConfigError(path + ".quadrature_panels: must be positive");
    return FunctionSpec::kernel_functional(parse_kernel(j.at("kernel"), path + ".kernel"),
                                           parse_region(j.at("region"), path + ".region"),
                                           order, panels);
  }
  throw ConfigError(path + ".kind: unknown function kind '" + kind + "'");
}

RunConfig parse_document(const json& doc) {
  check_keys(doc, "$",
             {"model", "function", "theta_true", "theta_ref", "solver", "simulation",
              "placement", "output"});
  if (!doc.contains("model")) throw ConfigError("$: missing 'model'");

  RunConfig cfg;
  cfg.model = parse_model(doc.at("model"), "$.model");
  if (doc.contains("function"))
    cfg.function = parse_function(doc.at("function"), "$.function");
  if (doc.contains("theta_true"))
    cfg.theta_true = as_vector(doc.at("theta_true"), "$.theta_true");
  if (doc.contains("theta_ref"))
    cfg.theta_ref = as_vector(doc.at("theta_ref"), "$.theta_ref");

  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    check_keys(s, "$.solver", {"require_full_rank"});
    if (s.contains("require_full_rank")) {
      if (!s.at("require_full_rank").is_boolean())
        throw ConfigError("$.solver.require_full_rank: expected a boolean");
      cfg.require_full_rank = s.at("require_full_rank").get<bool>();
    }
  }

  if (doc.contains("simulation")) {
    const json& s = doc.at("simulation");
    check_keys(s, "$.simulation",
               {"t", "shots", "seed", "quadrature_split", "repetitions", "p", "t_list",
                "f_prior_bound", "stage_one_shots_per_round", "stage_one_max_rounds",
                "newton_initial_guess", "phase_prior_bound"});
    if (s.contains("t")) cfg.plan.t = as_number(s.at("t"), "$.simulation.t");
    if (s.contains("shots")) cfg.plan.shots = as_int(s.at("shots"), "$.simulation.shots");
    if (s.contains("seed")) {
      if (!s.at("seed").is_number_integer())
        throw ConfigError("$.simulation.seed: expected an integer");
      cfg.plan.seed = s.at("seed").get<std::uint64_t>();
    }
    if (s.contains("quadrature_split"))
      cfg.plan.quadrature_split = as_number(s.at("quadrature_split"), "$.simulation.quadrature_split");
    if (s.contains("repetitions"))
      cfg.repetitions = as_int(s.at("repetitions"), "$.simulation.repetitions");
    if (s.contains("p")) cfg.p_exponent = as_number(s.at("p"), "$.simulation.p");
    if (s.contains("t_list")) {
      const Vector tl = as_vector(s.at("t_list"), "$.simulation.t_list");
      cfg.t_list.assign(tl.data(), tl.data() + tl.size());
    }
    if (s.contains("f_prior_bound"))
      cfg.stage_one.f_prior_bound = as_number(s.at("f_prior_bound"), "$.simulation.f_prior_bound");
    if (s.contains("stage_one_shots_per_round"))
      cfg.stage_one.shots_per_round =
          as_int(s.at("stage_one_shots_per_round"), "$.simulation.stage_one_shots_per_round");
    if (s.contains("stage_one_max_rounds"))
      cfg.stage_one.max_rounds =
          as_int(s.at("stage_one_max_rounds"), "$.simulation.stage_one_max_rounds");
    if (s.contains("newton_initial_guess"))
      cfg.stage_one.newton_initial_guess =
          as_vector(s.at("newton_initial_guess"), "$.simulation.newton_initial_guess");
    if (s.contains("phase_prior_bound"))
      cfg.phase_prior_bound = as_number(s.at("phase_prior_bound"), "$.simulation.phase_prior_bound");
  }

  if (doc.contains("placement")) {
    const json& s = doc.at("placement");
    check_keys(s, "$.placement",
               {"bounds", "sensors", "budget", "restarts", "seed", "initial_step"});
    if (!s.contains("bounds") || !s.contains("sensors"))
      throw ConfigError("$.placement: needs 'bounds' and 'sensors'");
    const Region region = parse_region(s.at("bounds"), "$.placement.bounds");
    cfg.placement_bounds = region.bounds;
    cfg.placement_sensors = as_int(s.at("sensors"), "$.placement.sensors");
    PlacementOptions opts;
    if (s.contains("budget")) opts.budget = as_int(s.at("budget"), "$.placement.budget");
    if (s.contains("restarts")) opts.restarts = as_int(s.at("restarts"), "$.placement.restarts");
    if (s.contains("seed")) {
      if (!s.at("seed").is_number_integer())
        throw ConfigError("$.placement.seed: expected an integer");
      opts.seed = s.at("seed").get<std::uint64_t>();
    }
    if (s.contains("initial_step"))
      opts.initial_step = as_number(s.at("initial_step"), "$.placement.initial_step");
    cfg.placement = opts;
  }

  if (doc.contains("output")) {
    const json& s = doc.at("output");
    check_keys(s, "$.output", {"dir"});
    if (s.contains("dir")) cfg.output_dir = as_string(s.at("dir"), "$.output.dir");
  }

  return cfg;
}

}  // namespace

Vector RunConfig::reference_point() const {
  if (theta_ref) return *theta_ref;
  if (theta_true) return *theta_true;
  return Vector::Zero(model.param_dim());
}

RunConfig parse_config_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg = parse_document(doc);
  cfg.canonical_text = doc.dump(2);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const RunConfig& config) { return config.canonical_text; }

}  // namespace sensornet
