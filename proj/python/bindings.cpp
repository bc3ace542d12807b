#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sensornet/applications.hpp"
#include "sensornet/estimation.hpp"
#include "sensornet/field_model.hpp"
#include "sensornet/fisher.hpp"
#include "sensornet/oracle.hpp"
#include "sensornet/protocol_sim.hpp"

namespace py = pybind11;
using namespace sensornet;

namespace {

FunctionSpec make_function_spec(const std::string& kind, py::object payload) {
  if (kind == "linear_combination")
    return FunctionSpec::linear_combination(payload.cast<Vector>());
  if (kind == "field_at_point") return FunctionSpec::field_at_point(payload.cast<Vector>());
  throw DimensionError("unknown function kind '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Precision bounds and optimal measurement weights for qubit sensor networks";

  py::register_exception<UnboundedPrecisionError>(m, "UnboundedPrecisionError");
  py::register_exception<InconsistentConstraintError>(m, "InconsistentConstraintError");
  py::register_exception<PhaseWrapError>(m, "PhaseWrapError");
  py::register_exception<NewtonDivergenceError>(m, "NewtonDivergenceError");
  py::register_exception<InstanceTooLargeError>(m, "InstanceTooLargeError");
  py::register_exception<RankDeficientError>(m, "RankDeficientError");

  py::class_<FieldModel>(m, "FieldModel")
      .def_static("explicit_linear", &FieldModel::explicit_linear, py::arg("gradient"),
                  py::arg("offset") = Vector())
      .def_static("point_sources", &FieldModel::point_sources, py::arg("sensor_positions"),
                  py::arg("source_positions"))
      .def_static("source_locations", &FieldModel::source_locations,
                  py::arg("sensor_positions"), py::arg("source_strengths"),
                  py::arg("space_dim"))
      .def_property_readonly("sensor_count", &FieldModel::sensor_count)
      .def_property_readonly("param_dim", &FieldModel::param_dim)
      .def("field_vector", &FieldModel::field_vector, py::arg("theta"))
      .def("gradient_matrix",
           [](const FieldModel& self, const Vector& theta) {
             return self.gradient_matrix(theta).entries;
           },
           py::arg("theta"))
      .def("finite_diff_gradient",
           [](const FieldModel& self, const Vector& theta, double h) {
             return self.finite_diff_gradient(theta, h).entries;
           },
           py::arg("theta"), py::arg("h") = 1e-5);

  py::class_<BoundSolution>(m, "BoundSolution")
      .def_readonly("u", &BoundSolution::u)
      .def_readonly("beta0", &BoundSolution::beta0);
  py::class_<WeightSolution>(m, "WeightSolution")
      .def_readonly("u_prime", &WeightSolution::u_prime)
      .def_readonly("w0", &WeightSolution::w0);
  py::class_<DualSolution>(m, "DualSolution")
      .def_readonly("u_dprime", &DualSolution::u_dprime)
      .def_readonly("v0", &DualSolution::v0);
  py::class_<UnentangledSolution>(m, "UnentangledSolution")
      .def_readonly("w", &UnentangledSolution::w)
      .def_readonly("mse_coeff", &UnentangledSolution::mse_coeff);

  m.def("solve_bound",
        [](const Matrix& g, const Vector& alpha) { return solve_bound({g, alpha}); },
        py::arg("gradient"), py::arg("alpha"));
  m.def("solve_protocol",
        [](const Matrix& g, const Vector& alpha) { return solve_protocol({g, alpha}); },
        py::arg("gradient"), py::arg("alpha"));
  m.def("solve_dual",
        [](const Matrix& g, const Vector& alpha) { return solve_dual({g, alpha}); },
        py::arg("gradient"), py::arg("alpha"));
  m.def("unentangled_weights",
        [](const Matrix& g, const Vector& alpha) { return unentangled_weights({g, alpha}); },
        py::arg("gradient"), py::arg("alpha"));
  m.def("check_identifiability", &check_identifiability, py::arg("gradient"),
        py::arg("alpha"));
  m.def("mse_lower_bound", &mse_lower_bound, py::arg("u"), py::arg("t"));

  py::class_<VertexCertificate>(m, "VertexCertificate")
      .def_readonly("value", &VertexCertificate::value)
      .def_readonly("v", &VertexCertificate::v)
      .def_readonly("zero_rows", &VertexCertificate::zero_rows);
  m.def("enumerate_dual_vertices", &enumerate_dual_vertices, py::arg("gradient"),
        py::arg("alpha"));
  m.def("grid_bound_search", &grid_bound_search, py::arg("gradient"), py::arg("alpha"),
        py::arg("radius"), py::arg("points_per_axis"));

  py::class_<ShotPlan>(m, "ShotPlan")
      .def(py::init([](double t, int shots, std::uint64_t seed, double split) {
             ShotPlan p;
             p.t = t;
             p.shots = shots;
             p.seed = seed;
             p.quadrature_split = split;
             return p;
           }),
           py::arg("t"), py::arg("shots"), py::arg("seed") = 0,
           py::arg("quadrature_split") = 0.5)
      .def_readwrite("t", &ShotPlan::t)
      .def_readwrite("shots", &ShotPlan::shots)
      .def_readwrite("seed", &ShotPlan::seed)
      .def_readwrite("quadrature_split", &ShotPlan::quadrature_split);

  py::class_<ProtocolResult>(m, "ProtocolResult")
      .def_readonly("q_hat", &ProtocolResult::q_hat)
      .def_readonly("empirical_variance", &ProtocolResult::empirical_variance)
      .def_readonly("theoretical_variance", &ProtocolResult::theoretical_variance)
      .def_readonly("bias_estimate", &ProtocolResult::bias_estimate)
      .def_readonly("shots_used", &ProtocolResult::shots_used)
      .def_readonly("samples", &ProtocolResult::samples);

  m.def("simulate_ghz_linear", &simulate_ghz_linear, py::arg("f"), py::arg("w"),
        py::arg("plan"), py::arg("repetitions") = 1);
  m.def("simulate_unentangled", &simulate_unentangled, py::arg("f"), py::arg("w"),
        py::arg("plan"), py::arg("repetitions") = 1);

  m.def("two_step_protocol",
        [](const FieldModel& model, const std::string& kind, py::object payload,
           const Vector& theta_true, double t, double p, const ShotPlan& plan,
           int repetitions, double f_prior_bound, const Vector& newton_guess) {
          TwoStepOptions opts;
          opts.stage_one.f_prior_bound = f_prior_bound;
          if (newton_guess.size() > 0) opts.stage_one.newton_initial_guess = newton_guess;
          return two_step_protocol(model, make_function_spec(kind, payload), theta_true, t,
                                   p, plan, repetitions, opts);
        },
        py::arg("model"), py::arg("function_kind"), py::arg("payload"),
        py::arg("theta_true"), py::arg("t"), py::arg("p"), py::arg("plan"),
        py::arg("repetitions") = 1, py::arg("f_prior_bound") = 4.0,
        py::arg("newton_initial_guess") = Vector());

  py::class_<BasisPair>(m, "BasisPair")
      .def_readonly("jacobian", &BasisPair::jacobian)
      .def_readonly("jacobian_inverse", &BasisPair::jacobian_inverse)
      .def_readonly("permutation", &BasisPair::permutation);
  m.def("build_dual_basis", &build_dual_basis, py::arg("alpha"));
  m.def("transform_fisher", &transform_fisher, py::arg("fisher_theta"), py::arg("basis"));
  m.def("ghz_rank_one_fisher", &ghz_rank_one_fisher, py::arg("gradient"), py::arg("w"),
        py::arg("t"));
}
