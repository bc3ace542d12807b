// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line each. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sensornet/commands.hpp"
#include "sensornet/config.hpp"
#include "sensornet/estimation.hpp"
#include "sensornet/fisher.hpp"
#include "sensornet/oracle.hpp"
#include "sensornet/protocol_sim.hpp"
#include "sensornet/rng.hpp"
#include "support/random_instances.hpp"
#include "support/toy_instance.hpp"

using namespace sensornet;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  std::string name;
  double time_limit_s = 0.0;  // 0 = no limit
  std::function<void(std::vector<std::string>&)> body;
};

void expect(std::vector<std::string>& failures, bool ok, const std::string& what) {
  if (!ok) failures.push_back(what);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// Shared fixture for criteria 6 and 8: two point sources with known strengths
// and unknown 1d positions, read by four sensors.
FieldModel nonlinear_source_model() {
  return FieldModel::source_locations({vec1(0.0), vec1(1.0), vec1(2.0), vec1(3.0)},
                                      vec2(8.0, 6.0), 1);
}

const Vector kSourceTheta = vec2(0.4, 2.6);

StageOneOptions nonlinear_stage_one() {
  StageOneOptions opts;
  opts.f_prior_bound = 32.0;
  opts.newton_initial_guess = vec2(0.55, 2.45);
  return opts;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------

void criterion_toy_golden(std::vector<std::string>& f) {
  const EstimationProblem p = testsupport::toy_problem();
  const BoundSolution bound = solve_bound(p);
  const WeightSolution protocol = solve_protocol(p);
  const DualSolution dual = solve_dual(p);
  const double tol = 1e-9;
  expect(f, std::abs(bound.u - 0.5) <= tol, "u != 1/2: " + fmt(bound.u));
  expect(f, std::abs(protocol.u_prime - 0.5) <= tol, "u' != 1/2: " + fmt(protocol.u_prime));
  expect(f, std::abs(dual.u_dprime - 0.5) <= tol, "u'' != 1/2: " + fmt(dual.u_dprime));
  const double w0[] = {0.5, -0.5, 0.5};
  for (int i = 0; i < 3; ++i)
    expect(f, std::abs(protocol.w0(i) - w0[i]) <= tol, "w0 component " + std::to_string(i));
  expect(f, std::abs(dual.v0(0) - 0.5) <= tol && std::abs(dual.v0(1)) <= tol,
         "v0 != (1/2, 0): " + fmt(dual.v0(0)) + ", " + fmt(dual.v0(1)));
  expect(f, std::abs(bound.beta0(0) - 1.0) <= tol && std::abs(bound.beta0(1)) <= tol,
         "beta0 != (1, 0)");
}

void criterion_entangled_vs_unentangled(std::vector<std::string>& f) {
  const EstimationProblem p = testsupport::toy_problem();
  const UnentangledSolution unent = unentangled_weights(p);
  const WeightSolution protocol = solve_protocol(p);
  const double tol = 1e-9;
  const double expected_w[] = {2.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0};
  for (int i = 0; i < 3; ++i)
    expect(f, std::abs(unent.w(i) - expected_w[i]) <= tol,
           "unentangled w component " + std::to_string(i));
  expect(f, std::abs(unent.mse_coeff - 2.0 / 3.0) <= tol,
         "unentangled MSE coeff != 2/3: " + fmt(unent.mse_coeff));
  expect(f, std::abs(protocol.u_prime * protocol.u_prime - 0.25) <= tol,
         "entangled MSE coeff != 1/4");
}

void criterion_duality_suite(std::vector<std::string>& f) {
  Rng rng(160811);
  int oracle_checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testsupport::random_identifiable_instance(rng);
    const EstimationProblem p(inst.gradient, inst.alpha);
    const double u = solve_bound(p).u;
    const double up = solve_protocol(p).u_prime;
    const double ud = solve_dual(p).u_dprime;
    const double tol = 1e-8 * std::max(1.0, u);
    expect(f, std::abs(u - up) <= tol,
           "instance " + std::to_string(trial) + ": |u - u'| = " + fmt(std::abs(u - up)));
    expect(f, std::abs(up - ud) <= tol,
           "instance " + std::to_string(trial) + ": |u' - u''| = " + fmt(std::abs(up - ud)));
    if (inst.gradient.cols() <= 4 && inst.gradient.rows() <= 12) {
      const VertexCertificate cert = enumerate_dual_vertices(inst.gradient, inst.alpha);
      expect(f, std::abs(cert.value - ud) <= 1e-8 * std::max(1.0, ud),
             "instance " + std::to_string(trial) + ": oracle mismatch " +
                 fmt(std::abs(cert.value - ud)));
      ++oracle_checked;
    }
  }
  expect(f, oracle_checked >= 100, "too few oracle-checkable instances");
}

void criterion_hoelder(std::vector<std::string>& f) {
  Rng rng(2711);
  for (int inst_i = 0; inst_i < 20; ++inst_i) {
    const auto inst = testsupport::random_identifiable_instance(rng);
    const double up = solve_protocol({inst.gradient, inst.alpha}).u_prime;
    for (int trial = 0; trial < 100; ++trial) {
      const Vector beta = random_feasible_beta(inst.alpha, rng.next_u64());
      const double norm1 = (inst.gradient * beta).lpNorm<1>();
      expect(f, norm1 > 0.0 && 1.0 / norm1 <= up + 1e-9,
             "Hoelder violation on instance " + std::to_string(inst_i));
    }
  }
}

void criterion_ghz_variance(std::vector<std::string>& f) {
  const Matrix g = testsupport::toy_gradient();
  const FieldModel model = FieldModel::explicit_linear(g, Vector());
  const Vector theta = vec2(0.3, -0.2);
  const Vector w0 = solve_protocol(testsupport::toy_problem()).w0;

  ShotPlan plan;
  plan.t = 1.0;
  plan.shots = 100000;
  plan.seed = 20250811;
  const int reps = 600;
  const ProtocolResult res = simulate_ghz_linear(model.field_vector(theta), w0, plan, reps);

  const double ratio = res.empirical_variance / res.theoretical_variance;
  expect(f, ratio >= 0.85 && ratio <= 1.15, "variance ratio out of [0.85, 1.15]: " + fmt(ratio));
  const double stderr_mean = std::sqrt(res.empirical_variance / reps);
  expect(f, std::abs(res.q_hat - 0.3) <= 4.0 * stderr_mean,
         "mean off by " + fmt(std::abs(res.q_hat - 0.3) / stderr_mean) + " standard errors");
}

void criterion_two_step_convergence(std::vector<std::string>& f) {
  const FieldModel model = nonlinear_source_model();
  const FunctionSpec q = FunctionSpec::field_at_point(vec1(1.5));
  TwoStepOptions opts;
  opts.stage_one = nonlinear_stage_one();

  ShotPlan plan;
  plan.shots = 400000;
  plan.seed = 60811;
  const std::vector<double> t_list = {1e2, 1e3, 1e4};
  const std::vector<SweepRow> rows =
      mse_convergence_sweep(model, q, kSourceTheta, t_list, 0.75, plan, 100, opts);

  // plateau: the quadrature-adjusted ideal variance at the largest t
  const SweepRow& top = rows.back();
  const double rel = top.mse_t2sq / top.plateau_reference - 1.0;
  expect(f, std::abs(rel) <= 0.15,
         "M*t2^2 off plateau by " + fmt(100.0 * rel) + "% at t = 1e4");

  // bias term drops at least like t1^(-3.5)
  std::vector<double> lx, ly;
  for (const SweepRow& r : rows) {
    lx.push_back(std::log10(r.t1));
    ly.push_back(std::log10(std::max(r.bias_sq, 1e-300)));
  }
  const double slope = least_squares_slope(lx, ly);
  expect(f, slope <= -3.5, "bias slope " + fmt(slope) + " > -3.5");
}

void criterion_fisher_no_leak(std::vector<std::string>& f) {
  Rng rng(411);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = rng.uniform_int(1, 6);
    Vector alpha(k);
    for (int j = 0; j < k; ++j) alpha(j) = rng.uniform(-3.0, 3.0);
    if (alpha.cwiseAbs().maxCoeff() < 0.1) {
      --trial;
      continue;
    }
    const Matrix f_theta = alpha * alpha.transpose();
    const BasisPair basis = build_dual_basis(alpha);
    const Matrix f_q = transform_fisher(f_theta, basis);
    for (int n = 1; n < k; ++n)
      expect(f, std::abs(f_q(0, n)) <= 1e-9, "first-row leak at trial " + std::to_string(trial));
    const int pivot = basis.permutation[0];
    const double l11 = f_theta(pivot, pivot);
    const double a1 = alpha(pivot);
    expect(f, std::abs(f_q(0, 0) - l11 / (a1 * a1)) <= 1e-9,
           "F(q)_11 != l11/a1^2 at trial " + std::to_string(trial));
  }
}

void criterion_stage_one_scaling(std::vector<std::string>& f) {
  const FieldModel model = nonlinear_source_model();
  StageOneOptions opts = nonlinear_stage_one();
  const std::vector<double> t1_list = {1e2, 1e3, 1e4};
  std::vector<double> lx, ly;
  for (std::size_t ti = 0; ti < t1_list.size(); ++ti) {
    double mse = 0.0;
    for (int r = 0; r < 30; ++r) {
      const Vector theta = stage_one_estimate(model, kSourceTheta, t1_list[ti],
                                              900000 + 1000 * ti + r, opts);
      mse += (theta - kSourceTheta).squaredNorm();
    }
    mse /= 30.0;
    lx.push_back(std::log10(t1_list[ti]));
    ly.push_back(std::log10(mse));
  }
  const double slope = least_squares_slope(lx, ly);
  expect(f, std::abs(slope + 2.0) <= 0.2, "stage-one MSE slope " + fmt(slope) + " != -2 +- 0.2");
}

void criterion_perturbation(std::vector<std::string>& f) {
  Rng rng(5511);
  int used = 0;
  while (used < 20) {
    const auto inst = testsupport::random_identifiable_instance(rng, 8, 4);
    const double base = solve_protocol({inst.gradient, inst.alpha}).u_prime;
    Matrix dg(inst.gradient.rows(), inst.gradient.cols());
    for (int i = 0; i < dg.rows(); ++i)
      for (int j = 0; j < dg.cols(); ++j) dg(i, j) = rng.uniform(-1.0, 1.0);
    Vector da(inst.alpha.size());
    for (int j = 0; j < da.size(); ++j) da(j) = rng.uniform(-1.0, 1.0);

    std::vector<double> lx, ly;
    bool degenerate = false;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const double perturbed =
          solve_protocol({inst.gradient + eps * dg, inst.alpha + eps * da}).u_prime;
      const double diff = std::abs(perturbed - base);
      if (diff < 1e-9) {
        degenerate = true;
        break;
      }
      lx.push_back(std::log10(eps));
      ly.push_back(std::log10(diff));
    }
    if (degenerate) continue;  // tie; resample
    const double slope = least_squares_slope(lx, ly);
    expect(f, slope >= 0.9,
           "perturbation slope " + fmt(slope) + " < 0.9 on instance " + std::to_string(used));
    ++used;
  }
}

void criterion_placement(std::vector<std::string>& f) {
  const FieldModel family = FieldModel::linear_basis(
      {vec1(0.0), vec1(1.0)}, {BasisFunction::monomial({0}), BasisFunction::monomial({1})});
  const FunctionSpec q = FunctionSpec::field_at_point(vec1(0.5));

  // exhaustive 100 x 100 grid oracle over the two sensor coordinates
  double grid_best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double a = i / 99.0;
      const double b = j / 99.0;
      try {
        const FieldModel cand = family.with_sensor_positions({vec1(a), vec1(b)});
        const EstimationProblem prob = build_interpolation(cand, vec1(0.5), Vector::Zero(2));
        if (!check_identifiability(prob.gradient, prob.alpha)) continue;
        grid_best = std::min(grid_best, solve_protocol(prob).u_prime);
      } catch (const Error&) {
      }
    }
  }

  PlacementOptions opts;
  opts.budget = 600;
  opts.restarts = 4;
  opts.seed = 17;
  const PlacementResult res =
      optimize_placement(family, q, Vector::Zero(2), {{0.0, 1.0}}, 2, opts);
  expect(f, std::abs(res.u_prime - grid_best) <= 1e-6,
         "placement " + fmt(res.u_prime) + " vs grid " + fmt(grid_best));
}

void criterion_determinism(std::vector<std::string>& f) {
  const char* simulate_cfg = R"({
    "model": {"kind": "explicit_linear", "gradient": [[1, 0], [0, 1], [1, 1]]},
    "function": {"kind": "linear_combination", "alpha": [1, 0]},
    "theta_true": [0.3, -0.2],
    "simulation": {"t": 1.0, "shots": 100000, "seed": 20250811, "repetitions": 100}
  })";
  const char* sweep_cfg = R"({
    "model": {"kind": "source_locations", "positions": [0.0, 1.0, 2.0, 3.0],
              "strengths": [8.0, 6.0]},
    "function": {"kind": "field_at_point", "point": 1.5},
    "theta_true": [0.4, 2.6],
    "simulation": {"t": 1.0, "shots": 100000, "seed": 60811, "repetitions": 20,
                   "p": 0.75, "t_list": [100.0, 1000.0],
                   "f_prior_bound": 32.0,
                   "newton_initial_guess": [0.55, 2.45]}
  })";

  const fs::path base = fs::temp_directory_path() / "sensornet_acceptance";
  fs::remove_all(base);
  for (const auto& [name, text] :
       std::vector<std::pair<std::string, const char*>>{{"simulate", simulate_cfg},
                                                        {"sweep", sweep_cfg}}) {
    const RunConfig cfg = parse_config_text(text);
    std::ostringstream sink;
    CliOptions a, b;
    a.out_dir = (base / (name + "_a")).string();
    b.out_dir = (base / (name + "_b")).string();
    a.quiet = b.quiet = true;
    const int rc_a = run_command(name, cfg, a, sink, sink);
    const int rc_b = run_command(name, cfg, b, sink, sink);
    expect(f, rc_a == 0 && rc_b == 0, name + " command failed");
    const std::string file = name + ".csv";
    const std::string text_a = slurp(fs::path(*a.out_dir) / file);
    expect(f, !text_a.empty() && text_a == slurp(fs::path(*b.out_dir) / file),
           name + ".csv differs between identical runs");
  }
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"1. toy golden values (u = u' = u'' = 1/2, w0, v0, beta0)", 1.0, criterion_toy_golden},
      {"2. entangled vs unentangled toy coefficients", 0.0, criterion_entangled_vs_unentangled},
      {"3. duality suite, 200 random instances + vertex oracle", 30.0, criterion_duality_suite},
      {"4. Hoelder property, 20 x 100 feasible betas", 0.0, criterion_hoelder},
      {"5. GHZ simulator variance and mean", 10.0, criterion_ghz_variance},
      {"6. two-step convergence on the nonlinear source model", 300.0,
       criterion_two_step_convergence},
      {"7. Fisher no-leak certificate, 100 random alphas", 0.0, criterion_fisher_no_leak},
      {"8. stage-one MSE scaling (slope -2 +- 0.2)", 0.0, criterion_stage_one_scaling},
      {"9. perturbation stability (slope >= 0.9)", 0.0, criterion_perturbation},
      {"10. placement vs 100x100 grid oracle", 10.0, criterion_placement},
      {"11. determinism: byte-identical CSV for fixed seeds", 0.0, criterion_determinism},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    std::vector<std::string> failures;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(failures);
    } catch (const std::exception& e) {
      failures.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && elapsed > c.time_limit_s)
      failures.push_back("runtime " + fmt(elapsed) + " s exceeds " + fmt(c.time_limit_s) + " s");

    if (failures.empty()) {
      std::printf("[PASS] %s (%.2f s)\n", c.name.c_str(), elapsed);
    } else {
      ++failed;
      std::printf("[FAIL] %s (%.2f s)\n", c.name.c_str(), elapsed);
      for (const std::string& msg : failures)
        std::printf("       - %s\n", msg.c_str());
    }
  }
  if (failed == 0) std::printf("all %zu criteria passed\n", criteria.size());
  return failed;
}
