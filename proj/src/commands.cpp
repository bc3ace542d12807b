#include "sensornet/commands.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <vector>

#include "sensornet/estimation.hpp"
#include "sensornet/oracle.hpp"

namespace sensornet {

namespace {

// 17 significant digits reproduce doubles exactly.
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_vec(const Vector& v) {
  std::string s = "[";
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v(i));
    s += buf;
  }
  return s + "]";
}

std::ofstream open_csv(const RunConfig& config, const CliOptions& cli,
                       const std::string& name) {
  const std::string dir = cli.out_dir ? *cli.out_dir : config.output_dir;
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  return out;
}

ShotPlan effective_plan(const RunConfig& config, const CliOptions& cli) {
  ShotPlan plan = config.plan;
  if (cli.seed) plan.seed = *cli.seed;
  return plan;
}

EstimationProblem instance_from(const RunConfig& config) {
  if (!config.function) throw ConfigError("$.function: required by this command");
  const Vector ref = config.reference_point();
  return build_problem(config.model, *config.function, ref);
}

}  // namespace

int cmd_solve(const RunConfig& config, const CliOptions& cli, std::ostream& out) {
  const EstimationProblem problem = instance_from(config);

  if (config.require_full_rank && !has_full_rank(problem.gradient))
    throw RankDeficientError("gradient matrix is rank deficient at the reference point");
  if (!check_identifiability(problem.gradient, problem.alpha))
    throw InconsistentConstraintError(
        "alpha is outside the row space of G: q is not estimable here");

  const BoundSolution bound = solve_bound(problem);
  const WeightSolution protocol = solve_protocol(problem);
  const DualSolution dual = solve_dual(problem);
  const UnentangledSolution unent = unentangled_weights(problem);

  if (!cli.quiet) {
    out << "instance: d=" << problem.sensor_count() << " k=" << problem.param_dim() << "\n";
    out << "u         = " << fmt17(bound.u) << "\n";
    out << "u_prime   = " << fmt17(protocol.u_prime) << "\n";
    out << "u_dprime  = " << fmt17(dual.u_dprime) << "\n";
    out << "w0        = " << fmt_vec(protocol.w0) << "\n";
    out << "v0        = " << fmt_vec(dual.v0) << "\n";
    out << "beta0     = " << fmt_vec(bound.beta0) << "\n";
    out << "unentangled_w         = " << fmt_vec(unent.w) << "\n";
    out << "entangled_mse_coeff   = " << fmt17(protocol.u_prime * protocol.u_prime) << "\n";
    out << "unentangled_mse_coeff = " << fmt17(unent.mse_coeff) << "\n";
  }

  std::ofstream csv = open_csv(config, cli, "solve.csv");
  csv << "name,index,value\n";
  csv << "u,0," << fmt17(bound.u) << "\n";
  csv << "u_prime,0," << fmt17(protocol.u_prime) << "\n";
  csv << "u_dprime,0," << fmt17(dual.u_dprime) << "\n";
  for (int i = 0; i < protocol.w0.size(); ++i)
    csv << "w0," << i << "," << fmt17(protocol.w0(i)) << "\n";
  for (int i = 0; i < dual.v0.size(); ++i)
    csv << "v0," << i << "," << fmt17(dual.v0(i)) << "\n";
  for (int i = 0; i < bound.beta0.size(); ++i)
    csv << "beta0," << i << "," << fmt17(bound.beta0(i)) << "\n";
  for (int i = 0; i < unent.w.size(); ++i)
    csv << "unentangled_w," << i << "," << fmt17(unent.w(i)) << "\n";
  csv << "entangled_mse_coeff,0," << fmt17(protocol.u_prime * protocol.u_prime) << "\n";
  csv << "unentangled_mse_coeff,0," << fmt17(unent.mse_coeff) << "\n";
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, const CliOptions& cli, std::ostream& out) {
  if (!config.theta_true) throw ConfigError("$.theta_true: required by 'simulate'");
  const EstimationProblem problem = instance_from(config);
  const ShotPlan plan = effective_plan(config, cli);

  const WeightSolution protocol = solve_protocol(problem);
  const UnentangledSolution unent = unentangled_weights(problem);
  const Vector f = config.model.field_vector(*config.theta_true);

  if (config.phase_prior_bound) {
    if (plan.t * *config.phase_prior_bound >= M_PI)
      throw PhaseWrapError("declared prior bound wraps: t * bound >= pi");
  }

  const ProtocolResult ghz =
      simulate_ghz_linear(f, protocol.w0, plan, config.repetitions);
  const ProtocolResult baseline =
      simulate_unentangled(f, unent.w, plan, config.repetitions);

  std::ofstream csv = open_csv(config, cli, "simulate.csv");
  csv << "protocol,run,q_hat,error\n";
  const double q_true = protocol.w0.dot(f);
  for (std::size_t r = 0; r < ghz.samples.size(); ++r)
    csv << "ghz," << r << "," << fmt17(ghz.samples[r]) << ","
        << fmt17(ghz.samples[r] - q_true) << "\n";
  const double q_true_unent = unent.w.dot(f);
  for (std::size_t r = 0; r < baseline.samples.size(); ++r)
    csv << "unentangled," << r << "," << fmt17(baseline.samples[r]) << ","
        << fmt17(baseline.samples[r] - q_true_unent) << "\n";

  if (!cli.quiet) {
    out << "runs=" << config.repetitions << " shots=" << plan.shots << " t=" << plan.t
        << "\n";
    out << "ghz:         mean=" << fmt17(ghz.q_hat)
        << " empirical_variance=" << fmt17(ghz.empirical_variance)
        << " theoretical_variance=" << fmt17(ghz.theoretical_variance);
    if (ghz.theoretical_variance > 0.0)
      out << " ratio=" << fmt17(ghz.empirical_variance / ghz.theoretical_variance);
    out << "\n";
    out << "unentangled: mean=" << fmt17(baseline.q_hat)
        << " empirical_variance=" << fmt17(baseline.empirical_variance)
        << " theoretical_variance=" << fmt17(baseline.theoretical_variance);
    if (baseline.theoretical_variance > 0.0)
      out << " ratio=" << fmt17(baseline.empirical_variance / baseline.theoretical_variance);
    out << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, const CliOptions& cli, std::ostream& out) {
  if (!config.theta_true) throw ConfigError("$.theta_true: required by 'sweep'");
  if (!config.function) throw ConfigError("$.function: required by 'sweep'");
  if (config.t_list.empty()) throw ConfigError("$.simulation.t_list: required by 'sweep'");
  const ShotPlan plan = effective_plan(config, cli);

  TwoStepOptions options;
  options.stage_one = config.stage_one;
  const std::vector<SweepRow> rows =
      mse_convergence_sweep(config.model, *config.function, *config.theta_true,
                            config.t_list, config.p_exponent, plan, config.repetitions,
                            options);

  std::ofstream csv = open_csv(config, cli, "sweep.csv");
  csv << "t,t1,t2,repetitions,mse,bias_sq,mse_tsq,mse_t2sq,plateau_reference\n";
  for (const SweepRow& r : rows)
    csv << fmt17(r.t) << "," << fmt17(r.t1) << "," << fmt17(r.t2) << "," << r.repetitions
        << "," << fmt17(r.mse) << "," << fmt17(r.bias_sq) << "," << fmt17(r.mse_tsq) << ","
        << fmt17(r.mse_t2sq) << "," << fmt17(r.plateau_reference) << "\n";

  if (!cli.quiet) {
    for (const SweepRow& r : rows)
      out << "t=" << r.t << " mse=" << fmt17(r.mse) << " mse*t2^2=" << fmt17(r.mse_t2sq)
          << " plateau_ref=" << fmt17(r.plateau_reference) << "\n";
  }
  return kExitOk;
}

int cmd_place(const RunConfig& config, const CliOptions& cli, std::ostream& out) {
  if (!config.placement) throw ConfigError("$.placement: required by 'place'");
  if (!config.function) throw ConfigError("$.function: required by 'place'");
  PlacementOptions options = *config.placement;
  if (cli.seed) options.seed = *cli.seed;

  const PlacementResult result =
      optimize_placement(config.model, *config.function, config.reference_point(),
                         config.placement_bounds, config.placement_sensors, options);

  std::ofstream csv = open_csv(config, cli, "place.csv");
  csv << "iteration,best_u_prime\n";
  for (const auto& [it, val] : result.history)
    csv << it << "," << fmt17(val) << "\n";

  if (!cli.quiet) {
    out << "u_prime = " << fmt17(result.u_prime) << "\n";
    for (std::size_t i = 0; i < result.positions.size(); ++i)
      out << "sensor[" << i << "] = " << fmt_vec(result.positions[i]) << "\n";
    if (result.budget_exhausted) out << "note: evaluation budget exhausted\n";
  }
  return kExitOk;
}

int run_command(const std::string& name, const RunConfig& config, const CliOptions& cli,
                std::ostream& out, std::ostream& err) {
  try {
    if (name == "solve") return cmd_solve(config, cli, out);
    if (name == "simulate") return cmd_simulate(config, cli, out);
    if (name == "sweep") return cmd_sweep(config, cli, out);
    if (name == "place") return cmd_place(config, cli, out);
    err << "error: unknown command '" << name << "'\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnboundedPrecisionError& e) {
    err << "not estimable: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InconsistentConstraintError& e) {
    err << "not estimable: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const RankDeficientError& e) {
    err << "not estimable: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const PhaseWrapError& e) {
    err << "simulation failure: " << e.what() << "\n";
    return kExitSimulation;
  } catch (const NewtonDivergenceError& e) {
    err << "simulation failure: " << e.what() << "\n";
    return kExitSimulation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitSimulation;
  }
}

}  // namespace sensornet
