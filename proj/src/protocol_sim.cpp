#include "sensornet/protocol_sim.hpp"

#include <algorithm>
#include <cmath>

#include "sensornet/rng.hpp"

namespace sensornet {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

// Stream tags under the per-repetition stream: tag 0 feeds stage one, tag 1
// the GHZ parity sampler, tag 1 + (i << 32) the i-th unentangled sensor.
// Sensor 0 therefore shares the GHZ stream and the d = 1 baseline reproduces
// simulate_ghz_linear bit for bit.
constexpr std::uint64_t kStageOneTag = 0;
constexpr std::uint64_t kParityTag = 1;

std::uint64_t rep_stream(std::uint64_t seed, int rep) {
  return Rng::derive_stream(seed, static_cast<std::uint64_t>(rep));
}

void validate_plan(const ShotPlan& plan) {
  if (plan.t <= 0.0) throw DimensionError("shot plan needs t > 0");
  if (plan.shots < 2) throw DimensionError("shot plan needs at least 2 shots");
  if (!(plan.quadrature_split > 0.0 && plan.quadrature_split < 1.0))
    throw DimensionError("quadrature split must lie strictly between 0 and 1");
  if (plan.sin_shots() < 1 || plan.cos_shots() < 1)
    throw DimensionError("both quadratures need at least one shot");
}

// Mean of n outcomes +-1 with P(+1) = (1 + e)/2.
double sampled_parity_mean(int n, double expectation, Rng& rng) {
  const double p_plus = 0.5 * (1.0 + expectation);
  int plus = 0;
  for (int s = 0; s < n; ++s)
    if (rng.uniform() < p_plus) ++plus;
  return (2.0 * plus - n) / static_cast<double>(n);
}

// One two-quadrature phase estimate in (-pi, pi]: magnitude from the plain
// parity, sign from the advanced parity.
double sampled_phase(double phi, int cos_shots, int sin_shots, Rng& rng) {
  const double c_hat = sampled_parity_mean(cos_shots, std::cos(phi), rng);
  const double s_hat = sampled_parity_mean(sin_shots, std::sin(phi), rng);
  const double magnitude = std::acos(std::clamp(c_hat, -1.0, 1.0));
  return s_hat < 0.0 ? -magnitude : magnitude;
}

// Phase sample unwrapped to the branch nearest tau * lambda_ref.
double sampled_lambda(double lambda_true, double lambda_ref, double tau, int cos_shots,
                      int sin_shots, Rng& rng) {
  const double phi_hat = sampled_phase(tau * lambda_true, cos_shots, sin_shots, rng);
  const double branch = std::round((tau * lambda_ref - phi_hat) / kTwoPi);
  return (phi_hat + kTwoPi * branch) / tau;
}

ProtocolResult reduce_samples(std::vector<double> samples, double truth,
                              double theoretical_variance, int shots_used) {
  ProtocolResult out;
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  if (samples.size() > 1) {
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(samples.size() - 1);
  }
  out.q_hat = mean;
  out.empirical_variance = var;
  out.theoretical_variance = theoretical_variance;
  out.bias_estimate = mean - truth;
  out.shots_used = shots_used;
  out.samples = std::move(samples);
  return out;
}

// Multi-scale single-sensor phase estimation within total interrogation
// budget t1. Doubling ladder: the top time is t1/(2n) so the whole ladder
// fits the budget; each round spends n shots split across both quadratures
// and the running estimate selects the branch of the next round.
double rpe_estimate(double f, double t1, const StageOneOptions& opt, Rng& rng) {
  if (t1 <= 0.0) throw DimensionError("stage-one budget must be positive");
  if (opt.shots_per_round < 4) throw DimensionError("need at least 4 shots per round");
  if (opt.f_prior_bound <= 0.0) throw DimensionError("f prior bound must be positive");

  const double tau0_bound = kPi / (2.0 * opt.f_prior_bound);
  int n = opt.shots_per_round;

  const double tau_top_target = t1 / (2.0 * n);
  int rounds = 1;
  double tau0 = tau0_bound;
  if (tau_top_target > tau0_bound) {
    rounds = 1 + static_cast<int>(std::ceil(std::log2(tau_top_target / tau0_bound)));
    rounds = std::min(rounds, opt.max_rounds);
    const double top = std::ldexp(1.0, rounds - 1);  // 2^(rounds-1)
    tau0 = std::min(tau0_bound, tau_top_target / top);
  } else {
    // budget too small for a ladder: one round, shots shrunk to fit
    n = std::clamp(static_cast<int>(t1 / tau0_bound), 2, n);
  }
  const int nc = n / 2;
  const int ns = n - nc;

  double f_hat = 0.0;
  double tau = tau0;
  for (int j = 0; j < rounds; ++j, tau *= 2.0) {
    const double c_hat = sampled_parity_mean(nc, std::cos(tau * f), rng);
    const double s_hat = sampled_parity_mean(ns, std::sin(tau * f), rng);
    const double psi = std::atan2(s_hat, c_hat);
    if (j == 0) {
      f_hat = psi / tau;
    } else {
      const double branch = std::round((tau * f_hat - psi) / kTwoPi);
      f_hat = (psi + kTwoPi * branch) / tau;
    }
  }
  return f_hat;
}

Vector stage_one_field_estimates(const FieldModel& model, const Vector& f_true, double t1,
                                 std::uint64_t stream, const StageOneOptions& opt) {
  Vector f_hat(model.sensor_count());
  for (int i = 0; i < model.sensor_count(); ++i) {
    Rng rng(Rng::derive_stream(stream, static_cast<std::uint64_t>(i)));
    f_hat(i) = rpe_estimate(f_true(i), t1, opt, rng);
  }
  return f_hat;
}

}  // namespace

int ShotPlan::sin_shots() const {
  return static_cast<int>(std::lround(quadrature_split * shots));
}

int ShotPlan::cos_shots() const { return shots - sin_shots(); }

ProtocolResult simulate_ghz_linear(const Vector& f, const Vector& w, const ShotPlan& plan,
                                   int repetitions) {
  validate_plan(plan);
  if (repetitions < 1) throw DimensionError("repetitions must be positive");
  if (f.size() != w.size()) throw DimensionError("f and w lengths differ");
  const double scale = w.cwiseAbs().maxCoeff();
  if (scale <= 0.0) throw DimensionError("weight vector must be nonzero");

  const Vector w_bar = w / scale;
  const double lambda = w_bar.dot(f);
  if (std::abs(plan.t * lambda) >= kPi)
    throw PhaseWrapError("prior bound violated: |t (w/|w|_inf) . f| >= pi");

  const int nc = plan.cos_shots();
  const int ns = plan.sin_shots();
  std::vector<double> samples(repetitions);
  for (int r = 0; r < repetitions; ++r) {
    Rng rng(Rng::derive_stream(rep_stream(plan.seed, r), kParityTag));
    samples[r] = scale * sampled_lambda(lambda, 0.0, plan.t, nc, ns, rng);
  }
  const double theoretical = (scale * scale) / (static_cast<double>(nc) * plan.t * plan.t);
  return reduce_samples(std::move(samples), w.dot(f), theoretical, plan.shots);
}

ProtocolResult simulate_unentangled(const Vector& f, const Vector& w, const ShotPlan& plan,
                                    int repetitions) {
  validate_plan(plan);
  if (repetitions < 1) throw DimensionError("repetitions must be positive");
  if (f.size() != w.size()) throw DimensionError("f and w lengths differ");
  const int d = static_cast<int>(f.size());
  for (int i = 0; i < d; ++i)
    if (std::abs(plan.t * f(i)) >= kPi)
      throw PhaseWrapError("prior bound violated at sensor " + std::to_string(i));

  const int nc = plan.cos_shots();
  const int ns = plan.sin_shots();
  std::vector<double> samples(repetitions);
  for (int r = 0; r < repetitions; ++r) {
    const std::uint64_t stream = rep_stream(plan.seed, r);
    double q = 0.0;
    for (int i = 0; i < d; ++i) {
      const std::uint64_t tag = kParityTag + (static_cast<std::uint64_t>(i) << 32);
      Rng rng(Rng::derive_stream(stream, tag));
      q += w(i) * sampled_lambda(f(i), 0.0, plan.t, nc, ns, rng);
    }
    samples[r] = q;
  }
  const double theoretical =
      w.squaredNorm() / (static_cast<double>(nc) * plan.t * plan.t);
  return reduce_samples(std::move(samples), w.dot(f), theoretical, plan.shots);
}

Vector recover_theta(const FieldModel& model, const Vector& field_values,
                     const StageOneOptions& options) {
  if (field_values.size() != model.sensor_count())
    throw DimensionError("field vector length does not match sensor count");

  if (model.gradient_is_constant()) {
    const Matrix g =
        model.gradient_matrix(Vector::Zero(model.param_dim())).entries;
    return g.completeOrthogonalDecomposition().solve(field_values - model.offset());
  }

  // Damped Gauss-Newton from the configured initial guess. Noisy field data
  // makes the system inconsistent, so convergence means a stationary point of
  // the least-squares objective (vanishing step), not a vanishing residual.
  if (options.newton_initial_guess.size() != model.param_dim())
    throw DimensionError("SourceLocations inversion needs an initial guess");
  Vector theta = options.newton_initial_guess;
  double residual_norm = (field_values - model.field_vector(theta)).norm();
  for (int iter = 0; iter < options.max_newton_iterations; ++iter) {
    const Matrix jac = model.gradient_matrix(theta).entries;
    const Vector residual = field_values - model.field_vector(theta);
    const Vector delta = jac.completeOrthogonalDecomposition().solve(residual);
    const double step_tol = 1e-10 * (1.0 + theta.norm());
    if (delta.norm() <= step_tol) return theta;
    double step = 1.0;
    bool accepted = false;
    while (step > 1e-8) {
      const Vector candidate = theta + step * delta;
      try {
        const double cand_norm = (field_values - model.field_vector(candidate)).norm();
        if (cand_norm < residual_norm) {
          theta = candidate;
          residual_norm = cand_norm;
          accepted = true;
          break;
        }
      } catch (const SingularGeometryError&) {
        // step landed on a sensor; shrink
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (delta.norm() <= 1e-6 * (1.0 + theta.norm())) return theta;
      throw NewtonDivergenceError("Gauss-Newton stalled away from a solution");
    }
  }
  throw NewtonDivergenceError("Gauss-Newton did not converge");
}

Vector stage_one_estimate(const FieldModel& model, const Vector& theta_true, double t1,
                          std::uint64_t seed, const StageOneOptions& options) {
  const Matrix g = model.gradient_matrix(theta_true).entries;
  if (!has_full_rank(g))
    throw RankDeficientError("gradient matrix is rank deficient at theta_true");
  const Vector f_true = model.field_vector(theta_true);
  const Vector f_hat = stage_one_field_estimates(model, f_true, t1, seed, options);
  return recover_theta(model, f_hat, options);
}

ProtocolResult two_step_protocol(const FieldModel& model, const FunctionSpec& q_spec,
                                 const Vector& theta_true, double t, double p,
                                 const ShotPlan& plan, int repetitions,
                                 const TwoStepOptions& options) {
  validate_plan(plan);
  if (repetitions < 1) throw DimensionError("repetitions must be positive");
  if (!(p > 0.5 && p < 1.0)) throw DimensionError("exponent p must lie in (1/2, 1)");
  const double t1 = std::pow(t, p);
  const double t2 = t - t1;
  if (t2 <= 0.0) throw DimensionError("budget too small: t^p >= t");

  const double q_true = eval_function(model, q_spec, theta_true);
  const Vector f_true = model.field_vector(theta_true);

  const int nc = plan.cos_shots();
  const int ns = plan.sin_shots();
  const double tau = t2 / std::sqrt(static_cast<double>(plan.shots));

  std::vector<double> samples(repetitions);
  for (int r = 0; r < repetitions; ++r) {
    const std::uint64_t stream = rep_stream(plan.seed, r);

    // Stage one, with a single retry on failure.
    Vector theta_tilde;
    Vector alpha_tilde;
    Matrix g_tilde;
    Vector w_tilde;
    for (int attempt = 0;; ++attempt) {
      try {
        std::uint64_t s1 = Rng::derive_stream(stream, kStageOneTag);
        if (attempt > 0) s1 = Rng::derive_stream(s1, 0x5EED);
        const Vector f_hat = stage_one_field_estimates(
            model, f_true, t1, s1, options.stage_one);
        theta_tilde = recover_theta(model, f_hat, options.stage_one);
        g_tilde = model.gradient_matrix(theta_tilde).entries;
        alpha_tilde = function_gradient(model, q_spec, theta_tilde);
        w_tilde = solve_protocol(EstimationProblem(g_tilde, alpha_tilde)).w0;
        break;
      } catch (const Error&) {
        if (attempt >= 1) throw;
      }
    }

    const double scale = w_tilde.cwiseAbs().maxCoeff();
    if (scale <= 0.0) throw Error("two-step protocol produced zero weights");
    const Vector w_bar = w_tilde / scale;

    const Vector f_at_tilde = model.field_vector(theta_tilde);
    // C_i = f_i(theta~) - theta~ . grad f_i(theta~)
    const Vector c_offset = f_at_tilde - g_tilde * theta_tilde;

    const double lambda_true = w_bar.dot(f_true);
    const double lambda_pred = w_bar.dot(f_at_tilde);

    Rng rng(Rng::derive_stream(stream, kParityTag));
    const double lambda_hat = sampled_lambda(lambda_true, lambda_pred, tau, nc, ns, rng);

    const double q_tilde = eval_function(model, q_spec, theta_tilde);
    samples[r] = q_tilde + (scale * lambda_hat - w_tilde.dot(c_offset)) -
                 alpha_tilde.dot(theta_tilde);
  }

  // Reference prediction at the true parameters: the quadrature-adjusted
  // ideal t2-interrogation variance.
  const Matrix g_true = model.gradient_matrix(theta_true).entries;
  const Vector alpha_true = function_gradient(model, q_spec, theta_true);
  const double u_prime = solve_protocol(EstimationProblem(g_true, alpha_true)).u_prime;
  const double quad_adjust = static_cast<double>(plan.shots) / static_cast<double>(nc);
  const double theoretical = quad_adjust * u_prime * u_prime / (t2 * t2);

  return reduce_samples(std::move(samples), q_true, theoretical, plan.shots);
}

std::vector<SweepRow> mse_convergence_sweep(const FieldModel& model,
                                            const FunctionSpec& q_spec,
                                            const Vector& theta_true,
                                            const std::vector<double>& t_list, double p,
                                            const ShotPlan& plan, int repetitions,
                                            const TwoStepOptions& options) {
  if (t_list.empty()) throw DimensionError("sweep needs at least one t");
  for (std::size_t i = 1; i < t_list.size(); ++i)
    if (t_list[i] <= t_list[i - 1])
      throw DimensionError("sweep times must be strictly increasing");

  const double q_true = eval_function(model, q_spec, theta_true);

  std::vector<SweepRow> rows;
  rows.reserve(t_list.size());
  for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
    ShotPlan local = plan;
    local.seed = Rng::derive_stream(plan.seed, 0xABC0 + static_cast<std::uint64_t>(ti));
    const ProtocolResult res = two_step_protocol(model, q_spec, theta_true, t_list[ti], p,
                                                 local, repetitions, options);
    double mse = 0.0;
    for (double s : res.samples) mse += (s - q_true) * (s - q_true);
    mse /= static_cast<double>(res.samples.size());

    SweepRow row;
    row.t = t_list[ti];
    row.t1 = std::pow(t_list[ti], p);
    row.t2 = row.t - row.t1;
    row.repetitions = repetitions;
    row.mse = mse;
    row.bias_sq = res.bias_estimate * res.bias_estimate;
    row.mse_tsq = mse * row.t * row.t;
    row.mse_t2sq = mse * row.t2 * row.t2;
    row.plateau_reference = res.theoretical_variance * row.t2 * row.t2;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sensornet
