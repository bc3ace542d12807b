#pragma once

#include <cstdint>
#include <vector>

#include "sensornet/applications.hpp"
#include "sensornet/estimation.hpp"
#include "sensornet/field_model.hpp"
#include "sensornet/types.hpp"

namespace sensornet {

// Shot budget for one protocol run. `quadrature_split` is the fraction of
// shots spent on the pi/2-phase-advanced parity, which resolves the sign of
// the phase; the remaining shots measure the plain parity and set the
// estimator variance. With the default split of 1/2 the theoretical variance
// carries the usual factor-2 quadrature adjustment.
struct ShotPlan {
  double t = 1.0;       // evolution time per shot, inverse field units
  int shots = 1000;     // mu, total per run
  std::uint64_t seed = 0;
  double quadrature_split = 0.5;

  int sin_shots() const;
  int cos_shots() const;
};

// Outcome of `repetitions` independent runs of a protocol. `q_hat` is the
// mean of the per-run estimates; `empirical_variance` their unbiased sample
// variance (zero for a single run); `theoretical_variance` the per-run
// prediction; `shots_used` the per-run shot count.
struct ProtocolResult {
  double q_hat = 0.0;
  double empirical_variance = 0.0;
  double theoretical_variance = 0.0;
  double bias_estimate = 0.0;
  int shots_used = 0;
  std::vector<double> samples;
};

// GHZ linear-combination protocol. The d-qubit GHZ state with per-qubit flip
// times t(1+w_i)/2 accumulates exactly the relative phase t (w.f)/|w|_inf, so
// the simulation reduces losslessly to one phase: parity expectation
// cos(t lambda), conjugate parity sin(t lambda). The phase magnitude comes
// from the parity mean, its sign from the conjugate parity. Throws PhaseWrap
// when |t (w/|w|_inf) . f| >= pi.
ProtocolResult simulate_ghz_linear(const Vector& f, const Vector& w, const ShotPlan& plan,
                                   int repetitions = 1);

// No-entanglement baseline: each sensor runs an independent single-qubit
// two-quadrature phase estimation of f_i for the full time budget;
// q_hat = w . f_hat. Throws PhaseWrap per component.
ProtocolResult simulate_unentangled(const Vector& f, const Vector& w, const ShotPlan& plan,
                                    int repetitions = 1);

struct StageOneOptions {
  double f_prior_bound = 4.0;  // prior |f_i| bound fixing the shortest ladder time
  int shots_per_round = 32;
  int max_rounds = 60;
  Vector newton_initial_guess;  // required for SourceLocations models
  int max_newton_iterations = 50;
};

// Multi-scale phase estimation of every f_i with geometrically doubling
// interrogation times inside budget t1 (per-component MSE ~ c/t1^2), then
// theta recovered from the field estimates: minimum-norm least squares for
// constant-gradient kinds, damped Gauss-Newton for SourceLocations.
Vector stage_one_estimate(const FieldModel& model, const Vector& theta_true, double t1,
                          std::uint64_t seed, const StageOneOptions& options = {});

// Field-to-parameter inversion used by stage one; exposed for zero-noise
// checks.
Vector recover_theta(const FieldModel& model, const Vector& field_values,
                     const StageOneOptions& options = {});

struct TwoStepOptions {
  StageOneOptions stage_one;
};

// Two-step protocol for analytic fields and targets: stage one spends
// t1 = t^p on an initial estimate, stage two measures the linearization of q
// about it via the GHZ protocol over t2 = t - t1. Stage-two shots interrogate
// for t2/sqrt(mu) each, so the run realizes the ideal t2-long interrogation
// variance, and the stage-one prediction selects the phase branch.
ProtocolResult two_step_protocol(const FieldModel& model, const FunctionSpec& q_spec,
                                 const Vector& theta_true, double t, double p,
                                 const ShotPlan& plan, int repetitions = 1,
                                 const TwoStepOptions& options = {});

struct SweepRow {
  double t = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  int repetitions = 0;
  double mse = 0.0;
  double bias_sq = 0.0;
  double mse_tsq = 0.0;           // mse * t^2
  double mse_t2sq = 0.0;          // mse * t2^2
  double plateau_reference = 0.0; // quadrature-adjusted |w0|_inf^2 at theta_true
};

// Repeated two-step runs per t; mean squared error against q(theta_true).
std::vector<SweepRow> mse_convergence_sweep(const FieldModel& model,
                                            const FunctionSpec& q_spec,
                                            const Vector& theta_true,
                                            const std::vector<double>& t_list, double p,
                                            const ShotPlan& plan, int repetitions,
                                            const TwoStepOptions& options = {});

}  // namespace sensornet
