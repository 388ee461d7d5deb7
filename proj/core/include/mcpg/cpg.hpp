#pragma once

// Two-neuron chaotic oscillator with period-p chaos control.
//
//   x_i(t+1) = sigma(theta_i + sum_j w_ij x_j(t) + c_i(t)),  i in {1, 2}
//
// With the default weights the uncontrolled map (c == 0) is chaotic. A
// controller evaluated every p steps feeds back c_i = g * sum_j w_ij d_j and
// pins the output onto one of the unstable period-p orbits embedded in the
// attractor.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace mcpg {

struct CpgParams {
  double w11 = -22.0;
  double w12 = 5.9;
  double w21 = -6.6;
  double w22 = 0.0;
  double theta1 = -3.4;
  double theta2 = 3.8;

  /// Throws InvalidArgument if any field is not finite.
  void validate() const;

  friend bool operator==(const CpgParams&, const CpgParams&) = default;
};

struct CpgState {
  double x1 = 0.1;
  double x2 = 0.2;
  std::int64_t t = 0;

  friend bool operator==(const CpgState&, const CpgState&) = default;
};

/// Initial state used when an experiment does not provide one.
inline constexpr CpgState kDefaultInit{0.1, 0.2, 0};

/// One time step of the controller clock, in seconds (27 Hz update rate).
inline constexpr double kStepSeconds = 1.0 / 27.0;

struct ControlInput {
  double c1 = 0.0;
  double c2 = 0.0;

  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

/// Activity difference between two states, d_j = x_j(now) - x_j(reference).
struct ActivityDelta {
  double d1 = 0.0;
  double d2 = 0.0;

  double squared_norm() const { return d1 * d1 + d2 * d2; }
};

ActivityDelta difference(const CpgState& now, const CpgState& before);

double sigmoid(double a);

/// Pre-sigmoid activations theta_i + sum_j w_ij x_j + c_i.
std::array<double, 2> activation(const CpgState& s, const CpgParams& params,
                                 ControlInput c = {});

/// Advances the map by one step. Throws InvalidArgument on non-finite input.
CpgState step(const CpgState& s, const CpgParams& params, ControlInput c = {});

/// c_i = gain * sum_j w_ij d_j.
ControlInput feedback_input(double gain, const CpgParams& params, ActivityDelta delta);

/// mu + lambda * (d1^2 + d2^2) / p. Throws InvalidArgument for p < 1,
/// lambda <= 0 or non-finite input.
double update_mu(double mu, double lambda, int period, ActivityDelta delta);

/// Unstable period-p orbit of the uncontrolled map.
struct PeriodicOrbit {
  int period = 0;
  /// points[k + 1] = f(points[k]); f(points[p - 1]) = points[0].
  std::vector<std::array<double, 2>> points;
  /// Largest |eigenvalue| of the p-step Jacobian product along the orbit.
  double multiplier = 0.0;
};

/// Locates a period-p orbit (minimal period exactly p) by Newton refinement of
/// f^p(z) = z, seeded from points of the free attractor. Among the orbits found
/// the least unstable one is returned. Throws OrbitNotFound if none exists
/// (e.g. p = 3 for the default weights).
PeriodicOrbit find_periodic_orbit(const CpgParams& params, int period);

enum class ControlLaw {
  /// Feedback against the nearest point of the period-p orbit (unit gain);
  /// stabilizes every gait period of the default map.
  kOrbitReferenced,
  /// Feedback against the state p steps back with adaptive gain mu. Only
  /// orbits whose unstable multiplier lies in (-3, -1) can be captured this
  /// way; kept for comparison studies.
  kDelayedFeedback,
};

struct ControlConfig {
  int period = 4;
  double lambda = 0.05;
  ControlLaw law = ControlLaw::kOrbitReferenced;
  bool enabled = true;
};

/// Period-p chaos controller: p-step history buffer, adaptive strength mu and
/// the checkpoint clock. Checkpoints fall on local steps k = 0 (mod p), counted
/// from the moment control was (re)enabled, once p states of history exist.
class ChaosControl {
 public:
  ChaosControl(const CpgParams& params, ControlConfig config);

  int period() const { return config_.period; }
  double lambda() const { return config_.lambda; }
  double mu() const { return mu_; }
  bool enabled() const { return config_.enabled; }
  ControlLaw law() const { return config_.law; }
  const ControlConfig& config() const { return config_; }

  /// Enabling restarts the checkpoint clock; disabling leaves mu untouched.
  void set_enabled(bool on);
  /// Clears mu, the history buffer and the checkpoint clock.
  void reset();
  /// Changes the target period; resets like reset().
  void set_period(int period);

  std::size_t history_size() const { return history_.size(); }
  bool ready() const { return history_.size() == static_cast<std::size_t>(config_.period); }
  /// State p steps before the newest observation. Throws NotReady.
  const CpgState& state_p_ago() const;

  /// Delayed-feedback input mu * W * (now - state_p_ago()) without side
  /// effects. Returns zero when disabled, throws NotReady when fewer than p
  /// states have been observed.
  ControlInput control_input(const CpgParams& params, const CpgState& now) const;

  /// Drives one time step: evaluates the control law if `now` sits on a
  /// checkpoint (updating mu from the activity difference), records `now` in
  /// the history and returns the input to apply when stepping from `now`.
  ControlInput on_step(const CpgParams& params, const CpgState& now);

  /// Residual d1^2 + d2^2 measured at the most recent checkpoint.
  std::optional<double> last_residual() const { return last_residual_; }
  const PeriodicOrbit* orbit() const { return orbit_.get(); }

 private:
  void ensure_orbit(const CpgParams& params);
  std::size_t nearest_orbit_point(const CpgState& now) const;

  ControlConfig config_;
  double mu_ = 0.0;
  std::int64_t clock_ = 0;
  std::vector<CpgState> history_;  // ring buffer, capacity p
  std::size_t head_ = 0;           // oldest entry once full
  std::optional<double> last_residual_;
  CpgParams orbit_params_;
  std::shared_ptr<const PeriodicOrbit> orbit_;
};

/// One row of a controlled trajectory: the state x(t), the input that produced
/// it (zero at t = 0) and the control strength after that step.
struct TraceRow {
  std::int64_t t = 0;
  double x1 = 0.0;
  double x2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double mu = 0.0;
};

/// Single oscillator plus its controller.
class ControlledCpg {
 public:
  ControlledCpg(const CpgParams& params, ControlConfig config, CpgState init = kDefaultInit);

  /// Advances one step and returns the new row.
  TraceRow advance();

  const CpgState& state() const { return state_; }
  const CpgParams& params() const { return params_; }
  ChaosControl& control() { return control_; }
  const ChaosControl& control() const { return control_; }

 private:
  CpgParams params_;
  CpgState state_;
  ChaosControl control_;
};

/// Runs `steps` controlled iterations from `init` and returns steps + 1 rows.
/// Periods outside the gait set are allowed here for analysis.
std::vector<TraceRow> run_controlled(const CpgParams& params, int period, int steps,
                                     CpgState init = kDefaultInit,
                                     ControlLaw law = ControlLaw::kOrbitReferenced,
                                     double lambda = 0.05);

std::vector<double> x1_series(std::span<const TraceRow> rows);
std::vector<double> x2_series(std::span<const TraceRow> rows);

/// Smallest q >= 1 with |trace[k] - trace[k - q]| < tol over the final third
/// of the trace, or nullopt when no q <= size / 3 qualifies. Throws
/// InvalidArgument for an empty trace or tol <= 0.
std::optional<int> detect_period(std::span<const double> trace, double tol = 1e-6);

/// Largest Lyapunov exponent of the uncontrolled map (per step), estimated by
/// propagating a tangent vector through the step Jacobians with
/// renormalization after every step. The first `burn_in` steps are discarded.
/// Returns -infinity if the tangent vector collapses exactly (e.g. all weights
/// zero).
double lyapunov_estimate(const CpgParams& params, int steps, CpgState init = kDefaultInit,
                         int burn_in = 1000);

/// Writes "t,x1,x2,c1,c2,mu" rows.
void write_trajectory_csv(std::ostream& out, std::span<const TraceRow> rows);

}  // namespace mcpg
