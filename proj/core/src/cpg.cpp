#include "mcpg/cpg.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "mcpg/error.hpp"

namespace mcpg {

namespace {

bool finite(double v) { return std::isfinite(v); }

void require_finite(const CpgState& s) {
  if (!finite(s.x1) || !finite(s.x2)) throw InvalidArgument("CPG state is not finite");
}

}  // namespace

void CpgParams::validate() const {
  for (double v : {w11, w12, w21, w22, theta1, theta2}) {
    if (!finite(v)) throw InvalidArgument("CPG parameters must be finite");
  }
}

ActivityDelta difference(const CpgState& now, const CpgState& before) {
  return {now.x1 - before.x1, now.x2 - before.x2};
}

double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

std::array<double, 2> activation(const CpgState& s, const CpgParams& p, ControlInput c) {
  return {p.theta1 + p.w11 * s.x1 + p.w12 * s.x2 + c.c1,
          p.theta2 + p.w21 * s.x1 + p.w22 * s.x2 + c.c2};
}

CpgState step(const CpgState& s, const CpgParams& params, ControlInput c) {
  require_finite(s);
  if (!finite(c.c1) || !finite(c.c2)) throw InvalidArgument("control input is not finite");
  const auto a = activation(s, params, c);
  if (!finite(a[0]) || !finite(a[1])) throw InvalidArgument("activation is not finite");
  return {sigmoid(a[0]), sigmoid(a[1]), s.t + 1};
}

ControlInput feedback_input(double gain, const CpgParams& p, ActivityDelta d) {
  return {gain * (p.w11 * d.d1 + p.w12 * d.d2), gain * (p.w21 * d.d1 + p.w22 * d.d2)};
}

double update_mu(double mu, double lambda, int period, ActivityDelta d) {
  if (period < 1) throw InvalidArgument("control period must be >= 1");
  if (!(lambda > 0.0) || !finite(lambda)) throw InvalidArgument("adaptation rate must be > 0");
  if (!finite(mu) || !finite(d.d1) || !finite(d.d2)) {
    throw InvalidArgument("non-finite input to the mu update");
  }
  return mu + lambda * d.squared_norm() / period;
}

// --- ChaosControl -----------------------------------------------------------

ChaosControl::ChaosControl(const CpgParams& params, ControlConfig config) : config_(config) {
  params.validate();
  if (config_.period < 1) throw InvalidArgument("control period must be >= 1");
  if (!(config_.lambda > 0.0) || !finite(config_.lambda)) {
    throw InvalidArgument("adaptation rate must be > 0");
  }
  history_.reserve(static_cast<std::size_t>(config_.period));
  if (config_.law == ControlLaw::kOrbitReferenced) ensure_orbit(params);
}

void ChaosControl::set_enabled(bool on) {
  if (on && !config_.enabled) clock_ = 0;
  config_.enabled = on;
}

void ChaosControl::reset() {
  mu_ = 0.0;
  clock_ = 0;
  history_.clear();
  head_ = 0;
  last_residual_.reset();
}

void ChaosControl::set_period(int period) {
  if (period < 1) throw InvalidArgument("control period must be >= 1");
  if (period != config_.period) {
    config_.period = period;
    orbit_.reset();
  }
  reset();
  history_.reserve(static_cast<std::size_t>(period));
}

const CpgState& ChaosControl::state_p_ago() const {
  if (!ready()) throw NotReady("fewer than p states of history");
  return history_[head_];
}

ControlInput ChaosControl::control_input(const CpgParams& params, const CpgState& now) const {
  if (!config_.enabled) return {};
  const ActivityDelta delta = difference(now, state_p_ago());
  return feedback_input(mu_, params, delta);
}

ControlInput ChaosControl::on_step(const CpgParams& params, const CpgState& now) {
  ControlInput c{};
  const auto p = static_cast<std::size_t>(config_.period);
  if (config_.enabled && clock_ % config_.period == 0 && ready()) {
    const ActivityDelta delta = difference(now, state_p_ago());
    last_residual_ = delta.squared_norm();
    if (config_.law == ControlLaw::kDelayedFeedback) {
      c = feedback_input(mu_, params, delta);
    } else {
      ensure_orbit(params);
      const auto& z = orbit_->points[nearest_orbit_point(now)];
      c = feedback_input(1.0, params, {z[0] - now.x1, z[1] - now.x2});
    }
    mu_ = update_mu(mu_, config_.lambda, config_.period, delta);
  }

  if (history_.size() < p) {
    history_.push_back(now);
  } else {
    history_[head_] = now;
    head_ = (head_ + 1) % p;
  }
  if (config_.enabled) ++clock_;
  return c;
}

void ChaosControl::ensure_orbit(const CpgParams& params) {
  if (orbit_ && orbit_params_ == params) return;
  orbit_ = std::make_shared<const PeriodicOrbit>(find_periodic_orbit(params, config_.period));
  orbit_params_ = params;
}

std::size_t ChaosControl::nearest_orbit_point(const CpgState& now) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < orbit_->points.size(); ++k) {
    const double dx = orbit_->points[k][0] - now.x1;
    const double dy = orbit_->points[k][1] - now.x2;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

// --- ControlledCpg ----------------------------------------------------------

ControlledCpg::ControlledCpg(const CpgParams& params, ControlConfig config, CpgState init)
    : params_(params), state_(init), control_(params, config) {
  require_finite(init);
}

TraceRow ControlledCpg::advance() {
  const ControlInput c = control_.on_step(params_, state_);
  state_ = step(state_, params_, c);
  return {state_.t, state_.x1, state_.x2, c.c1, c.c2, control_.mu()};
}

std::vector<TraceRow> run_controlled(const CpgParams& params, int period, int steps,
                                     CpgState init, ControlLaw law, double lambda) {
  if (period < 1) throw InvalidArgument("period must be >= 1");
  if (steps < 1) throw InvalidArgument("steps must be >= 1");
  ControlledCpg cpg(params, ControlConfig{period, lambda, law, true}, init);
  std::vector<TraceRow> rows;
  rows.reserve(static_cast<std::size_t>(steps) + 1);
  rows.push_back({init.t, init.x1, init.x2, 0.0, 0.0, 0.0});
  for (int i = 0; i < steps; ++i) rows.push_back(cpg.advance());
  return rows;
}

std::vector<double> x1_series(std::span<const TraceRow> rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.x1);
  return out;
}

std::vector<double> x2_series(std::span<const TraceRow> rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.x2);
  return out;
}

std::optional<int> detect_period(std::span<const double> trace, double tol) {
  if (trace.empty()) throw InvalidArgument("detect_period: empty trace");
  if (!(tol > 0.0)) throw InvalidArgument("detect_period: tolerance must be > 0");
  const std::size_t n = trace.size();
  const std::size_t max_q = n / 3;
  const std::size_t start = n - n / 3;
  for (std::size_t q = 1; q <= max_q; ++q) {
    bool periodic = true;
    for (std::size_t k = start; k < n; ++k) {
      if (!(std::abs(trace[k] - trace[k - q]) < tol)) {
        periodic = false;
        break;
      }
    }
    if (periodic) return static_cast<int>(q);
  }
  return std::nullopt;
}

double lyapunov_estimate(const CpgParams& params, int steps, CpgState init, int burn_in) {
  params.validate();
  if (steps < 1) throw InvalidArgument("lyapunov_estimate: steps must be >= 1");
  if (burn_in < 0) throw InvalidArgument("lyapunov_estimate: burn-in must be >= 0");
  CpgState s = init;
  double v1 = 1.0;
  double v2 = 0.0;
  double sum = 0.0;
  for (int i = 0; i < burn_in + steps; ++i) {
    const CpgState next = step(s, params);
    // J_ij = sigma'(a_i) w_ij, with sigma' = x(1 - x) evaluated at the new state.
    const double g1 = next.x1 * (1.0 - next.x1);
    const double g2 = next.x2 * (1.0 - next.x2);
    const double n1 = g1 * (params.w11 * v1 + params.w12 * v2);
    const double n2 = g2 * (params.w21 * v1 + params.w22 * v2);
    const double norm = std::hypot(n1, n2);
    if (norm == 0.0) return -std::numeric_limits<double>::infinity();
    v1 = n1 / norm;
    v2 = n2 / norm;
    if (i >= burn_in) sum += std::log(norm);
    s = next;
  }
  return sum / steps;
}

void write_trajectory_csv(std::ostream& out, std::span<const TraceRow> rows) {
  const auto old_precision = out.precision(17);
  out << "t,x1,x2,c1,c2,mu\n";
  for (const auto& r : rows) {
    out << r.t << ',' << r.x1 << ',' << r.x2 << ',' << r.c1 << ',' << r.c2 << ',' << r.mu << '\n';
  }
  out.precision(old_precision);
}

}  // namespace mcpg
