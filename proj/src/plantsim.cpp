#include "exosuit/plantsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "exosuit/rng.hpp"

namespace exosuit {

namespace {

constexpr double kRadPerDeg = std::numbers::pi / 180.0;

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Trapezoidal speed profile covering distance `dist` at plateau speed `v`
// with symmetric ramps of length `ramp_s`.
struct Trapezoid {
  double v, ramp_s, dist;
  double plateau_s() const { return (dist - v * ramp_s) / v; }
  double duration() const { return 2.0 * ramp_s + plateau_s(); }

  void at(double t, double& pos, double& vel, double& acc) const {
    const double a = v / ramp_s;
    const double tp = plateau_s();
    if (t < 0.0) {
      pos = 0.0; vel = 0.0; acc = 0.0;
    } else if (t < ramp_s) {
      acc = a; vel = a * t; pos = 0.5 * a * t * t;
    } else if (t < ramp_s + tp) {
      const double u = t - ramp_s;
      acc = 0.0; vel = v; pos = 0.5 * v * ramp_s + v * u;
    } else if (t < duration()) {
      const double u = t - ramp_s - tp;
      acc = -a; vel = v - a * u;
      pos = 0.5 * v * ramp_s + v * tp + v * u - 0.5 * a * u * u;
    } else {
      acc = 0.0; vel = 0.0; pos = dist;
    }
  }
};

// First-order low-pass tracking state.
struct Lowpass1 {
  double alpha = 1.0;
  double state = 0.0;
  bool enabled = false;

  static Lowpass1 make(double cutoff_hz, double dt) {
    Lowpass1 lp;
    if (cutoff_hz > 0.0) {
      const double tau = 1.0 / (2.0 * std::numbers::pi * cutoff_hz);
      lp.alpha = dt / (tau + dt);
      lp.enabled = true;
    }
    return lp;
  }

  double step(double x) {
    if (!enabled) return x;
    state += alpha * (x - state);
    return state;
  }
};

}  // namespace

void ArmPlant::validate() const {
  if (!(inertia_kg_m2 > 0.0))
    throw std::invalid_argument("plant inertia must be > 0");
  if (!(moment_arm_m > 0.0))
    throw std::invalid_argument("plant moment arm must be > 0");
  if (!(theta_min_rad < theta_max_rad))
    throw std::invalid_argument("plant joint limits inverted");
}

void StictionModel::validate() const {
  if (!(breakaway_nm >= 0.0))
    throw std::invalid_argument("breakaway torque must be >= 0");
  if (!(velocity_deadband_rad_s > 0.0))
    throw std::invalid_argument("velocity deadband must be > 0");
  if (!(stribeck_decay_rad_s > 0.0))
    throw std::invalid_argument("stribeck decay must be > 0");
}

double apply_stiction(double commanded_nm, double velocity_rad_s,
                      const StictionModel& model) {
  const double u = velocity_rad_s / model.stribeck_decay_rad_s;
  const double capacity = model.breakaway_nm * std::exp(-u * u);
  const double kinetic_mix =
      std::min(1.0, std::abs(velocity_rad_s) / model.velocity_deadband_rad_s);
  const double static_part =
      std::clamp(commanded_nm, -capacity, capacity) * (1.0 - kinetic_mix);
  const double kinetic_part = sgn(velocity_rad_s) * capacity * kinetic_mix;
  return commanded_nm - static_part - kinetic_part;
}

Trajectory min_jerk_trajectory(double theta_start_rad, double theta_end_rad,
                               double peak_speed_rad_s,
                               double sample_rate_hz) {
  const double delta = theta_end_rad - theta_start_rad;
  if (delta == 0.0)
    throw std::invalid_argument("min-jerk displacement must be nonzero");
  if (!(peak_speed_rad_s > 0.0))
    throw std::invalid_argument("peak speed must be > 0");
  if (!(sample_rate_hz > 0.0))
    throw std::invalid_argument("sample rate must be > 0");

  Trajectory traj;
  traj.duration_s = 1.875 * std::abs(delta) / peak_speed_rad_s;
  traj.dt_s = 1.0 / sample_rate_hz;
  const size_t n =
      static_cast<size_t>(std::floor(traj.duration_s * sample_rate_hz)) + 1;
  traj.position_rad.reserve(n + 1);
  traj.velocity_rad_s.reserve(n + 1);
  for (size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * traj.dt_s;
    const double s = std::min(t / traj.duration_s, 1.0);
    const double s2 = s * s, s3 = s2 * s;
    traj.position_rad.push_back(theta_start_rad +
                                delta * (10.0 * s3 - 15.0 * s3 * s +
                                         6.0 * s3 * s2));
    traj.velocity_rad_s.push_back(delta / traj.duration_s * 30.0 * s2 *
                                  (1.0 - s) * (1.0 - s));
  }
  return traj;
}

ArmPlant step_dynamics(ArmPlant plant, double cable_tension_n, double dt_s,
                       double external_torque_nm) {
  if (!(dt_s > 0.0 && dt_s <= 5e-3))
    throw std::invalid_argument("dt must lie in (0, 5 ms]");

  double torque = cable_tension_n * plant.moment_arm_m -
                  plant.gravity_torque_coeff() * std::sin(plant.theta_rad) -
                  plant.viscous_damping_nm_s * plant.theta_dot_rad_s +
                  external_torque_nm;
  if (plant.theta_rad < plant.theta_min_rad)
    torque += plant.stop_stiffness_nm_rad * (plant.theta_min_rad - plant.theta_rad) -
              plant.stop_damping_nm_s * plant.theta_dot_rad_s;
  else if (plant.theta_rad > plant.theta_max_rad)
    torque -= plant.stop_stiffness_nm_rad * (plant.theta_rad - plant.theta_max_rad) +
              plant.stop_damping_nm_s * plant.theta_dot_rad_s;

  plant.theta_dot_rad_s += dt_s * torque / plant.inertia_kg_m2;
  plant.theta_rad += dt_s * plant.theta_dot_rad_s;
  return plant;
}

void IdentificationProtocol::validate() const {
  if (spool_speeds_rad_s.empty() || mannequin_loads_nm.empty())
    throw std::invalid_argument("protocol grids must be non-empty");
  for (double v : spool_speeds_rad_s)
    if (!(v > 0.0))
      throw std::invalid_argument("spool speeds must be positive magnitudes");
  for (double l : mannequin_loads_nm)
    if (!(l > 0.0)) throw std::invalid_argument("loads must be positive");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (!(angle_min_deg >= 0.0 && angle_max_deg <= 180.0 &&
        angle_min_deg < angle_max_deg))
    throw std::invalid_argument("angle range must lie within [0, 180] deg");
  if (!(ramp_time_s > 0.0)) throw std::invalid_argument("ramp time must be > 0");
  if (!(log_rate_hz > 0.0)) throw std::invalid_argument("log rate must be > 0");
}

SampleLog run_identification_protocol(const BowdenModel& model,
                                      const ArmPlant& plant,
                                      const IdentificationProtocol& protocol,
                                      const StictionModel* stiction,
                                      uint64_t seed, RunMode mode) {
  model.validate();
  plant.validate();
  protocol.validate();
  if (stiction) stiction->validate();

  const double rp = model.pulley_radius_m;
  const double r = plant.moment_arm_m;
  const double gravity_coeff = plant.gravity_torque_coeff();
  const double theta_lo = protocol.angle_min_deg * kRadPerDeg;
  const double theta_hi = protocol.angle_max_deg * kRadPerDeg;
  const double spool_travel = (theta_hi - theta_lo) * r / rp;
  const double k_raise = model.tension_factor(+1);
  const double k_lower = model.tension_factor(-1);

  // Feasibility sweep over the grid before any simulation.
  std::string infeasible;
  for (double v : protocol.spool_speeds_rad_s) {
    if (!(spool_travel > v * protocol.ramp_time_s)) {
      infeasible += "  speed " + std::to_string(v) +
                    " rad/s: no plateau within the angle range\n";
      continue;
    }
    for (double load : protocol.mannequin_loads_nm) {
      const double peak_tension = (load + gravity_coeff) / r;
      const double peak_torque = rp * peak_tension / k_raise;
      if (peak_torque > protocol.max_motor_torque_nm)
        infeasible += "  speed " + std::to_string(v) + " rad/s, load " +
                      std::to_string(load) + " Nm: motor torque " +
                      std::to_string(peak_torque) + " exceeds limit\n";
    }
  }
  if (!infeasible.empty())
    throw std::runtime_error("infeasible identification conditions:\n" +
                             infeasible);

  struct Chunk {
    std::vector<double> speed, acc, torque, tension, theta;
  };

  // One cycle = raise sweep at +v then lower sweep at -v.
  const size_t n_speeds = protocol.spool_speeds_rad_s.size();
  const size_t n_loads = protocol.mannequin_loads_nm.size();
  const size_t reps = static_cast<size_t>(protocol.repetitions);
  const size_t n_cycles = n_loads * reps * n_speeds;
  std::vector<Chunk> chunks(n_cycles);

  const double dt = 1.0 / protocol.log_rate_hz;

  for_each_index(n_cycles, mode, [&](size_t c) {
    const size_t vi = c % n_speeds;
    const size_t li = c / (reps * n_speeds);
    const double v = protocol.spool_speeds_rad_s[vi];
    const double load = protocol.mannequin_loads_nm[li];

    GaussianRng rng(derive_seed(seed, c));
    Chunk& ch = chunks[c];

    Trapezoid profile{v, protocol.ramp_time_s, spool_travel};
    const size_t n_sweep =
        static_cast<size_t>(std::floor(profile.duration() / dt)) + 1;

    for (int dir = +1; dir >= -1; dir -= 2) {
      for (size_t k = 0; k < n_sweep; ++k) {
        double pos, vel, acc;
        profile.at(static_cast<double>(k) * dt, pos, vel, acc);
        const double theta = dir > 0 ? theta_lo + pos * rp / r
                                     : theta_hi - pos * rp / r;
        const double spool_v = dir * vel;
        const double tension_true = (load + gravity_coeff * std::sin(theta)) / r;
        const double factor =
            vel > 0.0 ? (dir > 0 ? k_raise : k_lower) : 1.0;
        double torque = rp * tension_true / factor;
        if (stiction && vel > 0.0) {
          const double u = spool_v / stiction->stribeck_decay_rad_s;
          torque += dir * stiction->breakaway_nm * std::exp(-u * u);
        }
        ch.speed.push_back(spool_v);
        ch.acc.push_back(dir * acc);
        ch.theta.push_back(theta);
        ch.tension.push_back(tension_true +
                             protocol.tension_noise_sd_n * rng.normal());
        ch.torque.push_back(torque +
                            protocol.torque_noise_sd_nm * rng.normal());
      }
    }
  });

  SampleLog log;
  log.sample_rate_hz = protocol.log_rate_hz;
  size_t total = 0;
  for (const Chunk& ch : chunks) total += ch.speed.size();
  log.time_s.reserve(total);
  log.tdu_speed_rad_s.reserve(total);
  log.tdu_acc_rad_s2.reserve(total);
  log.tdu_torque_nm.reserve(total);
  log.tension_n.reserve(total);
  log.theta_aoe_rad.reserve(total);
  size_t idx = 0;
  for (const Chunk& ch : chunks) {
    for (size_t k = 0; k < ch.speed.size(); ++k, ++idx) {
      log.time_s.push_back(static_cast<double>(idx) * dt);
      log.tdu_speed_rad_s.push_back(ch.speed[k]);
      log.tdu_acc_rad_s2.push_back(ch.acc[k]);
      log.tdu_torque_nm.push_back(ch.torque[k]);
      log.tension_n.push_back(ch.tension[k]);
      log.theta_aoe_rad.push_back(ch.theta[k]);
    }
  }
  return log;
}

void TrialCondition::validate() const {
  if (!(peak_speed_deg_s > 0.0))
    throw std::invalid_argument("peak speed must be > 0");
  if (!(support_fraction >= 0.0 && support_fraction <= 1.0))
    throw std::invalid_argument("support fraction must lie in [0, 1]");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (!(angle_start_deg >= 0.0 && angle_end_deg <= 180.0 &&
        angle_start_deg != angle_end_deg))
    throw std::invalid_argument("trial angle range invalid");
  if (!(log_rate_hz > 0.0)) throw std::invalid_argument("log rate must be > 0");
}

TrialLog run_trial_protocol(const ControllerSetup& controller,
                            const BowdenModel& model, ArmPlant plant,
                            const TrialCondition& condition,
                            const HumanModel& human, const MotorModel& motor,
                            uint64_t seed, double dt_s) {
  model.validate();
  plant.validate();
  condition.validate();
  controller.regression.validate();
  if (motor.stiction_enabled) motor.stiction.validate();
  if (!(dt_s > 0.0 && dt_s <= 5e-3))
    throw std::invalid_argument("dt must lie in (0, 5 ms]");
  if (std::abs(controller.assist.moment_arm_m - plant.moment_arm_m) > 1e-12)
    throw std::invalid_argument(
        "controller and plant disagree on the cable moment arm");
  if (std::abs(controller.assist.support_fraction -
               condition.support_fraction) > 1e-12)
    throw std::invalid_argument(
        "controller support fraction does not match the trial condition");

  const double internal_rate = 1.0 / dt_s;
  const size_t stride = std::max<size_t>(
      1, static_cast<size_t>(std::llround(internal_rate / condition.log_rate_hz)));

  const double theta_start = condition.angle_start_deg * kRadPerDeg;
  const double theta_end = condition.angle_end_deg * kRadPerDeg;
  const double peak = condition.peak_speed_deg_s * kRadPerDeg;

  Trajectory up = min_jerk_trajectory(theta_start, theta_end, peak, internal_rate);
  Trajectory down = min_jerk_trajectory(theta_end, theta_start, peak, internal_rate);
  const size_t n_up = up.position_rad.size();
  const size_t n_rep = n_up + down.position_rad.size();

  plant.theta_rad = theta_start;
  plant.theta_dot_rad_s = 0.0;

  VelocityEstimator vel_est(dt_s, controller.velocity_cutoff_hz);
  Lowpass1 motor_lag = Lowpass1::make(motor.torque_response_cutoff_hz, dt_s);
  Lowpass1 human_lag = Lowpass1::make(human.bandwidth_hz, dt_s);

  const double rp = model.pulley_radius_m;
  const double r = plant.moment_arm_m;
  const double gravity_coeff = plant.gravity_torque_coeff();
  const double residual = 1.0 - condition.support_fraction;

  TrialLog log;
  log.sample_rate_hz = internal_rate / static_cast<double>(stride);
  const size_t total_steps = n_rep * static_cast<size_t>(condition.repetitions);
  const size_t approx = total_steps / stride + 16;
  log.time_s.reserve(approx);
  log.theta_ref_rad.reserve(approx);
  log.theta_rad.reserve(approx);
  log.theta_dot_rad_s.reserve(approx);
  log.desired_tension_n.reserve(approx);
  log.applied_tension_n.reserve(approx);
  log.desired_torque_nm.reserve(approx);
  log.applied_motor_torque_nm.reserve(approx);
  log.phase.reserve(approx);
  log.rep.reserve(approx);

  GaussianRng rng(derive_seed(seed, 0x7121A1ULL));

  size_t global = 0;
  for (int rep = 0; rep < condition.repetitions; ++rep) {
    for (size_t k = 0; k < n_rep; ++k, ++global) {
      const bool raising = k < n_up;
      const double theta_ref =
          raising ? up.position_rad[k] : down.position_rad[k - n_up];
      const double theta_dot_ref =
          raising ? up.velocity_rad_s[k] : down.velocity_rad_s[k - n_up];

      // --- controller path ---
      double theta_meas = plant.theta_rad;
      if (condition.imu_noise_sd_rad > 0.0)
        theta_meas += condition.imu_noise_sd_rad * rng.normal();
      const double v_est = vel_est.step(theta_meas);
      const double theta_clamped =
          std::clamp(theta_meas, 0.0, std::numbers::pi);
      const double t_des =
          gravity_tension_reference(theta_clamped, controller.assist);
      const double tau_cmd = desired_motor_torque(
          t_des, v_est, controller.regression, controller.blend);

      // --- actuation path ---
      const double tau_lagged = motor_lag.step(tau_cmd);
      const double v_cable = plant.theta_dot_rad_s * r;
      const double v_motor = v_cable / rp;
      const double tau_motor =
          motor.stiction_enabled
              ? apply_stiction(tau_lagged, v_motor, motor.stiction)
              : tau_lagged;
      const double t_in = std::max(0.0, tau_motor) / rp;
      const double t_out =
          v_cable != 0.0 ? transmission::output_tension(t_in, v_cable, model)
                         : t_in;

      // --- human tracking torque ---
      double tau_human_raw =
          residual * gravity_coeff * std::sin(theta_ref) +
          human.kp_nm_per_rad * (theta_ref - plant.theta_rad) +
          human.kd_nm_s_per_rad * (theta_dot_ref - plant.theta_dot_rad_s);
      if (human.torque_noise_sd_nm > 0.0)
        tau_human_raw += human.torque_noise_sd_nm * rng.normal();
      const double tau_human = human_lag.step(tau_human_raw);

      if (global % stride == 0) {
        double measured_tension = t_out;
        if (condition.tension_noise_sd_n > 0.0)
          measured_tension += condition.tension_noise_sd_n * rng.normal();
        log.time_s.push_back(static_cast<double>(global) * dt_s);
        log.theta_ref_rad.push_back(theta_ref);
        log.theta_rad.push_back(plant.theta_rad);
        log.theta_dot_rad_s.push_back(plant.theta_dot_rad_s);
        log.desired_tension_n.push_back(t_des);
        log.applied_tension_n.push_back(measured_tension);
        log.desired_torque_nm.push_back(tau_cmd);
        log.applied_motor_torque_nm.push_back(tau_motor);
        log.phase.push_back(raising ? int8_t{1} : int8_t{-1});
        log.rep.push_back(rep);
      }

      plant = step_dynamics(plant, t_out, dt_s, tau_human);
    }
  }
  return log;
}

}  // namespace exosuit
