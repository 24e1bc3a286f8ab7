#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exosuit/controller.hpp"
#include "exosuit/gridrun.hpp"
#include "exosuit/identification.hpp"
#include "exosuit/transmission.hpp"

namespace exosuit {

/// Single-joint arm pendulum driven by the cable about the shoulder.
struct ArmPlant {
  double inertia_kg_m2 = 0.08;
  double arm_mass_kg = 2.1;
  double arm_com_length_m = 0.13;
  double load_mass_kg = 0.5;
  double load_lever_m = 0.30;
  double viscous_damping_nm_s = 0.15;
  double moment_arm_m = 0.11;
  double theta_rad = 0.0;
  double theta_dot_rad_s = 0.0;

  // Joint-limit stops (one-sided spring-damper).
  double theta_min_rad = 0.0;
  double theta_max_rad = 3.14159265358979323846;
  double stop_stiffness_nm_rad = 500.0;
  double stop_damping_nm_s = 10.0;

  /// g * (m_arm * l_com + m_load * l_load): peak gravity torque at 90 deg.
  double gravity_torque_coeff() const {
    return kStandardGravity *
           (arm_mass_kg * arm_com_length_m + load_mass_kg * load_lever_m);
  }

  void validate() const;
};

/// Breakaway friction with Stribeck decay; reproduces the torque spike seen
/// when the cable changes direction.
struct StictionModel {
  double breakaway_nm = 0.15;
  double velocity_deadband_rad_s = 0.08;  // motor side
  double stribeck_decay_rad_s = 0.30;

  void validate() const;
};

/// Net torque delivered through a sticky drivetrain. At standstill, static
/// friction absorbs commanded torque up to the breakaway level; at speed the
/// kinetic excess decays per Stribeck. Continuous in velocity and torque.
double apply_stiction(double commanded_nm, double velocity_rad_s,
                      const StictionModel& model);

/// Quintic minimum-jerk reference profile.
struct Trajectory {
  std::vector<double> position_rad;
  std::vector<double> velocity_rad_s;
  double duration_s = 0.0;  // analytic duration 1.875*|delta|/peak
  double dt_s = 0.0;
};

/// Profile with zero endpoint velocity/acceleration whose analytic peak speed
/// equals peak_speed_rad_s. Throws on zero displacement or nonpositive speed.
Trajectory min_jerk_trajectory(double theta_start_rad, double theta_end_rad,
                               double peak_speed_rad_s, double sample_rate_hz);

/// One semi-implicit Euler step of the arm under cable tension plus an
/// optional external (human) shoulder torque. dt must lie in (0, 5 ms].
ArmPlant step_dynamics(ArmPlant plant, double cable_tension_n, double dt_s,
                       double external_torque_nm = 0.0);

/// Velocity/load grid protocol run on the motorized mannequin.
struct IdentificationProtocol {
  std::vector<double> spool_speeds_rad_s = {0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  std::vector<double> mannequin_loads_nm = {0.5, 1.0, 2.0, 3.0, 4.0};
  int repetitions = 5;
  double angle_min_deg = 20.0;
  double angle_max_deg = 110.0;
  double ramp_time_s = 0.4;
  double tension_noise_sd_n = 0.5;
  double torque_noise_sd_nm = 0.01;
  double log_rate_hz = 200.0;
  double max_motor_torque_nm = 8.0;

  void validate() const;
};

/// Simulates the full velocity x load x repetition grid under TDU velocity
/// control with the mannequin motor applying a constant resisting load.
/// Deterministic for a given seed regardless of RunMode. Throws
/// std::runtime_error listing any infeasible (speed, load) conditions.
SampleLog run_identification_protocol(const BowdenModel& model,
                                      const ArmPlant& plant,
                                      const IdentificationProtocol& protocol,
                                      const StictionModel* stiction,
                                      uint64_t seed,
                                      RunMode mode = RunMode::serial);

/// Time-series record of one simulated trial condition.
struct TrialLog {
  std::vector<double> time_s;
  std::vector<double> theta_ref_rad;
  std::vector<double> theta_rad;
  std::vector<double> theta_dot_rad_s;
  std::vector<double> desired_tension_n;
  std::vector<double> applied_tension_n;   // simulated load cell
  std::vector<double> desired_torque_nm;   // controller output (motor torque)
  std::vector<double> applied_motor_torque_nm;  // post stiction/lag
  std::vector<int8_t> phase;               // +1 raising, -1 lowering
  std::vector<int32_t> rep;
  double sample_rate_hz = 0.0;

  size_t size() const { return time_s.size(); }
};

/// Reference-tracking torque source standing in for the participant:
/// residual gravity feedforward plus PD correction, passed through a
/// first-order bandwidth limit, with optional torque noise.
struct HumanModel {
  double kp_nm_per_rad = 25.0;
  double kd_nm_s_per_rad = 2.0;
  double bandwidth_hz = 2.0;
  double torque_noise_sd_nm = 0.05;
};

/// Actuation path imperfections: drivetrain stiction and the first-order lag
/// of the torque response (0 disables the lag).
struct MotorModel {
  StictionModel stiction;
  bool stiction_enabled = true;
  double torque_response_cutoff_hz = 6.0;
};

struct TrialCondition {
  double peak_speed_deg_s = 60.0;
  double support_fraction = 0.5;
  int repetitions = 10;
  double angle_start_deg = 20.0;
  double angle_end_deg = 100.0;
  double log_rate_hz = 200.0;
  double tension_noise_sd_n = 0.1;
  double imu_noise_sd_rad = 0.0;

  void validate() const;
};

struct ControllerSetup {
  DirectionalRegression regression;
  SigmoidBlend blend;
  GravityAssist assist;
  double velocity_cutoff_hz = 5.0;
};

/// Simulates one trial condition: the participant tracks the min-jerk
/// reference while the controller supplies assistance through the Bowden
/// transmission. Rejects moment-arm or support-level mismatches between the
/// controller setup and the plant/condition.
TrialLog run_trial_protocol(const ControllerSetup& controller,
                            const BowdenModel& model, ArmPlant plant,
                            const TrialCondition& condition,
                            const HumanModel& human, const MotorModel& motor,
                            uint64_t seed, double dt_s = 1e-3);

}  // namespace exosuit
