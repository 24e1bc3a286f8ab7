#pragma once

#include <span>
#include <vector>

namespace exosuit {

/// Identified inverse-model lines mapping desired output tension to motor
/// torque, one per direction of movement.
struct DirectionalRegression {
  double slope_raising = 0.0;     // Nm per N
  double intercept_raising = 0.0; // Nm
  double slope_lowering = 0.0;
  double intercept_lowering = 0.0;
  double r2_raising = 1.0;
  double r2_lowering = 1.0;

  /// Both slopes must be positive and the raising slope must not fall below
  /// the lowering slope by more than `ordering_tolerance` (relative). A small
  /// tolerance admits frictionless identification where the two lines
  /// coincide up to noise.
  void validate(double ordering_tolerance = 0.02) const;
};

/// Smooth raising/lowering coupling. The raising weight
/// w(v) = 1 / (1 + exp(-B*(v - M))) tends to 1 for fast raising and 0 for
/// fast lowering.
struct SigmoidBlend {
  double midpoint_rad_s = 0.0;   // M
  double steepness = 0.0;        // B, per (rad/s)
  double v001_rad_s = -1.0;      // speed at which w = 0.01
  double v099_rad_s = 1.0;       // speed at which w = 0.99

  double raising_weight(double elevation_speed_rad_s) const;
};

/// Shape parameters from the velocities where the raising weight reaches 1%
/// and 99%. Throws std::invalid_argument unless v001 < v099.
SigmoidBlend sigmoid_params(double v001_rad_s, double v099_rad_s);

/// Sigmoid coupling of the two directional torques; result lies between the
/// inputs.
double blend_torque(double torque_raising_nm, double torque_lowering_nm,
                    double elevation_speed_rad_s, const SigmoidBlend& blend);

/// Evaluates both directional lines at the desired tension and couples them.
double desired_motor_torque(double desired_tension_n,
                            double elevation_speed_rad_s,
                            const DirectionalRegression& reg,
                            const SigmoidBlend& blend);

/// Anthropometrics and support settings for the gravity-assistance block.
struct GravityAssist {
  double support_fraction = 0.5;   // 0..1
  double arm_mass_kg = 2.1;
  double arm_com_length_m = 0.13;  // shoulder to arm center of mass
  double load_mass_kg = 0.5;
  double load_lever_m = 0.30;      // shoulder to held weight
  double moment_arm_m = 0.11;      // cable lever about the glenohumeral joint
  double pretension_n = 10.0;
};

inline constexpr double kStandardGravity = 9.80665;  // m/s^2

/// Desired cable tension for a humeral elevation angle: the supported share
/// of the gravitational shoulder torque mapped through the cable moment arm,
/// never below the pretension floor. Throws std::invalid_argument for theta
/// outside [0, pi].
double gravity_tension_reference(double theta_rad, const GravityAssist& assist);

/// Linear tension -> shoulder torque map.
double shoulder_torque_from_tension(double tension_n, double moment_arm_m);

/// Causal velocity estimator: first-order low-pass on backward finite
/// differences. One instance per control loop; not shareable.
class VelocityEstimator {
 public:
  VelocityEstimator(double dt_s, double cutoff_hz = 5.0);

  /// Feeds one angle sample and returns the filtered velocity estimate.
  double step(double angle_rad);

  void reset();

 private:
  double dt_;
  double alpha_;
  double prev_angle_ = 0.0;
  double velocity_ = 0.0;
  bool primed_ = false;
};

/// Offline variant over a uniformly sampled angle series; output has the same
/// length with the first element zero. Throws on fewer than 2 samples.
std::vector<double> estimate_elevation_speed(std::span<const double> angles_rad,
                                             double dt_s,
                                             double cutoff_hz = 5.0);

}  // namespace exosuit
