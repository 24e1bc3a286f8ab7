#include "exosuit/controller.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace exosuit {

void DirectionalRegression::validate(double ordering_tolerance) const {
  if (!(slope_raising > 0.0) || !(slope_lowering > 0.0))
    throw std::invalid_argument("regression slopes must be positive");
  if (slope_raising < slope_lowering * (1.0 - ordering_tolerance))
    throw std::invalid_argument(
        "raising slope must not be below the lowering slope");
}

double SigmoidBlend::raising_weight(double elevation_speed_rad_s) const {
  return 1.0 /
         (1.0 + std::exp(-steepness * (elevation_speed_rad_s - midpoint_rad_s)));
}

SigmoidBlend sigmoid_params(double v001_rad_s, double v099_rad_s) {
  if (!(v001_rad_s < v099_rad_s))
    throw std::invalid_argument("sigmoid anchors must satisfy v001 < v099");
  SigmoidBlend blend;
  blend.v001_rad_s = v001_rad_s;
  blend.v099_rad_s = v099_rad_s;
  blend.midpoint_rad_s = (v001_rad_s + v099_rad_s) / 2.0;
  // Positive steepness so the raising weight saturates to 1 for fast raising;
  // ln(99) places the 1%/99% crossings exactly on the anchors.
  blend.steepness = std::log(99.0) / (v099_rad_s - blend.midpoint_rad_s);
  return blend;
}

double blend_torque(double torque_raising_nm, double torque_lowering_nm,
                    double elevation_speed_rad_s, const SigmoidBlend& blend) {
  const double w = blend.raising_weight(elevation_speed_rad_s);
  return torque_lowering_nm + (torque_raising_nm - torque_lowering_nm) * w;
}

double desired_motor_torque(double desired_tension_n,
                            double elevation_speed_rad_s,
                            const DirectionalRegression& reg,
                            const SigmoidBlend& blend) {
  const double t_raising =
      reg.intercept_raising + reg.slope_raising * desired_tension_n;
  const double t_lowering =
      reg.intercept_lowering + reg.slope_lowering * desired_tension_n;
  return blend_torque(t_raising, t_lowering, elevation_speed_rad_s, blend);
}

double gravity_tension_reference(double theta_rad,
                                 const GravityAssist& assist) {
  if (!(theta_rad >= 0.0 && theta_rad <= std::numbers::pi))
    throw std::invalid_argument("elevation angle must lie in [0, pi]");
  const double gravity_torque =
      kStandardGravity * (assist.arm_mass_kg * assist.arm_com_length_m +
                          assist.load_mass_kg * assist.load_lever_m) *
      std::sin(theta_rad);
  const double supported =
      assist.support_fraction * gravity_torque / assist.moment_arm_m;
  return std::max(assist.pretension_n, supported);
}

double shoulder_torque_from_tension(double tension_n, double moment_arm_m) {
  if (!(tension_n >= 0.0)) throw std::invalid_argument("tension must be >= 0");
  if (!(moment_arm_m > 0.0))
    throw std::invalid_argument("moment arm must be > 0");
  return tension_n * moment_arm_m;
}

VelocityEstimator::VelocityEstimator(double dt_s, double cutoff_hz) : dt_(dt_s) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(cutoff_hz > 0.0)) throw std::invalid_argument("cutoff must be > 0");
  const double tau = 1.0 / (2.0 * std::numbers::pi * cutoff_hz);
  alpha_ = dt_s / (tau + dt_s);
}

double VelocityEstimator::step(double angle_rad) {
  if (!primed_) {
    prev_angle_ = angle_rad;
    primed_ = true;
    velocity_ = 0.0;
    return velocity_;
  }
  const double raw = (angle_rad - prev_angle_) / dt_;
  prev_angle_ = angle_rad;
  velocity_ += alpha_ * (raw - velocity_);
  return velocity_;
}

void VelocityEstimator::reset() {
  primed_ = false;
  velocity_ = 0.0;
  prev_angle_ = 0.0;
}

std::vector<double> estimate_elevation_speed(std::span<const double> angles_rad,
                                             double dt_s, double cutoff_hz) {
  if (angles_rad.size() < 2)
    throw std::invalid_argument("need at least 2 angle samples");
  VelocityEstimator est(dt_s, cutoff_hz);
  std::vector<double> out;
  out.reserve(angles_rad.size());
  for (double a : angles_rad) out.push_back(est.step(a));
  return out;
}

}  // namespace exosuit
