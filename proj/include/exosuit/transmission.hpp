#pragma once

#include <stdexcept>

namespace exosuit {

/// Cable velocity of exactly zero has no defined friction direction; the
/// transmission model refuses it and the plant simulator owns that regime.
struct StictionRegimeError : std::domain_error {
  StictionRegimeError()
      : std::domain_error(
            "cable velocity is zero: transmission friction direction "
            "undefined (stiction regime)") {}
};

/// Physical parameters of the tendon driver unit and Bowden-sheath run.
struct BowdenModel {
  double mu = 0.0;              // Coulomb friction coefficient, dimensionless
  double phi_rad = 0.0;         // total sheath wrap angle
  double pulley_radius_m = 0.035;

  /// Throws std::invalid_argument if the parameters violate the model domain
  /// (mu >= 0, phi in [0, 2*pi], positive pulley radius, and
  /// mu*sin(phi/2) < 1 so the lowering-side denominator stays positive).
  void validate() const;

  /// Tension transfer factor T_out/T_in for the given direction of cable
  /// travel (+1 = toward input / raising, -1 = toward output / lowering).
  double tension_factor(int direction_sign) const;
};

namespace transmission {

/// Input tension produced by a motor torque acting on the spool pulley.
double input_tension(double motor_torque_nm, const BowdenModel& model);

/// Output tension after directional Coulomb losses along the sheath.
/// Throws StictionRegimeError when cable_velocity_m_s == 0.
double output_tension(double input_tension_n, double cable_velocity_m_s,
                      const BowdenModel& model);

/// Full force balance of the cable inside the sheath.
struct CableState {
  double input_tension_n = 0.0;
  double output_tension_n = 0.0;
  double cable_velocity_m_s = 0.0;
  double friction_force_n = 0.0;
  double normal_force_n = 0.0;
};

CableState friction_components(double input_tension_n,
                               double cable_velocity_m_s,
                               const BowdenModel& model);

}  // namespace transmission
}  // namespace exosuit
