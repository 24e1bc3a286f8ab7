#include "exosuit/transmission.hpp"

#include <cmath>
#include <numbers>

namespace exosuit {

void BowdenModel::validate() const {
  if (!(mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
  if (!(phi_rad >= 0.0 && phi_rad <= 2.0 * std::numbers::pi))
    throw std::invalid_argument("phi_rad must lie in [0, 2*pi]");
  if (!(pulley_radius_m > 0.0))
    throw std::invalid_argument("pulley_radius_m must be > 0");
  if (!(mu * std::sin(phi_rad / 2.0) < 1.0))
    throw std::invalid_argument("mu*sin(phi/2) must be < 1");
}

double BowdenModel::tension_factor(int direction_sign) const {
  const double s = static_cast<double>(direction_sign);
  const double ms = mu * std::sin(phi_rad / 2.0);
  return 1.0 - s * 2.0 * ms / (1.0 + s * ms);
}

namespace transmission {

double input_tension(double motor_torque_nm, const BowdenModel& model) {
  return motor_torque_nm / model.pulley_radius_m;
}

double output_tension(double input_tension_n, double cable_velocity_m_s,
                      const BowdenModel& model) {
  if (cable_velocity_m_s == 0.0) throw StictionRegimeError{};
  const int sgn = cable_velocity_m_s > 0.0 ? 1 : -1;
  return input_tension_n * model.tension_factor(sgn);
}

CableState friction_components(double input_tension_n,
                               double cable_velocity_m_s,
                               const BowdenModel& model) {
  CableState st;
  st.input_tension_n = input_tension_n;
  st.cable_velocity_m_s = cable_velocity_m_s;
  st.output_tension_n =
      output_tension(input_tension_n, cable_velocity_m_s, model);
  st.friction_force_n = input_tension_n - st.output_tension_n;
  st.normal_force_n = (input_tension_n + st.output_tension_n) *
                      std::sin(model.phi_rad / 2.0);
  return st;
}

}  // namespace transmission
}  // namespace exosuit
