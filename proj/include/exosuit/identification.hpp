#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "exosuit/controller.hpp"

namespace exosuit {

/// Logged channels of one mannequin identification session. All vectors have
/// equal length; time is strictly increasing and uniformly sampled.
struct SampleLog {
  std::vector<double> time_s;
  std::vector<double> tdu_speed_rad_s;     // motor-side spool velocity
  std::vector<double> tdu_acc_rad_s2;
  std::vector<double> tdu_torque_nm;
  std::vector<double> tension_n;           // load-cell output tension
  std::vector<double> theta_aoe_rad;       // humeral angle of elevation
  double sample_rate_hz = 0.0;

  size_t size() const { return time_s.size(); }

  /// Checks channel lengths, uniform sampling (1 ppm) and that the sample
  /// rate supports the given maximum filter cutoff.
  void validate(double max_filter_cutoff_hz = 0.0) const;
};

struct SteadyStateCriteria {
  double min_speed_deg_s = 15.0;
  double max_acceleration_deg_s2 = 15.0;
  double angle_min_deg = 20.0;
  double angle_max_deg = 90.0;
  double min_torque_nm = 0.0;

  void validate() const;
};

enum class Direction { raising, lowering };

std::string to_string(Direction d);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  size_t sample_count = 0;
  Direction direction = Direction::raising;
  int iterations = 0;
};

/// Thrown when the IRLS loop exhausts its iteration budget; carries the last
/// iterate so callers can inspect how far it got.
struct FitNonConvergence : std::runtime_error {
  explicit FitNonConvergence(FitResult last)
      : std::runtime_error("robust fit did not converge"), last_iterate(last) {}
  FitResult last_iterate;
};

/// Zero-phase Butterworth low-pass (forward-backward). Rejects cutoffs at or
/// above Nyquist and signals too short for the edge padding.
std::vector<double> zero_phase_lowpass(std::span<const double> signal,
                                       double cutoff_hz, int order,
                                       double sample_rate_hz);

/// Indices of samples meeting all steady-state criteria, split by direction
/// of spool travel. Empty partitions are a reportable outcome, not an error.
struct SteadyStatePartition {
  std::vector<size_t> raising;
  std::vector<size_t> lowering;
};

SteadyStatePartition select_steady_state(const SampleLog& filtered,
                                         const SteadyStateCriteria& criteria);

/// Iteratively reweighted least squares with the bisquare weight function
/// (tuning constant 4.685, residual scale MAD/0.6745). Reports the ordinary
/// R^2 of the final line.
FitResult robust_linear_fit(std::span<const double> x,
                            std::span<const double> y);

struct IdentificationResult {
  DirectionalRegression regression;
  FitResult fit_raising;
  FitResult fit_lowering;
  SteadyStatePartition selected;  // indices into `filtered`
  SampleLog filtered;             // channels after zero-phase filtering
};

/// Full pipeline per the identification procedure: low-pass filter the
/// tension/torque/speed channels, recompute acceleration from the filtered
/// speed, select steady-state samples, and fit one line per direction.
/// Throws std::runtime_error naming the missing direction when a partition
/// is empty.
IdentificationResult identify(const SampleLog& log,
                              const SteadyStateCriteria& criteria,
                              double filter_cutoff_hz = 5.0,
                              int filter_order = 3);

}  // namespace exosuit
