#include "exosuit/identification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "exosuit/dsp.hpp"

namespace exosuit {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;
constexpr double kBisquareTuning = 4.685;
constexpr double kMadToSigma = 0.6745;
constexpr double kCoefficientTol = 1e-8;
constexpr int kMaxIterations = 50;

double median_of(std::vector<double> v) {
  const size_t n = v.size();
  auto mid = v.begin() + n / 2;
  std::nth_element(v.begin(), mid, v.end());
  double hi = *mid;
  if (n % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  bool ok = false;
};

LineFit weighted_line(std::span<const double> x, std::span<const double> y,
                      std::span<const double> w) {
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  LineFit fit;
  if (!(sw > 0.0)) return fit;
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    sxx += w[i] * dx * dx;
    sxy += w[i] * dx * (y[i] - my);
  }
  if (!(sxx > 0.0)) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.ok = true;
  return fit;
}

double ordinary_r_squared(std::span<const double> x, std::span<const double> y,
                          double slope, double intercept) {
  double my = 0.0;
  for (double yi : y) my += yi;
  my /= static_cast<double>(y.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss_res += r * r;
    const double d = y[i] - my;
    ss_tot += d * d;
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace

void SampleLog::validate(double max_filter_cutoff_hz) const {
  const size_t n = time_s.size();
  if (tdu_speed_rad_s.size() != n || tdu_acc_rad_s2.size() != n ||
      tdu_torque_nm.size() != n || tension_n.size() != n ||
      theta_aoe_rad.size() != n)
    throw std::invalid_argument("sample log channels have mismatched lengths");
  if (n >= 2) {
    if (!(sample_rate_hz > 0.0))
      throw std::invalid_argument("sample rate must be positive");
    const double dt = 1.0 / sample_rate_hz;
    for (size_t i = 1; i < n; ++i) {
      const double step = time_s[i] - time_s[i - 1];
      if (!(step > 0.0))
        throw std::invalid_argument("sample times must be strictly increasing");
      if (std::abs(step - dt) > 1e-6 * dt)
        throw std::invalid_argument("sample times must be uniform to 1 ppm");
    }
  }
  if (max_filter_cutoff_hz > 0.0 &&
      !(sample_rate_hz > 2.0 * max_filter_cutoff_hz))
    throw std::invalid_argument(
        "sample rate must exceed twice the filter cutoff");
}

void SteadyStateCriteria::validate() const {
  if (!(angle_min_deg < angle_max_deg))
    throw std::invalid_argument("angle_min must be below angle_max");
  if (!(min_speed_deg_s > 0.0))
    throw std::invalid_argument("min_speed must be positive");
}

std::string to_string(Direction d) {
  return d == Direction::raising ? "raising" : "lowering";
}

std::vector<double> zero_phase_lowpass(std::span<const double> signal,
                                       double cutoff_hz, int order,
                                       double sample_rate_hz) {
  if (!(cutoff_hz < 0.5 * sample_rate_hz))
    throw std::invalid_argument("cutoff must be below Nyquist");
  const auto fc = dsp::butter_lowpass(order, cutoff_hz, sample_rate_hz);
  return dsp::filtfilt(fc, signal);
}

SteadyStatePartition select_steady_state(const SampleLog& log,
                                         const SteadyStateCriteria& criteria) {
  criteria.validate();
  SteadyStatePartition part;
  for (size_t i = 0; i < log.size(); ++i) {
    const double speed_deg = log.tdu_speed_rad_s[i] * kDegPerRad;
    const double acc_deg = log.tdu_acc_rad_s2[i] * kDegPerRad;
    const double angle_deg = log.theta_aoe_rad[i] * kDegPerRad;
    if (!(std::abs(speed_deg) > criteria.min_speed_deg_s)) continue;
    if (!(std::abs(acc_deg) < criteria.max_acceleration_deg_s2)) continue;
    if (!(angle_deg > criteria.angle_min_deg &&
          angle_deg < criteria.angle_max_deg))
      continue;
    if (!(log.tdu_torque_nm[i] > criteria.min_torque_nm)) continue;
    if (log.tdu_speed_rad_s[i] > 0.0)
      part.raising.push_back(i);
    else
      part.lowering.push_back(i);
  }
  return part;
}

FitResult robust_linear_fit(std::span<const double> x,
                            std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("x/y length mismatch");
  if (x.size() < 10)
    throw std::invalid_argument("robust fit needs at least 10 points");

  const size_t n = x.size();
  std::vector<double> w(n, 1.0);
  LineFit line = weighted_line(x, y, w);
  if (!line.ok)
    throw std::invalid_argument("degenerate fit: x has no variance");

  FitResult result;
  std::vector<double> abs_res(n);
  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    for (size_t i = 0; i < n; ++i)
      abs_res[i] = std::abs(y[i] - (line.intercept + line.slope * x[i]));
    const double scale = median_of(abs_res) / kMadToSigma;
    result.slope = line.slope;
    result.intercept = line.intercept;
    result.iterations = iter;
    if (!(scale > 0.0)) break;  // exact fit

    const double inv = 1.0 / (kBisquareTuning * scale);
    for (size_t i = 0; i < n; ++i) {
      const double u = abs_res[i] * inv;
      w[i] = u < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
    }
    LineFit next = weighted_line(x, y, w);
    if (!next.ok)
      throw std::invalid_argument(
          "degenerate fit: all weights vanished or x collapsed");
    const double change = std::max(std::abs(next.slope - line.slope),
                                   std::abs(next.intercept - line.intercept));
    line = next;
    result.slope = line.slope;
    result.intercept = line.intercept;
    if (change < kCoefficientTol) break;
    if (iter == kMaxIterations) {
      result.sample_count = n;
      result.r_squared = ordinary_r_squared(x, y, line.slope, line.intercept);
      throw FitNonConvergence(result);
    }
  }

  result.sample_count = n;
  result.r_squared = ordinary_r_squared(x, y, result.slope, result.intercept);
  return result;
}

IdentificationResult identify(const SampleLog& log,
                              const SteadyStateCriteria& criteria,
                              double filter_cutoff_hz, int filter_order) {
  log.validate(filter_cutoff_hz);

  IdentificationResult res;
  SampleLog& f = res.filtered;
  f = log;
  f.tension_n =
      zero_phase_lowpass(log.tension_n, filter_cutoff_hz, filter_order,
                         log.sample_rate_hz);
  f.tdu_torque_nm =
      zero_phase_lowpass(log.tdu_torque_nm, filter_cutoff_hz, filter_order,
                         log.sample_rate_hz);
  f.tdu_speed_rad_s =
      zero_phase_lowpass(log.tdu_speed_rad_s, filter_cutoff_hz, filter_order,
                         log.sample_rate_hz);

  // Acceleration from the filtered speed by central differences.
  const size_t n = f.size();
  const double dt = 1.0 / f.sample_rate_hz;
  f.tdu_acc_rad_s2.assign(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i)
    f.tdu_acc_rad_s2[i] =
        (f.tdu_speed_rad_s[i + 1] - f.tdu_speed_rad_s[i - 1]) / (2.0 * dt);
  if (n >= 2) {
    f.tdu_acc_rad_s2[0] = (f.tdu_speed_rad_s[1] - f.tdu_speed_rad_s[0]) / dt;
    f.tdu_acc_rad_s2[n - 1] =
        (f.tdu_speed_rad_s[n - 1] - f.tdu_speed_rad_s[n - 2]) / dt;
  }

  res.selected = select_steady_state(f, criteria);
  if (res.selected.raising.empty())
    throw std::runtime_error("no steady-state samples in direction: raising");
  if (res.selected.lowering.empty())
    throw std::runtime_error("no steady-state samples in direction: lowering");

  auto fit_direction = [&](const std::vector<size_t>& idx, Direction dir) {
    std::vector<double> x, y;
    x.reserve(idx.size());
    y.reserve(idx.size());
    for (size_t i : idx) {
      x.push_back(f.tension_n[i]);
      y.push_back(f.tdu_torque_nm[i]);
    }
    FitResult fit = robust_linear_fit(x, y);
    fit.direction = dir;
    return fit;
  };

  res.fit_raising = fit_direction(res.selected.raising, Direction::raising);
  res.fit_lowering = fit_direction(res.selected.lowering, Direction::lowering);

  res.regression.slope_raising = res.fit_raising.slope;
  res.regression.intercept_raising = res.fit_raising.intercept;
  res.regression.slope_lowering = res.fit_lowering.slope;
  res.regression.intercept_lowering = res.fit_lowering.intercept;
  res.regression.r2_raising = res.fit_raising.r_squared;
  res.regression.r2_lowering = res.fit_lowering.r_squared;
  res.regression.validate();
  return res;
}

}  // namespace exosuit
