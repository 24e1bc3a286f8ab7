#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace exosuit::metrics {

/// Outcome value reported for the whole movement and per phase.
struct PhaseSplitStat {
  double entire = 0.0;
  double raising = 0.0;
  double lowering = 0.0;
};

/// Root-mean-square error between two equal-length series.
double rmse(std::span<const double> reference, std::span<const double> measured);

/// RMSE of the percentage error 100*(measured-reference)/reference. Samples
/// with |reference| < epsilon are excluded; the count of exclusions can be
/// retrieved. Throws if every sample is excluded.
double percentage_error_rmse(std::span<const double> reference,
                             std::span<const double> measured,
                             double epsilon = 1e-6,
                             size_t* excluded = nullptr);

/// RMSE split by phase labels (+1 raising, -1 lowering).
PhaseSplitStat rmse_split(std::span<const double> reference,
                          std::span<const double> measured,
                          std::span<const int8_t> phase);

struct SparcConfig {
  double cutoff_hz = 10.0;
  double amplitude_threshold = 0.05;
  int zero_padding = 4;  // pad factor: nfft = 2^(ceil(log2 n) + zero_padding)
};

/// Spectral arc length of the normalized magnitude spectrum of a speed
/// profile. More negative means less smooth. Throws on an all-zero profile.
double sparc(std::span<const double> speed, double sample_rate_hz,
             const SparcConfig& cfg = {});

struct EnvelopeConfig {
  double bandpass_low_hz = 20.0;
  double bandpass_high_hz = 400.0;
  int filter_order = 3;
  double rms_window_s = 0.100;
};

/// Zero-phase band-pass, full-wave rectification, and a centered sliding RMS
/// window (edge-truncated). Output is non-negative with the input's length.
std::vector<double> emg_envelope(std::span<const double> raw,
                                 double sample_rate_hz,
                                 const EnvelopeConfig& cfg = {});

/// Normalized-time integral (trapezoidal over a unit domain, i.e. the
/// duration-invariant mean) of the envelope per phase. Throws when a phase
/// has no samples.
PhaseSplitStat iemg(std::span<const double> envelope,
                    std::span<const int8_t> phase);

struct MeanSd {
  std::vector<double> mean;
  std::vector<double> sd;
};

/// Resamples each repetition onto a fixed-length normalized time vector and
/// returns the pointwise mean and sample standard deviation. Optionally
/// drops the first repetition before averaging.
MeanSd normalize_and_average(const std::vector<std::vector<double>>& repetitions,
                             bool drop_first, int points = 1001);

/// Linear resampling of one series onto `points` uniform samples of [0, 1].
std::vector<double> resample_normalized(std::span<const double> series,
                                        int points);

}  // namespace exosuit::metrics
