#pragma once

#include <complex>
#include <span>
#include <vector>

namespace exosuit::dsp {

/// Digital IIR filter as direct-form transfer function coefficients,
/// normalized so a[0] == 1.
struct FilterCoeffs {
  std::vector<double> b;
  std::vector<double> a;

  int order() const { return static_cast<int>(a.size()) - 1; }
};

/// Butterworth low-pass designed by bilinear transform with frequency
/// pre-warping. Unit gain at DC.
FilterCoeffs butter_lowpass(int order, double cutoff_hz, double sample_rate_hz);

/// Butterworth band-pass of the given prototype order (resulting filter has
/// order 2*order). Unit gain at the warped center frequency.
FilterCoeffs butter_bandpass(int order, double low_hz, double high_hz,
                             double sample_rate_hz);

/// Magnitude response of the designed filter at frequency f_hz.
double magnitude_response(const FilterCoeffs& fc, double f_hz,
                          double sample_rate_hz);

/// Causal single-pass filter (direct form II transposed). `zi` is an optional
/// initial state of length order(); empty means zero initial state.
std::vector<double> lfilter(const FilterCoeffs& fc, std::span<const double> x,
                            std::span<const double> zi = {});

/// Steady-state filter state for a unit-amplitude step input. Scaling this by
/// the first sample of a signal removes the start-up transient.
std::vector<double> lfilter_zi(const FilterCoeffs& fc);

/// Forward-backward zero-phase filtering with odd-reflection edge padding of
/// length 3*(order+1). Requires x.size() > padding length.
std::vector<double> filtfilt(const FilterCoeffs& fc, std::span<const double> x);

/// In-place radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a);

}  // namespace exosuit::dsp
