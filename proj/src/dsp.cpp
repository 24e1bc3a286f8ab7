#include "exosuit/dsp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace exosuit::dsp {

namespace {

using cplx = std::complex<double>;

// Expand a monic polynomial from its roots; returns coefficients in
// descending powers, leading coefficient 1.
std::vector<cplx> poly_from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> coeffs{1.0};
  for (const cplx& r : roots) {
    std::vector<cplx> next(coeffs.size() + 1, 0.0);
    for (size_t i = 0; i < coeffs.size(); ++i) {
      next[i] += coeffs[i];
      next[i + 1] -= coeffs[i] * r;
    }
    coeffs = std::move(next);
  }
  return coeffs;
}

std::vector<double> real_coeffs(const std::vector<cplx>& c) {
  std::vector<double> out(c.size());
  for (size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

// Analog Butterworth prototype poles on the unit circle, left half plane.
std::vector<cplx> prototype_poles(int order) {
  std::vector<cplx> poles;
  poles.reserve(order);
  for (int k = 0; k < order; ++k) {
    double theta = std::numbers::pi * (2.0 * k + order + 1.0) / (2.0 * order);
    poles.emplace_back(std::cos(theta), std::sin(theta));
  }
  return poles;
}

cplx bilinear_pole(cplx s, double fs2) {  // fs2 = 2 * sample rate
  return (fs2 + s) / (fs2 - s);
}

cplx eval_poly(const std::vector<double>& c, cplx z) {
  cplx acc = 0.0;
  for (double ci : c) acc = acc * z + ci;
  return acc;
}

void check_band(double f_hz, double sample_rate_hz, const char* what) {
  if (f_hz <= 0.0 || f_hz >= 0.5 * sample_rate_hz)
    throw std::invalid_argument(std::string(what) +
                                " must lie strictly between 0 and Nyquist");
}

}  // namespace

FilterCoeffs butter_lowpass(int order, double cutoff_hz,
                            double sample_rate_hz) {
  if (order < 1) throw std::invalid_argument("filter order must be >= 1");
  check_band(cutoff_hz, sample_rate_hz, "cutoff");

  const double fs2 = 2.0 * sample_rate_hz;
  const double warped =
      fs2 * std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);

  std::vector<cplx> zpoles;
  for (cplx p : prototype_poles(order)) zpoles.push_back(bilinear_pole(p * warped, fs2));
  // All analog zeros at infinity land on z = -1.
  std::vector<cplx> zzeros(order, cplx(-1.0, 0.0));

  FilterCoeffs fc;
  fc.a = real_coeffs(poly_from_roots(zpoles));
  fc.b = real_coeffs(poly_from_roots(zzeros));

  // Normalize to unit DC gain.
  cplx num = eval_poly(fc.b, 1.0), den = eval_poly(fc.a, 1.0);
  double k = (den / num).real();
  for (double& bi : fc.b) bi *= k;
  return fc;
}

FilterCoeffs butter_bandpass(int order, double low_hz, double high_hz,
                             double sample_rate_hz) {
  if (order < 1) throw std::invalid_argument("filter order must be >= 1");
  if (low_hz >= high_hz)
    throw std::invalid_argument("band edges must satisfy low < high");
  check_band(low_hz, sample_rate_hz, "low band edge");
  check_band(high_hz, sample_rate_hz, "high band edge");

  const double fs2 = 2.0 * sample_rate_hz;
  const double w1 = fs2 * std::tan(std::numbers::pi * low_hz / sample_rate_hz);
  const double w2 = fs2 * std::tan(std::numbers::pi * high_hz / sample_rate_hz);
  const double bw = w2 - w1;
  const double w0 = std::sqrt(w1 * w2);

  // Low-pass to band-pass transform: each prototype pole spawns a pair.
  std::vector<cplx> zpoles;
  for (cplx p : prototype_poles(order)) {
    cplx half = p * (bw / 2.0);
    cplx disc = std::sqrt(half * half - w0 * w0);
    zpoles.push_back(bilinear_pole(half + disc, fs2));
    zpoles.push_back(bilinear_pole(half - disc, fs2));
  }
  std::vector<cplx> zzeros(order, cplx(1.0, 0.0));
  zzeros.insert(zzeros.end(), order, cplx(-1.0, 0.0));

  FilterCoeffs fc;
  fc.a = real_coeffs(poly_from_roots(zpoles));
  fc.b = real_coeffs(poly_from_roots(zzeros));

  // Normalize to unit gain at the (warped) center frequency.
  const double wc = 2.0 * std::atan(w0 / fs2);
  cplx z = std::polar(1.0, wc);
  double g = std::abs(eval_poly(fc.b, z) / eval_poly(fc.a, z));
  for (double& bi : fc.b) bi /= g;
  return fc;
}

double magnitude_response(const FilterCoeffs& fc, double f_hz,
                          double sample_rate_hz) {
  cplx z = std::polar(1.0, 2.0 * std::numbers::pi * f_hz / sample_rate_hz);
  return std::abs(eval_poly(fc.b, z) / eval_poly(fc.a, z));
}

std::vector<double> lfilter(const FilterCoeffs& fc, std::span<const double> x,
                            std::span<const double> zi) {
  const size_t n = fc.a.size();
  if (fc.b.size() != n) throw std::invalid_argument("b/a size mismatch");
  std::vector<double> z(n - 1, 0.0);
  if (!zi.empty()) {
    if (zi.size() != n - 1) throw std::invalid_argument("bad zi length");
    std::copy(zi.begin(), zi.end(), z.begin());
  }
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    double yi = fc.b[0] * x[i] + z[0];
    for (size_t j = 1; j < n; ++j) {
      double zj = (j < n - 1) ? z[j] : 0.0;
      z[j - 1] = fc.b[j] * x[i] + zj - fc.a[j] * yi;
    }
    y[i] = yi;
  }
  return y;
}

std::vector<double> lfilter_zi(const FilterCoeffs& fc) {
  const int m = fc.order();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  // I - companion(a)^T
  for (int i = 0; i < m; ++i) {
    A(0, i) = fc.a[i + 1];
    if (i + 1 < m) A(i + 1, i) = -1.0;
    A(i, i) += 1.0;
  }
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) rhs(i) = fc.b[i + 1] - fc.a[i + 1] * fc.b[0];
  Eigen::VectorXd zi = A.partialPivLu().solve(rhs);
  return std::vector<double>(zi.data(), zi.data() + m);
}

std::vector<double> filtfilt(const FilterCoeffs& fc,
                             std::span<const double> x) {
  const size_t pad = 3 * static_cast<size_t>(fc.order() + 1);
  if (x.size() <= pad)
    throw std::invalid_argument("signal too short for zero-phase filtering");

  std::vector<double> ext;
  ext.reserve(x.size() + 2 * pad);
  for (size_t i = 0; i < pad; ++i) ext.push_back(2.0 * x[0] - x[pad - i]);
  ext.insert(ext.end(), x.begin(), x.end());
  const size_t nx = x.size();
  for (size_t i = 0; i < pad; ++i)
    ext.push_back(2.0 * x[nx - 1] - x[nx - 2 - i]);

  std::vector<double> zi = lfilter_zi(fc);
  std::vector<double> z0(zi.size());

  for (size_t j = 0; j < zi.size(); ++j) z0[j] = zi[j] * ext.front();
  std::vector<double> y = lfilter(fc, ext, z0);
  std::reverse(y.begin(), y.end());
  for (size_t j = 0; j < zi.size(); ++j) z0[j] = zi[j] * y.front();
  y = lfilter(fc, y, z0);
  std::reverse(y.begin(), y.end());

  return std::vector<double>(y.begin() + pad, y.begin() + pad + nx);
}

void fft_radix2(std::vector<std::complex<double>>& a) {
  const size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("FFT size must be a power of two");
  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const cplx wlen = std::polar(1.0, ang);
    for (size_t i = 0; i < n; i += len) {
      cplx w = 1.0;
      for (size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace exosuit::dsp
