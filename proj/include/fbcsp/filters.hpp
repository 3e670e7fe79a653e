#pragma once

#include "fbcsp/session.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fbcsp {

// One second-order section, a0 normalized to 1.
struct SosSection {
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// Digital band-pass filter as a cascade of second-order sections.
struct IirFilter {
  std::vector<SosSection> sections;
  std::pair<double, double> band{0.0, 0.0};  // Hz
  double fs_hz = 0.0;
};

// H(e^{j 2 pi f / fs}) evaluated from the section cascade.
inline std::complex<double> filter_response(const IirFilter& f, double freq_hz) {
  const double w = 2.0 * M_PI * freq_hz / f.fs_hz;
  const std::complex<double> e1 = std::polar(1.0, -w);
  const std::complex<double> e2 = std::polar(1.0, -2.0 * w);
  std::complex<double> h(1.0, 0.0);
  for (const SosSection& s : f.sections) {
    h *= (s.b0 + s.b1 * e1 + s.b2 * e2) / (1.0 + s.a1 * e1 + s.a2 * e2);
  }
  return h;
}

inline double filter_gain(const IirFilter& f, double freq_hz) {
  return std::abs(filter_response(f, freq_hz));
}

// Leading-edge padding used by apply_filter: three times the slowest time
// constant of the band, in samples.
inline Eigen::Index filter_pad_length(const IirFilter& f) {
  return 3 * static_cast<Eigen::Index>(std::ceil(f.fs_hz / f.band.first));
}

namespace detail {

// Builds a real-coefficient denominator from a digital pole pair. The pair is
// either complex conjugate or both real.
inline SosSection section_from_pole_pair(std::complex<double> p1, std::complex<double> p2) {
  SosSection s;
  s.a1 = -(p1 + p2).real();
  s.a2 = (p1 * p2).real();
  // Stability triangle for z^2 + a1 z + a2.
  if (!(std::abs(s.a2) < 1.0 && std::abs(s.a1) < 1.0 + s.a2)) {
    throw std::logic_error("dsp: designed section is unstable");
  }
  return s;
}

}  // namespace detail

// Digital Butterworth band-pass: analog low-pass prototype of the given
// per-edge order, low-pass -> band-pass transform on the pre-warped edges,
// then bilinear transform. Pre-warping puts the -3 dB points exactly at the
// requested digital band edges. order = 2 gives the conventional
// "2nd order Butterworth band-pass" (4 poles, 2 sections).
inline IirFilter design_bandpass(double low_hz, double high_hz, double fs_hz, int order = 2) {
  if (!(fs_hz > 0.0)) throw std::invalid_argument("dsp: sampling rate must be positive");
  if (!(low_hz > 0.0 && low_hz < high_hz)) {
    throw std::invalid_argument("dsp: band edges must satisfy 0 < low < high");
  }
  if (!(high_hz < fs_hz / 2.0)) {
    throw std::invalid_argument("dsp: high edge must lie below Nyquist");
  }
  if (order < 1) throw std::invalid_argument("dsp: order must be >= 1");

  using cd = std::complex<double>;
  const double c = 2.0 * fs_hz;  // bilinear constant
  const double warped_low = c * std::tan(M_PI * low_hz / fs_hz);
  const double warped_high = c * std::tan(M_PI * high_hz / fs_hz);
  const double center_sq = warped_low * warped_high;
  const double bandwidth = warped_high - warped_low;

  // Unit Butterworth low-pass prototype poles in the left half plane. Only
  // the upper half is enumerated; conjugates are implied. The band-pass
  // transform s -> (s^2 + w0^2)/(B s) splits every prototype pole into the
  // two roots of s^2 - p B s + w0^2.
  std::vector<std::pair<cd, cd>> analog_pairs;  // conjugate section pairs
  auto split_pole = [&](cd p) {
    const cd pb = p * bandwidth;
    const cd disc = std::sqrt(pb * pb - 4.0 * center_sq);
    return std::pair<cd, cd>{(pb + disc) * 0.5, (pb - disc) * 0.5};
  };
  for (int k = 0; 2 * k < order - 1; ++k) {
    const double theta = M_PI * (2.0 * k + order + 1.0) / (2.0 * order);
    const auto [s1, s2] = split_pole(cd(std::cos(theta), std::sin(theta)));
    analog_pairs.push_back({s1, std::conj(s1)});
    analog_pairs.push_back({s2, std::conj(s2)});
  }
  if (order % 2 == 1) {
    const auto [s1, s2] = split_pole(cd(-1.0, 0.0));
    analog_pairs.push_back({s1, s2});
  }

  // Bilinear transform of poles, accumulating the gain denominator. The
  // analog band-pass gain is bandwidth^order with order zeros at s = 0
  // (each contributing a factor c to the numerator).
  IirFilter f;
  f.band = {low_hz, high_hz};
  f.fs_hz = fs_hz;
  cd denom(1.0, 0.0);
  for (const auto& [s1, s2] : analog_pairs) {
    denom *= (c - s1) * (c - s2);
    const cd z1 = (c + s1) / (c - s1);
    const cd z2 = (c + s2) / (c - s2);
    f.sections.push_back(detail::section_from_pole_pair(z1, z2));
  }
  const double gain = (std::pow(bandwidth * c, order) / denom).real();

  // Every section takes one zero at z = +1 and one at z = -1 (the images of
  // the analog zeros at 0 and infinity), so its numerator is z^2 - 1.
  for (std::size_t i = 0; i < f.sections.size(); ++i) {
    const double g = (i == 0) ? gain : 1.0;
    f.sections[i].b0 = g;
    f.sections[i].b1 = 0.0;
    f.sections[i].b2 = -g;
  }
  return f;
}

// Causal per-channel filtering. The leading edge is reflection-padded
// (mirror about the first sample, which is not repeated) and the padded
// prefix of the output is discarded, suppressing the start-up transient
// while keeping the filter strictly causal. Output shape equals input shape.
inline Mat apply_filter(const IirFilter& f, const Mat& trial_samples) {
  const Eigen::Index pad = filter_pad_length(f);
  const Eigen::Index rows = trial_samples.rows();
  if (rows < pad + 1) {
    throw std::invalid_argument("dsp: trial too short for filter padding");
  }

  Mat out(rows, trial_samples.cols());
  std::vector<double> buf(static_cast<std::size_t>(pad + rows));
  for (Eigen::Index ch = 0; ch < trial_samples.cols(); ++ch) {
    for (Eigen::Index i = 0; i < pad; ++i) buf[i] = trial_samples(pad - i, ch);
    for (Eigen::Index i = 0; i < rows; ++i) buf[pad + i] = trial_samples(i, ch);

    for (const SosSection& s : f.sections) {
      double z1 = 0.0, z2 = 0.0;  // direct form II transposed state
      for (double& v : buf) {
        const double in = v;
        const double y = s.b0 * in + z1;
        z1 = s.b1 * in - s.a1 * y + z2;
        z2 = s.b2 * in - s.a2 * y;
        v = y;
      }
    }
    for (Eigen::Index i = 0; i < rows; ++i) out(i, ch) = buf[pad + i];
  }
  return out;
}

}  // namespace fbcsp
