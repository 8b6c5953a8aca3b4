#pragma once

// Colored (1/f^beta) Gaussian noise for temporally correlated action sampling.
//
// Each row is produced by drawing independent complex Gaussian Fourier
// coefficients, shaping their amplitude by f^(-beta/2) and transforming back
// to the time domain. Power at frequency f is then proportional to 1/f^beta.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "icem/types.hpp"

namespace icem {

struct NoiseSpec {
  double beta = 0.0;
  Eigen::Index dims = 1;
  Eigen::Index horizon = 2;

  void validate() const {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
      throw ValidationError("noise: beta must be finite and >= 0, got " + std::to_string(beta));
    }
    if (dims < 1) throw ValidationError("noise: dims must be >= 1");
    if (horizon < 2) {
      throw ValidationError("noise: horizon must be >= 2, got " + std::to_string(horizon));
    }
  }
};

namespace detail {

/// Amplitude filter over the half spectrum k = 0..h/2. Frequencies below
/// 1/h (only the DC bin) take the amplitude of the lowest positive bin.
inline std::vector<double> colored_amplitudes(double beta, Eigen::Index horizon) {
  const auto n = static_cast<std::size_t>(horizon);
  std::vector<double> amp(n / 2 + 1);
  const double f_min = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < amp.size(); ++k) {
    const double f = std::max(static_cast<double>(k) / static_cast<double>(n), f_min);
    amp[k] = std::pow(f, -beta / 2.0);
  }
  return amp;
}

/// Expected standard deviation of the unnormalized time-domain signal.
///
/// With X_k = amp_k (a_k + i b_k), a, b ~ N(0,1), the inverse transform gives
/// per-sample variance (2 amp_0^2 + 4 sum_mid amp_k^2 + 2 amp_nyq^2) / h^2,
/// where the DC and Nyquist bins are real with doubled variance and every
/// other bin contributes through itself and its Hermitian mirror.
inline double colored_expected_std(const std::vector<double>& amp, Eigen::Index horizon) {
  const auto n = static_cast<std::size_t>(horizon);
  const bool even = (n % 2) == 0;
  double acc = 2.0 * amp[0] * amp[0];
  const std::size_t last_mid = even ? amp.size() - 2 : amp.size() - 1;
  for (std::size_t k = 1; k <= last_mid; ++k) acc += 4.0 * amp[k] * amp[k];
  if (even) acc += 2.0 * amp.back() * amp.back();
  return std::sqrt(acc) / static_cast<double>(n);
}

}  // namespace detail

/// Draws a dims x horizon block of colored noise. Every row is an independent
/// realisation with zero mean and unit variance in expectation. The scale is
/// fixed analytically from the filter, so individual rows keep their Gaussian
/// fluctuations in sample mean and variance.
///
/// Random words are consumed row by row; within a row the real then imaginary
/// part of bins 0..h/2 are drawn in order.
template <class Rng>
ActionSequence sample_colored(const NoiseSpec& spec, Rng& rng) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.horizon);
  const bool even = (n % 2) == 0;
  const std::vector<double> amp = detail::colored_amplitudes(spec.beta, spec.horizon);
  const double scale = 1.0 / detail::colored_expected_std(amp, spec.horizon);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> coeffs(amp.size());
  std::vector<double> row(n);
  ActionSequence out(spec.dims, spec.horizon);

  for (Eigen::Index r = 0; r < spec.dims; ++r) {
    for (std::size_t k = 0; k < amp.size(); ++k) {
      const double re = standard_normal(rng);
      const double im = standard_normal(rng);
      coeffs[k] = amp[k] * std::complex<double>(re, im);
    }
    // DC, and Nyquist for even lengths, must be real.
    coeffs[0] = std::complex<double>(coeffs[0].real() * std::numbers::sqrt2, 0.0);
    if (even) {
      coeffs.back() = std::complex<double>(coeffs.back().real() * std::numbers::sqrt2, 0.0);
    }
    fft.inv(row.data(), coeffs.data(), static_cast<Eigen::Index>(n));
    for (std::size_t t = 0; t < n; ++t) out(r, static_cast<Eigen::Index>(t)) = row[t] * scale;
  }
  return out;
}

/// Standard normal block; the beta = 0 reference distribution.
template <class Rng>
ActionSequence sample_white(Eigen::Index dims, Eigen::Index horizon, Rng& rng) {
  ActionSequence out(dims, horizon);
  for (Eigen::Index r = 0; r < dims; ++r) {
    for (Eigen::Index t = 0; t < horizon; ++t) out(r, t) = standard_normal(rng);
  }
  return out;
}

}  // namespace icem
