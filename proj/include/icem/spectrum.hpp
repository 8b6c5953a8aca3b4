#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "icem/types.hpp"

namespace icem {

/// One-sided spectrum over the positive frequencies k/h, k = 1..h/2, in
/// cycles per step. The DC bin is not part of the estimate.
struct SpectrumEstimate {
  std::vector<double> frequencies;
  std::vector<double> power;

  [[nodiscard]] std::size_t size() const { return frequencies.size(); }
};

/// Periodogram of a real sequence.
///
/// Normalisation: P_k = 2 |X_k|^2 / h for 0 < k < h/2 and P_{h/2} = |X_{h/2}|^2 / h
/// (even h), with X the unscaled DFT. Parseval then gives the exact identity
///   sum_k P_k = sum_t (x_t - mean)^2 = h * population variance.
inline SpectrumEstimate estimate_psd(std::span<const double> sequence) {
  const std::size_t n = sequence.size();
  if (n < 8) {
    throw ValidationError("estimate_psd: need at least 8 samples, got " + std::to_string(n));
  }
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> coeffs(n / 2 + 1);
  fft.fwd(coeffs.data(), sequence.data(), static_cast<Eigen::Index>(n));

  SpectrumEstimate out;
  const std::size_t bins = n / 2;
  out.frequencies.reserve(bins);
  out.power.reserve(bins);
  const double dn = static_cast<double>(n);
  for (std::size_t k = 1; k <= bins; ++k) {
    const bool nyquist = (n % 2 == 0) && k == bins;
    out.frequencies.push_back(static_cast<double>(k) / dn);
    out.power.push_back((nyquist ? 1.0 : 2.0) * std::norm(coeffs[k]) / dn);
  }
  return out;
}

inline SpectrumEstimate estimate_psd(const Eigen::VectorXd& sequence) {
  return estimate_psd(std::span<const double>(sequence.data(), static_cast<std::size_t>(sequence.size())));
}

/// Bin-wise mean of spectra sharing one frequency grid.
inline SpectrumEstimate average_spectra(std::span<const SpectrumEstimate> spectra) {
  if (spectra.empty()) throw ValidationError("average_spectra: no spectra given");
  SpectrumEstimate out = spectra.front();
  for (std::size_t s = 1; s < spectra.size(); ++s) {
    if (spectra[s].size() != out.size()) {
      throw ValidationError("average_spectra: spectra have different lengths");
    }
    for (std::size_t k = 0; k < out.size(); ++k) out.power[k] += spectra[s].power[k];
  }
  for (double& p : out.power) p /= static_cast<double>(spectra.size());
  return out;
}

/// Frequency band used for power-law fits. The lowest bins carry the
/// low-frequency cutoff of the generator; the top bins the discretisation.
struct FitBand {
  std::size_t drop_low = 1;
  double drop_high_fraction = 0.1;
  /// Bins at or below this power count as empty.
  double min_power = 1e-20;
};

/// Least-squares slope of log(power) against log(frequency) over the band.
/// For a 1/f^beta spectrum the result is -beta.
inline double fit_spectral_exponent(const SpectrumEstimate& spectrum, const FitBand& band = {}) {
  const std::size_t m = spectrum.size();
  if (m < 4 || spectrum.power.size() != m) {
    throw ValidationError("fit_spectral_exponent: need at least 4 positive-frequency bins");
  }
  const auto drop_high = static_cast<std::size_t>(std::floor(band.drop_high_fraction * static_cast<double>(m)));
  const std::size_t lo = band.drop_low;
  const std::size_t hi = m - std::min(drop_high, m);
  if (hi <= lo + 1) throw ValidationError("fit_spectral_exponent: band leaves fewer than 2 bins");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = static_cast<double>(hi - lo);
  for (std::size_t k = lo; k < hi; ++k) {
    const double p = spectrum.power[k];
    if (!(p > band.min_power) || !std::isfinite(p)) {
      throw FitError("fit_spectral_exponent: non-positive power at frequency " +
                     std::to_string(spectrum.frequencies[k]));
    }
    const double x = std::log(spectrum.frequencies[k]);
    const double y = std::log(p);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

}  // namespace icem
