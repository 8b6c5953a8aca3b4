#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace icem {

/// A d x h matrix: one row per action dimension, one column per timestep.
using ActionSequence = Eigen::MatrixXd;
using Action = Eigen::VectorXd;

/// Thrown when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by spectral fitting when the band has no usable power.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ActionBounds {
  Action lower;
  Action upper;

  [[nodiscard]] Eigen::Index dims() const { return lower.size(); }

  [[nodiscard]] Action midpoint() const { return 0.5 * (lower + upper); }

  [[nodiscard]] bool contains(const Action& a) const {
    return a.size() == dims() && (a.array() >= lower.array()).all() &&
           (a.array() <= upper.array()).all();
  }

  [[nodiscard]] bool contains(const ActionSequence& seq) const {
    if (seq.rows() != dims()) return false;
    for (Eigen::Index t = 0; t < seq.cols(); ++t) {
      if (!contains(Action(seq.col(t)))) return false;
    }
    return true;
  }

  /// Elementwise clamp of every column into [lower, upper].
  void clamp(ActionSequence& seq) const {
    for (Eigen::Index t = 0; t < seq.cols(); ++t) {
      seq.col(t) = seq.col(t).cwiseMax(lower).cwiseMin(upper);
    }
  }

  static ActionBounds symmetric(Eigen::Index dims, double limit) {
    return {Action::Constant(dims, -limit), Action::Constant(dims, limit)};
  }

  void validate() const {
    if (lower.size() == 0 || lower.size() != upper.size()) {
      throw ValidationError("action bounds: lower/upper must be non-empty and equal length");
    }
    if (!lower.allFinite() || !upper.allFinite() || (lower.array() > upper.array()).any()) {
      throw ValidationError("action bounds: must be finite with lower <= upper");
    }
  }
};

// Random draws go through these helpers instead of <random> distributions so
// that a seeded stream produces the same numbers with every standard library.

/// Uniform in [0, 1) with 53 bits of resolution.
template <class Rng>
double uniform01(Rng& rng) {
  static_assert(Rng::max() - Rng::min() >= 0xFFFFFFFFFFFFFFFFull,
                "uniform01 expects a 64-bit generator");
  return static_cast<double>((rng() - Rng::min()) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; consumes exactly two words per draw.
template <class Rng>
double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace icem
