#pragma once

#include <string>
#include <vector>

namespace qgibbs {

/// Samples at or below this value are treated as zero by the fit.
inline constexpr double kDecayFloor = 1e-12;

enum class DecayForm { Exponential, PowerLaw };

/// value ≈ c1 e^{-c2 ℓ} (or c1 ℓ^{-c2}).
struct DecayFit {
  bool fitted = false;
  DecayForm form = DecayForm::Exponential;
  double c1 = 0;
  double c2 = 0;
  /// Root-mean-square residual of the log-space fit.
  double residual = 0;
  int n_used = 0;

  double operator()(double ell) const;
  bool decaying() const { return fitted && c2 > 0; }
};

struct DecaySample {
  double ell = 0;
  double value = 0;
  /// Secondary measurement recorded with the sample (profile-specific).
  double aux = 0;
  std::string context;
};

struct DecayProfile {
  std::string kind;
  std::vector<DecaySample> samples;
  DecayFit fit;

  std::vector<double> ells() const;
  std::vector<double> values() const;
  double max_value() const;
};

/// Least-squares fit in log space over samples above kDecayFloor; needs at
/// least three such samples, otherwise the result is marked unfitted.
DecayFit decay_fit(const std::vector<double>& ell, const std::vector<double>& value,
                   DecayForm form = DecayForm::Exponential);
DecayFit decay_fit(const DecayProfile& profile, DecayForm form = DecayForm::Exponential);

}  // namespace qgibbs
