#include "qgibbs/decay.hpp"

#include <algorithm>
#include <cmath>

#include "qgibbs/errors.hpp"

namespace qgibbs {

double DecayFit::operator()(double ell) const {
  if (!fitted) return NAN;
  if (form == DecayForm::PowerLaw) return c1 * std::pow(ell, -c2);
  return c1 * std::exp(-c2 * ell);
}

std::vector<double> DecayProfile::ells() const {
  std::vector<double> out;
  for (const auto& s : samples) out.push_back(s.ell);
  return out;
}

std::vector<double> DecayProfile::values() const {
  std::vector<double> out;
  for (const auto& s : samples) out.push_back(s.value);
  return out;
}

double DecayProfile::max_value() const {
  double m = 0;
  for (const auto& s : samples) m = std::max(m, s.value);
  return m;
}

DecayFit decay_fit(const std::vector<double>& ell, const std::vector<double>& value,
                   DecayForm form) {
  if (ell.size() != value.size()) throw InvalidArgument("decay_fit: length mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < ell.size(); ++i) {
    if (!(value[i] > kDecayFloor) || !std::isfinite(value[i])) continue;
    double x = ell[i];
    if (form == DecayForm::PowerLaw) {
      if (x <= 0) continue;
      x = std::log(x);
    }
    xs.push_back(x);
    ys.push_back(std::log(value[i]));
  }
  DecayFit fit;
  fit.form = form;
  fit.n_used = static_cast<int>(xs.size());
  if (xs.size() < 3) return fit;

  const double n = double(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0) return fit;  // every sample at the same ℓ
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss += r * r;
  }
  fit.fitted = true;
  fit.c1 = std::exp(intercept);
  fit.c2 = -slope;
  fit.residual = std::sqrt(ss / n);
  return fit;
}

DecayFit decay_fit(const DecayProfile& profile, DecayForm form) {
  return decay_fit(profile.ells(), profile.values(), form);
}

}  // namespace qgibbs
