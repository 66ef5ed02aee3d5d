#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "qgibbs/decay.hpp"
#include "qgibbs/hamiltonian.hpp"

namespace qgibbs {

/// Belief-propagation operator η with e^{-β(H0+V)} = η e^{-βH0} η†.
///
/// The representative is η = e^{-β(H0+V)/2} e^{βH0/2}. Both exponentials are
/// evaluated with H0 and H0+V shifted by the ground energy c of H0+V, which
/// leaves η unchanged and keeps every factor bounded.
class BPOperator {
 public:
  BPOperator(const Operator& h0, const Operator& v, double beta);

  const Region& region() const { return region_; }
  /// Sites V acts on.
  const Region& perturbation_support() const { return v_support_; }
  double beta() const { return beta_; }
  const Operator& eta() const { return eta_; }
  double eta_norm() const { return eta_norm_; }
  /// e^{β‖V‖/2}, the norm bound quoted for the filtered construction.
  double eta_norm_reference() const { return eta_reference_; }
  /// ‖e^{-β(H-c)} - η e^{-β(H0-c)} η†‖₁.
  double identity_residual() const { return residual_; }

  /// η_ℓ: η compressed onto the radius-ℓ ball around supp V by a normalized
  /// partial trace, embedded back on the full region. Cached per radius.
  std::shared_ptr<const Operator> localize(double radius) const;
  Region ball_region(double radius) const;

  struct Locality {
    double radius = 0;
    /// ‖e^{-βH}/Z - η_ℓ e^{-βH0} η_ℓ† / tr(·)‖₁.
    double gamma = 0;
    /// ‖η - η_ℓ‖.
    double eta_error = 0;
    /// 2 ‖η - η_ℓ‖ (‖η‖ + ‖η_ℓ‖) Z0 / Z, which always dominates gamma.
    double bound = 0;
  };
  Locality locality(double radius) const;

 private:
  Region region_;
  Region v_support_;
  double beta_;
  Operator eta_;
  Matrix sigma0_;  // e^{-β(H0-c)}
  Matrix sigma_;   // e^{-β(H-c)}
  double z0_ = 0, z_ = 0;
  double eta_norm_ = 0, eta_reference_ = 0, residual_ = 0;
  mutable std::mutex mu_;
  mutable std::map<double, std::shared_ptr<const Operator>> localized_;
};

BPOperator exact_bp_operator(const Operator& h0, const Operator& v, double beta);

/// Which terms of H form the perturbation V for a given site set S.
enum class PerturbationMode {
  Touching,   ///< every term meeting S (removing S's couplings)
  Contained,  ///< only terms supported inside S
};

struct BPProfile {
  DecayProfile profile;  ///< value = γ̂(ℓ), aux = ‖η - η_ℓ‖
  double eta_norm = 0;
  double eta_norm_reference = 0;
  bool eta_norm_exceeds_reference = false;
  double identity_residual = 0;
};

/// γ̂(ℓ) for V = the terms of H^X selected by `sites` and `mode`, H0 = the
/// remaining terms of H^X. Throws InvariantViolation if a measured γ̂ exceeds
/// its operator-level bound.
BPProfile bp_decay_profile(const LocalHamiltonian& h, double beta, const Region& sites,
                           const std::vector<double>& radii,
                           PerturbationMode mode = PerturbationMode::Touching,
                           const Region* x = nullptr);

}  // namespace qgibbs
