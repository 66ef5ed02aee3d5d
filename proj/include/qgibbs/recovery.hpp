#pragma once

#include <string>
#include <vector>

#include "qgibbs/operator.hpp"

namespace qgibbs {

/// Which member of the rotated Petz family to use.
struct Rotation {
  enum class Kind { Fixed, Integrated };
  Kind kind = Kind::Fixed;
  double t = 0;

  static Rotation plain() { return {}; }
  static Rotation rotated(double t) { return {Kind::Fixed, t}; }
  /// Average over t with density (π/2)(cosh πt + 1)^{-1}, 51-point trapezoid on [-20, 20].
  static Rotation integrated() { return {Kind::Integrated, 0}; }
  std::string describe() const;
};

struct QuadraturePoint {
  double t;
  double weight;
};

/// Trapezoid nodes of the rotation density; weights are normalized to sum to
/// one and `mass_error` receives |1 - raw weight sum|.
std::vector<QuadraturePoint> rotation_quadrature(double* mass_error = nullptr);

/// Eigenvalues at or below this fraction of the largest one are treated as
/// zero when taking negative powers.
inline constexpr double kPseudoInverseCutoff = 1e-12;

struct RecoveryOutput {
  DensityOperator state;
  double trace_before = 1;
  double trace_loss = 0;
  /// Trace loss above 1e-8: the input left the support of σ_B.
  bool flagged = false;
};

/// Petz-type channel that rebuilds an erased region A from its shield B:
///   X_B ↦ σ_AB^{(1+it)/2} (σ_B^{-(1+it)/2} X_B σ_B^{-(1-it)/2} ⊗ 1_A) σ_AB^{(1-it)/2}.
/// A channel built by union_compose holds several such factors on disjoint
/// supports and applies them in sequence.
class RecoveryChannel {
 public:
  static RecoveryChannel petz(const DensityOperator& sigma_ab, const Region& a, const Region& b,
                              Rotation rotation = Rotation::plain());

  const Region& erased() const { return erased_; }
  const Region& shield() const { return shield_; }
  int num_factors() const { return static_cast<int>(factors_.size()); }
  /// Reference state of a single-factor channel.
  const DensityOperator& reference() const;
  const Rotation& rotation() const { return factors_.at(0).rotation; }
  /// Quadrature mass error of the integrated map (0 for fixed rotations).
  double quadrature_error() const;

  /// Unnormalized image of an operator whose support contains the shield(s)
  /// and avoids the erased region(s).
  Operator map(const Operator& x) const;
  /// Choi matrix Σ_ij |i><j| ⊗ R(|i><j|) on shield ⊗ (erased ∪ shield)
  /// (single-factor channels only).
  Matrix choi_matrix() const;
  /// Projector onto the support of σ_B (single-factor channels only).
  Operator shield_support_projector() const;

 private:
  struct Factor {
    Region erased;
    Region shield;
    DensityOperator reference;
    Rotation rotation;
    double quadrature_error = 0;
    std::vector<double> weights;
    std::vector<Operator> kraus;  // K_t = σ_AB^{(1+it)/2} (σ_B^{-(1+it)/2} ⊗ 1_A)
    Operator support_projector;
  };

  static Operator apply_factor(const Factor& f, const Operator& x);

  std::vector<Factor> factors_;
  Region erased_;
  Region shield_;

  friend RecoveryChannel union_compose(const RecoveryChannel&, const RecoveryChannel&);
};

/// Applies R ⊗ id to a state holding the shield but not the erased region,
/// then renormalizes (the removed trace is reported).
RecoveryOutput apply_recovery(const RecoveryChannel& r, const DensityOperator& state);

struct FrCheck {
  double cmi = 0;
  double minus_two_log_f = 0;
  double trace_term = 0;  ///< d1² / (4 ln 2)
  double converse_rhs = 0;  ///< 13 log₂(d_AB) √d1
  bool fidelity_bound = false;
  bool trace_bound = false;
  bool converse = false;
};

struct RecoveryError {
  double trace_distance = 0;  ///< ‖σ - R(σ_BC)‖₁
  double fidelity = 0;
  double trace_loss = 0;
  FrCheck fr;
};

/// Recovery quality of R on σ_ABC. Failures of the two achievability checks
/// are reported; a converse-bound failure throws InvariantViolation.
RecoveryError recovery_error(const DensityOperator& sigma, const Region& a, const Region& b,
                             const Region& c, const RecoveryChannel& r);

/// Both channels applied one after the other. Their supports must be
/// disjoint; the constructor checks that the two orders agree within 1e-12.
RecoveryChannel union_compose(const RecoveryChannel& r1, const RecoveryChannel& r2);

}  // namespace qgibbs
