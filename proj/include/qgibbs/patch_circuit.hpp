#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgibbs/decay.hpp"
#include "qgibbs/gibbs.hpp"
#include "qgibbs/recovery.hpp"

namespace qgibbs {

/// One channel of the preparation circuit.
///
/// Replacement channels trace out `erased` and insert the reference state's
/// marginal there. Recovery channels trace out `erased` and rebuild it from
/// `shield` with the Petz map of the reference state's marginal on
/// erased ∪ shield.
struct ChannelSpec {
  enum class Kind { Replacement, Recovery };
  Kind kind = Kind::Recovery;
  Region erased;
  Region shield;
  /// Minus region of the tile (the part no earlier stage prepared).
  Region inner;
  int tile = -1;
};

struct Stage {
  std::string name;
  /// X such that this stage's channels are built from ρ^X.
  Region reference;
  std::vector<ChannelSpec> channels;
};

/// Stages in execution order: C, then the B groups, then A.
struct CircuitPlan {
  LocalHamiltonian hamiltonian;
  double beta = 0;
  Tiling tiling;
  std::vector<Stage> stages;

  int num_a_tiles() const { return static_cast<int>(tiling.stage_a.size()); }
  int num_b_tiles() const { return static_cast<int>(tiling.stage_b.size()); }
  /// Every restricted Gibbs state the plan consumes.
  std::vector<Region> reference_regions() const;
};

CircuitPlan build_plan(const LocalHamiltonian& h, double beta, int r, int ell);

struct StageRecord {
  std::string name;
  int channels = 0;
  double distance_to_target = 0;     ///< ‖state - ρ‖₁ after the stage
  double distance_to_reference = 0;  ///< ‖tr_{X^c} state - ρ^X‖₁ for the stage's X
  double max_trace_loss = 0;
};

/// Measured premises at the plan's buffer width ℓ.
struct Premises {
  double delta = 0;    ///< max I(erased : rest | shield) over recovery channels
  double epsilon = 0;  ///< ε̂(ℓ/2) around the boundary of the removed regions
  double gamma = 0;    ///< γ̂(ℓ/2) for single-site couplings on that boundary
};

struct PreparationReport {
  double distance = 0;  ///< ‖F(ψ) - ρ‖₁
  std::vector<StageRecord> stages;
  std::optional<Premises> premises;
  /// D L^D (δ̂ + ε̂ + γ̂), the right-hand side without its constant.
  double rhs_unit = 0;
  /// Σ over A tiles of (δ̂ + ε̂ + γ̂): the one-dimensional bound line.
  double rhs_1d_unit = 0;
  std::optional<double> bound_constant;
  double wall_seconds = 0;
  int num_a_tiles = 0;
  int num_b_tiles = 0;
  int ell = 0;
  int r = 0;
};

struct RunOptions {
  /// Apply channels of each stage in reverse tile order.
  bool reverse_tile_order = false;
  /// Measure ε̂, δ̂, γ̂ and fill the premise block.
  bool measure_premises = true;
  /// Stop after this many stages (all when unset).
  std::optional<int> stage_limit;
};

struct RunResult {
  DensityOperator state;
  PreparationReport report;
};

/// Applies one stage to a full-lattice state; returns the largest trace loss.
DensityOperator run_stage(const CircuitPlan& plan, int stage, const DensityOperator& state,
                          double* max_trace_loss = nullptr, bool reverse_tile_order = false);

RunResult run_plan(const CircuitPlan& plan, const DensityOperator& psi,
                   const RunOptions& options = {});

Premises measure_premises(const CircuitPlan& plan);

/// The two-layer one-dimensional circuit: gaps prepared by replacement, then
/// the intervals recovered. r = 0 picks min(4ℓ, N).
RunResult prepare_1d(const LocalHamiltonian& h, double beta, int ell,
                     const DensityOperator& psi, int r = 0);

/// Ground state (lowest eigenvector) of the full Hamiltonian as a density operator.
DensityOperator ground_state(const LocalHamiltonian& h);

/// Renormalized patch sizes for the iterated construction.
struct DepthSchedule {
  bool feasible = false;
  std::string reason;
  double side = 0;
  int dimension = 0;
  double target = 0;
  /// L_0 < L_1 < ... with L_{k+1} = (target / (D err(L_k)))^{1/D}, err the
  /// sum of the fitted decay curves; the last entry reaches `side`.
  std::vector<double> scales;
  int levels = 0;
  /// (D + 1) circuit layers per level.
  int depth = 0;
  /// D ⌈log L / log(1/target)⌉ for the strictly local variant; -1 when
  /// target ∈ [1, 2) leaves the formula undefined.
  int strictly_local_depth = 0;
};

DepthSchedule depth_schedule(double side, int dimension, double target,
                             const std::vector<DecayFit>& fits);

}  // namespace qgibbs
