#pragma once

#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "qgibbs/decay.hpp"
#include "qgibbs/hamiltonian.hpp"

namespace qgibbs {

/// ρ^X = e^{-βH^X} / tr e^{-βH^X} together with spectral data.
struct GibbsState {
  DensityOperator state;
  /// Spectrum of H^X, ascending.
  RealVector energies;
  double log_partition = 0;
  double entropy_bits = 0;
  double beta = 0;
};

/// Computes ρ^X directly. H^X is split into term-connected clusters and the
/// state assembled as a tensor product, so disconnected regions stay cheap.
GibbsState compute_gibbs(const LocalHamiltonian& h, double beta, const Region& x);

/// Thread-safe memo of restricted Gibbs states keyed by (model hash, β, X).
/// Concurrent requests for one key compute it once.
class GibbsCache {
 public:
  explicit GibbsCache(std::size_t max_bytes = std::size_t(1) << 31);

  std::shared_ptr<const GibbsState> get(const LocalHamiltonian& h, double beta,
                                        const Region& x);
  std::size_t size() const;
  std::size_t hits() const;
  void clear();

 private:
  using Key = std::tuple<std::uint64_t, double, std::vector<int>>;
  using Entry = std::shared_future<std::shared_ptr<const GibbsState>>;

  mutable std::mutex mu_;
  std::map<Key, Entry> entries_;
  std::vector<Key> order_;
  std::size_t bytes_ = 0;
  std::size_t max_bytes_;
  std::size_t hits_ = 0;
};

GibbsCache& shared_gibbs_cache();

/// Cached ρ^X from the shared cache.
std::shared_ptr<const GibbsState> gibbs(const LocalHamiltonian& h, double beta, const Region& x);
DensityOperator gibbs_state(const LocalHamiltonian& h, double beta, const Region& x);

/// |tr[σ f g] - tr[σ f] tr[σ g]| for f, g on disjoint regions inside supp σ.
double covariance(const DensityOperator& sigma, const Operator& f, const Operator& g);

/// ‖ρ_AB - ρ_A ⊗ ρ_B‖₁; dominates Cov(f, g) for every ‖f‖, ‖g‖ ≤ 1.
double clustering_upper(const DensityOperator& rho, const Region& a, const Region& b);

/// Largest covariance over Weyl (for qubits: Pauli) strings of weight ≤
/// max_weight on A and on B.
double clustering_lower(const DensityOperator& rho, const Region& a, const Region& b,
                        int max_weight = 2);

struct RegionPair {
  Region a;
  Region b;
  std::string context;
};

/// Region pairs to probe at one separation ℓ.
using PairFamily = std::function<std::vector<RegionPair>(double ell)>;

/// ε̂(ℓ): at every ℓ the maximum over the family of the trace-norm bound
/// (value) and of the Pauli lower bound (aux), measured in ρ^X.
DecayProfile clustering_profile(const LocalHamiltonian& h, double beta, const Region& x,
                                const PairFamily& family, const std::vector<double>& ells);

/// Pairs {i} and every site at distance ≥ ℓ from i, for each anchor i.
PairFamily anchor_pairs(const Region& x, const std::vector<int>& anchors);

/// S(A) + S(A^c) - S(Λ) inside supp ρ, in bits.
double mutual_information(const DensityOperator& rho, const Region& a);

struct AreaLawEntry {
  Region region;
  double mutual_information = 0;
  int boundary = 0;
  double ratio = 0;
};

/// I(A : A^c)/|∂A| of the full-lattice Gibbs state for each region.
std::vector<AreaLawEntry> area_law_report(const LocalHamiltonian& h, double beta,
                                          const std::vector<Region>& regions);

/// S(AB) + S(BC) - S(B) - S(ABC) without the tolerance clamp.
double cmi_raw(const DensityOperator& rho, const Region& a, const Region& b, const Region& c);

/// Conditional mutual information in bits. Values below -1e-9 violate strong
/// subadditivity and throw InvariantViolation; smaller negative noise is
/// clamped to zero.
double cmi(const DensityOperator& rho, const Region& a, const Region& b, const Region& c);

inline constexpr double kCmiTolerance = 1e-9;

struct Tripartition {
  Region x;
  Region a;
  Region b;
  Region c;
  std::string context;
};

/// Checks that A, B, C partition X and that B keeps A and C more than
/// `width` apart (when both are nonempty). Throws InvalidArgument.
void validate_tripartition(const Tripartition& t, double width);

using TripartitionFamily = std::function<std::vector<Tripartition>(double ell)>;

/// δ̂(ℓ) = max over the family of I(A:C|B) in ρ^X.
DecayProfile markov_profile(const LocalHamiltonian& h, double beta,
                            const TripartitionFamily& family, const std::vector<double>& ells);

/// ‖tr_{BC} ρ^X - tr_B ρ^{AB}‖₁ with X = ABC.
double local_indistinguishability(const LocalHamiltonian& h, double beta, const Region& a,
                                  const Region& b, const Region& c);

/// B = sites of X within `width` of A, C = the rest of X.
Tripartition shielded_tripartition(const Region& x, const Region& a, double width,
                                   std::string context = {});

}  // namespace qgibbs
