#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgibbs/operator.hpp"

namespace qgibbs {

/// H = Σ_Z h^Z with every term stored on its own (small) support.
class LocalHamiltonian {
 public:
  LocalHamiltonian() = default;
  LocalHamiltonian(LatticePtr lattice, std::vector<Operator> terms);

  const LatticePtr& lattice() const { return lattice_; }
  const std::vector<Operator>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Largest Euclidean diameter of any term support.
  double range() const { return range_; }
  /// Largest number of sites in a term support.
  int locality() const;
  /// Σ ‖h^Z‖.
  double norm_bound() const;
  /// FNV-1a over lattice shape and term data; stable across runs.
  std::uint64_t hash() const { return hash_; }

  /// H^X: the terms supported inside X.
  LocalHamiltonian restrict(const Region& x) const;
  /// Terms crossing the cut between X and its complement.
  std::vector<Operator> boundary_terms(const Region& x) const;
  /// Terms whose support meets `sites`.
  std::vector<Operator> terms_touching(const Region& sites) const;
  /// Terms whose support lies inside `sites`.
  std::vector<Operator> terms_within(const Region& sites) const;

  /// Dense Σ_{Z ⊆ X} h^Z ⊗ 1 on X.
  Operator assemble(const Region& x) const;
  Operator assemble() const;

  /// True when every pair of overlapping terms commutes within tol.
  bool commuting(double tol = 1e-12) const;

 private:
  LatticePtr lattice_;
  std::vector<Operator> terms_;
  double range_ = 0;
  std::uint64_t hash_ = 0;
};

/// Dense sum of terms embedded on `x` (every support must lie inside x).
Operator sum_terms(const std::vector<Operator>& terms, const Region& x);

using ModelParams = std::map<std::string, double>;

/// Built-in models on nearest-neighbour edges:
///   classical_ising          H = -J Σ Z Z - h Σ Z      (J=1, h=0)
///   transverse_field_ising   H = -J Σ Z Z - g Σ X      (J=1, g=1)
///   heisenberg               H =  J Σ (XX+YY+ZZ) - h Σ Z (J=1, h=0)
/// On-site fields are folded into the lexicographically first edge that
/// contains the site.
LocalHamiltonian build_model(const std::string& name, const ModelParams& params,
                             const LatticePtr& lattice);

const std::vector<std::string>& model_names();

/// Model file document ({"format": "qgibbs-hamiltonian", ...}).
nlohmann::json hamiltonian_to_json(const LocalHamiltonian& h);
LocalHamiltonian hamiltonian_from_json(const nlohmann::json& doc);
void save_hamiltonian(const LocalHamiltonian& h, const std::string& path);
LocalHamiltonian load_hamiltonian(const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace qgibbs
