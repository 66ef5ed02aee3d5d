#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qgibbs {

/// Finite square lattice in one or two dimensions.
///
/// Sites are enumerated row-major: for dims = {L0, L1} the site at
/// coordinates (x0, x1) has index x0 * L1 + x1. Every site carries a local
/// Hilbert space of dimension site_dim().
class Lattice {
 public:
  static constexpr int kMaxDimensions = 2;

  Lattice(std::vector<int> dims, std::vector<bool> periodic, int site_dim = 2);

  int num_dimensions() const { return static_cast<int>(dims_.size()); }
  int num_sites() const { return num_sites_; }
  int site_dim() const { return site_dim_; }
  const std::vector<int>& dims() const { return dims_; }
  bool periodic(int axis) const { return periodic_.at(axis); }
  const std::vector<bool>& periodic_flags() const { return periodic_; }
  int side_length() const;

  std::vector<int> coordinates(int site) const;
  int site_index(std::span<const int> coords) const;

  /// Euclidean distance, with minimum-image wrap on periodic axes.
  double distance(int a, int b) const;
  /// Nearest-neighbour adjacency (graph distance one).
  bool adjacent(int a, int b) const;
  std::vector<int> neighbors(int site) const;
  /// Nearest-neighbour edges (i < j), sorted lexicographically.
  std::vector<std::pair<int, int>> edges() const;

  std::string describe() const;

  bool operator==(const Lattice&) const = default;

 private:
  std::vector<int> dims_;
  std::vector<bool> periodic_;
  int site_dim_;
  int num_sites_;
};

using LatticePtr = std::shared_ptr<const Lattice>;

/// Rejects zero/negative sides, D outside {1, 2}, periodic 2-D lattices and
/// site dimensions below two.
LatticePtr make_lattice(std::vector<int> dims, std::vector<bool> periodic = {},
                        int site_dim = 2);

/// A set of lattice sites. Members are kept sorted and unique.
class Region {
 public:
  Region() = default;
  Region(LatticePtr lattice, std::vector<int> sites);

  static Region all(const LatticePtr& lattice);
  static Region none(const LatticePtr& lattice);
  static Region interval(const LatticePtr& lattice, int first, int last);

  const Lattice& lattice() const;
  const LatticePtr& lattice_ptr() const { return lattice_; }
  const std::vector<int>& sites() const { return sites_; }
  int size() const { return static_cast<int>(sites_.size()); }
  bool empty() const { return sites_.empty(); }

  bool contains(int site) const;
  bool contains(const Region& other) const;
  bool disjoint(const Region& other) const;

  Region complement() const;
  Region unite(const Region& other) const;
  Region intersect(const Region& other) const;
  Region minus(const Region& other) const;

  /// Product of site dimensions; saturates at INT64_MAX instead of overflowing.
  std::int64_t dimension() const;

  std::string describe() const;

  bool operator==(const Region& other) const;

 private:
  void require_same_lattice(const Region& other) const;

  LatticePtr lattice_;
  std::vector<int> sites_;
};

Region operator|(const Region& a, const Region& b);
Region operator&(const Region& a, const Region& b);
Region operator-(const Region& a, const Region& b);

/// min over i in a, j in b of the Euclidean site distance.
double distance(const Region& a, const Region& b);

/// Sites of c with a nearest neighbour in within \ c, in increasing order.
Region boundary_sites(const Region& c, const Region& within);

/// Sites of ambient \ a at Euclidean distance <= width from a.
Region annulus(const Region& a, double width, const Region& ambient);

/// a together with annulus(a, radius, ambient).
Region ball(const Region& a, double radius, const Region& ambient);

/// Sites of a at distance > width from ambient \ a (a shrunk by a buffer).
Region interior(const Region& a, double width, const Region& ambient);

/// Sites of ambient at distance >= separation from a.
Region beyond(const Region& a, double separation, const Region& ambient);

/// Clusters of r: two sites share a cluster when adjacent or closer than
/// `link`. Clusters are ordered by their smallest site.
std::vector<Region> clusters(const Region& r, double link = 1.0);

/// Concentric regions inner ⊂ core ⊂ outer used by one patching tile.
struct TileTriple {
  Region inner;
  Region core;
  Region outer;
  int group = 0;
};

/// Staged tiling consumed by the preparation circuit.
///
/// Each axis is cut into cells of side r; the last cell is truncated and left
/// untiled when thinner than 2ℓ+1. An A tile is its cell shrunk by ℓ on every
/// side facing another part of the lattice, so neighbouring A tiles are 2ℓ
/// apart and their ℓ-grown outer regions never overlap. Inner regions sit a
/// further ℓ inside. In 2-D, bridge (B) tiles span the gaps between
/// neighbouring inner squares; group g bridges cells adjacent along axis
/// (1 - g) and is recovered against the lattice punctured by the A inner
/// squares and the inner parts of every lower-numbered group. The remainder C
/// is what is left after removing every inner region.
struct Tiling {
  LatticePtr lattice;
  int tile_size = 0;
  int buffer = 0;
  std::vector<TileTriple> stage_a;
  std::vector<TileTriple> stage_b;
  /// b_ambient[g] is the region B tiles of group g live in.
  std::vector<Region> b_ambient;
  Region stage_c;
  std::vector<Region> stage_c_components;

  int num_b_groups() const { return static_cast<int>(b_ambient.size()); }
  Region a_inner_union() const;
};

Tiling tiling_plan(const LatticePtr& lattice, int tile_size, int buffer);

}  // namespace qgibbs
