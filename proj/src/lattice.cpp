#include "qgibbs/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qgibbs/errors.hpp"

namespace qgibbs {

Lattice::Lattice(std::vector<int> dims, std::vector<bool> periodic, int site_dim)
    : dims_(std::move(dims)), periodic_(std::move(periodic)), site_dim_(site_dim) {
  if (dims_.empty() || dims_.size() > kMaxDimensions)
    throw InvalidArgument("lattice dimension must be 1 or 2, got " +
                          std::to_string(dims_.size()));
  if (periodic_.empty()) periodic_.assign(dims_.size(), false);
  if (periodic_.size() != dims_.size())
    throw InvalidArgument("periodic flags do not match the number of axes");
  if (site_dim_ < 2) throw InvalidArgument("site dimension must be at least 2");
  std::int64_t count = 1;
  for (int d : dims_) {
    if (d < 1) throw InvalidArgument("lattice side lengths must be positive");
    count *= d;
    if (count > (1 << 20)) throw InvalidArgument("lattice has too many sites");
  }
  num_sites_ = static_cast<int>(count);
}

int Lattice::side_length() const { return *std::max_element(dims_.begin(), dims_.end()); }

std::vector<int> Lattice::coordinates(int site) const {
  if (site < 0 || site >= num_sites_) throw InvalidArgument("site index out of range");
  std::vector<int> c(dims_.size());
  for (int axis = num_dimensions() - 1; axis >= 0; --axis) {
    c[axis] = site % dims_[axis];
    site /= dims_[axis];
  }
  return c;
}

int Lattice::site_index(std::span<const int> coords) const {
  if (coords.size() != dims_.size()) throw InvalidArgument("coordinate rank mismatch");
  int idx = 0;
  for (std::size_t axis = 0; axis < dims_.size(); ++axis) {
    if (coords[axis] < 0 || coords[axis] >= dims_[axis])
      throw InvalidArgument("coordinate out of range");
    idx = idx * dims_[axis] + coords[axis];
  }
  return idx;
}

namespace {

// Axis offsets between two sites, wrapped on periodic axes.
std::vector<int> offsets(const Lattice& lat, int a, int b) {
  auto ca = lat.coordinates(a);
  auto cb = lat.coordinates(b);
  std::vector<int> d(ca.size());
  for (std::size_t axis = 0; axis < ca.size(); ++axis) {
    int dx = std::abs(ca[axis] - cb[axis]);
    if (lat.periodic(static_cast<int>(axis))) dx = std::min(dx, lat.dims()[axis] - dx);
    d[axis] = dx;
  }
  return d;
}

}  // namespace

double Lattice::distance(int a, int b) const {
  double s = 0;
  for (int dx : offsets(*this, a, b)) s += double(dx) * dx;
  return std::sqrt(s);
}

bool Lattice::adjacent(int a, int b) const {
  if (a == b) return false;
  int total = 0;
  for (int dx : offsets(*this, a, b)) total += dx;
  return total == 1;
}

std::vector<int> Lattice::neighbors(int site) const {
  auto c = coordinates(site);
  std::vector<int> out;
  for (int axis = 0; axis < num_dimensions(); ++axis) {
    for (int step : {-1, 1}) {
      auto n = c;
      n[axis] += step;
      if (n[axis] < 0 || n[axis] >= dims_[axis]) {
        if (!periodic_[axis]) continue;
        n[axis] = (n[axis] + dims_[axis]) % dims_[axis];
      }
      int idx = site_index(n);
      if (idx != site) out.push_back(idx);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::pair<int, int>> Lattice::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int s = 0; s < num_sites_; ++s)
    for (int n : neighbors(s))
      if (s < n) out.emplace_back(s, n);
  std::sort(out.begin(), out.end());
  return out;
}

std::string Lattice::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < dims_.size(); ++i) os << (i ? "x" : "") << dims_[i];
  bool any = std::any_of(periodic_.begin(), periodic_.end(), [](bool p) { return p; });
  os << (any ? " periodic" : " open");
  return os.str();
}

LatticePtr make_lattice(std::vector<int> dims, std::vector<bool> periodic, int site_dim) {
  auto lat = std::make_shared<const Lattice>(std::move(dims), std::move(periodic), site_dim);
  if (lat->num_dimensions() == 2 && (lat->periodic(0) || lat->periodic(1)))
    throw InvalidArgument("periodic boundaries are only supported in one dimension");
  return lat;
}

// ---------------------------------------------------------------- Region

Region::Region(LatticePtr lattice, std::vector<int> sites)
    : lattice_(std::move(lattice)), sites_(std::move(sites)) {
  if (!lattice_) throw InvalidArgument("region without a lattice");
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  if (!sites_.empty() && (sites_.front() < 0 || sites_.back() >= lattice_->num_sites()))
    throw InvalidArgument("region site outside the lattice");
}

Region Region::all(const LatticePtr& lattice) {
  std::vector<int> s(lattice->num_sites());
  std::iota(s.begin(), s.end(), 0);
  return Region(lattice, std::move(s));
}

Region Region::none(const LatticePtr& lattice) { return Region(lattice, {}); }

Region Region::interval(const LatticePtr& lattice, int first, int last) {
  std::vector<int> s;
  for (int i = first; i <= last; ++i) s.push_back(i);
  return Region(lattice, std::move(s));
}

const Lattice& Region::lattice() const {
  if (!lattice_) throw InvalidArgument("default-constructed region has no lattice");
  return *lattice_;
}

bool Region::contains(int site) const {
  return std::binary_search(sites_.begin(), sites_.end(), site);
}

bool Region::contains(const Region& other) const {
  require_same_lattice(other);
  return std::includes(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end());
}

bool Region::disjoint(const Region& other) const { return intersect(other).empty(); }

Region Region::complement() const { return Region::all(lattice_).minus(*this); }

Region Region::unite(const Region& other) const {
  require_same_lattice(other);
  std::vector<int> out;
  std::set_union(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                 std::back_inserter(out));
  return Region(lattice_, std::move(out));
}

Region Region::intersect(const Region& other) const {
  require_same_lattice(other);
  std::vector<int> out;
  std::set_intersection(sites_.begin(), sites_.end(), other.sites_.begin(),
                        other.sites_.end(), std::back_inserter(out));
  return Region(lattice_, std::move(out));
}

Region Region::minus(const Region& other) const {
  require_same_lattice(other);
  std::vector<int> out;
  std::set_difference(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                      std::back_inserter(out));
  return Region(lattice_, std::move(out));
}

std::int64_t Region::dimension() const {
  const std::int64_t d = lattice().site_dim();
  std::int64_t total = 1;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (total > std::numeric_limits<std::int64_t>::max() / d)
      return std::numeric_limits<std::int64_t>::max();
    total *= d;
  }
  return total;
}

std::string Region::describe() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < sites_.size(); ++i) os << (i ? "," : "") << sites_[i];
  os << '}';
  return os.str();
}

bool Region::operator==(const Region& other) const {
  if (sites_ != other.sites_) return false;
  if (lattice_ == other.lattice_) return true;
  return lattice_ && other.lattice_ && *lattice_ == *other.lattice_;
}

void Region::require_same_lattice(const Region& other) const {
  if (lattice_ == other.lattice_) return;
  if (!lattice_ || !other.lattice_ || !(*lattice_ == *other.lattice_))
    throw InvalidArgument("regions belong to different lattices");
}

Region operator|(const Region& a, const Region& b) { return a.unite(b); }
Region operator&(const Region& a, const Region& b) { return a.intersect(b); }
Region operator-(const Region& a, const Region& b) { return a.minus(b); }

// ------------------------------------------------------------ geometry

double distance(const Region& a, const Region& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("distance to an empty region");
  const Lattice& lat = a.lattice();
  double best = std::numeric_limits<double>::infinity();
  for (int i : a.sites())
    for (int j : b.sites()) best = std::min(best, lat.distance(i, j));
  return best;
}

namespace {

// Distance from a site to a region; +inf for an empty region.
double site_distance(const Lattice& lat, int s, const Region& r) {
  double best = std::numeric_limits<double>::infinity();
  for (int j : r.sites()) best = std::min(best, lat.distance(s, j));
  return best;
}

}  // namespace

Region boundary_sites(const Region& c, const Region& within) {
  if (!within.contains(c)) throw InvalidArgument("boundary_sites: region not contained in X");
  const Lattice& lat = c.lattice();
  std::vector<int> out;
  for (int s : c.sites()) {
    for (int n : lat.neighbors(s)) {
      if (within.contains(n) && !c.contains(n)) {
        out.push_back(s);
        break;
      }
    }
  }
  return Region(c.lattice_ptr(), std::move(out));
}

Region annulus(const Region& a, double width, const Region& ambient) {
  if (!ambient.contains(a)) throw InvalidArgument("annulus: region not contained in ambient");
  const Lattice& lat = a.lattice();
  std::vector<int> out;
  const Region rest = ambient.minus(a);
  for (int s : rest.sites())
    if (site_distance(lat, s, a) <= width + 1e-9) out.push_back(s);
  return Region(a.lattice_ptr(), std::move(out));
}

Region ball(const Region& a, double radius, const Region& ambient) {
  return a.unite(annulus(a, radius, ambient));
}

Region interior(const Region& a, double width, const Region& ambient) {
  const Region outside = ambient.minus(a);
  const Lattice& lat = a.lattice();
  std::vector<int> out;
  for (int s : a.sites())
    if (site_distance(lat, s, outside) > width + 1e-9) out.push_back(s);
  return Region(a.lattice_ptr(), std::move(out));
}

Region beyond(const Region& a, double separation, const Region& ambient) {
  const Lattice& lat = ambient.lattice();
  std::vector<int> out;
  for (int s : ambient.sites())
    if (site_distance(lat, s, a) >= separation - 1e-9) out.push_back(s);
  return Region(ambient.lattice_ptr(), std::move(out));
}

std::vector<Region> clusters(const Region& r, double link) {
  const auto& sites = r.sites();
  const int n = r.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const Lattice& lat = r.empty() ? *r.lattice_ptr() : r.lattice();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = lat.distance(sites[i], sites[j]);
      if (d <= 1.0 + 1e-9 || d < link - 1e-9) parent[find(i)] = find(j);
    }
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    int root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(sites[i]);
  }
  std::vector<Region> out;
  for (auto& g : groups) out.emplace_back(r.lattice_ptr(), std::move(g));
  return out;
}

// -------------------------------------------------------------- tiling

Region Tiling::a_inner_union() const {
  Region u = Region::none(lattice);
  for (const auto& t : stage_a) u = u | t.inner;
  return u;
}

namespace {

struct Span {
  int lo, hi;  // inclusive
};

// Cells of one axis; thin trailing cells are dropped (their sites stay untiled).
std::vector<Span> axis_cells(int length, int r, int buffer) {
  std::vector<Span> cells;
  for (int lo = 0; lo < length; lo += r) {
    int hi = std::min(lo + r, length) - 1;
    if (hi - lo + 1 < 2 * buffer + 1 && !cells.empty()) break;
    cells.push_back({lo, hi});
  }
  return cells;
}

Region box(const LatticePtr& lat, Span rows, Span cols) {
  std::vector<int> sites;
  for (int x = rows.lo; x <= rows.hi; ++x)
    for (int y = cols.lo; y <= cols.hi; ++y) {
      int c[2] = {x, y};
      sites.push_back(lat->site_index(c));
    }
  return Region(lat, std::move(sites));
}

// Bounding spans of a nonempty 2-D region.
std::pair<Span, Span> extent(const Region& r) {
  Span rows{std::numeric_limits<int>::max(), -1}, cols = rows;
  for (int s : r.sites()) {
    auto c = r.lattice().coordinates(s);
    rows.lo = std::min(rows.lo, c[0]);
    rows.hi = std::max(rows.hi, c[0]);
    cols.lo = std::min(cols.lo, c[1]);
    cols.hi = std::max(cols.hi, c[1]);
  }
  return {rows, cols};
}

}  // namespace

Tiling tiling_plan(const LatticePtr& lattice, int tile_size, int buffer) {
  if (buffer < 1) throw InvalidArgument("tiling buffer must be at least 1");
  if (tile_size <= 2 * buffer)
    throw InvalidArgument("tile size must exceed twice the buffer (r > 2l)");
  for (int d : lattice->dims())
    if (tile_size > d) throw InvalidArgument("tile size exceeds the lattice side");

  Tiling t;
  t.lattice = lattice;
  t.tile_size = tile_size;
  t.buffer = buffer;
  const Region everything = Region::all(lattice);
  const double l = buffer;

  // Cell grid; cells[i][j] is empty when the 1-D case has a single axis.
  const int D = lattice->num_dimensions();
  auto rows = axis_cells(lattice->dims()[0], tile_size, buffer);
  std::vector<Span> cols = D == 2 ? axis_cells(lattice->dims()[1], tile_size, buffer)
                                  : std::vector<Span>{{0, 0}};
  std::vector<std::vector<int>> a_index(rows.size(), std::vector<int>(cols.size(), -1));

  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      Region cell = D == 2 ? box(lattice, rows[i], cols[j])
                           : Region::interval(lattice, rows[i].lo, rows[i].hi);
      TileTriple tile;
      tile.core = interior(cell, l, everything);
      tile.inner = interior(tile.core, l, everything);
      tile.outer = ball(tile.core, l, everything);
      a_index[i][j] = static_cast<int>(t.stage_a.size());
      t.stage_a.push_back(std::move(tile));
    }

  Region removed = t.a_inner_union();
  if (D == 2) {
    // Group 0 bridges horizontal neighbours (axis 1), group 1 vertical ones.
    for (int g = 0; g < 2; ++g) {
      const Region ambient = everything - removed;
      t.b_ambient.push_back(ambient);
      Region group_inner = Region::none(lattice);
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) {
          std::size_t ni = i + (g == 1), nj = j + (g == 0);
          if (ni >= rows.size() || nj >= cols.size()) continue;
          const Region& p = t.stage_a[a_index[i][j]].inner;
          const Region& q = t.stage_a[a_index[ni][nj]].inner;
          if (p.empty() || q.empty()) continue;
          auto [pr, pc] = extent(p);
          auto [qr, qc] = extent(q);
          Region core = g == 0 ? box(lattice, pr, {pc.hi + 1, qc.lo - 1})
                               : box(lattice, {pr.hi + 1, qr.lo - 1}, pc);
          if (core.empty()) continue;
          TileTriple tile;
          tile.group = g;
          tile.inner = interior(core, l, ambient);
          tile.outer = ball(core, l, ambient);
          tile.core = std::move(core);
          group_inner = group_inner | tile.inner;
          t.stage_b.push_back(std::move(tile));
        }
      removed = removed | group_inner;
    }
  }

  t.stage_c = everything - removed;
  t.stage_c_components = clusters(t.stage_c, l);
  return t;
}

}  // namespace qgibbs
