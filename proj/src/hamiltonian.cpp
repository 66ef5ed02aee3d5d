#include "qgibbs/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "qgibbs/errors.hpp"

namespace qgibbs {

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  auto p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

template <class T>
std::uint64_t mix(std::uint64_t h, const T& value) {
  return fnv1a(&value, sizeof(T), h);
}

double diameter(const Region& r) {
  double d = 0;
  for (int i : r.sites())
    for (int j : r.sites()) d = std::max(d, r.lattice().distance(i, j));
  return d;
}

}  // namespace

LocalHamiltonian::LocalHamiltonian(LatticePtr lattice, std::vector<Operator> terms)
    : lattice_(std::move(lattice)), terms_(std::move(terms)) {
  if (!lattice_) throw InvalidArgument("Hamiltonian without a lattice");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int d : lattice_->dims()) h = mix(h, d);
  for (int axis = 0; axis < lattice_->num_dimensions(); ++axis)
    h = mix(h, static_cast<int>(lattice_->periodic(axis)));
  h = mix(h, lattice_->site_dim());
  for (const auto& t : terms_) {
    if (!(*t.support().lattice_ptr() == *lattice_))
      throw InvalidArgument("term support on a different lattice");
    if (t.support().empty()) throw InvalidArgument("term with empty support");
    if (!t.matrix().allFinite()) throw InvalidArgument("term matrix is not finite");
    if (!t.is_hermitian()) throw InvalidArgument("term on " + t.support().describe() +
                                                 " is not Hermitian");
    range_ = std::max(range_, diameter(t.support()));
    h = mix(h, t.support().size());
    for (int s : t.support().sites()) h = mix(h, s);
    h = fnv1a(t.matrix().data(), sizeof(cplx) * t.matrix().size(), h);
  }
  hash_ = h;
}

int LocalHamiltonian::locality() const {
  int k = 0;
  for (const auto& t : terms_) k = std::max(k, t.support().size());
  return k;
}

double LocalHamiltonian::norm_bound() const {
  double s = 0;
  for (const auto& t : terms_) s += norms(t).operator_norm;
  return s;
}

LocalHamiltonian LocalHamiltonian::restrict(const Region& x) const {
  return LocalHamiltonian(lattice_, terms_within(x));
}

std::vector<Operator> LocalHamiltonian::boundary_terms(const Region& x) const {
  std::vector<Operator> out;
  for (const auto& t : terms_)
    if (!t.support().disjoint(x) && !x.contains(t.support())) out.push_back(t);
  return out;
}

std::vector<Operator> LocalHamiltonian::terms_touching(const Region& sites) const {
  std::vector<Operator> out;
  for (const auto& t : terms_)
    if (!t.support().disjoint(sites)) out.push_back(t);
  return out;
}

std::vector<Operator> LocalHamiltonian::terms_within(const Region& sites) const {
  std::vector<Operator> out;
  for (const auto& t : terms_)
    if (sites.contains(t.support())) out.push_back(t);
  return out;
}

Operator sum_terms(const std::vector<Operator>& terms, const Region& x) {
  require_within_cap(x);
  const auto d = x.dimension();
  Matrix out = Matrix::Zero(d, d);
  for (const auto& t : terms) {
    SubsystemSplit split(x, t.support());
    const Matrix& m = t.matrix();
    const auto dt = m.rows();
    for (std::int64_t r : split.rest_offset)
      for (Eigen::Index b = 0; b < dt; ++b) {
        const auto col = split.part_offset[b] + r;
        for (Eigen::Index a = 0; a < dt; ++a) out(split.part_offset[a] + r, col) += m(a, b);
      }
  }
  return Operator(x, std::move(out));
}

Operator LocalHamiltonian::assemble(const Region& x) const {
  return sum_terms(terms_within(x), x);
}

Operator LocalHamiltonian::assemble() const { return assemble(Region::all(lattice_)); }

bool LocalHamiltonian::commuting(double tol) const {
  for (std::size_t i = 0; i < terms_.size(); ++i)
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      const auto& a = terms_[i];
      const auto& b = terms_[j];
      if (a.support().disjoint(b.support())) continue;
      const Region u = a.support() | b.support();
      Matrix ea = embed(a, u).matrix(), eb = embed(b, u).matrix();
      if (max_abs(ea * eb - eb * ea) > tol) return false;
    }
  return true;
}

// -------------------------------------------------------------- models

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {"classical_ising", "transverse_field_ising",
                                                 "heisenberg"};
  return names;
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ModelParams resolve_params(const std::string& name, const ModelParams& given) {
  ModelParams p;
  if (name == "classical_ising") p = {{"J", 1.0}, {"h", 0.0}};
  else if (name == "transverse_field_ising") p = {{"J", 1.0}, {"g", 1.0}};
  else if (name == "heisenberg") p = {{"J", 1.0}, {"h", 0.0}};
  else throw InvalidArgument("unknown model '" + name + "'");
  for (const auto& [key, value] : given) {
    if (!p.count(key))
      throw InvalidArgument("model '" + name + "' has no parameter '" + key + "'");
    if (!std::isfinite(value) || std::abs(value) > 1e3)
      throw InvalidArgument("parameter " + key + " out of range [-1e3, 1e3]");
    p[key] = value;
  }
  return p;
}

}  // namespace

LocalHamiltonian build_model(const std::string& name, const ModelParams& params,
                             const LatticePtr& lattice) {
  const ModelParams p = resolve_params(name, params);
  if (lattice->site_dim() != 2)
    throw InvalidArgument("built-in models are defined for qubits (site dimension 2)");
  const Matrix I = pauli('I'), X = pauli('X'), Y = pauli('Y'), Z = pauli('Z');

  Matrix bond, field;
  if (name == "classical_ising") {
    bond = -p.at("J") * kron(Z, Z);
    field = -p.at("h") * Z;
  } else if (name == "transverse_field_ising") {
    bond = -p.at("J") * kron(Z, Z);
    field = -p.at("g") * X;
  } else {
    bond = p.at("J") * (kron(X, X) + kron(Y, Y) + kron(Z, Z));
    field = -p.at("h") * Z;
  }

  std::vector<Operator> terms;
  std::set<int> placed;
  for (auto [i, j] : lattice->edges()) {
    Matrix m = bond;
    if (placed.insert(i).second) m += kron(field, I);
    if (placed.insert(j).second) m += kron(I, field);
    terms.emplace_back(Region(lattice, {i, j}), std::move(m));
  }
  // Isolated sites (a one-site lattice) keep their field as a one-site term.
  for (int s = 0; s < lattice->num_sites(); ++s)
    if (!placed.count(s)) terms.emplace_back(Region(lattice, {s}), field);
  return LocalHamiltonian(lattice, std::move(terms));
}

// ----------------------------------------------------------- file format

nlohmann::json hamiltonian_to_json(const LocalHamiltonian& h) {
  using nlohmann::json;
  const Lattice& lat = *h.lattice();
  json doc;
  doc["format"] = "qgibbs-hamiltonian";
  doc["version"] = 1;
  doc["lattice"] = {{"dims", lat.dims()},
                    {"periodic", lat.periodic_flags()},
                    {"site_dim", lat.site_dim()}};
  json terms = json::array();
  for (const auto& t : h.terms()) {
    json entries = json::array();
    const Matrix& m = t.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        entries.push_back({m(i, j).real(), m(i, j).imag()});
    terms.push_back({{"sites", t.support().sites()}, {"matrix", std::move(entries)}});
  }
  doc["terms"] = std::move(terms);
  return doc;
}

LocalHamiltonian hamiltonian_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format") != "qgibbs-hamiltonian")
      throw InvalidArgument("not a qgibbs-hamiltonian document");
    if (doc.at("version") != 1) throw InvalidArgument("unsupported model file version");
    const auto& l = doc.at("lattice");
    auto lattice = make_lattice(l.at("dims").get<std::vector<int>>(),
                                l.value("periodic", std::vector<bool>{}),
                                l.value("site_dim", 2));
    std::vector<Operator> terms;
    for (const auto& t : doc.at("terms")) {
      Region support(lattice, t.at("sites").get<std::vector<int>>());
      if (support.size() != static_cast<int>(t.at("sites").size()))
        throw InvalidArgument("term sites must be distinct");
      if (t.at("sites") != nlohmann::json(support.sites()))
        throw InvalidArgument("term sites must be listed in increasing order");
      const auto d = support.dimension();
      const auto& entries = t.at("matrix");
      if (static_cast<std::int64_t>(entries.size()) != d * d)
        throw InvalidArgument("term matrix on " + support.describe() + " needs " +
                              std::to_string(d * d) + " entries");
      Matrix m(d, d);
      std::size_t k = 0;
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j, ++k) {
          const auto& e = entries[k];
          if (!e.is_array() || e.size() != 2) throw InvalidArgument("entries must be [re, im]");
          m(i, j) = cplx(e[0].get<double>(), e[1].get<double>());
        }
      terms.emplace_back(std::move(support), std::move(m));
    }
    return LocalHamiltonian(lattice, std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed model file: ") + e.what());
  }
}

void save_hamiltonian(const LocalHamiltonian& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << hamiltonian_to_json(h).dump(2) << '\n';
}

LocalHamiltonian load_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read model file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("model file " + path + " is not valid JSON: " + e.what());
  }
  return hamiltonian_from_json(doc);
}

}  // namespace qgibbs
