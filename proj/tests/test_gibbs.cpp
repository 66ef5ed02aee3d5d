#include <doctest.h>

#include <random>
#include <thread>

#include "oracles.hpp"
#include "qgibbs/errors.hpp"
#include "qgibbs/gibbs.hpp"

using namespace qgibbs;
using doctest::Approx;

namespace {

Region sites(const LatticePtr& lat, std::vector<int> s) { return Region(lat, std::move(s)); }

Operator z_at(const LatticePtr& lat, int i) { return Operator(sites(lat, {i}), pauli('Z')); }

}  // namespace

TEST_CASE("Gibbs states against closed forms and enumeration") {
  auto chain = make_lattice({6});
  auto tfim = build_model("transverse_field_ising", {}, chain);
  GibbsState inf = compute_gibbs(tfim, 0.0, Region::all(chain));
  CHECK((inf.state.matrix() - Matrix::Identity(64, 64) / 64.0).norm() < 1e-14);
  CHECK(inf.entropy_bits == Approx(6.0));
  CHECK(inf.log_partition == Approx(6 * std::log(2.0)));

  // One site with H = h Z.
  auto one = make_lattice({1});
  const double h = 0.7, beta = 1.3;
  auto field = build_model("classical_ising", {{"h", -h}}, one);
  GibbsState g = compute_gibbs(field, beta, Region::all(one));
  CHECK(g.state.matrix()(0, 0).real() == Approx(std::exp(-beta * h) / (2 * std::cosh(beta * h))));
  CHECK(g.state.matrix()(1, 1).real() == Approx(std::exp(beta * h) / (2 * std::cosh(beta * h))));

  // Classical chain with a field: every population from direct enumeration.
  const int n = 7;
  auto c7 = make_lattice({n});
  auto ising = build_model("classical_ising", {{"J", 0.9}, {"h", 0.3}}, c7);
  GibbsState gi = compute_gibbs(ising, 0.6, Region::all(c7));
  auto pops = oracle::ising_populations(n, 0.9, 0.3, 0.6);
  double worst = 0;
  for (std::size_t s = 0; s < pops.size(); ++s)
    worst = std::max(worst, std::abs(gi.state.matrix()(s, s).real() - pops[s]));
  CHECK(worst < 1e-13);
  CHECK(gi.entropy_bits == Approx(oracle::shannon_bits(pops)).epsilon(1e-12));

  // A disconnected region is the product of its pieces.
  Region split = sites(c7, {0, 1, 4, 5, 6});
  GibbsState gs = compute_gibbs(ising, 0.6, split);
  GibbsState left = compute_gibbs(ising, 0.6, sites(c7, {0, 1}));
  GibbsState right = compute_gibbs(ising, 0.6, sites(c7, {4, 5, 6}));
  CHECK((gs.state.matrix() - tensor_product(left.state, right.state).matrix()).norm() < 1e-14);
  CHECK(gs.log_partition == Approx(left.log_partition + right.log_partition));

  CHECK_THROWS_AS(compute_gibbs(ising, -1, Region::all(c7)), InvalidArgument);
  CHECK(compute_gibbs(ising, 1, Region::none(c7)).state.dim() == 1);
}

TEST_CASE("covariance matches the transfer matrix") {
  const int n = 10;
  auto chain = make_lattice({n});
  for (double h : {0.0, 0.35}) {
    auto ising = build_model("classical_ising", {{"h", h}}, chain);
    auto rho = gibbs(ising, 0.4, Region::all(chain));
    double worst = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double c = covariance(rho->state, z_at(chain, i), z_at(chain, j));
        const double tm = std::abs(oracle::ising_transfer_covariance(n, 1.0, h, 0.4, i, j));
        worst = std::max(worst, std::abs(c - tm));
        if (h == 0.0) CHECK(std::abs(c - std::pow(std::tanh(0.4), j - i)) < 1e-12);
      }
    CHECK(worst < 1e-12);
  }

  // Product states and identity observables have no covariance.
  DensityOperator product = gibbs_state(build_model("classical_ising", {{"J", 0}, {"h", 0.5}}, chain),
                                        0.7, Region::all(chain));
  CHECK(covariance(product, z_at(chain, 0), z_at(chain, 3)) < 1e-15);
  auto rho = gibbs_state(build_model("transverse_field_ising", {}, make_lattice({6})), 0.5,
                         Region::all(make_lattice({6})));
  auto l6 = rho.support().lattice_ptr();
  CHECK(covariance(rho, Operator::identity(sites(l6, {0})), z_at(l6, 3)) < 1e-15);
  CHECK_THROWS_AS(covariance(rho, z_at(l6, 1), z_at(l6, 1)), InvalidArgument);
}

TEST_CASE("clustering bounds") {
  auto chain = make_lattice({10});
  auto ising = build_model("classical_ising", {}, chain);
  const Region all = Region::all(chain);
  DecayProfile p = clustering_profile(ising, 0.4, all, anchor_pairs(all, {0}), {1, 2, 3, 4});
  REQUIRE(p.samples.size() == 4);
  for (const auto& s : p.samples) {
    CHECK(s.aux >= std::pow(std::tanh(0.4), s.ell) - 1e-12);
    CHECK(s.aux <= s.value + 1e-12);
  }
  CHECK(p.fit.decaying());

  DecayProfile flat = clustering_profile(build_model("transverse_field_ising", {}, chain), 0.0, all,
                                         anchor_pairs(all, {4}), {1, 2, 3});
  for (const auto& s : flat.samples) CHECK(s.value < 1e-14);

  PairFamily too_close = [&](double) {
    return std::vector<RegionPair>{{sites(chain, {0}), sites(chain, {1}), "adjacent"}};
  };
  CHECK_THROWS_AS(clustering_profile(ising, 0.4, all, too_close, {2}), InvalidArgument);
}

TEST_CASE("mutual information") {
  auto chain = make_lattice({3});
  const Region all = Region::all(chain);
  DensityOperator g(all, oracle::ghz(3));
  CHECK(mutual_information(g, sites(chain, {0})) == Approx(2.0));
  CHECK(mutual_information(DensityOperator::maximally_mixed(all), sites(chain, {1})) <= 1e-14);
  DensityOperator prod = gibbs_state(build_model("classical_ising", {{"J", 0}, {"h", 1}}, chain),
                                     0.5, all);
  CHECK(std::abs(mutual_information(prod, sites(chain, {0, 1}))) < 1e-12);

  auto c8 = make_lattice({8});
  auto tfim = build_model("transverse_field_ising", {}, c8);
  auto rows = area_law_report(tfim, 0.5, {Region::interval(c8, 0, 3), Region::interval(c8, 2, 5)});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].boundary == 1);
  CHECK(rows[1].boundary == 2);
  for (const auto& r : rows) CHECK(r.ratio == Approx(r.mutual_information / r.boundary));
}

TEST_CASE("conditional mutual information") {
  auto chain = make_lattice({3});
  const Region all = Region::all(chain);
  const Region a = sites(chain, {0}), b = sites(chain, {1}), c = sites(chain, {2});
  CHECK(cmi(DensityOperator(all, oracle::ghz(3)), a, b, c) == Approx(1.0));
  auto prod = gibbs_state(build_model("classical_ising", {{"J", 0}, {"h", 0.4}}, chain), 1.0, all);
  CHECK(cmi(prod, a, b, c) < 1e-12);

  // Classical nearest-neighbour chain: Markov for any shield of width one.
  auto c8 = make_lattice({8});
  auto ising = build_model("classical_ising", {{"h", 0.2}}, c8);
  auto rho = gibbs_state(ising, 0.8, Region::all(c8));
  for (int w = 1; w <= 3; ++w) {
    Tripartition t = shielded_tripartition(Region::all(c8), sites(c8, {2}), w);
    CHECK(cmi(rho, t.a, t.b, t.c) <= 1e-10);
  }
  CHECK_THROWS_AS(cmi(prod, a, a, c), InvalidArgument);
}

TEST_CASE("markov profile and local indistinguishability") {
  auto chain = make_lattice({10});
  const Region all = Region::all(chain);
  auto ising = build_model("classical_ising", {}, chain);
  auto family = [&](double ell) {
    return std::vector<Tripartition>{shielded_tripartition(all, sites(chain, {4}), ell)};
  };
  DecayProfile zero = markov_profile(ising, 0.8, family, {1, 2, 3});
  for (const auto& s : zero.samples) CHECK(s.value <= 1e-10);
  DecayProfile hot = markov_profile(build_model("transverse_field_ising", {}, chain), 0.0, family, {1, 2});
  for (const auto& s : hot.samples) CHECK(s.value <= 1e-12);

  auto tfim = build_model("transverse_field_ising", {}, chain);
  auto edge = [&](double ell) {
    return std::vector<Tripartition>{shielded_tripartition(all, sites(chain, {0, 1}), ell)};
  };
  DecayProfile d = markov_profile(tfim, 0.3, edge, {1, 2, 3});
  CHECK(d.samples[1].value < d.samples[0].value);
  CHECK(d.samples[2].value < d.samples[1].value);

  std::vector<double> li;
  for (int ell = 1; ell <= 3; ++ell) {
    Tripartition t = shielded_tripartition(all, sites(chain, {0, 1}), ell);
    li.push_back(local_indistinguishability(tfim, 0.3, t.a, t.b, t.c));
  }
  CHECK(li[1] < li[0]);
  CHECK(li[2] < li[1]);
  DecayFit fit = decay_fit({1, 2, 3}, li);
  CHECK(fit.decaying());

  CHECK(local_indistinguishability(tfim, 0.3, sites(chain, {0}), sites(chain, {1, 2}),
                                   Region::none(chain)) == 0.0);
  CHECK(local_indistinguishability(tfim, 0.0, sites(chain, {0}), sites(chain, {1}),
                                   Region::interval(chain, 2, 9)) < 1e-14);

  Tripartition narrow{all, sites(chain, {0}), sites(chain, {1}), Region::interval(chain, 2, 9), ""};
  CHECK_THROWS_AS(validate_tripartition(narrow, 2), InvalidArgument);
  CHECK_NOTHROW(validate_tripartition(narrow, 1));
  Tripartition gap{all, sites(chain, {0}), sites(chain, {1}), Region::interval(chain, 3, 9), ""};
  CHECK_THROWS_AS(validate_tripartition(gap, 0.5), InvalidArgument);
}

TEST_CASE("Gibbs cache") {
  GibbsCache cache;
  auto chain = make_lattice({8});
  auto tfim = build_model("transverse_field_ising", {}, chain);
  const Region all = Region::all(chain);
  std::vector<std::thread> workers;
  std::vector<std::shared_ptr<const GibbsState>> got(6);
  for (int i = 0; i < 6; ++i)
    workers.emplace_back([&, i] { got[i] = cache.get(tfim, 0.5, all); });
  for (auto& w : workers) w.join();
  CHECK(cache.size() == 1);
  CHECK(cache.hits() == 5);
  for (const auto& g : got) CHECK(g.get() == got[0].get());

  cache.get(tfim, 0.6, all);
  cache.get(build_model("transverse_field_ising", {{"g", 0.9}}, chain), 0.5, all);
  CHECK(cache.size() == 3);

  // A tiny budget keeps only the most recent entry.
  GibbsCache small(1);
  small.get(tfim, 0.5, all);
  small.get(tfim, 0.6, all);
  CHECK(small.size() == 1);
  cache.clear();
  CHECK(cache.size() == 0);
}
