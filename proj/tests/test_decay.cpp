#include <doctest.h>

#include <cmath>

#include "qgibbs/decay.hpp"

using namespace qgibbs;
using doctest::Approx;

TEST_CASE("exact exponential samples are recovered") {
  std::vector<double> ell{1, 2, 3, 4, 5}, v;
  for (double l : ell) v.push_back(0.8 * std::exp(-1.7 * l));
  DecayFit f = decay_fit(ell, v);
  REQUIRE(f.fitted);
  CHECK(std::abs(f.c1 - 0.8) < 1e-6);
  CHECK(std::abs(f.c2 - 1.7) < 1e-6);
  CHECK(f.residual < 1e-10);
  CHECK(f.n_used == 5);
  CHECK(f(2.5) == Approx(0.8 * std::exp(-1.7 * 2.5)));
  CHECK(f.decaying());
}

TEST_CASE("transfer-matrix correlations give c2 = -ln tanh(beta J)") {
  const double beta = 0.4;
  std::vector<double> ell, v;
  for (int l = 1; l <= 6; ++l) {
    ell.push_back(l);
    v.push_back(std::pow(std::tanh(beta), l));
  }
  DecayFit f = decay_fit(ell, v);
  REQUIRE(f.fitted);
  CHECK(std::abs(f.c2 + std::log(std::tanh(beta))) < 1e-6);
}

TEST_CASE("power law") {
  std::vector<double> ell{1, 2, 4, 8}, v;
  for (double l : ell) v.push_back(3.0 * std::pow(l, -2.5));
  DecayFit f = decay_fit(ell, v, DecayForm::PowerLaw);
  REQUIRE(f.fitted);
  CHECK(std::abs(f.c1 - 3.0) < 1e-6);
  CHECK(std::abs(f.c2 - 2.5) < 1e-6);
  CHECK(f(3) == Approx(3.0 * std::pow(3.0, -2.5)));
}

TEST_CASE("degenerate inputs are left unfitted") {
  CHECK_FALSE(decay_fit({1, 2, 3}, {0, 0, 0}).fitted);
  CHECK_FALSE(decay_fit({1, 2}, {0.5, 0.1}).fitted);
  // Samples at the floor are dropped before fitting.
  DecayFit f = decay_fit({1, 2, 3, 4}, {0.5, 0.1, 1e-13, 0.0});
  CHECK_FALSE(f.fitted);
  CHECK(f.n_used == 2);
  CHECK_THROWS(decay_fit({1, 2, 3}, {1, 2}));

  DecayProfile p;
  p.samples = {{1, 0.3, 0, ""}, {2, 0.1, 0, ""}, {3, 0.05, 0, ""}};
  CHECK(p.max_value() == 0.3);
  CHECK(decay_fit(p).fitted);
  CHECK(p.ells() == std::vector<double>{1, 2, 3});
}
